//! The transfer-vector enumeration shared by every generator product.
//!
//! Left-multiplying `[A]` by a generator attached to `k E_{i,j}` moves `k`
//! units from row `j` to row `i`. A transfer vector `delta` records how many
//! units leave column `t`, subject to
//! `a_{j,t} - delta_t + [i ≡ j] delta_{t+i-j} >= 0`. The Schur algebra imposes
//! the constraint at every `t`; the stabilized algebra and the hyperalgebra
//! leave `t = j` free.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::binom::{gbinom, gbinom_i128};
use crate::matrix::{residue, PeriodicMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    EveryColumn,
    SkipJ,
}

/// A finitely supported `delta`, as sorted `(t, delta_t)` pairs with
/// `delta_t > 0`.
pub type Transfer = Vec<(i64, i64)>;

/// Rewrites `(i, j)` so that `1 <= i <= n`.
pub fn normalize_pair(n: usize, i: i64, j: i64) -> (i64, i64) {
    let r = residue(i, n) as i64;
    (r, j - (i - r))
}

/// Column range that can carry a nonzero `delta_t`.
pub fn transfer_range(a: &PeriodicMatrix, k: i64, i: i64, j: i64) -> (i64, i64) {
    let n = a.n() as i64;
    let s = j - i;
    let shift = j - residue(j, a.n()) as i64;
    let mut lo = j;
    let mut hi = j;
    for &(r, c, _) in a.offdiag() {
        if r == residue(j, a.n()) as i64 {
            lo = lo.min(c + shift);
            hi = hi.max(c + shift);
        }
    }
    if s.rem_euclid(n) == 0 {
        // A chain delta_t <= a_{j,t} + delta_{t-s} can drift at most k steps of |s|.
        lo -= k * s.abs();
        hi += k * s.abs();
    }
    (lo, hi)
}

/// All transfer vectors of total `k`.
pub fn transfer_vectors(a: &PeriodicMatrix, k: i64, i: i64, j: i64, constraint: Constraint) -> Vec<Transfer> {
    let n = a.n() as i64;
    let (i, j) = normalize_pair(a.n(), i, j);
    assert_ne!(i, j, "generator needs i != j");
    let s = j - i;
    let same = s.rem_euclid(n) == 0;
    let (lo, hi) = transfer_range(a, k, i, j);
    let len = (hi - lo + 1) as usize;
    let cols: Vec<i64> = if same && s < 0 { (lo..=hi).rev().collect() } else { (lo..=hi).collect() };
    let row_j: Vec<i64> = (lo..=hi).map(|t| a.entry(j, t)).collect();
    let mut delta = vec![0i64; len];
    let mut out = Vec::new();

    struct Ctx<'a> {
        cols: &'a [i64],
        row_j: &'a [i64],
        lo: i64,
        hi: i64,
        s: i64,
        j: i64,
        same: bool,
        skip_j: bool,
        k: i64,
    }

    fn go(c: &Ctx, pos: usize, remaining: i64, delta: &mut [i64], out: &mut Vec<Transfer>) {
        if pos == c.cols.len() {
            if remaining == 0 {
                out.push(delta.iter().enumerate().filter(|(_, &d)| d > 0).map(|(x, &d)| (c.lo + x as i64, d)).collect());
            }
            return;
        }
        let t = c.cols[pos];
        let idx = (t - c.lo) as usize;
        let bound = if c.skip_j && t == c.j {
            c.k
        } else {
            let carried = if c.same && t - c.s >= c.lo && t - c.s <= c.hi { delta[(t - c.s - c.lo) as usize] } else { 0 };
            c.row_j[idx] + carried
        };
        if bound < 0 {
            return;
        }
        for d in 0..=bound.min(remaining) {
            delta[idx] = d;
            go(c, pos + 1, remaining - d, delta, out);
        }
        delta[idx] = 0;
    }

    let ctx = Ctx { cols: &cols, row_j: &row_j, lo, hi, s, j, same, skip_j: constraint == Constraint::SkipJ, k };
    go(&ctx, 0, k, &mut delta, &mut out);
    out
}

/// `A + sum_t delta_t (E_{i,t} - E_{j,t})`.
pub fn apply_transfer(a: &PeriodicMatrix, i: i64, j: i64, delta: &Transfer) -> PeriodicMatrix {
    let mut m = a.clone();
    for &(t, d) in delta {
        m.add_entry(i, t, d);
        m.add_entry(j, t, -d);
    }
    m
}

/// The top of the binomial at column `t`: `a_{i,t} + delta_t - [i ≡ j] delta_{t+j-i}`.
fn top(a: &PeriodicMatrix, i: i64, j: i64, delta: &Transfer, same: bool, t: i64, dt: i64) -> i64 {
    let carried = if same { delta.iter().find(|&&(u, _)| u == t + j - i).map_or(0, |&(_, d)| d) } else { 0 };
    a.entry(i, t) + dt - carried
}

/// `prod_t gbinom(a_{i,t} + delta_t - [i ≡ j] delta_{t+j-i}, delta_t)`, with
/// column `t = i` left out when `skip_i` is set.
pub fn transfer_coeff(a: &PeriodicMatrix, i: i64, j: i64, delta: &Transfer, skip_i: bool) -> BigInt {
    let (i, j) = normalize_pair(a.n(), i, j);
    let same = (j - i).rem_euclid(a.n() as i64) == 0;
    let mut small: i128 = 1;
    let mut big: Option<BigInt> = None;
    for &(t, dt) in delta {
        if skip_i && t == i {
            continue;
        }
        let m = top(a, i, j, delta, same, t, dt);
        match (big.as_mut(), gbinom_i128(m, dt).and_then(|b| small.checked_mul(b))) {
            (None, Some(v)) => small = v,
            (None, None) => big = Some(BigInt::from(small) * gbinom(m, dt)),
            (Some(b), _) => *b *= gbinom(m, dt),
        }
        if small == 0 && big.is_none() {
            return BigInt::zero();
        }
    }
    big.unwrap_or_else(|| if small == 1 { BigInt::one() } else { BigInt::from(small) })
}

/// Nonzero terms `(A + sum delta_t (E_{i,t} - E_{j,t}), coefficient)`.
pub fn generator_action(a: &PeriodicMatrix, k: i64, i: i64, j: i64, constraint: Constraint) -> Vec<(PeriodicMatrix, BigInt)> {
    let (i, j) = normalize_pair(a.n(), i, j);
    transfer_vectors(a, k, i, j, constraint)
        .into_iter()
        .filter_map(|delta| {
            let c = transfer_coeff(a, i, j, &delta, false);
            (!c.is_zero()).then(|| (apply_transfer(a, i, j, &delta), c))
        })
        .collect()
}
