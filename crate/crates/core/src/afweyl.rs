//! The extended affine symmetric group in window notation, Young subgroup
//! double cosets, the bijection between double cosets and `Theta(n, r)`, and
//! the convolution oracle for products of standard basis elements.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::matrix::{PeriodicMatrix, PeriodicVector};

type Window = SmallVec<[i64; 8]>;

/// A bijection `w: Z -> Z` with `w(i + r) = w(i) + r`, stored as
/// `(w(1), ..., w(r))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePermutation {
    window: Window,
}

impl AffinePermutation {
    pub fn new(window: Vec<i64>) -> Result<Self> {
        let r = window.len() as i64;
        if r == 0 {
            return Err(Error::Malformed("window must be nonempty".into()));
        }
        let mut seen = vec![false; r as usize];
        for &v in &window {
            let res = v.rem_euclid(r) as usize;
            if seen[res] {
                return Err(Error::Malformed(format!("window {window:?} repeats a residue mod {r}")));
            }
            seen[res] = true;
        }
        Ok(AffinePermutation { window: window.into_iter().collect() })
    }

    pub fn identity(r: usize) -> Self {
        AffinePermutation { window: (1..=r as i64).collect() }
    }

    pub fn r(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    #[inline]
    pub fn eval(&self, m: i64) -> i64 {
        let r = self.window.len() as i64;
        let q = (m - 1).div_euclid(r);
        self.window[(m - 1 - q * r) as usize] + q * r
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.r() != other.r() {
            return Err(Error::DegreeMismatch { left: self.r() as i64, right: other.r() as i64 });
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    fn compose_unchecked(&self, other: &Self) -> Self {
        AffinePermutation { window: other.window.iter().map(|&v| self.eval(v)).collect() }
    }

    pub fn inverse(&self) -> Self {
        let r = self.r() as i64;
        let mut w: Window = SmallVec::from_elem(0, self.r());
        for (y, &v) in self.window.iter().enumerate() {
            let q = (v - 1).div_euclid(r);
            w[(v - 1 - q * r) as usize] = y as i64 + 1 - q * r;
        }
        AffinePermutation { window: w }
    }
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.window.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The blocks `R_i` of a composition: `R_{i+kn} = kr + {start_i + 1, ..., start_i + lambda_i}`.
#[derive(Clone, Debug)]
pub struct Blocks {
    n: usize,
    r: i64,
    starts: Vec<i64>,
    sizes: Vec<i64>,
    owner: Vec<usize>,
}

impl Blocks {
    pub fn new(lambda: &PeriodicVector) -> Self {
        let n = lambda.n();
        let mut starts = Vec::with_capacity(n);
        let mut owner = Vec::new();
        let mut acc = 0;
        for (i, &l) in lambda.entries().iter().enumerate() {
            assert!(l >= 0, "compositions have nonnegative parts");
            starts.push(acc);
            acc += l;
            owner.extend(std::iter::repeat(i + 1).take(l as usize));
        }
        Blocks { n, r: acc, starts, sizes: lambda.entries().to_vec(), owner }
    }

    /// Block index `k` (in Z) containing the integer `v`.
    #[inline]
    pub fn block_of(&self, v: i64) -> i64 {
        let q = (v - 1).div_euclid(self.r);
        let rem = v - q * self.r;
        self.owner[(rem - 1) as usize] as i64 + q * self.n as i64
    }

    /// The members of `R_i` for `1 <= i <= n`.
    pub fn block(&self, i: usize) -> std::ops::RangeInclusive<i64> {
        self.starts[i - 1] + 1..=self.starts[i - 1] + self.sizes[i - 1]
    }

    /// Adjacent pairs `(t, t+1)` inside a block of `{1..r}`.
    fn adjacent_pairs(&self) -> Vec<i64> {
        (1..=self.n).flat_map(|i| self.block(i)).filter(|&t| t < self.r && self.owner[t as usize] == self.owner[(t - 1) as usize]).collect()
    }

    /// Whether `w` is increasing on every block `R_i`, `1 <= i <= n`.
    #[inline]
    pub fn increasing_on(&self, w: &AffinePermutation) -> bool {
        let win = w.window();
        (1..self.r as usize).all(|t| self.owner[t] != self.owner[t - 1] || win[t - 1] < win[t])
    }
}

/// True iff `d` is increasing on every block of `lambda`.
pub fn is_minimal_rep(d: &AffinePermutation, lambda: &PeriodicVector) -> bool {
    d.r() as i64 == lambda.sum() && Blocks::new(lambda).increasing_on(d)
}

fn check_degree(lambda: &PeriodicVector, d: &AffinePermutation, mu: &PeriodicVector) -> Result<()> {
    if lambda.sum() != d.r() as i64 || mu.sum() != d.r() as i64 {
        return Err(Error::DegreeMismatch { left: lambda.sum(), right: d.r() as i64 });
    }
    Ok(())
}

/// The matrix `a_{k,l} = |R_k^lambda ∩ d R_l^mu|`.
pub fn jmath(lambda: &PeriodicVector, d: &AffinePermutation, mu: &PeriodicVector) -> Result<PeriodicMatrix> {
    check_degree(lambda, d, mu)?;
    if !is_minimal_rep(d, mu) || !is_minimal_rep(&d.inverse(), lambda) {
        return Err(Error::NotMinimalRepresentative(d.to_string()));
    }
    Ok(jmath_unchecked(&Blocks::new(lambda), d, &Blocks::new(mu)))
}

fn jmath_unchecked(lb: &Blocks, d: &AffinePermutation, mb: &Blocks) -> PeriodicMatrix {
    let n = lb.n;
    let mut m = PeriodicMatrix::zero(n);
    for y in 1..=lb.r {
        let l = mb.block_of(y);
        let k = lb.block_of(d.eval(y));
        m.add_entry(k, l, 1);
    }
    m
}

/// Inverse of [`jmath`]: `(ro(A), d, co(A))` with `d` built by the canonical
/// order-preserving filling.
pub fn jmath_inverse(a: &PeriodicMatrix) -> Result<(PeriodicVector, AffinePermutation, PeriodicVector)> {
    if !a.is_nonneg_offdiag() || !a.diag().is_nonneg() {
        return Err(Error::NotInTheta(a.to_string()));
    }
    let n = a.n() as i64;
    let lambda = a.ro();
    let mu = a.co();
    let r = a.sigma();
    if r == 0 {
        return Err(Error::NotInTheta(format!("{a} has total 0")));
    }
    let lb = Blocks::new(&lambda);
    let mb = Blocks::new(&mu);
    // Row data: for each residue row i, entries (column, a) sorted by column.
    let mut rows: Vec<Vec<(i64, i64)>> = vec![Vec::new(); n as usize];
    for &(i, j, x) in a.offdiag() {
        rows[(i - 1) as usize].push((j, x));
    }
    for i in 1..=n {
        let x = a.diag().get(i);
        if x > 0 {
            rows[(i - 1) as usize].push((i, x));
        }
    }
    for row in &mut rows {
        row.sort_unstable();
    }
    let offset_in_row = |i: i64, col: i64| -> i64 { rows[(i - 1) as usize].iter().take_while(|&&(c, _)| c < col).map(|&(_, x)| x).sum() };
    let mut window = vec![0i64; r as usize];
    for l in 1..=n {
        // Entries in column l, as (row k, size), k increasing.
        let mut col: Vec<(i64, i64)> = Vec::new();
        for i in 1..=n {
            for &(c, x) in &rows[(i - 1) as usize] {
                if (c - l).rem_euclid(n) == 0 {
                    col.push((i + (l - c), x));
                }
            }
        }
        col.sort_unstable();
        let mut pos = *mb.block(l as usize).start();
        for (k, size) in col {
            let q = (k - 1).div_euclid(n);
            let i = k - q * n;
            let base = q * r + *lb.block(i as usize).start() + offset_in_row(i, l - q * n);
            for t in 0..size {
                window[(pos - 1) as usize] = base + t;
                pos += 1;
            }
        }
    }
    let d = AffinePermutation::new(window).map_err(|e| Error::NotInTheta(format!("{a}: {e}")))?;
    Ok((lambda, d, mu))
}

/// The double coset `S_lambda d S_mu`, by breadth-first closure under the
/// adjacent transpositions generating both Young subgroups.
pub fn double_coset(lambda: &PeriodicVector, d: &AffinePermutation, mu: &PeriodicVector) -> Result<Vec<AffinePermutation>> {
    check_degree(lambda, d, mu)?;
    Ok(double_coset_unchecked(&Blocks::new(lambda), d, &Blocks::new(mu)))
}

fn double_coset_unchecked(lb: &Blocks, d: &AffinePermutation, mb: &Blocks) -> Vec<AffinePermutation> {
    let r = lb.r;
    let left = lb.adjacent_pairs();
    let right = mb.adjacent_pairs();
    let mut seen: HashSet<AffinePermutation> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(d.clone());
    queue.push_back(d.clone());
    let mut out = Vec::new();
    while let Some(w) = queue.pop_front() {
        for &t in &left {
            let mut x = w.clone();
            for v in x.window.iter_mut() {
                let rem = (*v - 1).rem_euclid(r) + 1;
                if rem == t {
                    *v += 1;
                } else if rem == t + 1 {
                    *v -= 1;
                }
            }
            if seen.insert(x.clone()) {
                queue.push_back(x);
            }
        }
        for &t in &right {
            let mut x = w.clone();
            x.window.swap((t - 1) as usize, t as usize);
            if seen.insert(x.clone()) {
                queue.push_back(x);
            }
        }
        out.push(w);
    }
    out.sort();
    out
}

struct CosetData {
    lambda: PeriodicVector,
    mu: PeriodicVector,
    elements: Vec<AffinePermutation>,
    /// Elements `x` that are the shortest in their right coset `S_lambda x`.
    right_reps: Vec<AffinePermutation>,
}

/// Convolution products of standard basis elements in the affine Schur
/// algebra, with per-matrix caches of the double cosets involved.
#[derive(Default)]
pub struct Oracle {
    cache: RwLock<HashMap<PeriodicMatrix, Arc<CosetData>>>,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    fn coset_data(&self, a: &PeriodicMatrix) -> Result<Arc<CosetData>> {
        if let Some(c) = self.cache.read().expect("oracle cache poisoned").get(a) {
            return Ok(c.clone());
        }
        let (lambda, d, mu) = jmath_inverse(a)?;
        let lb = Blocks::new(&lambda);
        let elements = double_coset_unchecked(&lb, &d, &Blocks::new(&mu));
        let right_reps = elements.iter().filter(|x| lb.increasing_on(&x.inverse())).cloned().collect();
        let data = Arc::new(CosetData { lambda, mu, elements, right_reps });
        self.cache.write().expect("oracle cache poisoned").insert(a.clone(), data.clone());
        Ok(data)
    }

    /// `[B]_1 · [A]_1` with integer structure constants.
    pub fn mul(&self, b: &PeriodicMatrix, a: &PeriodicMatrix) -> Result<BTreeMap<PeriodicMatrix, BigInt>> {
        if b.n() != a.n() {
            return Err(Error::ContextMismatch(format!("rank {} vs {}", b.n(), a.n())));
        }
        if b.sigma() != a.sigma() {
            return Err(Error::DegreeMismatch { left: b.sigma(), right: a.sigma() });
        }
        let mut out = BTreeMap::new();
        if a.sigma() == 0 && a.offdiag().is_empty() && b.offdiag().is_empty() {
            // S(n, 0) is spanned by the single idempotent [0].
            out.insert(a.clone(), BigInt::from(1));
            return Ok(out);
        }
        if b.co() != a.ro() {
            b.require_theta(b.sigma())?;
            a.require_theta(a.sigma())?;
            return Ok(out);
        }
        let db = self.coset_data(b)?;
        let da = self.coset_data(a)?;
        let top = Blocks::new(&db.lambda);
        let bottom = Blocks::new(&da.mu);
        let mut counts: HashMap<AffinePermutation, u64> = HashMap::new();
        for g in &db.elements {
            for x in &da.right_reps {
                let w = g.compose_unchecked(x);
                if bottom.increasing_on(&w) && top.increasing_on(&w.inverse()) {
                    *counts.entry(w).or_insert(0) += 1;
                }
            }
        }
        for (w, c) in counts {
            out.insert(jmath_unchecked(&top, &w, &bottom), BigInt::from(c));
        }
        Ok(out)
    }
}

/// One-shot convenience wrapper around [`Oracle::mul`].
pub fn oracle_mul(b: &PeriodicMatrix, a: &PeriodicMatrix) -> Result<BTreeMap<PeriodicMatrix, BigInt>> {
    Oracle::new().mul(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{compositions, theta_window};

    fn v(x: &[i64]) -> PeriodicVector {
        PeriodicVector::new(x.to_vec())
    }

    fn p(x: &[i64]) -> AffinePermutation {
        AffinePermutation::new(x.to_vec()).unwrap()
    }

    #[test]
    fn group_operations() {
        let w = p(&[2, 3]);
        assert_eq!(w.compose(&w).unwrap(), p(&[3, 4]));
        assert_eq!(w.inverse(), p(&[0, 1]));
        assert_eq!(w.compose(&w.inverse()).unwrap(), AffinePermutation::identity(2));
        assert!(AffinePermutation::new(vec![1, 3]).is_err());
        assert!(w.compose(&AffinePermutation::identity(3)).is_err());
    }

    #[test]
    fn minimal_representatives() {
        assert!(is_minimal_rep(&AffinePermutation::identity(3), &v(&[2, 1])));
        assert!(!is_minimal_rep(&p(&[2, 1]), &v(&[2, 0])));
        assert!(is_minimal_rep(&p(&[2, 1]), &v(&[1, 1])));
    }

    #[test]
    fn bijection_examples() {
        let l = v(&[1, 1]);
        assert_eq!(jmath(&l, &AffinePermutation::identity(2), &l).unwrap(), PeriodicMatrix::diagonal(l.clone()));
        let swap = PeriodicMatrix::unit(2, 1, 2).add(&PeriodicMatrix::unit(2, 2, 1));
        assert_eq!(jmath(&l, &p(&[2, 1]), &l).unwrap(), swap);
        let shift = PeriodicMatrix::unit(2, 1, 0).add(&PeriodicMatrix::unit(2, 2, 1));
        assert_eq!(jmath(&l, &p(&[2, 3]), &l).unwrap(), shift);
        assert_eq!(jmath_inverse(&swap).unwrap(), (l.clone(), p(&[2, 1]), l.clone()));
        assert!(matches!(jmath(&v(&[2, 0]), &p(&[2, 1]), &v(&[2, 0])), Err(Error::NotMinimalRepresentative(_))));
    }

    #[test]
    fn double_coset_sizes() {
        let id = AffinePermutation::identity(2);
        assert_eq!(double_coset(&v(&[1, 1]), &id, &v(&[1, 1])).unwrap(), vec![id.clone()]);
        let c = double_coset(&v(&[2, 0]), &id, &v(&[1, 1])).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.contains(&p(&[2, 1])));
    }

    fn factorial(k: i64) -> u64 {
        (1..=k as u64).product()
    }

    #[test]
    fn round_trip_and_coset_size_law() {
        for n in 2..=3usize {
            for r in 1..=3 {
                for a in theta_window(n, r, 2) {
                    let (l, d, m) = jmath_inverse(&a).unwrap();
                    assert_eq!(jmath(&l, &d, &m).unwrap(), a);
                    let coset = double_coset(&l, &d, &m).unwrap();
                    let young = |x: &PeriodicVector| x.entries().iter().map(|&t| factorial(t)).product::<u64>();
                    let mut entries: Vec<i64> = a.offdiag().iter().map(|t| t.2).collect();
                    entries.extend(a.diag().entries());
                    let stab: u64 = entries.iter().map(|&t| factorial(t)).product();
                    assert_eq!(coset.len() as u64 * stab, young(&l) * young(&m), "{a}");
                }
            }
        }
    }

    #[test]
    fn double_cosets_partition_minimal_reps() {
        // Distinct minimal representatives give distinct matrices.
        let r = 3;
        for l in compositions(2, r) {
            for m in compositions(2, r) {
                let mut seen = HashSet::new();
                for a in theta_window(2, r, 2) {
                    if a.ro() == l && a.co() == m {
                        let (_, d, _) = jmath_inverse(&a).unwrap();
                        assert!(seen.insert(d));
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let e12 = PeriodicMatrix::unit(2, 1, 2);
        let e21 = PeriodicMatrix::unit(2, 2, 1);
        let b = e12.add_diag(&v(&[0, 1]));
        let a = e21.add_diag(&v(&[0, 1]));
        let prod = oracle_mul(&b, &a).unwrap();
        let mut expected = BTreeMap::new();
        expected.insert(PeriodicMatrix::diagonal(v(&[1, 1])), BigInt::from(1));
        expected.insert(e12.add(&e21), BigInt::from(1));
        assert_eq!(prod, expected);

        let b = e12.add_diag(&v(&[1, 0]));
        let a = e12.add_diag(&v(&[0, 1]));
        let prod = oracle_mul(&b, &a).unwrap();
        let two = PeriodicMatrix::from_entries(2, [(1, 2, 2)], v(&[0, 0]));
        assert_eq!(prod, BTreeMap::from([(two, BigInt::from(2))]));

        let id = PeriodicMatrix::diagonal(v(&[1, 1]));
        assert_eq!(oracle_mul(&id, &(e12.add(&e21))).unwrap(), BTreeMap::from([(e12.add(&e21), BigInt::from(1))]));
        assert!(oracle_mul(&PeriodicMatrix::diagonal(v(&[2, 0])), &id).unwrap().is_empty());
    }
}
