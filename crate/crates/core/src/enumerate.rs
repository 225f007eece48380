//! Finite enumerations of weights and windowed matrix sets.
//!
//! Affine index sets are infinite; a window `W` restricts the column support of
//! row `i` to `[i - W, i + W]`.

use crate::matrix::{PeriodicMatrix, PeriodicVector};

/// All ways to write `total` as a sum of `slots` nonnegative integers, each at
/// most `cap` (when given).
pub fn distributions(slots: usize, total: i64, cap: Option<i64>) -> Vec<Vec<i64>> {
    fn go(slots: usize, total: i64, cap: Option<i64>, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() + 1 == slots {
            if cap.map_or(true, |c| total <= c) {
                prefix.push(total);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let hi = cap.map_or(total, |c| c.min(total));
        for v in 0..=hi {
            prefix.push(v);
            go(slots, total - v, cap, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if total < 0 {
        return out;
    }
    if slots == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(slots, total, cap, &mut Vec::with_capacity(slots), &mut out);
    out
}

/// `Lambda(n, r)`: compositions of `r` into `n` nonnegative parts.
pub fn compositions(n: usize, r: i64) -> Vec<PeriodicVector> {
    distributions(n, r, None).into_iter().map(PeriodicVector::new).collect()
}

/// Vectors with every entry in `[0, q)`.
pub fn bounded_vectors(n: usize, q: i64) -> Vec<PeriodicVector> {
    PeriodicVector::new(vec![q - 1; n]).below()
}

/// Vectors in `N^n` with entry sum at most `s`.
pub fn vectors_up_to(n: usize, s: i64) -> Vec<PeriodicVector> {
    (0..=s).flat_map(|t| compositions(n, t)).collect()
}

/// Off-diagonal slots `(i, j)` with `1 <= i <= n`, `0 < |j - i| <= w`.
pub fn offdiag_slots(n: usize, w: i64) -> Vec<(i64, i64)> {
    let mut slots = Vec::new();
    for i in 1..=n as i64 {
        for j in i - w..=i + w {
            if j != i {
                slots.push((i, j));
            }
        }
    }
    slots
}

/// `Theta(n, r)` restricted to column support `|j - i| <= w`.
pub fn theta_window(n: usize, r: i64, w: i64) -> Vec<PeriodicMatrix> {
    let mut slots: Vec<(i64, i64)> = Vec::new();
    for i in 1..=n as i64 {
        for j in i - w..=i + w {
            slots.push((i, j));
        }
    }
    distributions(slots.len(), r, None)
        .into_iter()
        .map(|vals| {
            PeriodicMatrix::from_entries(
                n,
                slots.iter().zip(&vals).filter(|(_, &a)| a != 0).map(|(&(i, j), &a)| (i, j, a)),
                PeriodicVector::zero(n),
            )
        })
        .collect()
}

/// Zero-diagonal matrices with entries in `[0, q)` (or unbounded when `q` is
/// `None`), support within the window and off-diagonal total at most
/// `max_sigma` (when given). `keep` filters slots, e.g. to upper-strict ones.
pub fn theta_pm_window(n: usize, w: i64, q: Option<i64>, max_sigma: Option<i64>, keep: impl Fn(i64, i64) -> bool) -> Vec<PeriodicMatrix> {
    let slots: Vec<(i64, i64)> = offdiag_slots(n, w).into_iter().filter(|&(i, j)| keep(i, j)).collect();
    let cap = q.map(|q| q - 1);
    let limit = max_sigma.unwrap_or_else(|| cap.expect("need an entry bound or a sigma bound") * slots.len() as i64);
    let mut out = Vec::new();
    for total in 0..=limit {
        for vals in distributions(slots.len(), total, cap) {
            out.push(PeriodicMatrix::from_entries(
                n,
                slots.iter().zip(&vals).filter(|(_, &a)| a != 0).map(|(&(i, j), &a)| (i, j, a)),
                PeriodicVector::zero(n),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
    }

    #[test]
    fn counts() {
        assert_eq!(compositions(3, 4).len() as u64, binom(6, 2));
        assert_eq!(theta_window(2, 2, 1).len() as u64, binom(6 + 1, 2));
        assert_eq!(bounded_vectors(2, 3).len(), 9);
        assert_eq!(offdiag_slots(2, 2).len(), 8);
        assert_eq!(theta_pm_window(2, 2, Some(2), None, |_, _| true).len(), 256);
        assert_eq!(theta_pm_window(2, 1, None, Some(2), |_, _| true).len() as u64, 1 + 4 + binom(5, 2));
    }

    #[test]
    fn window_members_have_bounded_width() {
        for a in theta_window(3, 3, 2) {
            assert!(a.is_bounded(3));
            assert!(a.width() <= 2);
        }
    }
}
