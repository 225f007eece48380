//! n-periodic integer vectors and matrices.
//!
//! A periodic matrix satisfies `a[i+n][j+n] = a[i][j]`, so it is determined by
//! its rows `1..=n`. Columns range over all of Z. Off-diagonal entries are
//! stored as sorted `(i, j, a)` triples with `1 <= i <= n` and `j != i`; the
//! diagonal is a separate vector.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{precondition, Result};

/// Residue representative in `1..=n` of an arbitrary index.
#[inline]
pub fn residue(i: i64, n: usize) -> usize {
    ((i - 1).rem_euclid(n as i64) + 1) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicVector(Vec<i64>);

impl PeriodicVector {
    pub fn new(entries: Vec<i64>) -> Self {
        assert!(!entries.is_empty(), "periodic vector needs at least one entry");
        PeriodicVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        PeriodicVector(vec![0; n])
    }

    /// The vector whose entry is 1 at every index congruent to `i`.
    pub fn unit(n: usize, i: i64) -> Self {
        let mut v = vec![0; n];
        v[residue(i, n) - 1] = 1;
        PeriodicVector(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: i64) -> i64 {
        self.0[residue(i, self.n()) - 1]
    }

    pub fn set(&mut self, i: i64, v: i64) {
        let n = self.n();
        self.0[residue(i, n) - 1] = v;
    }

    pub fn add_at(&mut self, i: i64, v: i64) {
        let n = self.n();
        self.0[residue(i, n) - 1] += v;
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        PeriodicVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        PeriodicVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        PeriodicVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.leq(other) && self != other
    }

    /// Entries reduced into `[0, q)`.
    pub fn reduce_mod(&self, q: i64) -> Self {
        PeriodicVector(self.0.iter().map(|a| a.rem_euclid(q)).collect())
    }

    /// All vectors `v` with `0 <= v <= self` componentwise.
    pub fn below(&self) -> Vec<PeriodicVector> {
        let mut out = vec![Vec::with_capacity(self.n())];
        for &bound in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (bound.max(0) as usize + 1));
            for prefix in &out {
                for v in 0..=bound.max(0) {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(PeriodicVector).collect()
    }
}

impl fmt::Display for PeriodicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicMatrix {
    n: usize,
    off: Vec<(i64, i64, i64)>,
    diag: PeriodicVector,
}

impl PeriodicMatrix {
    pub fn zero(n: usize) -> Self {
        PeriodicMatrix { n, off: Vec::new(), diag: PeriodicVector::zero(n) }
    }

    pub fn diagonal(diag: PeriodicVector) -> Self {
        PeriodicMatrix { n: diag.n(), off: Vec::new(), diag }
    }

    /// Builds a matrix from arbitrary `(i, j, a)` entries (any row index; the
    /// entry is shifted into rows `1..=n`, duplicates are summed, `i == j`
    /// lands on the diagonal).
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (i64, i64, i64)>, diag: PeriodicVector) -> Self {
        assert_eq!(diag.n(), n, "diagonal length must equal n");
        let mut m = PeriodicMatrix { n, off: Vec::new(), diag };
        for (i, j, a) in entries {
            m.add_entry(i, j, a);
        }
        m
    }

    /// The periodic matrix unit `E_{i,j}`.
    pub fn unit(n: usize, i: i64, j: i64) -> Self {
        Self::from_entries(n, [(i, j, 1)], PeriodicVector::zero(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offdiag(&self) -> &[(i64, i64, i64)] {
        &self.off
    }

    pub fn diag(&self) -> &PeriodicVector {
        &self.diag
    }

    fn normalize(&self, i: i64, j: i64) -> (i64, i64) {
        let r = residue(i, self.n) as i64;
        (r, j - (i - r))
    }

    pub fn entry(&self, i: i64, j: i64) -> i64 {
        let (r, c) = self.normalize(i, j);
        if r == c {
            return self.diag.get(r);
        }
        match self.off.binary_search_by(|&(a, b, _)| (a, b).cmp(&(r, c))) {
            Ok(pos) => self.off[pos].2,
            Err(_) => 0,
        }
    }

    /// Adds `a` to the entry at `(i, j)` (and to all its translates).
    pub fn add_entry(&mut self, i: i64, j: i64, a: i64) {
        if a == 0 {
            return;
        }
        let (r, c) = self.normalize(i, j);
        if r == c {
            self.diag.add_at(r, a);
            return;
        }
        match self.off.binary_search_by(|&(x, y, _)| (x, y).cmp(&(r, c))) {
            Ok(pos) => {
                self.off[pos].2 += a;
                if self.off[pos].2 == 0 {
                    self.off.remove(pos);
                }
            }
            Err(pos) => self.off.insert(pos, (r, c, a)),
        }
    }

    pub fn with_diag(&self, diag: PeriodicVector) -> Self {
        assert_eq!(diag.n(), self.n);
        PeriodicMatrix { n: self.n, off: self.off.clone(), diag }
    }

    /// `A^+ + A^-`: the matrix with its diagonal cleared.
    pub fn offdiag_part(&self) -> Self {
        self.with_diag(PeriodicVector::zero(self.n))
    }

    pub fn plus_part(&self) -> Self {
        PeriodicMatrix { n: self.n, off: self.off.iter().copied().filter(|&(i, j, _)| i < j).collect(), diag: PeriodicVector::zero(self.n) }
    }

    pub fn minus_part(&self) -> Self {
        PeriodicMatrix { n: self.n, off: self.off.iter().copied().filter(|&(i, j, _)| i > j).collect(), diag: PeriodicVector::zero(self.n) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for &(i, j, a) in &other.off {
            m.add_entry(i, j, a);
        }
        m.diag = m.diag.add(&other.diag);
        m
    }

    pub fn add_diag(&self, v: &PeriodicVector) -> Self {
        self.with_diag(self.diag.add(v))
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.n, self.off.iter().map(|&(i, j, a)| (j, i, a)), self.diag.clone())
    }

    pub fn ro(&self) -> PeriodicVector {
        let mut v = self.diag.clone();
        for &(i, _, a) in &self.off {
            v.add_at(i, a);
        }
        v
    }

    pub fn co(&self) -> PeriodicVector {
        let mut v = self.diag.clone();
        for &(_, j, a) in &self.off {
            v.add_at(j, a);
        }
        v
    }

    /// Sum of the entries in one period of rows.
    pub fn sigma(&self) -> i64 {
        self.offdiag_sigma() + self.diag.sum()
    }

    /// `sigma(A^+ + A^-)`.
    pub fn offdiag_sigma(&self) -> i64 {
        self.off.iter().map(|t| t.2).sum()
    }

    /// The vector with `i`-th entry `sum_{j<i} (a_{i,j} + a_{j,i})`, computed
    /// on the off-diagonal part.
    pub fn sigma_bold(&self) -> PeriodicVector {
        let mut v = PeriodicVector::zero(self.n);
        for &(r, c, a) in &self.off {
            if c < r {
                v.add_at(r, a);
            } else {
                // (r, c) is a translate of (i', i) with i' < i exactly when r < c.
                v.add_at(c, a);
            }
        }
        v
    }

    pub fn is_nonneg_offdiag(&self) -> bool {
        self.off.iter().all(|t| t.2 >= 0)
    }

    pub fn is_zero_diag(&self) -> bool {
        self.diag.is_zero()
    }

    pub fn is_upper_strict(&self) -> bool {
        self.is_zero_diag() && self.off.iter().all(|&(i, j, _)| i < j)
    }

    pub fn is_lower_strict(&self) -> bool {
        self.is_zero_diag() && self.off.iter().all(|&(i, j, _)| i > j)
    }

    /// Membership in `Theta(n, r)`: every entry nonnegative, total `r`.
    pub fn is_bounded(&self, r: i64) -> bool {
        self.is_nonneg_offdiag() && self.diag.is_nonneg() && self.sigma() == r
    }

    /// Every off-diagonal entry lies in `[0, q)`.
    pub fn entry_bound(&self, q: i64) -> bool {
        self.off.iter().all(|t| t.2 >= 0 && t.2 < q)
    }

    /// Largest `|j - i|` over stored off-diagonal entries.
    pub fn width(&self) -> i64 {
        self.off.iter().map(|&(i, j, _)| (j - i).abs()).max().unwrap_or(0)
    }

    pub fn require_theta(&self, r: i64) -> Result<()> {
        precondition(self.is_bounded(r), || format!("{self} is not a nonnegative matrix of total {r}"))
    }

    /// Ordering used for printing: by `sigma`, then by the canonical index.
    pub fn display_cmp(&self, other: &Self) -> Ordering {
        (self.offdiag_sigma(), self.sigma()).cmp(&(other.offdiag_sigma(), other.sigma())).then_with(|| self.cmp(other))
    }

    /// Sort key realizing [`Self::display_cmp`].
    pub fn display_cmp_key(&self) -> (i64, i64, PeriodicMatrix) {
        (self.offdiag_sigma(), self.sigma(), self.clone())
    }

    /// Renders the off-diagonal part only, e.g. `E(1,2)+2E(2,1)`, or `0`.
    pub fn offdiag_string(&self) -> String {
        if self.off.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .off
            .iter()
            .map(|&(i, j, a)| if a == 1 { format!("E({i},{j})") } else { format!("{a}E({i},{j})") })
            .collect();
        parts.join("+")
    }
}

impl PartialOrd for PeriodicMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PeriodicMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, &self.off, &self.diag).cmp(&(other.n, &other.off, &other.diag))
    }
}

impl fmt::Display for PeriodicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let diag: Vec<String> = self.diag.entries().iter().map(|x| x.to_string()).collect();
        if self.off.is_empty() {
            write!(f, "diag({})", diag.join(","))
        } else {
            write!(f, "{}+diag({})", self.offdiag_string(), diag.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: &[i64]) -> PeriodicVector {
        PeriodicVector::new(x.to_vec())
    }

    #[test]
    fn profiles() {
        let a = PeriodicMatrix::unit(2, 1, 2);
        assert_eq!(a.ro(), v(&[1, 0]));
        assert_eq!(a.co(), v(&[0, 1]));
        assert_eq!(a.sigma(), 1);
        let d = PeriodicMatrix::diagonal(v(&[3, 1, 2]));
        assert_eq!(d.ro(), v(&[3, 1, 2]));
        assert_eq!(d.co(), v(&[3, 1, 2]));
        assert_eq!(d.sigma(), 6);
        let b = PeriodicMatrix::unit(2, 1, 2).add(&PeriodicMatrix::unit(2, 2, 1));
        assert_eq!(b.sigma_bold(), v(&[0, 2]));
    }

    #[test]
    fn translates_share_storage() {
        let a = PeriodicMatrix::unit(3, 4, 9);
        assert_eq!(a.offdiag(), &[(1, 6, 1)]);
        assert_eq!(a.entry(7, 12), 1);
        assert_eq!(a.entry(1, 6), 1);
        let same_residue = PeriodicMatrix::unit(2, 1, 3);
        assert_eq!(same_residue.offdiag(), &[(1, 3, 1)]);
        assert!(same_residue.is_zero_diag());
        assert_eq!(same_residue.sigma_bold(), v(&[1, 0]));
    }

    #[test]
    fn cancellation_removes_entries() {
        let mut a = PeriodicMatrix::unit(2, 1, 2);
        a.add_entry(3, 4, -1);
        assert_eq!(a, PeriodicMatrix::zero(2));
    }

    fn arb_matrix() -> impl Strategy<Value = PeriodicMatrix> {
        (2usize..4).prop_flat_map(|n| {
            (
                proptest::collection::vec((-6i64..6, -8i64..8, -3i64..4), 0..6),
                proptest::collection::vec(-3i64..4, n),
            )
                .prop_map(move |(es, d)| PeriodicMatrix::from_entries(n, es, PeriodicVector::new(d)))
        })
    }

    proptest! {
        #[test]
        fn periodicity(a in arb_matrix(), i in -9i64..9, j in -9i64..9, s in -3i64..3) {
            let n = a.n() as i64;
            prop_assert_eq!(a.entry(i + s * n, j + s * n), a.entry(i, j));
        }

        #[test]
        fn sigma_is_row_and_column_total(a in arb_matrix()) {
            prop_assert_eq!(a.sigma(), a.ro().sum());
            prop_assert_eq!(a.sigma(), a.co().sum());
        }

        #[test]
        fn transpose_involution(a in arb_matrix()) {
            prop_assert_eq!(a.transpose().transpose(), a.clone());
            prop_assert_eq!(a.transpose().ro(), a.co());
        }

        #[test]
        fn sigma_bold_matches_definition(a in arb_matrix()) {
            let n = a.n() as i64;
            let lo = -20;
            for i in 1..=n {
                let direct: i64 = (lo..i).map(|j| a.entry(i, j) + a.entry(j, i)).sum();
                prop_assert_eq!(a.sigma_bold().get(i), direct);
            }
        }

        #[test]
        fn weight_order_is_reflexive(x in proptest::collection::vec(-3i64..3, 3)) {
            let x = PeriodicVector::new(x);
            prop_assert!(x.leq(&x));
            prop_assert!(!x.lt(&x));
        }
    }
}
