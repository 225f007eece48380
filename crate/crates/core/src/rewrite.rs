//! Triangular rewriting of standard basis elements into generator monomials.
//!
//! For an index `C` write `Mono(C)` for the product of generators
//! `[a_{i,j} E_{i,j} + diag(..)]` over the off-diagonal entries of `C`, taken
//! in the fixed order on `L` (upper entries lexicographically, then lower
//! entries lexicographically) and ending in column profile `co(C)`. Then
//! `Mono(C) = [C] + (terms with smaller off-diagonal total)`, so `[C]` is a
//! finite integer combination of monomials, and left multiplication by `[C]`
//! reduces to chains of generator products.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::matrix::{PeriodicMatrix, PeriodicVector};

/// Left multiplication of a basis element `[X]` by the generator
/// `[k E_{i,j} + diag(ro(X) - k e_j)]`.
pub trait GeneratorAction: Sync + Send {
    fn step(&self, x: &PeriodicMatrix, k: i64, i: i64, j: i64) -> Vec<(PeriodicMatrix, BigInt)>;
}

/// Off-diagonal entries of `c` as generator factors `(k, i, j)`, leftmost first.
pub fn factors(c: &PeriodicMatrix) -> Vec<(i64, i64, i64)> {
    let upper = c.offdiag().iter().filter(|t| t.0 < t.1);
    let lower = c.offdiag().iter().filter(|t| t.0 > t.1);
    upper.chain(lower).map(|&(i, j, a)| (a, i, j)).collect()
}

pub type Expansion = Arc<Vec<(PeriodicMatrix, BigInt)>>;

pub struct Rewriter<G> {
    action: G,
    cache: RwLock<HashMap<PeriodicMatrix, Expansion>>,
}

impl<G: GeneratorAction> Rewriter<G> {
    pub fn new(action: G) -> Self {
        Rewriter { action, cache: RwLock::new(HashMap::new()) }
    }

    pub fn action(&self) -> &G {
        &self.action
    }

    /// Applies the factors right to left to `y`.
    pub fn apply_chain(&self, chain: &[(i64, i64, i64)], y: &LinComb<PeriodicMatrix>) -> LinComb<PeriodicMatrix> {
        let mut cur = y.clone();
        for &(k, i, j) in chain.iter().rev() {
            let mut next = LinComb::zero(cur.ring());
            for (x, c) in cur.iter() {
                for (z, m) in self.action.step(x, k, i, j) {
                    next.add_term(z, c.mul_int(&m));
                }
            }
            cur = next;
        }
        cur
    }

    /// `Mono(C)` over the integers.
    pub fn monomial(&self, c: &PeriodicMatrix) -> BTreeMap<PeriodicMatrix, BigInt> {
        let start = LinComb::basis(crate::Ring::Integer, PeriodicMatrix::diagonal(c.co()));
        self.apply_chain(&factors(c), &start)
            .into_terms()
            .into_iter()
            .map(|(k, v)| (k, v.as_integer().expect("integer chain")))
            .collect()
    }

    /// Coefficients `g_D` with `[C] = sum_D g_D Mono(D)`.
    pub fn inverse(&self, c: &PeriodicMatrix) -> Result<Expansion> {
        if let Some(e) = self.cache.read().expect("rewrite cache poisoned").get(c) {
            return Ok(e.clone());
        }
        let mono = self.monomial(c);
        let lead = mono.get(c).cloned().unwrap_or_else(BigInt::zero);
        if !lead.is_one() {
            return Err(Error::Verification(format!("monomial of {c} has leading coefficient {lead}")));
        }
        let mut acc: BTreeMap<PeriodicMatrix, BigInt> = BTreeMap::new();
        acc.insert(c.clone(), BigInt::one());
        for (b, h) in &mono {
            if b == c {
                continue;
            }
            if b.offdiag_sigma() >= c.offdiag_sigma() {
                return Err(Error::Verification(format!("monomial of {c} contains {b}, which is not lower")));
            }
            for (d, g) in self.inverse(b)?.iter() {
                *acc.entry(d.clone()).or_insert_with(BigInt::zero) -= h * g;
            }
        }
        let e: Expansion = Arc::new(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        self.cache.write().expect("rewrite cache poisoned").insert(c.clone(), e.clone());
        Ok(e)
    }

    /// `[C] · y`.
    pub fn mul_basis(&self, c: &PeriodicMatrix, y: &LinComb<PeriodicMatrix>) -> Result<LinComb<PeriodicMatrix>> {
        let mut out = LinComb::zero(y.ring());
        for (d, g) in self.inverse(c)?.iter() {
            let co = d.co();
            let proj = y.filter(|x| x.ro() == co);
            if proj.is_empty() {
                continue;
            }
            let part = self.apply_chain(&factors(d), &proj);
            out.add_scaled(&part, &y.ring().from_bigint(g));
        }
        Ok(out)
    }

    /// `x · y`, bilinearly.
    pub fn mul(&self, x: &LinComb<PeriodicMatrix>, y: &LinComb<PeriodicMatrix>) -> Result<LinComb<PeriodicMatrix>> {
        let mut out = LinComb::zero(y.ring());
        for (c, a) in x.iter() {
            out.add_scaled(&self.mul_basis(c, y)?, a);
        }
        Ok(out)
    }

    /// The profile `co(C)` continued through the lower factors: the diagonal
    /// sitting between the upper and lower halves of `Mono(C)`.
    pub fn middle_profile(c: &PeriodicMatrix) -> PeriodicVector {
        let mut v = c.co();
        for &(i, j, a) in c.offdiag() {
            if i > j {
                v.add_at(i, a);
                v.add_at(j, -a);
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_order_puts_upper_entries_first() {
        let c = PeriodicMatrix::from_entries(2, [(2, 1, 1), (1, 2, 2), (1, 0, 3), (2, 5, 1)], PeriodicVector::zero(2));
        assert_eq!(factors(&c), vec![(2, 1, 2), (1, 2, 5), (3, 1, 0), (1, 2, 1)]);
    }

    #[test]
    fn middle_profile_is_diagonal_plus_sigma_bold() {
        let c = PeriodicMatrix::from_entries(3, [(2, 1, 1), (1, 3, 2), (3, -1, 1)], PeriodicVector::new(vec![1, 0, 2]));
        assert_eq!(Rewriter::<Never>::middle_profile(&c), c.diag().add(&c.sigma_bold()));
    }

    struct Never;
    impl GeneratorAction for Never {
        fn step(&self, _: &PeriodicMatrix, _: i64, _: i64, _: i64) -> Vec<(PeriodicMatrix, BigInt)> {
            Vec::new()
        }
    }
}
