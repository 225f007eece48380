//! The positive part `U+` at `v = 1` on the basis `u+_A`, `A` upper strict.
//!
//! Left multiplication by a generator `u+_{kE_{i,j}}` only moves units into
//! columns `t > i`; general products go through the monomials
//! `E^(A) = prod u+_{a_{i,j} E_{i,j}}`, which are `u+_A` plus terms of smaller
//! total.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{precondition, Error, Result};
use crate::formula::{apply_transfer, normalize_pair, transfer_coeff, transfer_vectors, Constraint};
use crate::lincomb::LinComb;
use crate::matrix::PeriodicMatrix;
use crate::rewrite::{factors, Expansion};
use crate::scalar::Ring;

pub struct HallAlgebra {
    pub n: usize,
    cache: RwLock<HashMap<PeriodicMatrix, Expansion>>,
}

impl HallAlgebra {
    pub fn new(n: usize) -> Self {
        HallAlgebra { n, cache: RwLock::new(HashMap::new()) }
    }

    /// `u+_{kE_{i,j}} · u+_A` for `i < j`.
    pub fn gen_mul(&self, k: i64, i: i64, j: i64, a: &PeriodicMatrix) -> Vec<(PeriodicMatrix, BigInt)> {
        let (i, j) = normalize_pair(self.n, i, j);
        assert!(i < j, "positive generator needs i < j");
        let mut out: BTreeMap<PeriodicMatrix, BigInt> = BTreeMap::new();
        for alpha in transfer_vectors(a, k, i, j, Constraint::SkipJ) {
            if alpha.iter().any(|&(t, _)| t <= i) {
                continue;
            }
            let c = transfer_coeff(a, i, j, &alpha, true);
            if c.is_zero() {
                continue;
            }
            let m = apply_transfer(a, i, j, &alpha).offdiag_part();
            *out.entry(m).or_insert_with(BigInt::zero) += c;
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    fn chain(&self, chain: &[(i64, i64, i64)], y: &LinComb<PeriodicMatrix>) -> LinComb<PeriodicMatrix> {
        let mut cur = y.clone();
        for &(k, i, j) in chain.iter().rev() {
            let mut next = LinComb::zero(cur.ring());
            for (x, c) in cur.iter() {
                for (z, m) in self.gen_mul(k, i, j, x) {
                    next.add_term(z, c.mul_int(&m));
                }
            }
            cur = next;
        }
        cur
    }

    /// `E^(A)` on the basis `u+`.
    pub fn monomial(&self, a: &PeriodicMatrix) -> LinComb<PeriodicMatrix> {
        self.chain(&factors(a), &LinComb::basis(Ring::Integer, PeriodicMatrix::zero(self.n)))
    }

    /// Coefficients `g_D` with `u+_C = sum_D g_D E^(D)`.
    pub fn inverse(&self, c: &PeriodicMatrix) -> Result<Expansion> {
        if let Some(e) = self.cache.read().expect("hall cache poisoned").get(c) {
            return Ok(e.clone());
        }
        let mono = self.monomial(c);
        if !mono.coeff(c).is_one() {
            return Err(Error::Verification(format!("E^({c}) has leading coefficient {}", mono.coeff(c))));
        }
        let mut acc: BTreeMap<PeriodicMatrix, BigInt> = BTreeMap::new();
        acc.insert(c.clone(), BigInt::one());
        for (b, h) in mono.iter() {
            if b == c {
                continue;
            }
            if b.sigma() >= c.sigma() {
                return Err(Error::Verification(format!("E^({c}) contains {b}, which is not lower")));
            }
            let h = h.as_integer().expect("integer chain");
            for (d, g) in self.inverse(b)?.iter() {
                *acc.entry(d.clone()).or_insert_with(BigInt::zero) -= &h * g;
            }
        }
        let e: Expansion = Arc::new(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        self.cache.write().expect("hall cache poisoned").insert(c.clone(), e.clone());
        Ok(e)
    }

    fn check_upper(&self, a: &PeriodicMatrix) -> Result<()> {
        precondition(a.n() == self.n && a.is_upper_strict() && a.is_nonneg_offdiag(), || {
            format!("{a} is not a nonnegative upper strict matrix of rank {}", self.n)
        })
    }

    /// `u+_A · y`.
    pub fn mul_basis(&self, a: &PeriodicMatrix, y: &LinComb<PeriodicMatrix>) -> Result<LinComb<PeriodicMatrix>> {
        self.check_upper(a)?;
        let mut out = LinComb::zero(y.ring());
        for (d, g) in self.inverse(a)?.iter() {
            out.add_scaled(&self.chain(&factors(d), y), &y.ring().from_bigint(g));
        }
        Ok(out)
    }

    /// `u+_A · u+_B = sum_C c_C u+_C`.
    pub fn hall_mul(&self, a: &PeriodicMatrix, b: &PeriodicMatrix) -> Result<LinComb<PeriodicMatrix>> {
        self.check_upper(b)?;
        self.mul_basis(a, &LinComb::basis(Ring::Integer, b.clone()))
    }

    /// `A<0> · B<0>` for lower strict `A`, `B`, through the anti-isomorphism
    /// `u-_X = (tX)<0>`.
    pub fn hall_mul_lower(&self, a: &PeriodicMatrix, b: &PeriodicMatrix) -> Result<LinComb<PeriodicMatrix>> {
        Ok(self.hall_mul(&b.transpose(), &a.transpose())?.map_keys(|c| Some(c.transpose())))
    }

    pub fn mul(&self, x: &LinComb<PeriodicMatrix>, y: &LinComb<PeriodicMatrix>) -> Result<LinComb<PeriodicMatrix>> {
        let mut out = LinComb::zero(y.ring());
        for (a, c) in x.iter() {
            out.add_scaled(&self.mul_basis(a, y)?, c);
        }
        Ok(out)
    }
}
