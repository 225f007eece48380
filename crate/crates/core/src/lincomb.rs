//! Sparse formal linear combinations over an exact coefficient ring.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::{Ring, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    ring: Ring,
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero(ring: Ring) -> Self {
        LinComb { ring, terms: BTreeMap::new() }
    }

    pub fn basis(ring: Ring, key: K) -> Self {
        let mut x = Self::zero(ring);
        x.add_term(key, ring.one());
        x
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn coeff(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Adds `c * key`; the coefficient is moved into this combination's ring.
    pub fn add_term(&mut self, key: K, c: Scalar) {
        let c = if c.ring() == self.ring { c } else { c.coerce(self.ring).expect("coefficient maps into ring") };
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_int(&mut self, key: K, c: &BigInt) {
        self.add_term(key, self.ring.from_bigint(c));
    }

    pub fn add_scaled(&mut self, other: &LinComb<K>, c: &Scalar) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &LinComb<K>) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn plus(&self, other: &LinComb<K>) -> LinComb<K> {
        let mut x = self.clone();
        x.add_assign(other);
        x
    }

    pub fn minus(&self, other: &LinComb<K>) -> LinComb<K> {
        let mut x = self.clone();
        x.add_scaled(other, &self.ring.from_int(-1));
        x
    }

    pub fn scale(&self, c: &Scalar) -> LinComb<K> {
        let mut x = Self::zero(self.ring);
        x.add_scaled(self, c);
        x
    }

    /// Moves every coefficient into `ring` (e.g. reduction mod p).
    pub fn change_ring(&self, ring: Ring) -> Result<LinComb<K>> {
        let mut x = Self::zero(ring);
        for (k, v) in &self.terms {
            x.add_term(k.clone(), v.coerce(ring)?);
        }
        Ok(x)
    }

    /// Relabels keys; colliding keys are summed and `None` drops the term.
    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Option<L>) -> LinComb<L> {
        let mut x = LinComb::zero(self.ring);
        for (k, v) in &self.terms {
            if let Some(l) = f(k) {
                x.add_term(l, v.clone());
            }
        }
        x
    }

    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> LinComb<K> {
        LinComb { ring: self.ring, terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }

    /// Fails unless every coefficient is an integer; used to certify that a
    /// rational computation landed in the integral form.
    pub fn to_integral(&self) -> Result<LinComb<K>> {
        let mut x = Self::zero(Ring::Integer);
        for (k, v) in &self.terms {
            let z = v.as_integer().ok_or_else(|| Error::Precondition(format!("coefficient {v} is not an integer")))?;
            x.add_term(k.clone(), Scalar::Int(z));
        }
        Ok(x)
    }

    pub fn into_terms(self) -> BTreeMap<K, Scalar> {
        self.terms
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for LinComb<K> {
    /// Collects into a combination over the ring of the first coefficient
    /// (integers when empty).
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut it = iter.into_iter().peekable();
        let ring = it.peek().map(|(_, c)| c.ring()).unwrap_or(Ring::Integer);
        let mut x = LinComb::zero(ring);
        for (k, c) in it {
            x.add_term(k, c);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_terms_are_dropped() {
        let mut x: LinComb<u32> = LinComb::zero(Ring::Integer);
        x.add_int(1, &BigInt::from(3));
        x.add_int(1, &BigInt::from(-3));
        assert!(x.is_zero());
        x.add_int(2, &BigInt::from(4));
        let y = x.change_ring(Ring::Prime(2)).unwrap();
        assert!(y.is_zero());
    }

    #[test]
    fn integrality_certificate() {
        let mut x: LinComb<u32> = LinComb::zero(Ring::Rational);
        x.add_term(0, Ring::Rational.parse_scalar("1/2").unwrap());
        assert!(x.to_integral().is_err());
        x.add_term(0, Ring::Rational.parse_scalar("1/2").unwrap());
        assert_eq!(x.to_integral().unwrap(), LinComb::basis(Ring::Integer, 0));
    }
}
