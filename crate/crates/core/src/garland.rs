//! Garland's imaginary-root elements.
//!
//! `S = Q[X_1, X_2, ...]` carries the derivation `D+(X_i) = i X_{i+1}` and the
//! elements `Lambda_0 = 1`, `Lambda_k = (1/k) sum_{s<k} Lambda_s X_{k-s}`. The
//! homomorphism `Psi_{i,l}` sends `X_m` to `E_{i,i+mln}<0>`; the image of
//! `Lambda_k` is the sum of `u+_{A_lambda}` over the partitions of `k`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{precondition, Result};
use crate::hall::HallAlgebra;
use crate::hyper::{BasisTag, HyperAlgebra, HyperElement};
use crate::lincomb::LinComb;
use crate::matrix::{PeriodicMatrix, PeriodicVector};
use crate::scalar::{Ring, Scalar};

/// Monomials are sorted multisets of indices, `[1, 1, 2]` for `X_1^2 X_2`.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GarlandPolynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl GarlandPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), BigRational::one())
    }

    /// `X_m`.
    pub fn x(m: u32) -> Self {
        assert!(m >= 1, "indeterminates start at X_1");
        Self::monomial(vec![m], BigRational::one())
    }

    pub fn monomial(mut mono: Monomial, c: BigRational) -> Self {
        mono.sort_unstable();
        let mut p = Self::zero();
        p.add_term(mono, c);
        p
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &[u32]) -> BigRational {
        let mut m = mono.to_vec();
        m.sort_unstable();
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, mono: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mono).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut p = Self::zero();
        for (m, v) in &self.terms {
            p.add_term(m.clone(), v * c);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m: Monomial = m1.iter().chain(m2).copied().collect();
                m.sort_unstable();
                p.add_term(m, c1 * c2);
            }
        }
        p
    }

    /// `D+`, extended to products by the Leibniz rule.
    pub fn d_plus(&self) -> Self {
        let mut p = Self::zero();
        for (m, c) in &self.terms {
            for (pos, &i) in m.iter().enumerate() {
                let mut next = m.clone();
                next[pos] = i + 1;
                next.sort_unstable();
                p.add_term(next, c * BigRational::from_integer(BigInt::from(i)));
            }
        }
        p
    }

    /// Weighted degrees of the monomials present, `X_m` having weight `m`.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(|m| m.iter().sum()).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|m| m.iter().sum::<u32>() == k)
    }
}

impl fmt::Display for GarlandPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
            for &i in m {
                *counts.entry(i).or_default() += 1;
            }
            let mono: Vec<String> = counts.iter().map(|(i, e)| if *e == 1 { format!("X{i}") } else { format!("X{i}^{e}") }).collect();
            parts.push(if mono.is_empty() { c.to_string() } else { format!("{c}·{}", mono.join("")) });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Lambda_k` by the recursion.
pub fn lambda_poly(k: usize) -> GarlandPolynomial {
    let mut ls = vec![GarlandPolynomial::one()];
    for j in 1..=k {
        let mut acc = GarlandPolynomial::zero();
        for (s, l) in ls.iter().enumerate() {
            acc = acc.add(&l.mul(&GarlandPolynomial::x((j - s) as u32)));
        }
        ls.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(j))));
    }
    ls.swap_remove(k)
}

fn factorial(k: usize) -> BigRational {
    BigRational::from_integer((1..=k).map(BigInt::from).product())
}

/// `(L_{X_1} + D+)^k / k! (y)` against `sum_s Lambda_s D+^{k-s} (y) / (k-s)!`.
pub fn operator_identity_check(k: usize, y: &GarlandPolynomial) -> bool {
    let mut lhs = y.clone();
    for _ in 0..k {
        lhs = GarlandPolynomial::x(1).mul(&lhs).add(&lhs.d_plus());
    }
    let lhs = lhs.scale(&factorial(k).recip());
    let mut rhs = GarlandPolynomial::zero();
    let mut d = y.clone();
    for j in 0..=k {
        // d = D+^j (y)
        rhs = rhs.add(&lambda_poly(k - j).mul(&d).scale(&factorial(j).recip()));
        d = d.d_plus();
    }
    lhs == rhs
}

/// `E_{i,i+mln}`.
pub fn imaginary_unit(n: usize, i: i64, l: i64, m: i64) -> PeriodicMatrix {
    PeriodicMatrix::unit(n, i, i + m * l * n as i64)
}

/// `Psi_{i,l}(f)` over the rationals, on the brace basis.
pub fn psi(hall: &HallAlgebra, i: i64, l: i64, f: &GarlandPolynomial) -> Result<HyperElement> {
    precondition(l != 0, || "Psi_{i,l} needs l != 0".to_string())?;
    let n = hall.n;
    let zero = PeriodicMatrix::zero(n);
    let mut total: LinComb<PeriodicMatrix> = LinComb::zero(Ring::Rational);
    for (mono, c) in f.terms() {
        // All factors share row i and commute; the lower case is the
        // transpose of the upper product in reverse order.
        let mut acc = LinComb::basis(Ring::Rational, zero.clone());
        for &m in mono.iter().rev() {
            let e = imaginary_unit(n, i, l, m as i64);
            let e = if l > 0 { e } else { e.transpose() };
            acc = hall.mul(&LinComb::basis(Ring::Rational, e), &acc)?;
        }
        if l < 0 {
            acc = acc.map_keys(|x| Some(x.transpose()));
        }
        total.add_scaled(&acc, &Scalar::Rat(c.clone()));
    }
    let z = PeriodicVector::zero(n);
    HyperElement::from_terms(n, BasisTag::B, total.map_keys(|x| Some((x.clone(), z.clone()))))
}

/// Weakly decreasing partitions of `k`, largest first.
pub fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// `theta_k`: a partition to its multiplicities `b_s`.
pub fn theta(lambda: &[u32]) -> BTreeMap<u32, u32> {
    let mut b = BTreeMap::new();
    for &s in lambda {
        *b.entry(s).or_insert(0) += 1;
    }
    b
}

pub fn theta_inverse(b: &BTreeMap<u32, u32>) -> Vec<u32> {
    let mut lambda: Vec<u32> = b.iter().flat_map(|(&s, &c)| std::iter::repeat_n(s, c as usize)).collect();
    lambda.sort_unstable_by(|x, y| y.cmp(x));
    lambda
}

/// `A^(i,l)_lambda = sum_s E_{i,i+lambda_s ln}`.
pub fn partition_matrix(n: usize, i: i64, l: i64, lambda: &[u32]) -> PeriodicMatrix {
    lambda.iter().fold(PeriodicMatrix::zero(n), |acc, &s| acc.add(&imaginary_unit(n, i, l, s as i64)))
}

/// `Ã^(i,l)_b = sum_s b_s A^(i,l)_s`.
pub fn count_matrix(n: usize, i: i64, l: i64, b: &BTreeMap<u32, u32>) -> PeriodicMatrix {
    partition_matrix(n, i, l, &theta_inverse(b))
}

/// `sum_{lambda ⊢ k} A^(i,l)_lambda<0>`.
pub fn partition_rhs(n: usize, k: u32, i: i64, l: i64) -> Result<HyperElement> {
    precondition(l != 0, || "partition_rhs needs l != 0".to_string())?;
    let z = PeriodicVector::zero(n);
    let terms = partitions(k).into_iter().map(|p| ((partition_matrix(n, i, l, &p), z.clone()), Scalar::Int(BigInt::one()))).collect();
    HyperElement::from_terms(n, BasisTag::B, terms)
}

/// Both sides of the ladder `E_{i,i+mln}<0> Ã_b<0> = sum_s (b_{s+m}+1) Ã_{b+e_{m+s}-e_s}<0>`.
pub fn ladder(hall: &HallAlgebra, i: i64, l: i64, m: u32, b: &BTreeMap<u32, u32>) -> Result<(HyperElement, HyperElement)> {
    precondition(l != 0 && m >= 1, || format!("ladder needs l != 0 and m >= 1, got l = {l}, m = {m}"))?;
    let n = hall.n;
    let e = imaginary_unit(n, i, l, m as i64);
    let a = count_matrix(n, i, l, b);
    let prod = if l > 0 { hall.hall_mul(&e, &a)? } else { hall.hall_mul_lower(&e, &a)? };
    let z = PeriodicVector::zero(n);
    let left = HyperElement::from_terms(n, BasisTag::B, prod.map_keys(|x| Some((x.clone(), z.clone()))))?;
    let top = b.keys().copied().max().unwrap_or(0);
    let mut right = LinComb::zero(Ring::Integer);
    for s in 0..=top {
        let mut c = b.clone();
        if s > 0 {
            match c.get_mut(&s) {
                Some(v) if *v > 0 => *v -= 1,
                _ => continue,
            }
        }
        let coeff = b.get(&(s + m)).copied().unwrap_or(0) + 1;
        *c.entry(s + m).or_insert(0) += 1;
        c.retain(|_, v| *v > 0);
        right.add_int((count_matrix(n, i, l, &c), z.clone()), &BigInt::from(coeff));
    }
    Ok((left, HyperElement::from_terms(n, BasisTag::B, right)?))
}

/// `E^(A+) F^(A-)` built from divided powers and the `Psi_{i,l}(Lambda_k)`.
pub fn garland_monomial(u: &HyperAlgebra, a: &PeriodicMatrix) -> Result<HyperElement> {
    let key = (a.clone(), PeriodicVector::zero(u.n));
    let terms = u.expansion(BasisTag::G, &key)?.iter().map(|(k, c)| (k.clone(), Scalar::Int(c.clone()))).collect();
    HyperElement::from_terms(u.n, BasisTag::B, terms)
}
