//! The integral form `U_Z` of the enveloping algebra of the loop algebra of
//! `gl_n`, on the basis `A<lambda>` with `A` off-diagonal and `lambda` in N^n.
//!
//! Besides the brace basis `B` the algebra carries four triangular bases:
//!
//! * `M`: `E^(A+) (H|lambda) F^(A-)`, the PBW monomials;
//! * `Bp`: `A<0> (H|lambda)`;
//! * `C`: `u+_{A+} (H|lambda) u-_{t(A-)}`;
//! * `G`: `E^(A+) (H|lambda) F^(A-)` built from the Garland factors.
//!
//! Each of them expands as `A<lambda>` plus terms that are lower, meaning
//! either a smaller off-diagonal total, or the same matrix with a smaller
//! weight.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::binom::{gbinom, vec_binom};
use crate::error::{precondition, Error, Result};
use crate::formula::{apply_transfer, normalize_pair, transfer_coeff, transfer_vectors, Constraint};
use crate::garland;
use crate::hall::HallAlgebra;
use crate::lincomb::LinComb;
use crate::matrix::{PeriodicMatrix, PeriodicVector};
use crate::rewrite::factors;
use crate::scalar::{Ring, Scalar};
use crate::schur::{SchurAlgebra, SchurElement};

/// `(A, lambda)`, standing for `A<lambda>`.
pub type HKey = (PeriodicMatrix, PeriodicVector);

pub type HExpansion = Arc<Vec<(HKey, BigInt)>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisTag {
    B,
    M,
    Bp,
    C,
    G,
}

impl BasisTag {
    pub const ALL: [BasisTag; 5] = [BasisTag::B, BasisTag::M, BasisTag::Bp, BasisTag::C, BasisTag::G];

    pub fn as_str(self) -> &'static str {
        match self {
            BasisTag::B => "B",
            BasisTag::M => "M",
            BasisTag::Bp => "Bp",
            BasisTag::C => "C",
            BasisTag::G => "G",
        }
    }
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BasisTag::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| Error::Malformed(format!("unknown basis {s:?}; expected B, M, Bp, C or G")))
    }
}

/// `B` is strictly below `A` in the triangular order.
pub fn is_lower(b: &HKey, a: &HKey) -> bool {
    b.0.sigma() < a.0.sigma() || (b.0 == a.0 && b.1.lt(&a.1))
}

pub fn check_key(n: usize, key: &HKey) -> Result<()> {
    let (a, l) = key;
    precondition(a.n() == n && l.n() == n, || format!("{a}<{l}> does not have rank {n}"))?;
    precondition(a.is_zero_diag() && a.is_nonneg_offdiag(), || format!("{a} must have zero diagonal and nonnegative entries"))?;
    precondition(l.is_nonneg(), || format!("weight {l} must be nonnegative"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperElement {
    pub n: usize,
    pub basis: BasisTag,
    pub terms: LinComb<HKey>,
}

impl HyperElement {
    pub fn zero(n: usize, ring: Ring) -> Self {
        HyperElement { n, basis: BasisTag::B, terms: LinComb::zero(ring) }
    }

    pub fn unit(n: usize, ring: Ring) -> Self {
        Self::basis_element(ring, PeriodicMatrix::zero(n), PeriodicVector::zero(n)).expect("unit is a basis element")
    }

    /// `A<lambda>`.
    pub fn basis_element(ring: Ring, a: PeriodicMatrix, lambda: PeriodicVector) -> Result<Self> {
        let n = a.n();
        let key = (a, lambda);
        check_key(n, &key)?;
        Ok(HyperElement { n, basis: BasisTag::B, terms: LinComb::basis(ring, key) })
    }

    /// `(H|lambda) = 0<lambda>`.
    pub fn h_binomial(ring: Ring, lambda: PeriodicVector) -> Self {
        Self::basis_element(ring, PeriodicMatrix::zero(lambda.n()), lambda).expect("weight must be nonnegative")
    }

    /// `(kE_{i,j})<0>`.
    pub fn generator(ring: Ring, n: usize, k: i64, i: i64, j: i64) -> Result<Self> {
        precondition(i != j && k >= 0, || format!("({i}, {j}) with k = {k} is not a generator"))?;
        let mut a = PeriodicMatrix::zero(n);
        a.add_entry(i, j, k);
        Self::basis_element(ring, a, PeriodicVector::zero(n))
    }

    pub fn from_terms(n: usize, basis: BasisTag, terms: LinComb<HKey>) -> Result<Self> {
        for k in terms.keys() {
            check_key(n, k)?;
        }
        Ok(HyperElement { n, basis, terms })
    }

    pub fn ring(&self) -> Ring {
        self.terms.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, a: &PeriodicMatrix, lambda: &PeriodicVector) -> Scalar {
        self.terms.coeff(&(a.clone(), lambda.clone()))
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.basis != other.basis || self.ring() != other.ring() {
            return Err(Error::ContextMismatch(format!(
                "U(n={}) in basis {} over {} vs U(n={}) in basis {} over {}",
                self.n,
                self.basis,
                self.ring(),
                other.n,
                other.basis,
                other.ring()
            )));
        }
        Ok(())
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(HyperElement { terms: self.terms.plus(&other.terms), ..self.clone() })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(HyperElement { terms: self.terms.minus(&other.terms), ..self.clone() })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        HyperElement { terms: self.terms.scale(c), ..self.clone() }
    }

    pub fn change_ring(&self, ring: Ring) -> Result<Self> {
        Ok(HyperElement { terms: self.terms.change_ring(ring)?, ..self.clone() })
    }

    /// Certifies that a rational computation landed in `U_Z`.
    pub fn to_integral(&self) -> Result<Self> {
        let terms = self.terms.to_integral().map_err(|e| Error::Verification(format!("{self} is not integral: {e}")))?;
        Ok(HyperElement { terms, ..self.clone() })
    }

    pub fn sorted_terms(&self) -> Vec<(&HKey, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0 .0.display_cmp(&b.0 .0).then_with(|| a.0 .1.cmp(&b.0 .1)));
        v
    }
}

impl fmt::Display for HyperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.sorted_terms().into_iter().map(|((a, l), c)| format!("{c}·{}<{l}>", a.offdiag_string())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `(kE_{i,j})<0> · A<lambda>` on the brace basis.
pub fn gen_mul_basis(k: i64, i: i64, j: i64, a: &PeriodicMatrix, lambda: &PeriodicVector) -> Vec<(HKey, BigInt)> {
    let n = a.n();
    let (i, j) = normalize_pair(n, i, j);
    let mut out: BTreeMap<HKey, BigInt> = BTreeMap::new();
    let deltas = lambda.below();
    for alpha in transfer_vectors(a, k, i, j, Constraint::SkipJ) {
        let prod = transfer_coeff(a, i, j, &alpha, true);
        if prod.is_zero() {
            continue;
        }
        let at = |t: i64| alpha.iter().find(|p| p.0 == t).map_or(0, |p| p.1);
        let (ai, aj) = (at(i), at(j));
        let moved = apply_transfer(a, i, j, &alpha).offdiag_part();
        let top = PeriodicVector::unit(n, j).scale(aj).sub(&PeriodicVector::unit(n, i).scale(ai));
        for delta in &deltas {
            let room = lambda.get(i) - delta.get(i);
            let mut s = BigInt::zero();
            for b in 0..=ai.min(room) {
                let mut bottom = lambda.sub(delta);
                bottom.add_at(i, -b);
                s += vec_binom(&top, &bottom) * gbinom(ai, b);
            }
            if s.is_zero() {
                continue;
            }
            let c = gbinom(delta.get(i) + ai, ai) * &prod * s;
            let mut w = delta.clone();
            w.add_at(i, ai);
            *out.entry((moved.clone(), w)).or_insert_with(BigInt::zero) += c;
        }
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `(H|mu) · A<lambda>` on the brace basis.
pub fn hmul_basis(mu: &PeriodicVector, a: &PeriodicMatrix, lambda: &PeriodicVector) -> Vec<(HKey, BigInt)> {
    let ro = a.ro();
    let mut out = Vec::new();
    for delta in mu.below() {
        let lead = vec_binom(&delta.add(lambda), lambda);
        if lead.is_zero() {
            continue;
        }
        let rest = mu.sub(&delta);
        let mut s = BigInt::zero();
        for beta in rest.below() {
            if !beta.leq(lambda) {
                continue;
            }
            s += vec_binom(&ro, &rest.sub(&beta)) * vec_binom(lambda, &beta);
        }
        if !s.is_zero() {
            out.push(((a.clone(), lambda.add(&delta)), lead * s));
        }
    }
    out
}

/// `A<0> · (H|lambda) = A<lambda> + sum_{delta < lambda} binom(co(A), lambda - delta) A<delta>`.
pub fn brace_times_h(a: &PeriodicMatrix, lambda: &PeriodicVector) -> Vec<(HKey, BigInt)> {
    let co = a.co();
    lambda
        .below()
        .into_iter()
        .filter_map(|delta| {
            let c = if delta == *lambda { BigInt::one() } else { vec_binom(&co, &lambda.sub(&delta)) };
            (!c.is_zero()).then(|| ((a.clone(), delta), c))
        })
        .collect()
}

pub fn apply_gen(k: i64, i: i64, j: i64, y: &LinComb<HKey>) -> LinComb<HKey> {
    let mut out = LinComb::zero(y.ring());
    for ((a, l), c) in y.iter() {
        for (key, m) in gen_mul_basis(k, i, j, a, l) {
            out.add_term(key, c.mul_int(&m));
        }
    }
    out
}

pub fn apply_h(mu: &PeriodicVector, y: &LinComb<HKey>) -> LinComb<HKey> {
    if mu.is_zero() {
        return y.clone();
    }
    let mut out = LinComb::zero(y.ring());
    for ((a, l), c) in y.iter() {
        for (key, m) in hmul_basis(mu, a, l) {
            out.add_term(key, c.mul_int(&m));
        }
    }
    out
}

fn apply_chain(chain: &[(i64, i64, i64)], y: &LinComb<HKey>) -> LinComb<HKey> {
    chain.iter().rev().fold(y.clone(), |acc, &(k, i, j)| apply_gen(k, i, j, &acc))
}

/// `E^(A+) (H|lambda) F^(A-) · y`.
pub fn monomial_apply(a: &PeriodicMatrix, lambda: &PeriodicVector, y: &LinComb<HKey>) -> LinComb<HKey> {
    let chain = factors(a);
    let split = chain.iter().position(|f| f.1 > f.2).unwrap_or(chain.len());
    let (upper, lower) = chain.split_at(split);
    apply_chain(upper, &apply_h(lambda, &apply_chain(lower, y)))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Table {
    Expansion,
    Inverse,
}

/// Multiplication and basis changes with memoized triangular data.
pub struct HyperAlgebra {
    pub n: usize,
    hall: HallAlgebra,
    cache: RwLock<HashMap<(Table, BasisTag, HKey), HExpansion>>,
}

impl HyperAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        precondition(n >= 2, || format!("rank n must be at least 2, got {n}"))?;
        Ok(HyperAlgebra { n, hall: HallAlgebra::new(n), cache: RwLock::new(HashMap::new()) })
    }

    pub fn hall(&self) -> &HallAlgebra {
        &self.hall
    }

    fn cached(&self, table: Table, tag: BasisTag, key: &HKey) -> Option<HExpansion> {
        self.cache.read().expect("hyper cache poisoned").get(&(table, tag, key.clone())).cloned()
    }

    fn store(&self, table: Table, tag: BasisTag, key: &HKey, value: BTreeMap<HKey, BigInt>) -> HExpansion {
        let e: HExpansion = Arc::new(value.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        self.cache.write().expect("hyper cache poisoned").insert((table, tag, key.clone()), e.clone());
        e
    }

    /// `(kE_{i,j})<0> · A<lambda>` as an element.
    pub fn gen_mul(&self, k: i64, i: i64, j: i64, a: &PeriodicMatrix, lambda: &PeriodicVector) -> Result<HyperElement> {
        precondition(i != j, || format!("generator needs i != j, got ({i}, {j})"))?;
        precondition(k >= 1, || format!("k must be positive, got {k}"))?;
        check_key(self.n, &(a.clone(), lambda.clone()))?;
        let terms = gen_mul_basis(k, i, j, a, lambda).into_iter().map(|(key, c)| (key, Scalar::Int(c))).collect();
        Ok(HyperElement { n: self.n, basis: BasisTag::B, terms })
    }

    /// `(H|mu) · x` for `x` on the brace basis.
    pub fn hmul(&self, mu: &PeriodicVector, x: &HyperElement) -> Result<HyperElement> {
        precondition(mu.is_nonneg() && mu.n() == self.n, || format!("{mu} must be a nonnegative weight of rank {}", self.n))?;
        let x = self.to_brace(x)?;
        Ok(HyperElement { terms: apply_h(mu, &x.terms), ..x })
    }

    /// The expansion of the `tag` basis element indexed by `key` on `B`.
    pub fn expansion(&self, tag: BasisTag, key: &HKey) -> Result<HExpansion> {
        if let Some(e) = self.cached(Table::Expansion, tag, key) {
            return Ok(e);
        }
        check_key(self.n, key)?;
        let (a, l) = key;
        let unit = HyperElement::unit(self.n, Ring::Integer);
        let value: LinComb<HKey> = match tag {
            BasisTag::B => LinComb::basis(Ring::Integer, key.clone()),
            BasisTag::M => monomial_apply(a, l, &unit.terms),
            BasisTag::Bp => {
                let h = HyperElement::h_binomial(Ring::Integer, l.clone());
                self.mul(&self.brace(a, &PeriodicVector::zero(self.n)), &h)?.terms
            }
            BasisTag::C => {
                let plus = self.brace(&a.plus_part(), &PeriodicVector::zero(self.n));
                let minus = self.brace(&a.minus_part(), &PeriodicVector::zero(self.n));
                let h = HyperElement::h_binomial(Ring::Integer, l.clone());
                self.mul(&plus, &self.mul(&h, &minus)?)?.terms
            }
            BasisTag::G => {
                let mut acc = HyperElement::h_binomial(Ring::Integer, l.clone());
                for &(k, i, j) in factors(a).iter() {
                    if i < j {
                        continue;
                    }
                    acc = self.mul(&acc, &self.garland_factor(k, i, j)?)?;
                }
                for &(k, i, j) in factors(a).iter().rev() {
                    if i > j {
                        continue;
                    }
                    acc = self.mul(&self.garland_factor(k, i, j)?, &acc)?;
                }
                acc.terms
            }
        };
        let map: BTreeMap<HKey, BigInt> = value.iter().map(|(k, c)| (k.clone(), c.as_integer().expect("integral expansion"))).collect();
        if map.get(key).map_or(true, |c| !c.is_one()) {
            return Err(Error::Verification(format!("{tag} element {}<{l}> has leading coefficient {:?}", a.offdiag_string(), map.get(key))));
        }
        if let Some((b, _)) = map.iter().find(|(b, _)| *b != key && !is_lower(b, key)) {
            return Err(Error::Verification(format!("{tag} element {}<{l}> contains {}<{}>, which is not lower", a.offdiag_string(), b.0.offdiag_string(), b.1)));
        }
        Ok(self.store(Table::Expansion, tag, key, map))
    }

    /// `X^(k)_{i,j}`: a divided power for distinct residues, the image of the
    /// Garland element otherwise.
    pub fn garland_factor(&self, k: i64, i: i64, j: i64) -> Result<HyperElement> {
        let n = self.n as i64;
        if (j - i).rem_euclid(n) != 0 {
            return HyperElement::generator(Ring::Integer, self.n, k, i, j);
        }
        let l = (j - i) / n;
        garland::psi(&self.hall, i, l, &garland::lambda_poly(k as usize))?.to_integral()
    }

    /// Coefficients `g` with `key = sum g_D D` on the `tag` basis.
    pub fn inverse(&self, tag: BasisTag, key: &HKey) -> Result<HExpansion> {
        if let Some(e) = self.cached(Table::Inverse, tag, key) {
            return Ok(e);
        }
        let exp = self.expansion(tag, key)?;
        let mut acc: BTreeMap<HKey, BigInt> = BTreeMap::new();
        acc.insert(key.clone(), BigInt::one());
        for (b, h) in exp.iter() {
            if b == key {
                continue;
            }
            for (d, g) in self.inverse(tag, b)?.iter() {
                *acc.entry(d.clone()).or_insert_with(BigInt::zero) -= h * g;
            }
        }
        Ok(self.store(Table::Inverse, tag, key, acc))
    }

    pub fn brace(&self, a: &PeriodicMatrix, lambda: &PeriodicVector) -> HyperElement {
        HyperElement::basis_element(Ring::Integer, a.clone(), lambda.clone()).expect("valid brace index")
    }

    /// Rewrites `x` on the brace basis.
    pub fn to_brace(&self, x: &HyperElement) -> Result<HyperElement> {
        if x.basis == BasisTag::B {
            return Ok(x.clone());
        }
        let mut out = LinComb::zero(x.ring());
        for (key, c) in x.terms.iter() {
            for (b, g) in self.expansion(x.basis, key)?.iter() {
                out.add_term(b.clone(), c.mul_int(g));
            }
        }
        Ok(HyperElement { n: x.n, basis: BasisTag::B, terms: out })
    }

    /// Change of basis by triangular back-substitution.
    pub fn convert(&self, x: &HyperElement, to: BasisTag) -> Result<HyperElement> {
        precondition(x.n == self.n, || format!("element of rank {} in U(n={})", x.n, self.n))?;
        let b = self.to_brace(x)?;
        if to == BasisTag::B {
            return Ok(b);
        }
        let mut out = LinComb::zero(x.ring());
        for (key, c) in b.terms.iter() {
            for (d, g) in self.inverse(to, key)?.iter() {
                out.add_term(d.clone(), c.mul_int(g));
            }
        }
        Ok(HyperElement { n: x.n, basis: to, terms: out })
    }

    /// `x · y` on the brace basis; the left factor is rewritten into PBW
    /// monomials, each applied as a chain of generator and H-binomial steps.
    pub fn mul(&self, x: &HyperElement, y: &HyperElement) -> Result<HyperElement> {
        if x.n != y.n || x.n != self.n {
            return Err(Error::ContextMismatch(format!("ranks {} and {} in U(n={})", x.n, y.n, self.n)));
        }
        let x = self.to_brace(x)?;
        let y = self.to_brace(y)?;
        let ring = if x.ring() == y.ring() {
            y.ring()
        } else if x.ring() == Ring::Integer {
            y.ring()
        } else if y.ring() == Ring::Integer {
            x.ring()
        } else {
            return Err(Error::ContextMismatch(format!("coefficients in {} and {}", x.ring(), y.ring())));
        };
        let yt = y.terms.change_ring(ring)?;
        let mut out = LinComb::zero(ring);
        for (key, c) in x.terms.iter() {
            for ((d, delta), g) in self.inverse(BasisTag::M, key)?.iter() {
                let part = monomial_apply(d, delta, &yt);
                out.add_scaled(&part, &c.mul_int(g).coerce(ring)?);
            }
        }
        Ok(HyperElement { n: self.n, basis: BasisTag::B, terms: out })
    }

    /// `u+_A · u+_B` for upper strict `A`, `B`.
    pub fn hall_mul(&self, a: &PeriodicMatrix, b: &PeriodicMatrix) -> Result<HyperElement> {
        let prod = self.hall.hall_mul(a, b)?;
        let zero = PeriodicVector::zero(self.n);
        Ok(HyperElement { n: self.n, basis: BasisTag::B, terms: prod.map_keys(|c| Some((c.clone(), zero.clone()))) })
    }

    /// `xi_r`: `A<lambda> ↦ A<lambda, r>`.
    pub fn evaluate_xi(&self, x: &HyperElement, r: i64) -> Result<SchurElement> {
        let x = self.to_brace(x)?;
        let s = SchurAlgebra::new(self.n, r)?;
        let mut out = SchurElement::zero(self.n, r, x.ring());
        for ((a, l), c) in x.terms.iter() {
            out = out.plus(&s.brace(a, l, x.ring())?.scale(c))?;
        }
        Ok(out)
    }

    /// Checks `(E_{i,j}<0>)^k / k! = (kE_{i,j})<0>` over Q.
    pub fn divided_power_check(&self, i: i64, j: i64, k: i64) -> Result<bool> {
        precondition((i - j).rem_euclid(self.n as i64) != 0, || format!("({i}, {j}) must have distinct residues"))?;
        precondition(k >= 0, || format!("k must be nonnegative, got {k}"))?;
        let e = HyperElement::generator(Ring::Rational, self.n, 1, i, j)?;
        let mut power = HyperElement::unit(self.n, Ring::Rational);
        for _ in 0..k {
            power = self.mul(&e, &power)?;
        }
        let fact: BigInt = (1..=k).map(BigInt::from).product();
        let scaled = power.scale(&Scalar::Rat(num_rational::BigRational::new(BigInt::one(), fact)));
        Ok(scaled == HyperElement::generator(Ring::Rational, self.n, k, i, j)?)
    }
}
