//! The stabilized algebra `K(n)` on `[A]`, `A` with nonnegative off-diagonal
//! entries and arbitrary integer diagonal, and its characteristic-p quotients.
//!
//! The product is defined here by the generator formula (the transfer
//! constraint is dropped at column `j`) extended by triangular rewriting, as
//! in the Schur algebras. Associativity and agreement with `S(n, r)` on
//! nonnegative indices are checked by the test suites rather than assumed.
//!
//! `Kbar` keeps diagonals modulo `p^h`; the completion symbols
//! `[[A + diag(lambda bar)]]` stand for the sum over a full residue class and
//! are never expanded.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::binom::vec_binom;
use crate::context::ModPContext;
use crate::enumerate::bounded_vectors;
use crate::error::{precondition, Error, Result};
use crate::formula::{generator_action, Constraint};
use crate::hyper::{HyperAlgebra, HyperElement};
use crate::lincomb::LinComb;
use crate::matrix::{PeriodicMatrix, PeriodicVector};
use crate::modp::membership_h;
use crate::rewrite::{GeneratorAction, Rewriter};
use crate::scalar::{Ring, Scalar};

/// `[kE_{i,j} + diag(ro(X) - k e_j)] · [X]` with no condition at column `j`.
pub struct KStep;

impl GeneratorAction for KStep {
    fn step(&self, x: &PeriodicMatrix, k: i64, i: i64, j: i64) -> Vec<(PeriodicMatrix, BigInt)> {
        generator_action(x, k, i, j, Constraint::SkipJ)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KElement {
    pub n: usize,
    pub terms: LinComb<PeriodicMatrix>,
}

impl KElement {
    pub fn zero(n: usize, ring: Ring) -> Self {
        KElement { n, terms: LinComb::zero(ring) }
    }

    pub fn basis(ring: Ring, a: PeriodicMatrix) -> Result<Self> {
        precondition(a.is_nonneg_offdiag(), || format!("{a} has a negative off-diagonal entry"))?;
        Ok(KElement { n: a.n(), terms: LinComb::basis(ring, a) })
    }

    pub fn from_terms(n: usize, terms: LinComb<PeriodicMatrix>) -> Result<Self> {
        for a in terms.keys() {
            precondition(a.n() == n && a.is_nonneg_offdiag(), || format!("{a} is not an index of K({n})"))?;
        }
        Ok(KElement { n, terms })
    }

    pub fn ring(&self) -> Ring {
        self.terms.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        same(self.n, other.n)?;
        Ok(KElement { n: self.n, terms: self.terms.plus(&other.terms) })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        same(self.n, other.n)?;
        Ok(KElement { n: self.n, terms: self.terms.minus(&other.terms) })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        KElement { n: self.n, terms: self.terms.scale(c) }
    }

    pub fn change_ring(&self, ring: Ring) -> Result<Self> {
        Ok(KElement { n: self.n, terms: self.terms.change_ring(ring)? })
    }

    /// Terms whose index lies in `K(n)_h`: off-diagonal entries below `q`.
    pub fn in_kh(&self, q: i64) -> bool {
        self.terms.keys().all(|a| a.entry_bound(q))
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(a, c)| (a.display_cmp_key(), format!("{c}·[{a}]"))))
    }
}

fn write_terms<K: Ord>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (K, String)>) -> fmt::Result {
    let mut v: Vec<(K, String)> = terms.collect();
    if v.is_empty() {
        return write!(f, "0");
    }
    v.sort_by(|a, b| a.0.cmp(&b.0));
    let parts: Vec<String> = v.into_iter().map(|t| t.1).collect();
    write!(f, "{}", parts.join(" + "))
}

fn same(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::ContextMismatch(format!("K({a}) vs K({b})")));
    }
    Ok(())
}

pub struct KAlgebra {
    pub n: usize,
    rewriter: Rewriter<KStep>,
}

impl KAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        precondition(n >= 2, || format!("rank n must be at least 2, got {n}"))?;
        Ok(KAlgebra { n, rewriter: Rewriter::new(KStep) })
    }

    pub fn rewriter(&self) -> &Rewriter<KStep> {
        &self.rewriter
    }

    /// `[kE_{i,j} + diag(ro(A) - k e_j)] · [A]`.
    pub fn k_gen_mul(&self, k: i64, i: i64, j: i64, a: &PeriodicMatrix) -> Result<KElement> {
        precondition(i != j && k >= 1, || format!("({i}, {j}) with k = {k} is not a generator"))?;
        precondition(a.n() == self.n && a.is_nonneg_offdiag(), || format!("{a} is not an index of K({})", self.n))?;
        let mut x = LinComb::zero(Ring::Integer);
        for (m, c) in generator_action(a, k, i, j, Constraint::SkipJ) {
            x.add_int(m, &c);
        }
        Ok(KElement { n: self.n, terms: x })
    }

    pub fn k_mul(&self, x: &KElement, y: &KElement) -> Result<KElement> {
        same(x.n, y.n)?;
        same(x.n, self.n)?;
        let ring = if x.ring() == Ring::Integer { y.ring() } else { x.ring() };
        let y = y.terms.change_ring(ring)?;
        Ok(KElement { n: self.n, terms: self.rewriter.mul(&x.terms.change_ring(ring)?, &y)? })
    }

    pub fn k_mul_basis(&self, b: &PeriodicMatrix, a: &PeriodicMatrix) -> Result<KElement> {
        self.k_mul(&KElement::basis(Ring::Integer, b.clone())?, &KElement::basis(Ring::Integer, a.clone())?)
    }
}

/// `tau_lambda`: `[A] -> [A + q diag(lambda)]` on `K(n)_h`; multiplicative
/// once coefficients are read in characteristic p.
pub fn tau(lambda: &PeriodicVector, x: &KElement, q: i64) -> Result<KElement> {
    precondition(x.in_kh(q), || format!("{x} does not lie in K(n)_h for p^h = {q}"))?;
    let shift = lambda.scale(q);
    Ok(KElement { n: x.n, terms: x.terms.map_keys(|a| Some(a.add_diag(&shift))) })
}

/// `(off-diagonal part, diagonal residues)`.
pub type BarKey = (PeriodicMatrix, PeriodicVector);

fn check_bar_key(n: usize, key: &BarKey, q: i64) -> Result<()> {
    let (a, r) = key;
    precondition(a.n() == n && r.n() == n, || format!("{a} with residues {r} does not have rank {n}"))?;
    precondition(a.is_zero_diag() && a.is_nonneg_offdiag() && a.entry_bound(q), || format!("{a} must have zero diagonal and entries in [0, {q})"))?;
    precondition(r.entries().iter().all(|&x| (0..q).contains(&x)), || format!("{r} is not a residue vector mod {q}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KBarElement {
    pub n: usize,
    pub ctx: ModPContext,
    pub terms: LinComb<BarKey>,
}

impl KBarElement {
    pub fn zero(n: usize, ctx: ModPContext) -> Self {
        KBarElement { n, ctx, terms: LinComb::zero(Ring::Prime(ctx.p)) }
    }

    pub fn from_terms(n: usize, ctx: ModPContext, terms: LinComb<BarKey>) -> Result<Self> {
        for k in terms.keys() {
            check_bar_key(n, k, ctx.q)?;
        }
        Ok(KBarElement { n, ctx, terms: terms.change_ring(Ring::Prime(ctx.p))? })
    }

    /// `[A + diag(residues)]`.
    pub fn basis(ctx: ModPContext, a: PeriodicMatrix, residues: PeriodicVector) -> Result<Self> {
        let n = a.n();
        Self::from_terms(n, ctx, LinComb::basis(Ring::Prime(ctx.p), (a, residues)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        same(self.n, other.n)?;
        Ok(KBarElement { terms: self.terms.plus(&other.terms), ..self.clone() })
    }
}

impl fmt::Display for KBarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|((a, r), c)| ((a.display_cmp_key(), r.clone()), format!("{c}·[{}]", a.add_diag(r)))))
    }
}

/// Projects a `K` element onto `Kbar`: diagonals reduced mod `q`,
/// coefficients mod p. Every index must lie in `K(n)_h` after dropping zero
/// coefficients.
pub fn project(x: &KElement, ctx: ModPContext) -> Result<KBarElement> {
    let x = x.change_ring(Ring::Prime(ctx.p))?;
    let terms = x.terms.map_keys(|a| Some((a.offdiag_part(), a.diag().reduce_mod(ctx.q))));
    KBarElement::from_terms(x.n, ctx, terms)
}

fn lift(key: &BarKey) -> PeriodicMatrix {
    key.0.add_diag(&key.1)
}

/// The product on `Kbar`: the right factor is lifted with diagonal in
/// `[0, q)` and the left factor is shifted by multiples of `q` until its
/// column profile matches.
pub fn kbar_mul(k: &KAlgebra, x: &KBarElement, y: &KBarElement) -> Result<KBarElement> {
    same(x.n, y.n)?;
    if x.ctx != y.ctx {
        return Err(Error::ContextMismatch(format!("Kbar over (p, h) = ({}, {}) vs ({}, {})", x.ctx.p, x.ctx.h, y.ctx.p, y.ctx.h)));
    }
    let ctx = x.ctx;
    let mut out = LinComb::zero(Ring::Prime(ctx.p));
    for (bk, cb) in x.terms.iter() {
        for (ak, ca) in y.terms.iter() {
            let a = lift(ak);
            let b = lift(bk);
            let gap = a.ro().sub(&b.co());
            if gap.reduce_mod(ctx.q) != PeriodicVector::zero(x.n) {
                continue;
            }
            let prod = project(&k.k_mul_basis(&b.add_diag(&gap), &a)?, ctx)?;
            out.add_scaled(&prod.terms, &(cb * ca));
        }
    }
    KBarElement::from_terms(x.n, ctx, out)
}

/// `phi_h(A<lambda>) = sum_{mu in N^n_h} binom(mu, lambda) [A + diag(mu bar)]`.
pub fn phi_h(u: &HyperAlgebra, x: &HyperElement, ctx: ModPContext) -> Result<KBarElement> {
    if !membership_h(u, x, ctx)? {
        return Err(Error::NotAMember(format!("{x} for p^h = {}", ctx.q)));
    }
    let x = u.to_brace(x)?.change_ring(Ring::Prime(ctx.p))?;
    let mut out = LinComb::zero(Ring::Prime(ctx.p));
    for ((a, l), c) in x.terms.iter() {
        for mu in bounded_vectors(x.n, ctx.q) {
            let b = vec_binom(&mu, l);
            out.add_term((a.clone(), mu), c.mul_int(&b));
        }
    }
    KBarElement::from_terms(x.n, ctx, out)
}

/// Finite sums of class symbols `[[A + diag(lambda bar)]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KHatClassElement {
    pub n: usize,
    pub ctx: ModPContext,
    pub terms: LinComb<BarKey>,
}

impl KHatClassElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }
}

impl fmt::Display for KHatClassElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|((a, r), c)| ((a.display_cmp_key(), r.clone()), format!("{c}·[[{}]]", a.add_diag(r)))))
    }
}

/// `psi_h`: `[A + diag(lambda bar)] -> [[A + diag(lambda bar)]]`.
pub fn psi_h(x: &KBarElement) -> KHatClassElement {
    KHatClassElement { n: x.n, ctx: x.ctx, terms: x.terms.clone() }
}

/// Product of class symbols. For `[[B + diag(beta bar)]] · [[A + diag(alpha bar)]]`
/// the left symbol is represented with diagonal in `[0, q)`, each member of
/// the right class pairs with exactly one member of the left class, and the
/// products for different members are `tau`-translates of one another; one
/// representative is multiplied in `K` and the result re-bundled into classes.
pub fn khat_mul(k: &KAlgebra, x: &KHatClassElement, y: &KHatClassElement) -> Result<KHatClassElement> {
    same(x.n, y.n)?;
    if x.ctx != y.ctx {
        return Err(Error::ContextMismatch("class symbols over different (p, h)".into()));
    }
    let ctx = x.ctx;
    let mut out = LinComb::zero(Ring::Prime(ctx.p));
    for (bk, cb) in x.terms.iter() {
        for (ak, ca) in y.terms.iter() {
            let b = lift(bk);
            let a = lift(ak);
            let gap = b.co().sub(&a.ro());
            if gap.reduce_mod(ctx.q) != PeriodicVector::zero(x.n) {
                continue;
            }
            let a = a.add_diag(&gap);
            let prod = k.k_mul_basis(&b, &a)?.change_ring(Ring::Prime(ctx.p))?;
            for (c, v) in prod.terms.iter() {
                precondition(c.entry_bound(ctx.q), || format!("{c} leaves K(n)_h with nonzero coefficient"))?;
                out.add_term((c.offdiag_part(), c.diag().reduce_mod(ctx.q)), &(cb * ca) * v);
            }
        }
    }
    Ok(KHatClassElement { n: x.n, ctx, terms: out })
}

/// `zeta(A<lambda>) = sum_{mu in Z^n} binom(mu, lambda) [A + diag(mu)]`,
/// bundled into classes. The coefficient on a class is read off at three
/// members `mu bar - q`, `mu bar`, `mu bar + q` (componentwise), which must
/// agree mod p.
pub fn zeta(u: &HyperAlgebra, x: &HyperElement, ctx: ModPContext) -> Result<KHatClassElement> {
    let x = u.to_brace(x)?.change_ring(Ring::Prime(ctx.p))?;
    let ring = Ring::Prime(ctx.p);
    let mut out = LinComb::zero(ring);
    for ((a, l), c) in x.terms.iter() {
        for res in bounded_vectors(x.n, ctx.q) {
            let mut values = Vec::new();
            for shift in [-1, 0, 1] {
                let mu = res.add(&PeriodicVector::new(vec![shift * ctx.q; x.n]));
                values.push(ring.from_bigint(&vec_binom(&mu, l)));
            }
            if values.iter().any(|v| *v != values[0]) {
                return Err(Error::Verification(format!("binom(mu, {l}) is not constant on the class of {res} mod {}", ctx.q)));
            }
            out.add_term((a.clone(), res), c * &values[0]);
        }
    }
    Ok(KHatClassElement { n: x.n, ctx, terms: out })
}

/// `zeta` restricted to `u(n)_h` against `psi_h . phi_h`.
pub fn zeta_consistency(u: &HyperAlgebra, x: &HyperElement, ctx: ModPContext) -> Result<bool> {
    Ok(zeta(u, x, ctx)? == psi_h(&phi_h(u, x, ctx)?))
}

/// Nonnegative-diagonal part of a `K` element, as terms of `S(n, r)`.
pub fn nonnegative_part(x: &KElement) -> BTreeMap<PeriodicMatrix, Scalar> {
    x.terms.iter().filter(|(a, _)| a.diag().is_nonneg()).map(|(a, c)| (a.clone(), c.clone())).collect()
}
