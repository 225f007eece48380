//! The affine Schur algebra `S(n, r)` on its standard basis `[A]`,
//! `A ∈ Theta(n, r)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::afweyl::Oracle;
use crate::binom::vec_binom;
use crate::enumerate::compositions;
use crate::error::{precondition, Error, Result};
use crate::formula::{generator_action, Constraint};
use crate::lincomb::LinComb;
use crate::matrix::{PeriodicMatrix, PeriodicVector};
use crate::rewrite::{factors, GeneratorAction, Rewriter};
use crate::scalar::{Ring, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurElement {
    pub n: usize,
    pub r: i64,
    pub terms: LinComb<PeriodicMatrix>,
}

impl SchurElement {
    pub fn zero(n: usize, r: i64, ring: Ring) -> Self {
        SchurElement { n, r, terms: LinComb::zero(ring) }
    }

    pub fn basis(r: i64, ring: Ring, a: PeriodicMatrix) -> Result<Self> {
        a.require_theta(r)?;
        Ok(SchurElement { n: a.n(), r, terms: LinComb::basis(ring, a) })
    }

    /// Builds an element from terms, checking every index lies in `Theta(n, r)`.
    pub fn from_terms(n: usize, r: i64, terms: LinComb<PeriodicMatrix>) -> Result<Self> {
        for a in terms.keys() {
            precondition(a.n() == n, || format!("{a} has rank {} instead of {n}", a.n()))?;
            a.require_theta(r)?;
        }
        Ok(SchurElement { n, r, terms })
    }

    pub fn ring(&self) -> Ring {
        self.terms.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, a: &PeriodicMatrix) -> Scalar {
        self.terms.coeff(a)
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.same_context(other)?;
        Ok(SchurElement { n: self.n, r: self.r, terms: self.terms.plus(&other.terms) })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.same_context(other)?;
        Ok(SchurElement { n: self.n, r: self.r, terms: self.terms.minus(&other.terms) })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        SchurElement { n: self.n, r: self.r, terms: self.terms.scale(c) }
    }

    pub fn change_ring(&self, ring: Ring) -> Result<Self> {
        Ok(SchurElement { n: self.n, r: self.r, terms: self.terms.change_ring(ring)? })
    }

    fn same_context(&self, other: &Self) -> Result<()> {
        if (self.n, self.r, self.ring()) != (other.n, other.r, other.ring()) {
            return Err(Error::ContextMismatch(format!(
                "S({}, {}) over {} vs S({}, {}) over {}",
                self.n,
                self.r,
                self.ring(),
                other.n,
                other.r,
                other.ring()
            )));
        }
        Ok(())
    }

    /// Terms sorted by `(sigma, index)` for display.
    pub fn sorted_terms(&self) -> Vec<(&PeriodicMatrix, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.display_cmp(b.0));
        v
    }
}

impl fmt::Display for SchurElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.sorted_terms().into_iter().map(|(a, c)| format!("{c}·[{a}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The generator `[k E_{i,j} + diag(lambda - k e_j)]`.
pub fn generator(k: i64, i: i64, j: i64, lambda: &PeriodicVector) -> PeriodicMatrix {
    let mut g = PeriodicMatrix::diagonal(lambda.sub(&PeriodicVector::unit(lambda.n(), j).scale(k)));
    g.add_entry(i, j, k);
    g
}

/// Left action of generators on `Theta(n, r)`: zero unless `ro(X) >= k e_j`.
pub struct SchurStep;

impl GeneratorAction for SchurStep {
    fn step(&self, x: &PeriodicMatrix, k: i64, i: i64, j: i64) -> Vec<(PeriodicMatrix, BigInt)> {
        if x.ro().get(j) < k {
            return Vec::new();
        }
        generator_action(x, k, i, j, Constraint::EveryColumn)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Triangular rewriting into generator monomials, then the closed formula.
    Formula,
    /// Convolution in the extended affine symmetric group.
    Oracle,
}

/// Products in `S(n, r)` with memoized rewriting and oracle caches.
pub struct SchurAlgebra {
    pub n: usize,
    pub r: i64,
    rewriter: Rewriter<SchurStep>,
    oracle: Oracle,
}

impl SchurAlgebra {
    pub fn new(n: usize, r: i64) -> Result<Self> {
        precondition(n >= 2, || format!("rank n must be at least 2, got {n}"))?;
        precondition(r >= 0, || format!("degree r must be nonnegative, got {r}"))?;
        Ok(SchurAlgebra { n, r, rewriter: Rewriter::new(SchurStep), oracle: Oracle::new() })
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn rewriter(&self) -> &Rewriter<SchurStep> {
        &self.rewriter
    }

    /// `sum_{lambda in Lambda(n, r)} [diag(lambda)]`.
    pub fn identity(&self, ring: Ring) -> SchurElement {
        let terms = compositions(self.n, self.r).into_iter().map(|l| (PeriodicMatrix::diagonal(l), ring.one())).collect::<Vec<_>>();
        let mut x = LinComb::zero(ring);
        for (k, v) in terms {
            x.add_term(k, v);
        }
        SchurElement { n: self.n, r: self.r, terms: x }
    }

    fn check(&self, a: &PeriodicMatrix) -> Result<()> {
        precondition(a.n() == self.n, || format!("{a} has rank {} instead of {}", a.n(), self.n))?;
        a.require_theta(self.r)
    }

    /// `[k E_{i,j} + diag(ro(A) - k e_j)] · [A]` by the closed formula.
    pub fn gen_mul(&self, k: i64, i: i64, j: i64, a: &PeriodicMatrix) -> Result<SchurElement> {
        self.check(a)?;
        precondition(k >= 1, || format!("k must be positive, got {k}"))?;
        precondition(i != j, || format!("generator needs i != j, got ({i}, {j})"))?;
        precondition(a.ro().get(j) >= k, || format!("ro({a}) = {} is not >= {k} e_{j}", a.ro()))?;
        let mut x = LinComb::zero(Ring::Integer);
        for (m, c) in generator_action(a, k, i, j, Constraint::EveryColumn) {
            x.add_int(m, &c);
        }
        Ok(SchurElement { n: self.n, r: self.r, terms: x })
    }

    /// `[B] · [A]` over the integers by the chosen strategy.
    pub fn mul_basis(&self, b: &PeriodicMatrix, a: &PeriodicMatrix, strategy: Strategy) -> Result<LinComb<PeriodicMatrix>> {
        self.check(a)?;
        self.check(b)?;
        match strategy {
            Strategy::Formula => self.rewriter.mul_basis(b, &LinComb::basis(Ring::Integer, a.clone())),
            Strategy::Oracle => {
                let mut x = LinComb::zero(Ring::Integer);
                for (m, c) in self.oracle.mul(b, a)? {
                    x.add_int(m, &c);
                }
                Ok(x)
            }
        }
    }

    pub fn mul(&self, x: &SchurElement, y: &SchurElement, strategy: Strategy) -> Result<SchurElement> {
        x.same_context(y)?;
        if (x.n, x.r) != (self.n, self.r) {
            return Err(Error::ContextMismatch(format!("element of S({}, {}) in S({}, {})", x.n, x.r, self.n, self.r)));
        }
        let terms = match strategy {
            Strategy::Formula => self.rewriter.mul(&x.terms, &y.terms)?,
            Strategy::Oracle => {
                let mut out = LinComb::zero(x.ring());
                for (b, cb) in x.terms.iter() {
                    for (a, ca) in y.terms.iter() {
                        if b.co() != a.ro() {
                            continue;
                        }
                        let coeff = cb * ca;
                        for (m, c) in self.oracle.mul(b, a)? {
                            out.add_term(m, coeff.mul_int(&c));
                        }
                    }
                }
                out
            }
        };
        Ok(SchurElement { n: self.n, r: self.r, terms })
    }

    /// `A[j, r] = sum_mu mu^j [A + diag(mu)]` over `mu in Lambda(n, r - sigma(A))`.
    pub fn bracket(&self, a: &PeriodicMatrix, j: &PeriodicVector, ring: Ring) -> Result<SchurElement> {
        self.offdiag_input(a)?;
        precondition(j.is_nonneg(), || format!("exponent {j} must be nonnegative"))?;
        Ok(self.diagonal_sum(a, ring, |mu| {
            mu.entries().iter().zip(j.entries()).fold(BigInt::one(), |acc, (&m, &e)| acc * BigInt::from(m).pow(e as u32))
        }))
    }

    /// `A<lambda, r> = sum_mu binom(mu, lambda) [A + diag(mu)]`; zero when an
    /// off-diagonal entry is negative.
    pub fn brace(&self, a: &PeriodicMatrix, lambda: &PeriodicVector, ring: Ring) -> Result<SchurElement> {
        precondition(a.is_zero_diag() && a.n() == self.n, || format!("{a} must have zero diagonal and rank {}", self.n))?;
        precondition(lambda.is_nonneg(), || format!("{lambda} must be nonnegative"))?;
        if !a.is_nonneg_offdiag() {
            return Ok(SchurElement::zero(self.n, self.r, ring));
        }
        Ok(self.diagonal_sum(a, ring, |mu| vec_binom(mu, lambda)))
    }

    /// `[[A + diag(lambda bar), r]] = sum_{mu bar = lambda bar} [A + diag(mu)]`.
    pub fn double_bracket(&self, a: &PeriodicMatrix, residues: &PeriodicVector, q: i64, ring: Ring) -> Result<SchurElement> {
        self.offdiag_input(a)?;
        precondition(q >= 1 && residues.entries().iter().all(|&x| (0..q).contains(&x)), || format!("{residues} is not a residue vector mod {q}"))?;
        Ok(self.diagonal_sum(a, ring, |mu| if mu.reduce_mod(q) == *residues { BigInt::one() } else { BigInt::zero() }))
    }

    fn offdiag_input(&self, a: &PeriodicMatrix) -> Result<()> {
        precondition(a.n() == self.n, || format!("{a} has rank {} instead of {}", a.n(), self.n))?;
        if !(a.is_zero_diag() && a.is_nonneg_offdiag()) {
            return Err(Error::Malformed(format!("{a} must have zero diagonal and nonnegative entries")));
        }
        Ok(())
    }

    fn diagonal_sum(&self, a: &PeriodicMatrix, ring: Ring, coeff: impl Fn(&PeriodicVector) -> BigInt) -> SchurElement {
        let mut x = LinComb::zero(ring);
        let rest = self.r - a.sigma();
        if rest >= 0 {
            for mu in compositions(self.n, rest) {
                let c = coeff(&mu);
                if !c.is_zero() {
                    x.add_int(a.add_diag(&mu), &c);
                }
            }
        }
        SchurElement { n: self.n, r: self.r, terms: x }
    }

    /// `e^(A+) [diag(lambda)] f^(A-)` for `A` with zero diagonal.
    pub fn e_diag_f(&self, a: &PeriodicMatrix, lambda: &PeriodicVector, ring: Ring) -> Result<SchurElement> {
        self.offdiag_input(a)?;
        precondition(lambda.is_nonneg() && lambda.sum() == self.r, || format!("{lambda} is not in Lambda({}, {})", self.n, self.r))?;
        let chain = factors(a);
        let split = chain.iter().position(|f| f.1 > f.2).unwrap_or(chain.len());
        let (upper, lower) = chain.split_at(split);
        // The lower chain lands on profile lambda from a unique start.
        let mut start = lambda.clone();
        for &(k, i, j) in lower {
            start.add_at(i, -k);
            start.add_at(j, k);
        }
        if !start.is_nonneg() {
            return Ok(SchurElement::zero(self.n, self.r, ring));
        }
        let f = self.rewriter.apply_chain(lower, &LinComb::basis(ring, PeriodicMatrix::diagonal(start)));
        let terms = self.rewriter.apply_chain(upper, &f);
        Ok(SchurElement { n: self.n, r: self.r, terms })
    }
}
