//! Characteristic p: the subalgebras `u(n)_h` of the hyperalgebra, their
//! bases, the evaluation maps to affine Schur algebras over F_p, and the
//! affine little and infinitesimal Schur algebras.
//!
//! Every enumeration is truncated to a column window `W`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::binom::{gbinom, lucas_check};
use crate::context::ModPContext;
use crate::enumerate::{bounded_vectors, compositions, theta_pm_window};
use crate::error::{precondition, Error, Result};
use crate::hyper::{check_key, is_lower, BasisTag, HKey, HyperAlgebra, HyperElement};
use crate::lincomb::LinComb;
use crate::matrix::{PeriodicMatrix, PeriodicVector};
use crate::scalar::{Ring, Scalar};
use crate::schur::{SchurAlgebra, SchurElement};

fn residue(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Outcome of the two binomial identities behind the closure of `u(n)_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// `binom(t + p^h, s) = binom(t, s)` for `0 <= s < p^h` and `t` in
/// `[-2p^h, 2p^h]`; `binom(a + b, a) = 0` when `a, b < p^h <= a + b`. Both
/// sides are reduced from exact integers and compared with the digit-wise
/// residue as well.
pub fn binomial_identities(ctx: ModPContext) -> BinomialReport {
    let (p, q) = (ctx.p, ctx.q);
    let mut report = BinomialReport { checked: 0, failures: Vec::new() };
    for t in -2 * q..=2 * q {
        for s in 0..q {
            report.checked += 1;
            let lhs = residue(&gbinom(t + q, s), p);
            let rhs = residue(&gbinom(t, s), p);
            let digits = lucas_check(t, s, p, ctx.h).expect("s lies in [0, q)");
            if lhs != rhs || rhs != digits {
                report.failures.push(format!("binom({}, {s}) = {lhs}, binom({t}, {s}) = {rhs}, digits give {digits} mod {p}", t + q));
            }
        }
    }
    for a in 0..q {
        for b in 0..q {
            if a + b < q {
                continue;
            }
            report.checked += 1;
            let v = residue(&gbinom(a + b, a), p);
            if v != 0 {
                report.failures.push(format!("binom({}, {a}) = {v} mod {p}", a + b));
            }
        }
    }
    report
}

/// Coefficients reduced mod p.
pub fn reduce(x: &HyperElement, p: u64) -> Result<HyperElement> {
    x.change_ring(Ring::Prime(p))
}

/// Every off-diagonal entry and every weight entry is below `p^h`.
pub fn in_uh(key: &HKey, q: i64) -> bool {
    key.0.entry_bound(q) && key.1.entries().iter().all(|&x| (0..q).contains(&x))
}

/// Membership in `u(n)_h`, after rewriting on the brace basis.
pub fn membership_h(u: &HyperAlgebra, x: &HyperElement, ctx: ModPContext) -> Result<bool> {
    let b = u.to_brace(x)?;
    let ok = b.terms.keys().all(|k| in_uh(k, ctx.q));
    Ok(ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HKind {
    M,
    C,
    G,
    B,
    /// `(H|lambda)` alone.
    M0,
}

impl HKind {
    pub const ALL: [HKind; 5] = [HKind::M, HKind::C, HKind::G, HKind::B, HKind::M0];

    pub fn as_str(self) -> &'static str {
        match self {
            HKind::M => "M_h",
            HKind::C => "C_h",
            HKind::G => "G_h",
            HKind::B => "B_h",
            HKind::M0 => "M0_h",
        }
    }

    pub fn tag(self) -> BasisTag {
        match self {
            HKind::M => BasisTag::M,
            HKind::C => BasisTag::C,
            HKind::G => BasisTag::G,
            HKind::B | HKind::M0 => BasisTag::B,
        }
    }
}

impl fmt::Display for HKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        HKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| Error::Malformed(format!("unknown basis kind {s:?}")))
    }
}

/// Index set of `B_h` within the window.
pub fn uh_keys(n: usize, ctx: ModPContext, window: i64) -> Vec<HKey> {
    let mats = theta_pm_window(n, window, Some(ctx.q), None, |_, _| true);
    let weights = bounded_vectors(n, ctx.q);
    let mut keys = Vec::with_capacity(mats.len() * weights.len());
    for a in &mats {
        for l in &weights {
            keys.push((a.clone(), l.clone()));
        }
    }
    keys
}

/// The windowed basis of the given kind, one element per index, over F_p.
pub fn enumerate_basis(n: usize, kind: HKind, ctx: ModPContext, window: i64) -> Result<Vec<HyperElement>> {
    precondition(window >= 0, || format!("window must be nonnegative, got {window}"))?;
    let ring = Ring::Prime(ctx.p);
    let keys: Vec<HKey> = match kind {
        HKind::M0 => bounded_vectors(n, ctx.q).into_iter().map(|l| (PeriodicMatrix::zero(n), l)).collect(),
        _ => uh_keys(n, ctx, window),
    };
    keys.into_iter().map(|k| HyperElement::from_terms(n, kind.tag(), LinComb::basis(ring, k))).collect()
}

/// `xi_{r,k}`.
pub fn xi_rk(u: &HyperAlgebra, x: &HyperElement, r: i64) -> Result<SchurElement> {
    u.evaluate_xi(x, r)
}

/// Rank over F_p by Gaussian elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let inv = |a: u64| -> u64 {
        let mut r = 1u64;
        let (mut b, mut e) = (a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    };
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] % p != 0) else { continue };
        rows.swap(rank, piv);
        let f = inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = (*x as u128 * f as u128 % p as u128) as u64;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[c] == 0 {
                continue;
            }
            let m = row[c];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = (*x + p - (m as u128 * *y as u128 % p as u128) as u64) % p;
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub size: usize,
    pub rank: usize,
    pub max_degree: i64,
    pub independent: bool,
}

/// Linear independence over F_p of the sequences `(A<lambda, r>)_r`. The
/// coefficient matrix stacks every degree `r` from 0 up to the largest
/// `sigma(A) + |lambda|` in the family.
pub fn independence_check(n: usize, family: &[HKey], p: u64) -> Result<IndependenceReport> {
    for k in family {
        check_key(n, k)?;
    }
    let distinct: BTreeSet<&HKey> = family.iter().collect();
    precondition(distinct.len() == family.len(), || "family members must be distinct".to_string())?;
    let ring = Ring::Prime(p);
    let max_degree = family.iter().map(|(a, l)| a.sigma() + l.sum()).max().unwrap_or(0);
    let mut columns: BTreeMap<(i64, PeriodicMatrix), usize> = BTreeMap::new();
    let mut values: Vec<Vec<((i64, PeriodicMatrix), u64)>> = vec![Vec::new(); family.len()];
    for r in 0..=max_degree {
        let s = SchurAlgebra::new(n, r)?;
        for (row, (a, l)) in family.iter().enumerate() {
            for (m, c) in s.brace(a, l, ring)?.terms.iter() {
                let Scalar::Mod { value, .. } = c else { unreachable!("F_p coefficients") };
                let key = (r, m.clone());
                let next = columns.len();
                columns.entry(key.clone()).or_insert(next);
                values[row].push((key, *value));
            }
        }
    }
    let rows: Vec<Vec<u64>> = values
        .into_iter()
        .map(|entries| {
            let mut row = vec![0u64; columns.len()];
            for (k, v) in entries {
                row[columns[&k]] = v;
            }
            row
        })
        .collect();
    let rank = rank_mod_p(rows, p);
    Ok(IndependenceReport { size: family.len(), rank, max_degree, independent: rank == family.len() })
}

/// Closure of `u(n)_h` under generators and H-binomials on the windowed basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureReport {
    pub products: usize,
    pub failures: Vec<String>,
}

/// Every `(kE_{i,j})<0> · A<lambda>` with `0 < k < p^h`, `0 < |j - i| <= W`
/// and every `(H|mu) · A<lambda>` with `mu` in `N^n_h`, reduced mod p, stays
/// on the basis of `u(n)_h`.
pub fn closure_check(u: &HyperAlgebra, ctx: ModPContext, window: i64) -> Result<ClosureReport> {
    let n = u.n;
    let mut report = ClosureReport::default();
    let keys = uh_keys(n, ctx, window);
    let weights = bounded_vectors(n, ctx.q);
    let check = |x: HyperElement, what: String, report: &mut ClosureReport| -> Result<()> {
        report.products += 1;
        let x = reduce(&x, ctx.p)?;
        if let Some(k) = x.terms.keys().find(|k| !in_uh(k, ctx.q)) {
            report.failures.push(format!("{what} contains {}<{}>", k.0.offdiag_string(), k.1));
        }
        Ok(())
    };
    for (a, l) in &keys {
        for k in 1..ctx.q {
            for i in 1..=n as i64 {
                for j in i - window..=i + window {
                    if j == i {
                        continue;
                    }
                    let x = u.gen_mul(k, i, j, a, l)?;
                    check(x, format!("({k}E{i},{j})<0>·{}<{l}>", a.offdiag_string()), &mut report)?;
                }
            }
        }
        let y = u.brace(a, l);
        for mu in &weights {
            check(u.hmul(mu, &y)?, format!("(H|{mu})·{}<{l}>", a.offdiag_string()), &mut report)?;
        }
    }
    Ok(report)
}

/// `(H_i|t')(H_i|t)` with `t, t' < p^h` lands in the span of `(H|lambda)`,
/// `lambda` in `N^n_h`.
pub fn zero_part_closure(u: &HyperAlgebra, ctx: ModPContext) -> Result<ClosureReport> {
    let n = u.n;
    let mut report = ClosureReport::default();
    for i in 1..=n as i64 {
        for t in 0..ctx.q {
            for t2 in 0..ctx.q {
                let x = HyperElement::h_binomial(Ring::Integer, PeriodicVector::unit(n, i).scale(t));
                let prod = reduce(&u.hmul(&PeriodicVector::unit(n, i).scale(t2), &x)?, ctx.p)?;
                report.products += 1;
                let bad = prod.terms.keys().find(|k| !k.0.offdiag().is_empty() || !in_uh(k, ctx.q)).cloned();
                if let Some(k) = bad {
                    report.failures.push(format!("(H_{i}|{t2})(H_{i}|{t}) contains {}<{}>", k.0.offdiag_string(), k.1));
                }
            }
        }
    }
    Ok(report)
}

/// Checks that the `tag` basis of `u(n)_h` is unitriangular against `B_h`
/// over F_p, and that the back-substitution inverse round-trips over Z.
/// Lower terms may leave the window but must stay inside `u(n)_h`.
pub fn conversion_check(u: &HyperAlgebra, tag: BasisTag, ctx: ModPContext, window: i64) -> Result<ClosureReport> {
    let mut report = ClosureReport::default();
    let keys = uh_keys(u.n, ctx, window);
    for key in &keys {
        report.products += 1;
        let exp = u.expansion(tag, key)?;
        for (b, c) in exp.iter() {
            if residue(c, ctx.p) == 0 {
                continue;
            }
            if b == key {
                if residue(c, ctx.p) != 1 {
                    report.failures.push(format!("{tag} element {}<{}> has leading coefficient {c}", key.0.offdiag_string(), key.1));
                }
            } else if !is_lower(b, key) || !in_uh(b, ctx.q) {
                report.failures.push(format!("{tag} element {}<{}> contains {}<{}>", key.0.offdiag_string(), key.1, b.0.offdiag_string(), b.1));
            }
        }
        let x = HyperElement::from_terms(u.n, tag, LinComb::basis(Ring::Integer, key.clone()))?;
        let back = u.convert(&u.to_brace(&x)?, tag)?;
        if back != x {
            report.failures.push(format!("round trip of {tag} element {}<{}> gave {back}", key.0.offdiag_string(), key.1));
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LittleKind {
    P,
    M,
    B,
    PPrime,
    MPrime,
}

impl LittleKind {
    pub const ALL: [LittleKind; 5] = [LittleKind::P, LittleKind::M, LittleKind::B, LittleKind::PPrime, LittleKind::MPrime];

    pub fn as_str(self) -> &'static str {
        match self {
            LittleKind::P => "P_hr",
            LittleKind::M => "M_hr",
            LittleKind::B => "B_hr",
            LittleKind::PPrime => "P'_hr",
            LittleKind::MPrime => "M'_hr",
        }
    }

    pub fn is_infinitesimal(self) -> bool {
        matches!(self, LittleKind::PPrime | LittleKind::MPrime)
    }
}

impl fmt::Display for LittleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LittleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LittleKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| Error::Malformed(format!("unknown little basis kind {s:?}")))
    }
}

/// A basis element of a little or infinitesimal affine Schur algebra with
/// the index of its leading term: `(A, residues)` for the class kinds and
/// `(A, lambda)` for the infinitesimal ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LittleElement {
    pub kind: LittleKind,
    pub index: (PeriodicMatrix, PeriodicVector),
    pub value: SchurElement,
}

fn residue_set(n: usize, m: i64, q: i64) -> BTreeSet<PeriodicVector> {
    if m < 0 {
        return BTreeSet::new();
    }
    compositions(n, m).into_iter().map(|v| v.reduce_mod(q)).collect()
}

/// Windowed bases of `u(n, r)_h` (`P`, `M`, `B`) and `s(n, r)_h` (`P'`, `M'`).
pub fn little_inf_basis(n: usize, kind: LittleKind, r: i64, ctx: ModPContext, window: i64) -> Result<Vec<LittleElement>> {
    precondition(r >= 0 && window >= 0, || format!("need r >= 0 and W >= 0, got r = {r}, W = {window}"))?;
    let ring = Ring::Prime(ctx.p);
    let q = ctx.q;
    let s = SchurAlgebra::new(n, r)?;
    let mats: Vec<PeriodicMatrix> = theta_pm_window(n, window, Some(q), Some(r), |_, _| true);
    let mut out = Vec::new();
    for a in &mats {
        let rest = r - a.sigma();
        match kind {
            LittleKind::P => {
                for res in residue_set(n, rest, q) {
                    out.push(LittleElement { kind, value: s.double_bracket(a, &res, q, ring)?, index: (a.clone(), res) });
                }
            }
            LittleKind::B => {
                for res in residue_set(n, rest, q) {
                    out.push(LittleElement { kind, value: s.brace(a, &res, ring)?, index: (a.clone(), res) });
                }
            }
            LittleKind::M => {
                let sb = a.sigma_bold();
                let mut seen = BTreeSet::new();
                for lam in compositions(n, r) {
                    if !sb.leq(&lam) || !seen.insert(lam.reduce_mod(q)) {
                        continue;
                    }
                    let mut value = SchurElement::zero(n, r, ring);
                    for mu in compositions(n, r) {
                        if mu.reduce_mod(q) == lam.reduce_mod(q) {
                            value = value.plus(&s.e_diag_f(a, &mu, ring)?)?;
                        }
                    }
                    out.push(LittleElement { kind, value, index: (a.clone(), lam.sub(&sb).reduce_mod(q)) });
                }
            }
            LittleKind::PPrime => {
                if rest >= 0 {
                    for mu in compositions(n, rest) {
                        out.push(LittleElement { kind, value: SchurElement::basis(r, ring, a.add_diag(&mu))?, index: (a.clone(), mu) });
                    }
                }
            }
            LittleKind::MPrime => {
                let sb = a.sigma_bold();
                for lam in compositions(n, r) {
                    if sb.leq(&lam) {
                        out.push(LittleElement { kind, value: s.e_diag_f(a, &lam, ring)?, index: (a.clone(), lam.sub(&sb)) });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Writes `x` on the class symbols `[[B + diag(nu bar), r]]`; fails when the
/// coefficient is not constant on some class.
pub fn class_expansion(x: &SchurElement, q: i64) -> Result<BTreeMap<(PeriodicMatrix, PeriodicVector), Scalar>> {
    let mut classes: BTreeMap<(PeriodicMatrix, PeriodicVector), Scalar> = BTreeMap::new();
    for (m, c) in x.terms.iter() {
        let key = (m.offdiag_part(), m.diag().reduce_mod(q));
        classes.entry(key).or_insert_with(|| c.clone());
    }
    for ((b, res), c) in &classes {
        for mu in compositions(x.n, x.r - b.sigma()) {
            if mu.reduce_mod(q) != *res {
                continue;
            }
            let here = x.coeff(&b.add_diag(&mu));
            if here != *c {
                return Err(Error::Verification(format!("coefficient of {} is {here}, not {c} as elsewhere in its class", b.add_diag(&mu))));
            }
        }
    }
    Ok(classes)
}

/// Leading coefficient 1 and strictly smaller off-diagonal total elsewhere,
/// for every element of an `M`-type basis written on its `P`-type partner.
pub fn little_triangularity(elements: &[LittleElement], q: i64) -> Result<ClosureReport> {
    let mut report = ClosureReport::default();
    for e in elements {
        report.products += 1;
        let (a, idx) = &e.index;
        let terms: Vec<((PeriodicMatrix, PeriodicVector), Scalar)> = if e.kind.is_infinitesimal() {
            e.value.terms.iter().map(|(m, c)| ((m.offdiag_part(), m.diag().clone()), c.clone())).collect()
        } else {
            class_expansion(&e.value, q)?.into_iter().collect()
        };
        for ((b, d), c) in terms {
            if c.is_zero() {
                continue;
            }
            if &b == a && &d == idx {
                if !c.is_one() {
                    report.failures.push(format!("{} element at {} has leading coefficient {c}", e.kind, a.add_diag(idx)));
                }
            } else if b.sigma() >= a.sigma() {
                report.failures.push(format!("{} element at {} contains {}", e.kind, a.add_diag(idx), b.add_diag(&d)));
            }
        }
    }
    Ok(report)
}

/// Evaluation of `F_p` coefficients as residues, used by rank computations.
pub fn scalar_residue(c: &Scalar, p: u64) -> u64 {
    match c {
        Scalar::Mod { value, .. } => *value,
        other => residue(&other.as_integer().unwrap_or_else(BigInt::zero), p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, entries: &[(i64, i64, i64)]) -> PeriodicMatrix {
        PeriodicMatrix::from_entries(n, entries.iter().copied(), PeriodicVector::zero(n))
    }

    fn v(x: &[i64]) -> PeriodicVector {
        PeriodicVector::new(x.to_vec())
    }

    #[test]
    fn membership_examples() {
        let u = HyperAlgebra::new(2).unwrap();
        let ctx = ModPContext::new(2, 1).unwrap();
        let ring = Ring::Prime(2);
        let x = HyperElement::basis_element(ring, e(2, &[(1, 2, 2)]), v(&[0, 0])).unwrap();
        assert!(!membership_h(&u, &x, ctx).unwrap());
        let y = HyperElement::basis_element(ring, e(2, &[(1, 2, 1)]), v(&[1, 0])).unwrap();
        assert!(membership_h(&u, &y, ctx).unwrap());
        let z = HyperElement::basis_element(ring, e(2, &[]), v(&[2, 0])).unwrap();
        assert!(!membership_h(&u, &z, ctx).unwrap());
    }

    #[test]
    fn reduction_kills_even_leading_term() {
        let u = HyperAlgebra::new(2).unwrap();
        let ee = u.gen_mul(1, 1, 2, &e(2, &[(1, 2, 1)]), &v(&[0, 0])).unwrap();
        assert!(reduce(&ee, 2).unwrap().is_zero());
        let ef = u.gen_mul(1, 1, 2, &e(2, &[(2, 1, 1)]), &v(&[0, 0])).unwrap();
        assert_eq!(reduce(&ef, 3).unwrap().terms.len(), ef.terms.len());
    }

    #[test]
    fn basis_counts() {
        let ctx = ModPContext::new(2, 1).unwrap();
        assert_eq!(enumerate_basis(2, HKind::B, ctx, 0).unwrap().len(), 4);
        assert_eq!(enumerate_basis(2, HKind::M0, ctx, 2).unwrap().len(), 4);
        assert_eq!(uh_keys(2, ctx, 2).len(), 1 << 10);
        assert_eq!(uh_keys(2, ModPContext::new(3, 1).unwrap(), 1).len(), 3usize.pow(6));
    }

    #[test]
    fn binomial_identities_hold() {
        for (p, h) in [(2, 1), (3, 1), (2, 2)] {
            let r = binomial_identities(ModPContext::new(p, h).unwrap());
            assert!(r.failures.is_empty(), "{:?}", r.failures);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_mod_p(vec![vec![1, 0], vec![0, 1]], 2), 2);
        assert_eq!(rank_mod_p(vec![vec![1, 1], vec![1, 1]], 2), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 1]], 3), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 1]], 5), 2);
    }

    #[test]
    fn independence_examples() {
        let z = PeriodicMatrix::zero(2);
        let fam = vec![(z.clone(), v(&[1, 0])), (z.clone(), v(&[0, 1]))];
        let r = independence_check(2, &fam, 2).unwrap();
        assert!(r.independent);
        assert_eq!(r.max_degree, 1);
        assert!(independence_check(2, &fam[..1], 3).unwrap().independent);
        assert!(independence_check(2, &[fam[0].clone(), fam[0].clone()], 2).is_err());
    }

    #[test]
    fn little_examples() {
        let ctx = ModPContext::new(2, 1).unwrap();
        let p0 = little_inf_basis(2, LittleKind::P, 0, ctx, 2).unwrap();
        assert_eq!(p0.len(), 1);
        let p = little_inf_basis(2, LittleKind::P, 1, ctx, 2).unwrap();
        assert_eq!(p.len(), 10);
        let m = little_inf_basis(2, LittleKind::M, 1, ctx, 2).unwrap();
        assert_eq!(m.len(), 10);
        assert!(little_triangularity(&m, ctx.q).unwrap().failures.is_empty());
        let m2 = little_inf_basis(2, LittleKind::MPrime, 2, ctx, 1).unwrap();
        assert_eq!(m2.len(), little_inf_basis(2, LittleKind::PPrime, 2, ctx, 1).unwrap().len());
        assert!(little_triangularity(&m2, ctx.q).unwrap().failures.is_empty());
    }
}
