//! Seeded verification suites. Each suite checks one family of identities
//! exactly and returns a report; nothing here panics on a failed identity.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binom::vec_binom;
use crate::context::ModPContext;
use crate::enumerate::{bounded_vectors, offdiag_slots, theta_pm_window, theta_window, vectors_up_to};
use crate::error::{Error, Result};
use crate::garland::{lambda_poly, operator_identity_check, partition_rhs, partitions, psi, ladder, GarlandPolynomial};
use crate::hyper::{BasisTag, HKey, HyperAlgebra, HyperElement};
use crate::kstab::{kbar_mul, khat_mul, nonnegative_part, phi_h, psi_h, tau, zeta_consistency, KAlgebra, KBarElement, KElement};
use crate::lincomb::LinComb;
use crate::matrix::{PeriodicMatrix, PeriodicVector};
use crate::modp::{binomial_identities, closure_check, conversion_check, independence_check, little_inf_basis, little_triangularity, rank_mod_p, scalar_residue, uh_keys, zero_part_closure, LittleKind};
use crate::parallel::{map_collect, Parallelism};
use crate::scalar::{Ring, Scalar};
use crate::schur::{generator, SchurAlgebra, SchurElement, Strategy};

/// Names accepted by [`suite_id`], in suite order.
pub const SUITES: [(u8, &str, &str); 11] = [
    (1, "schur-formula", "generator products in S(n,r) by the closed formula agree with double-coset convolution"),
    (2, "associativity", "the rewriting products on S(2,3) and on K(2) are associative"),
    (3, "triangularity", "the monomial, E-H-F, C, G and Hall bases are unitriangular against the brace basis"),
    (4, "classical", "commutators of generators in the hyperalgebra match the loop algebra"),
    (5, "garland", "Psi(Lambda_k) is integral and equals the sum over partitions of k"),
    (6, "binomial", "binomial periodicity and vanishing modulo p"),
    (7, "uh-bases", "u(n)_h is closed on its windowed basis and the four bases are unitriangular"),
    (8, "k-stabilization", "K agrees with S(n,r) on nonnegative indices and tau is multiplicative mod p"),
    (9, "realization", "phi_h and psi_h are injective homomorphisms and zeta factors through them"),
    (10, "injectivity", "the evaluation sequences of distinct brace elements are independent mod p"),
    (11, "little-schur", "little and infinitesimal Schur algebras have triangular bases"),
];

const KEPT_FAILURES: usize = 20;

pub fn suite_id(name: &str) -> Option<u8> {
    SUITES.iter().find(|s| s.1 == name || s.0.to_string() == name).map(|s| s.0)
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub parallelism: Parallelism,
    /// Restricts the sweeps over `S(n, r)` to one rank and degree.
    pub n: Option<usize>,
    pub r: Option<i64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 20240607, parallelism: Parallelism::default(), n: None, r: None }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub id: u8,
    pub name: &'static str,
    pub statement: &'static str,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(id: u8) -> Self {
        let (_, name, statement) = SUITES[id as usize - 1];
        SuiteReport { id, name, statement, checks: 0, failed: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checks > 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(msg);
        }
    }

    fn absorb(&mut self, checks: usize, failures: Vec<String>) {
        self.checks += checks;
        for f in failures {
            self.fail(f);
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} [{}] {}: {} ({} checks, {} failed)", self.id, self.name, self.statement, self.checks, self.failed)?;
        for n in &self.notes {
            write!(f, "\n    {n}")?;
        }
        for x in &self.failures {
            write!(f, "\n    failure: {x}")?;
        }
        Ok(())
    }
}

pub fn run(id: u8, opts: VerifyOptions) -> Result<SuiteReport> {
    match id {
        1 => schur_formula(opts),
        2 => associativity(opts),
        3 => triangularity(opts),
        4 => classical(opts),
        5 => garland(opts),
        6 => binomial(opts),
        7 => uh_bases(opts),
        8 => k_stabilization(opts),
        9 => realization(opts),
        10 => injectivity(opts),
        11 => little_schur(opts),
        _ => Err(Error::Malformed(format!("no suite numbered {id}"))),
    }
}

fn rng(opts: VerifyOptions, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ (u64::from(id) << 56))
}

fn m(n: usize, entries: &[(i64, i64, i64)], d: &[i64]) -> PeriodicMatrix {
    PeriodicMatrix::from_entries(n, entries.iter().copied(), PeriodicVector::new(d.to_vec()))
}

/// The default `(n, r)` grid, or the single pair fixed by the options.
fn grid(opts: VerifyOptions, default: &[(usize, i64)]) -> Vec<(usize, i64)> {
    match (opts.n, opts.r) {
        (Some(n), Some(r)) => vec![(n, r)],
        (n, r) => default.iter().copied().filter(|&(a, b)| n.is_none_or(|x| x == a) && r.is_none_or(|x| x == b)).collect(),
    }
}

type Tally = Result<(usize, Vec<String>)>;

fn gather(report: &mut SuiteReport, parts: Vec<Tally>) -> Result<()> {
    for p in parts {
        let (c, f) = p?;
        report.absorb(c, f);
    }
    Ok(())
}

fn schur_formula(opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(1);
    for (n, r) in grid(opts, &[(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)]) {
        let s = SchurAlgebra::new(n, r)?;
        let w = 2 * n as i64;
        let mats = theta_window(n, r, w);
        let parts = map_collect(opts.parallelism, &mats, |a| -> Tally {
            let ro = a.ro();
            let (mut checks, mut fails) = (0, Vec::new());
            for i in 1..=n as i64 {
                for j in i - w..=i + w {
                    if j == i {
                        continue;
                    }
                    for k in 1..=ro.get(j).min(3) {
                        let lhs = s.gen_mul(k, i, j, a)?;
                        let rhs = s.mul_basis(&generator(k, i, j, &ro), a, Strategy::Oracle)?;
                        checks += 1;
                        if lhs.terms != rhs {
                            fails.push(format!("S({n},{r}): [{k}E{i},{j} + ...]·[{a}]: formula {lhs} vs convolution"));
                        }
                    }
                }
            }
            Ok((checks, fails))
        });
        gather(&mut report, parts)?;
        report.note(format!("S({n},{r}) window {w}: {} matrices", mats.len()));
    }
    Ok(report)
}

fn random_coeff(rng: &mut ChaCha8Rng) -> i64 {
    let c = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

fn associativity(opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(2);
    let mut rng = rng(opts, 2);
    let s = SchurAlgebra::new(2, 3)?;
    let basis = theta_window(2, 3, 2);
    let mut by_co: BTreeMap<PeriodicVector, Vec<PeriodicMatrix>> = BTreeMap::new();
    for a in &basis {
        by_co.entry(a.co()).or_default().push(a.clone());
    }
    let ring = Ring::Integer;
    let elt = |lead: &PeriodicMatrix, rng: &mut ChaCha8Rng| -> Result<SchurElement> {
        let mut t = LinComb::zero(ring);
        t.add_int(lead.clone(), &BigInt::from(random_coeff(rng)));
        t.add_int(basis.choose(rng).expect("nonempty").clone(), &BigInt::from(random_coeff(rng)));
        SchurElement::from_terms(2, 3, t)
    };
    for _ in 0..200 {
        let z0 = basis.choose(&mut rng).expect("nonempty").clone();
        let y0 = by_co[&z0.ro()].choose(&mut rng).expect("diagonal always fits").clone();
        let x0 = by_co[&y0.ro()].choose(&mut rng).expect("diagonal always fits").clone();
        let (x, y, z) = (elt(&x0, &mut rng)?, elt(&y0, &mut rng)?, elt(&z0, &mut rng)?);
        let left = s.mul(&s.mul(&x, &y, Strategy::Formula)?, &z, Strategy::Formula)?;
        let right = s.mul(&x, &s.mul(&y, &z, Strategy::Formula)?, Strategy::Formula)?;
        report.check(left == right, || format!("S(2,3): (xy)z = {left} but x(yz) = {right} for x = {x}, y = {y}, z = {z}"));
        let oracle = s.mul(&s.mul(&x, &y, Strategy::Oracle)?, &z, Strategy::Oracle)?;
        report.check(left == oracle, || format!("S(2,3): rewriting gives {left}, convolution {oracle}"));
    }
    let k = KAlgebra::new(2)?;
    let in_range = |d: &PeriodicVector| d.entries().iter().all(|x| (-3..=3).contains(x));
    let gen_with_co = |rng: &mut ChaCha8Rng, co: Option<&PeriodicVector>| -> PeriodicMatrix {
        loop {
            let kk = rng.gen_range(1..=2);
            let i = rng.gen_range(1..=2i64);
            let mut j = rng.gen_range(i - 2..=i + 1);
            if j >= i {
                j += 1;
            }
            let off = PeriodicMatrix::from_entries(2, [(i, j, kk)], PeriodicVector::zero(2));
            let d = match co {
                Some(c) => c.sub(&off.co()),
                None => PeriodicVector::new(vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)]),
            };
            if in_range(&d) {
                return off.add_diag(&d);
            }
        }
    };
    for _ in 0..200 {
        let z = gen_with_co(&mut rng, None);
        let y = gen_with_co(&mut rng, Some(&z.ro()));
        let x = gen_with_co(&mut rng, Some(&y.ro()));
        let [x, y, z] = [x, y, z].map(|a| KElement::basis(Ring::Integer, a).expect("nonnegative off-diagonal"));
        let left = k.k_mul(&k.k_mul(&x, &y)?, &z)?;
        let right = k.k_mul(&x, &k.k_mul(&y, &z)?)?;
        report.check(left == right, || format!("K(2): (xy)z = {left} but x(yz) = {right} for {x}, {y}, {z}"));
    }
    Ok(report)
}

fn triangularity(opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(3);
    let u = HyperAlgebra::new(2)?;
    let mats = theta_pm_window(2, 2, None, Some(4), |_, _| true);
    let weights: Vec<PeriodicVector> = vectors_up_to(2, 2);
    let keys: Vec<HKey> = mats.iter().flat_map(|a| weights.iter().map(move |l| (a.clone(), l.clone()))).collect();
    report.note(format!("n = 2, window 2, sigma <= 4, |lambda| <= 2: {} indices", keys.len()));
    for tag in [BasisTag::M, BasisTag::Bp, BasisTag::C, BasisTag::G] {
        let parts = map_collect(opts.parallelism, &keys, |key| -> Tally {
            let mut fails = Vec::new();
            match u.expansion(tag, key) {
                Ok(_) => {}
                Err(Error::Verification(msg)) => fails.push(msg),
                Err(e) => return Err(e),
            }
            let x = HyperElement::from_terms(2, tag, LinComb::basis(Ring::Integer, key.clone()))?;
            let back = u.convert(&u.to_brace(&x)?, tag)?;
            if back != x {
                fails.push(format!("{tag} round trip of {}<{}> gave {back}", key.0.offdiag_string(), key.1));
            }
            Ok((2, fails))
        });
        gather(&mut report, parts)?;
    }
    let hall = u.hall();
    for a in theta_pm_window(2, 2, None, Some(4), |i, j| i < j) {
        let mono = hall.monomial(&a);
        let ok = mono.coeff(&a).is_one() && mono.keys().all(|c| c == &a || c.sigma() < a.sigma());
        report.check(ok, || format!("E^({a}) = {mono:?} is not u+ of {a} plus terms of smaller total"));
    }
    for r in [3i64, 4] {
        let s = SchurAlgebra::new(2, r)?;
        for a in theta_pm_window(2, 2, None, Some(r), |_, _| true) {
            let sb = a.sigma_bold();
            for lam in crate::enumerate::compositions(2, r) {
                if !sb.leq(&lam) {
                    continue;
                }
                let x = s.e_diag_f(&a, &lam, Ring::Integer)?;
                let top: Vec<(&PeriodicMatrix, &Scalar)> = x.terms.iter().filter(|(b, _)| b.offdiag_part() == a).collect();
                let ok = top.len() == 1 && top[0].1.is_one() && x.terms.keys().all(|b| b.offdiag_part() == a || b.offdiag_sigma() < a.sigma());
                report.check(ok, || format!("S(2,{r}): e^(A+)[diag {lam}]f^(A-) for A = {a} is {x}"));
            }
        }
    }
    Ok(report)
}

/// The loop algebra bracket of matrix units, `E_{a,a}` read as `H_a`.
fn loop_bracket(n: usize, (i, j): (i64, i64), (k, l): (i64, i64)) -> Vec<((i64, i64), i64)> {
    let nn = n as i64;
    let mut out = Vec::new();
    if (j - k).rem_euclid(nn) == 0 {
        let s = (j - k) / nn;
        out.push(((i, l + s * nn), 1));
    }
    if (l - i).rem_euclid(nn) == 0 {
        let s = (l - i) / nn;
        out.push(((k, j + s * nn), -1));
    }
    out
}

fn unit_element(n: usize, (a, b): (i64, i64), c: i64) -> Result<HyperElement> {
    let nn = n as i64;
    let key = if a == b {
        (PeriodicMatrix::zero(n), PeriodicVector::unit(n, (a - 1).rem_euclid(nn) + 1))
    } else {
        (PeriodicMatrix::unit(n, a, b), PeriodicVector::zero(n))
    };
    HyperElement::from_terms(n, BasisTag::B, LinComb::basis(Ring::Integer, key)).map(|x| x.scale(&Scalar::Int(BigInt::from(c))))
}

fn classical(_opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(4);
    let u2 = HyperAlgebra::new(2)?;
    let e = HyperElement::generator(Ring::Integer, 2, 1, 1, 2)?;
    let f = HyperElement::generator(Ring::Integer, 2, 1, 2, 1)?;
    let lhs = u2.mul(&e, &f)?.minus(&u2.mul(&f, &e)?)?;
    let rhs = u2.brace(&PeriodicMatrix::zero(2), &PeriodicVector::unit(2, 1)).minus(&u2.brace(&PeriodicMatrix::zero(2), &PeriodicVector::unit(2, 2)))?;
    report.check(lhs == rhs, || format!("EF - FE = {lhs}, want {rhs}"));
    for n in [2usize, 3] {
        let u = HyperAlgebra::new(n)?;
        let units: Vec<(i64, i64)> = offdiag_slots(n, 2);
        for &x in &units {
            for &y in &units {
                let ex = HyperElement::generator(Ring::Integer, n, 1, x.0, x.1)?;
                let ey = HyperElement::generator(Ring::Integer, n, 1, y.0, y.1)?;
                let got = u.mul(&ex, &ey)?.minus(&u.mul(&ey, &ex)?)?;
                let mut want = HyperElement::zero(n, Ring::Integer);
                for (ab, c) in loop_bracket(n, x, y) {
                    want = want.plus(&unit_element(n, ab, c)?)?;
                }
                report.check(got == want, || format!("n = {n}: [E{:?}, E{:?}] = {got}, want {want}", x, y));
            }
        }
    }
    Ok(report)
}

fn garland(_opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(5);
    for k in 0..=6usize {
        let lam = lambda_poly(k);
        report.check(lam.is_homogeneous(k as u32), || format!("Lambda_{k} = {lam} is not homogeneous"));
        for y in [GarlandPolynomial::one(), GarlandPolynomial::x(1), GarlandPolynomial::x(2).mul(&GarlandPolynomial::x(1))] {
            report.check(operator_identity_check(k, &y), || format!("operator identity fails for k = {k}, y = {y}"));
        }
    }
    for n in [2usize, 3] {
        let hall = crate::hall::HallAlgebra::new(n);
        for i in 1..=n as i64 {
            for l in [1i64, -1, 2] {
                for k in 1..=5u32 {
                    let image = psi(&hall, i, l, &lambda_poly(k as usize))?;
                    match image.to_integral() {
                        Ok(z) => {
                            let want = partition_rhs(n, k, i, l)?;
                            report.check(z == want, || format!("n = {n}: Psi_{{{i},{l}}}(Lambda_{k}) = {z}, want {want}"));
                            let count = partitions(k).len();
                            report.check(z.terms.len() == count, || format!("n = {n}: {} terms for k = {k}, want {count}", z.terms.len()));
                        }
                        Err(_) => report.fail(format!("n = {n}: Psi_{{{i},{l}}}(Lambda_{k}) = {image} is not integral")),
                    }
                }
                for m in 1..=2u32 {
                    for lam in partitions(3) {
                        let b = crate::garland::theta(&lam);
                        let (left, right) = ladder(&hall, i, l, m, &b)?;
                        report.check(left == right, || format!("n = {n}: ladder at i = {i}, l = {l}, m = {m}, b = {b:?}: {left} vs {right}"));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn binomial(_opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(6);
    for p in [2u64, 3] {
        for h in [1u32, 2] {
            let r = binomial_identities(ModPContext::new(p, h)?);
            report.absorb(r.checked, r.failures);
        }
    }
    Ok(report)
}

fn uh_bases(_opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(7);
    let ctx = ModPContext::new(2, 1)?;
    let w = 2;
    let u = HyperAlgebra::new(2)?;
    let keys = uh_keys(2, ctx, w);
    let slots = offdiag_slots(2, w).len() as u32;
    let expected = ctx.q.pow(slots) * ctx.q.pow(2);
    report.check(keys.len() as i64 == expected, || format!("{} windowed indices, want q^{slots} q^2 = {expected}", keys.len()));
    report.check(keys.len() == 1024, || format!("{} windowed indices, want 1024", keys.len()));
    let c = closure_check(&u, ctx, w)?;
    report.absorb(c.products, c.failures);
    let z = zero_part_closure(&u, ctx)?;
    report.absorb(z.products, z.failures);
    for tag in [BasisTag::M, BasisTag::C, BasisTag::G] {
        let c = conversion_check(&u, tag, ctx, w)?;
        report.absorb(c.products, c.failures);
    }
    report.note(format!("p = 2, h = 1, n = 2, window {w}: {} basis elements", keys.len()));
    Ok(report)
}

fn k_stabilization(opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(8);
    let k2 = KAlgebra::new(2)?;
    for (n, r) in grid(opts, &[(2, 2), (2, 3), (3, 2)]) {
        let k = KAlgebra::new(n)?;
        let s = SchurAlgebra::new(n, r)?;
        let w = 2 * n as i64;
        let mats = theta_window(n, r, w);
        let parts = map_collect(opts.parallelism, &mats, |a| -> Tally {
            let ro = a.ro();
            let (mut checks, mut fails) = (0, Vec::new());
            for i in 1..=n as i64 {
                for j in i - w..=i + w {
                    if j == i {
                        continue;
                    }
                    for kk in 1..=ro.get(j).min(2) {
                        let got = nonnegative_part(&k.k_gen_mul(kk, i, j, a)?);
                        let want: BTreeMap<PeriodicMatrix, Scalar> = s.mul_basis(&generator(kk, i, j, &ro), a, Strategy::Oracle)?.into_terms();
                        checks += 1;
                        if got != want {
                            fails.push(format!("K({n}) vs S({n},{r}) at {kk}E{i},{j} · [{a}]"));
                        }
                    }
                }
            }
            Ok((checks, fails))
        });
        gather(&mut report, parts)?;
    }
    let b = m(2, &[(1, 2, 1)], &[-1, 0]);
    let a = m(2, &[(2, 1, 1)], &[-1, 0]);
    let prod = k2.k_mul_basis(&b, &a)?;
    let want = LinComb::basis(Ring::Integer, m(2, &[(1, 2, 1), (2, 1, 1)], &[-1, -1]));
    report.check(prod.terms == want, || format!("[E12 + diag(-1,0)]·[E21 + diag(-1,0)] = {prod}"));

    let q = 2;
    let f2 = Ring::Prime(2);
    let offs = theta_pm_window(2, 2, Some(q), None, |_, _| true);
    let window_pairs = |diags: &[PeriodicVector], max_sigma: i64| -> Vec<(PeriodicMatrix, PeriodicMatrix)> {
        let elems: Vec<PeriodicMatrix> = offs.iter().flat_map(|o| diags.iter().map(move |d| o.add_diag(d))).collect();
        let mut pairs = Vec::new();
        for a in &elems {
            for b in &elems {
                if b.co() == a.ro() && a.offdiag_sigma() + b.offdiag_sigma() <= max_sigma {
                    pairs.push((b.clone(), a.clone()));
                }
            }
        }
        pairs
    };
    let box_diags = |lo: i64, hi: i64| -> Vec<PeriodicVector> { (lo..=hi).flat_map(|x| (lo..=hi).map(move |y| PeriodicVector::new(vec![x, y]))).collect() };
    let lifts = window_pairs(&box_diags(0, q - 1), i64::MAX);
    let parts = map_collect(opts.parallelism, &lifts, |(b, a)| -> Tally {
        let prod = k2.k_mul_basis(b, a)?.change_ring(f2)?;
        Ok((1, if prod.in_kh(q) { Vec::new() } else { vec![format!("[{b}]·[{a}] = {prod} leaves K(2)_1")] }))
    });
    gather(&mut report, parts)?;
    report.note(format!("K(2)_1 closure on all {} window-2 pairs with diagonals in [0,2)", lifts.len()));

    let mut tau_pairs = window_pairs(&box_diags(-1, 1), 4);
    let small = tau_pairs.len();
    let all = window_pairs(&box_diags(-1, 1), 8);
    let mut rng = rng(opts, 8);
    tau_pairs.extend(all.choose_multiple(&mut rng, 200).cloned());
    let shifts = [[1, 0], [0, 1], [1, 1], [-1, 0]].map(|x| PeriodicVector::new(x.to_vec()));
    let parts = map_collect(opts.parallelism, &tau_pairs, |(b, a)| -> Tally {
        let (mut checks, mut fails) = (0, Vec::new());
        let prod = k2.k_mul_basis(b, a)?.change_ring(f2)?;
        for lam in &shifts {
            checks += 1;
            let lhs = tau(lam, &prod, q)?;
            let tb = tau(lam, &KElement::basis(f2, b.clone())?, q)?;
            let ta = tau(lam, &KElement::basis(f2, a.clone())?, q)?;
            let rhs = k2.k_mul(&tb, &ta)?;
            if lhs != rhs {
                fails.push(format!("tau_{lam}([{b}]·[{a}]) = {lhs}, product of shifts = {rhs}"));
            }
        }
        Ok((checks, fails))
    });
    gather(&mut report, parts)?;
    report.note(format!("tau on {small} window-2 pairs of total off-diagonal sum <= 4 and 200 sampled pairs, diagonals in [-1,1]"));
    Ok(report)
}

fn random_uh(rng: &mut ChaCha8Rng, keys: &[HKey], tag: BasisTag, p: u64) -> Result<HyperElement> {
    let mut t = LinComb::zero(Ring::Prime(p));
    for _ in 0..rng.gen_range(1..=2) {
        t.add_int(keys.choose(rng).expect("nonempty").clone(), &BigInt::from(rng.gen_range(1..p)));
    }
    HyperElement::from_terms(2, tag, t)
}

fn realization(opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(9);
    let mut rng = rng(opts, 9);
    let ctx = ModPContext::new(2, 1)?;
    let u = HyperAlgebra::new(2)?;
    let k = KAlgebra::new(2)?;
    let keys = uh_keys(2, ctx, 2);
    let f2 = Ring::Prime(ctx.p);
    for (a, l) in &keys {
        let img = phi_h(&u, &HyperElement::from_terms(2, BasisTag::B, LinComb::basis(f2, (a.clone(), l.clone())))?, ctx)?;
        let ok = img.terms.coeff(&(a.clone(), l.clone())).is_one() && img.terms.keys().all(|(b, mu)| b == a && l.leq(mu));
        report.check(ok, || format!("phi_h({}<{l}>) = {img}", a.offdiag_string()));
        let direct: BTreeMap<PeriodicVector, u64> = bounded_vectors(2, ctx.q)
            .into_iter()
            .map(|mu| {
                let c = scalar_residue(&Scalar::Int(vec_binom(&mu, l)), ctx.p);
                (mu, c)
            })
            .filter(|(_, c)| *c != 0)
            .collect();
        let got: BTreeMap<PeriodicVector, u64> = img.terms.iter().map(|((_, mu), c)| (mu.clone(), scalar_residue(c, ctx.p))).collect();
        report.check(direct == got, || format!("phi_h({}<{l}>) coefficients {got:?}, binomials give {direct:?}", a.offdiag_string()));
    }
    let mut columns: BTreeMap<(PeriodicMatrix, PeriodicVector), usize> = BTreeMap::new();
    let mut rows = Vec::new();
    for key in &keys {
        let x = HyperElement::from_terms(2, BasisTag::M, LinComb::basis(f2, key.clone()))?;
        let img = phi_h(&u, &x, ctx)?;
        let mut row = Vec::new();
        for (bk, c) in img.terms.iter() {
            let next = columns.len();
            let col = *columns.entry(bk.clone()).or_insert(next);
            row.push((col, scalar_residue(c, ctx.p)));
        }
        rows.push(row);
    }
    let dense: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|row| {
            let mut v = vec![0u64; columns.len()];
            for (c, x) in row {
                v[c] = x;
            }
            v
        })
        .collect();
    let rank = rank_mod_p(dense, ctx.p);
    report.check(rank == keys.len(), || format!("phi_h on the windowed M_h basis has rank {rank}, want {}", keys.len()));

    let small = uh_keys(2, ctx, 2);
    for _ in 0..50 {
        let x = random_uh(&mut rng, &small, BasisTag::B, ctx.p)?;
        let y = random_uh(&mut rng, &small, BasisTag::B, ctx.p)?;
        let xy = u.mul(&x, &y)?;
        let lhs = phi_h(&u, &xy, ctx)?;
        let rhs = kbar_mul(&k, &phi_h(&u, &x, ctx)?, &phi_h(&u, &y, ctx)?)?;
        report.check(lhs == rhs, || format!("phi_h(xy) = {lhs}, phi_h(x)phi_h(y) = {rhs} for x = {x}, y = {y}"));
    }
    let bar_keys: Vec<(PeriodicMatrix, PeriodicVector)> = theta_pm_window(2, 1, Some(ctx.q), None, |_, _| true)
        .into_iter()
        .flat_map(|a| bounded_vectors(2, ctx.q).into_iter().map(move |r| (a.clone(), r)))
        .collect();
    let random_bar = |rng: &mut ChaCha8Rng| -> Result<KBarElement> {
        let mut t = LinComb::zero(f2);
        for _ in 0..rng.gen_range(1..=2) {
            t.add_int(bar_keys.choose(rng).expect("nonempty").clone(), &BigInt::one());
        }
        KBarElement::from_terms(2, ctx, t)
    };
    for _ in 0..50 {
        let x = random_bar(&mut rng)?;
        let y = random_bar(&mut rng)?;
        let lhs = psi_h(&kbar_mul(&k, &x, &y)?);
        let rhs = khat_mul(&k, &psi_h(&x), &psi_h(&y))?;
        report.check(lhs == rhs, || format!("psi_h(xy) = {lhs}, psi_h(x)psi_h(y) = {rhs} for x = {x}, y = {y}"));
    }
    for t in 0..50 {
        let tag = if t % 2 == 0 { BasisTag::B } else { BasisTag::M };
        let x = random_uh(&mut rng, &keys, tag, ctx.p)?;
        report.check(zeta_consistency(&u, &x, ctx)?, || format!("zeta({x}) differs from psi_h(phi_h({x}))"));
    }
    Ok(report)
}

fn injectivity(opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(10);
    let mut rng = rng(opts, 10);
    let mats = theta_pm_window(2, 1, None, Some(2), |_, _| true);
    let weights: Vec<PeriodicVector> = bounded_vectors(2, 3);
    for p in [2u64, 3] {
        let mut families = Vec::new();
        for _ in 0..50 {
            let size = rng.gen_range(1..=6);
            let mut fam: Vec<HKey> = Vec::new();
            while fam.len() < size {
                let key = (mats.choose(&mut rng).expect("nonempty").clone(), weights.choose(&mut rng).expect("nonempty").clone());
                if !fam.contains(&key) {
                    fam.push(key);
                }
            }
            families.push(fam);
        }
        let parts = map_collect(opts.parallelism, &families, |fam| -> Tally {
            let r = independence_check(2, fam, p)?;
            let fails = if r.independent {
                Vec::new()
            } else {
                let names: Vec<String> = fam.iter().map(|(a, l)| format!("{}<{l}>", a.offdiag_string())).collect();
                vec![format!("p = {p}: rank {} < {} for {}", r.rank, r.size, names.join(", "))]
            };
            Ok((1, fails))
        });
        gather(&mut report, parts)?;
    }
    Ok(report)
}

fn little_schur(_opts: VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(11);
    let ctx = ModPContext::new(2, 1)?;
    let w = 2;
    let p11 = little_inf_basis(2, LittleKind::P, 1, ctx, w)?;
    report.check(p11.len() == 10, || format!("P_(1,1) has {} elements, want 10", p11.len()));
    for r in 1..=3 {
        let p = little_inf_basis(2, LittleKind::P, r, ctx, w)?;
        let mm = little_inf_basis(2, LittleKind::M, r, ctx, w)?;
        let b = little_inf_basis(2, LittleKind::B, r, ctx, w)?;
        report.check(p.len() == mm.len() && p.len() == b.len(), || format!("r = {r}: |P| = {}, |M| = {}, |B| = {}", p.len(), mm.len(), b.len()));
        let t = little_triangularity(&mm, ctx.q)?;
        report.absorb(t.products, t.failures);
        for e in &b {
            let ok = crate::modp::class_expansion(&e.value, ctx.q).is_ok();
            report.check(ok, || format!("r = {r}: B element at {} is not constant on classes", e.index.0.add_diag(&e.index.1)));
        }
        let pp = little_inf_basis(2, LittleKind::PPrime, r, ctx, w)?;
        let mp = little_inf_basis(2, LittleKind::MPrime, r, ctx, w)?;
        report.check(pp.len() == mp.len(), || format!("r = {r}: |P'| = {}, |M'| = {}", pp.len(), mp.len()));
        let t = little_triangularity(&mp, ctx.q)?;
        report.absorb(t.products, t.failures);
        report.note(format!("r = {r}: |P| = {}, |P'| = {}", p.len(), pp.len()));
    }
    Ok(report)
}
