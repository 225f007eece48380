use loopgl::enumerate::compositions;
use loopgl::hyper::{BasisTag, HyperAlgebra, HyperElement};
use loopgl::lincomb::LinComb;
use loopgl::schur::{SchurAlgebra, Strategy as Product};
use loopgl::{PeriodicMatrix, PeriodicVector, Ring, Scalar};
use num_bigint::BigInt;
use proptest::prelude::*;

const SLOTS: [(i64, i64); 6] = [(1, 2), (1, 3), (1, 0), (2, 1), (2, 3), (2, 4)];

fn matrix(vals: &[i64]) -> PeriodicMatrix {
    PeriodicMatrix::from_entries(2, SLOTS.iter().zip(vals).filter(|(_, &a)| a > 0).map(|(&(i, j), &a)| (i, j, a)), PeriodicVector::zero(2))
}

fn key() -> impl Strategy<Value = (PeriodicMatrix, PeriodicVector)> {
    (prop::collection::vec(0i64..=1, 6), 0i64..=1, 0i64..=1)
        .prop_filter("small total", |(v, _, _)| v.iter().sum::<i64>() <= 2)
        .prop_map(|(v, a, b)| (matrix(&v), PeriodicVector::new(vec![a, b])))
}

fn element() -> impl Strategy<Value = HyperElement> {
    prop::collection::vec((key(), -2i64..=2), 1..=2).prop_map(|terms| {
        let mut t = LinComb::zero(Ring::Integer);
        for (k, c) in terms {
            t.add_int(k, &BigInt::from(c));
        }
        HyperElement::from_terms(2, BasisTag::B, t).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_is_associative(x in element(), y in element(), z in element()) {
        let u = HyperAlgebra::new(2).unwrap();
        let left = u.mul(&u.mul(&x, &y).unwrap(), &z).unwrap();
        let right = u.mul(&x, &u.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn evaluation_is_multiplicative(x in element(), y in element(), r in 2i64..=3) {
        // xi_r against double-coset convolution in S(2, r).
        let u = HyperAlgebra::new(2).unwrap();
        let s = SchurAlgebra::new(2, r).unwrap();
        let lhs = u.evaluate_xi(&u.mul(&x, &y).unwrap(), r).unwrap();
        let rhs = s.mul(&u.evaluate_xi(&x, r).unwrap(), &u.evaluate_xi(&y, r).unwrap(), Product::Oracle).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conversions_round_trip(x in element(), tag in prop::sample::select(BasisTag::ALL.to_vec())) {
        let u = HyperAlgebra::new(2).unwrap();
        let y = u.convert(&x, tag).unwrap();
        prop_assert_eq!(u.to_brace(&y).unwrap(), x);
    }
}

#[test]
fn hall_products_match_evaluation() {
    let u = HyperAlgebra::new(2).unwrap();
    let uppers = [(1, 2, 1), (1, 3, 1), (1, 4, 1), (2, 3, 1), (1, 2, 2), (2, 4, 1)];
    for &x in &uppers {
        for &y in &uppers {
            let a = PeriodicMatrix::from_entries(2, [x], PeriodicVector::zero(2));
            let b = PeriodicMatrix::from_entries(2, [y], PeriodicVector::zero(2));
            let prod = u.hall_mul(&a, &b).unwrap();
            let r = a.sigma() + b.sigma();
            let s = SchurAlgebra::new(2, r).unwrap();
            let ev = s.mul(&s.brace(&a, &PeriodicVector::zero(2), Ring::Integer).unwrap(), &s.brace(&b, &PeriodicVector::zero(2), Ring::Integer).unwrap(), Product::Oracle).unwrap();
            // Each off-diagonal part C carries one coefficient, constant over the diagonals.
            let mut seen: std::collections::BTreeMap<PeriodicMatrix, Scalar> = Default::default();
            for (m, c) in ev.terms.iter() {
                let prev = seen.entry(m.offdiag_part()).or_insert_with(|| c.clone());
                assert_eq!(prev, c, "{a} * {b}: coefficient of {m}");
            }
            for mu in compositions(2, r) {
                for (c, coeff) in &seen {
                    if c.sigma() + mu.sum() == r {
                        assert_eq!(&ev.coeff(&c.add_diag(&mu)), coeff);
                    }
                }
            }
            let got: std::collections::BTreeMap<PeriodicMatrix, Scalar> = prod.terms.iter().map(|((c, _), v)| (c.clone(), v.clone())).collect();
            assert_eq!(got, seen, "u+_{a} u+_{b}");
        }
    }
}

#[test]
fn divided_powers_for_distinct_residues() {
    let u = HyperAlgebra::new(3).unwrap();
    for (i, j) in [(1, 2), (2, 1), (1, 5), (3, -1)] {
        for k in 0..=4 {
            assert!(u.divided_power_check(i, j, k).unwrap(), "({i},{j}) k={k}");
        }
    }
    assert!(u.divided_power_check(1, 4, 2).is_err());
}

#[test]
fn h_binomials_multiply_like_binomials() {
    // (H_1|t) evaluates to sum_lambda binom(lambda_1, t)[diag lambda].
    let u = HyperAlgebra::new(2).unwrap();
    for s in 0..=3 {
        for t in 0..=3 {
            let x = HyperElement::h_binomial(Ring::Integer, PeriodicVector::new(vec![s, 0]));
            let y = HyperElement::h_binomial(Ring::Integer, PeriodicVector::new(vec![t, 0]));
            let xi = u.evaluate_xi(&u.mul(&x, &y).unwrap(), 6).unwrap();
            for lam in compositions(2, 6) {
                let l1 = lam.get(1);
                let want = loopgl::binom::gbinom(l1, s) * loopgl::binom::gbinom(l1, t);
                assert_eq!(xi.coeff(&PeriodicMatrix::diagonal(lam.clone())), Scalar::Int(want), "s={s} t={t} {lam}");
            }
        }
    }
}
