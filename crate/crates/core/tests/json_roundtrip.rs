use loopgl::context::ModPContext;
use loopgl::enumerate::theta_window;
use loopgl::garland::{lambda_poly, GarlandPolynomial};
use loopgl::hyper::{BasisTag, HyperElement};
use loopgl::json as js;
use loopgl::kstab::{psi_h, KBarElement, KElement};
use loopgl::lincomb::LinComb;
use loopgl::schur::SchurElement;
use loopgl::afweyl::AffinePermutation;
use loopgl::{PeriodicMatrix, PeriodicVector, Ring, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn reparse(v: &serde_json::Value) -> serde_json::Value {
    js::parse_document(&js::to_string(v)).unwrap()
}

fn ring() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Ring::Integer), Just(Ring::Rational), Just(Ring::Prime(5))]
}

fn coeff(ring: Ring, num: i64, den: i64) -> Scalar {
    match ring {
        Ring::Rational => Scalar::Rat(BigRational::new(num.into(), den.into())),
        _ => Scalar::Int(BigInt::from(num)).coerce(ring).unwrap(),
    }
}

fn matrix() -> impl Strategy<Value = PeriodicMatrix> {
    (prop::collection::vec((1i64..=2, -3i64..=4, 0i64..4), 0..4), prop::collection::vec(-5i64..=5, 2)).prop_map(|(entries, diag)| {
        let entries = entries.into_iter().filter(|(i, j, _)| i != j);
        PeriodicMatrix::from_entries(2, entries, PeriodicVector::new(diag))
    })
}

fn terms<K: Ord + std::fmt::Debug>(keys: impl Strategy<Value = K>) -> impl Strategy<Value = (Ring, Vec<(K, i64, i64)>)> {
    (ring(), prop::collection::vec((keys, -40i64..40, 1i64..7), 0..6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matrices_and_vectors(a in matrix(), v in prop::collection::vec(any::<i32>().prop_map(i64::from), 1..5)) {
        prop_assert_eq!(js::matrix_from_json(&reparse(&js::matrix_to_json(&a))).unwrap(), a);
        let v = PeriodicVector::new(v);
        prop_assert_eq!(js::vector_from_json(&reparse(&js::vector_to_json(&v))).unwrap(), v);
    }

    #[test]
    fn schur_elements((ring, ts) in terms(0usize..20)) {
        let basis = theta_window(2, 3, 2);
        let mut lc = LinComb::zero(ring);
        for (i, num, den) in ts {
            lc.add_term(basis[i % basis.len()].clone(), coeff(ring, num, den));
        }
        let x = SchurElement::from_terms(2, 3, lc).unwrap();
        prop_assert_eq!(js::schur_from_json(&reparse(&js::schur_to_json(&x))).unwrap(), x);
    }

    #[test]
    fn hyper_elements((ring, ts) in terms((matrix(), prop::collection::vec(0i64..=4, 2))), tag in 0usize..5) {
        let tag = [BasisTag::B, BasisTag::M, BasisTag::Bp, BasisTag::C, BasisTag::G][tag];
        let mut lc = LinComb::zero(ring);
        for ((a, l), num, den) in ts {
            lc.add_term((a.offdiag_part(), PeriodicVector::new(l)), coeff(ring, num, den));
        }
        let x = HyperElement::from_terms(2, tag, lc).unwrap();
        prop_assert_eq!(js::hyper_from_json(&reparse(&js::hyper_to_json(&x))).unwrap(), x);
    }

    #[test]
    fn k_elements((ring, ts) in terms(matrix())) {
        let mut lc = LinComb::zero(ring);
        for (a, num, den) in ts {
            lc.add_term(a, coeff(ring, num, den));
        }
        let x = KElement::from_terms(2, lc).unwrap();
        prop_assert_eq!(js::k_from_json(&reparse(&js::k_to_json(&x))).unwrap(), x);
    }

    #[test]
    fn bar_and_hat_elements(ts in prop::collection::vec((matrix(), 0i64..9, 0i64..9, 1i64..9), 0..6)) {
        let ctx = ModPContext::new(3, 2).unwrap();
        let mut lc = LinComb::zero(Ring::Prime(3));
        for (a, r1, r2, c) in ts {
            lc.add_int((a.offdiag_part(), PeriodicVector::new(vec![r1, r2])), &c.into());
        }
        let x = KBarElement::from_terms(2, ctx, lc).unwrap();
        prop_assert_eq!(js::kbar_from_json(&reparse(&js::kbar_to_json(&x))).unwrap(), x.clone());
        let hat = psi_h(&x);
        prop_assert_eq!(js::khat_from_json(&reparse(&js::khat_to_json(&hat))).unwrap(), hat);
    }

    #[test]
    fn permutations(shift in prop::collection::vec(-3i64..=3, 3), order in Just([0usize, 1, 2]).prop_shuffle()) {
        let mut w: Vec<i64> = order.iter().map(|&i| i as i64 + 1 + 3 * shift[i]).collect();
        let excess: i64 = w.iter().sum::<i64>() - 6;
        if excess % 3 == 0 {
            w[0] -= excess;
            if let Ok(p) = AffinePermutation::new(w) {
                prop_assert_eq!(js::permutation_from_json(&reparse(&js::permutation_to_json(&p))).unwrap(), p);
            }
        }
    }
}

#[test]
fn garland_polynomials() {
    for k in 0..7 {
        let f = lambda_poly(k);
        assert_eq!(js::garland_from_json(&reparse(&js::garland_to_json(&f))).unwrap(), f);
    }
    let g: GarlandPolynomial = lambda_poly(3).add(&lambda_poly(5).scale(&BigRational::new((-7).into(), 4.into())));
    assert_eq!(js::garland_from_json(&reparse(&js::garland_to_json(&g))).unwrap(), g);
}
