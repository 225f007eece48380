use loopgl::context::ModPContext;
use loopgl::enumerate::theta_window;
use loopgl::kstab::{kbar_mul, khat_mul, nonnegative_part, project, psi_h, tau, KAlgebra, KBarElement, KElement};
use loopgl::lincomb::LinComb;
use loopgl::schur::{generator, SchurAlgebra, Strategy as Product};
use loopgl::{PeriodicMatrix, PeriodicVector, Ring};
use proptest::prelude::*;

fn gen_matrix() -> impl Strategy<Value = (i64, i64, i64, Vec<i64>)> {
    (1i64..=2, 1i64..=2, -2i64..=2, prop::collection::vec(-3i64..=3, 2)).prop_filter("off-diagonal", |(_, _, dj, _)| *dj != 0)
}

fn with_co(k: i64, i: i64, j: i64, co: &PeriodicVector) -> PeriodicMatrix {
    let off = PeriodicMatrix::from_entries(2, [(i, j, k)], PeriodicVector::zero(2));
    off.add_diag(&co.sub(&off.co()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generator_triples_associate((k1, i1, d1, diag) in gen_matrix(), (k2, i2, d2, _) in gen_matrix(), (k3, i3, d3, _) in gen_matrix()) {
        let k = KAlgebra::new(2).unwrap();
        let z = PeriodicMatrix::from_entries(2, [(i3, i3 + d3, k3)], PeriodicVector::new(diag));
        let y = with_co(k2, i2, i2 + d2, &z.ro());
        let x = with_co(k1, i1, i1 + d1, &y.ro());
        let [x, y, z] = [x, y, z].map(|a| KElement::basis(Ring::Integer, a).unwrap());
        let left = k.k_mul(&k.k_mul(&x, &y).unwrap(), &z).unwrap();
        let right = k.k_mul(&x, &k.k_mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tau_is_multiplicative_mod_three((k1, i1, d1, diag) in gen_matrix(), (k2, i2, d2, _) in gen_matrix(), shift in prop::collection::vec(-1i64..=1, 2)) {
        let k = KAlgebra::new(2).unwrap();
        let f3 = Ring::Prime(3);
        let a = PeriodicMatrix::from_entries(2, [(i2, i2 + d2, k2)], PeriodicVector::new(diag));
        let b = with_co(k1, i1, i1 + d1, &a.ro());
        let lam = PeriodicVector::new(shift);
        let prod = k.k_mul_basis(&b, &a).unwrap().change_ring(f3).unwrap();
        let lhs = tau(&lam, &prod, 3).unwrap();
        let rhs = k.k_mul(&tau(&lam, &KElement::basis(f3, b).unwrap(), 3).unwrap(), &tau(&lam, &KElement::basis(f3, a).unwrap(), 3).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn general_products_restrict_to_schur_products() {
    // Whole basis elements, not just generators, on nonnegative indices.
    let k = KAlgebra::new(2).unwrap();
    let s = SchurAlgebra::new(2, 3).unwrap();
    let basis = theta_window(2, 3, 2);
    let mut checked = 0;
    for a in basis.iter().step_by(7) {
        for b in basis.iter().filter(|b| b.co() == a.ro()).step_by(3) {
            let got = nonnegative_part(&k.k_mul_basis(b, a).unwrap());
            let want = s.mul_basis(b, a, Product::Oracle).unwrap().into_terms();
            assert_eq!(got, want, "[{b}]·[{a}]");
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn generator_steps_match_the_schur_generators() {
    let k = KAlgebra::new(3).unwrap();
    let s = SchurAlgebra::new(3, 3).unwrap();
    for a in theta_window(3, 3, 2).iter().step_by(11) {
        let ro = a.ro();
        for (i, j) in [(1, 2), (3, 1), (2, 5), (1, -1)] {
            for kk in 1..=ro.get(j) {
                let got = nonnegative_part(&k.k_gen_mul(kk, i, j, a).unwrap());
                let want = s.mul_basis(&generator(kk, i, j, &ro), a, Product::Oracle).unwrap().into_terms();
                assert_eq!(got, want);
            }
        }
    }
}

#[test]
fn class_products_do_not_depend_on_the_lift() {
    let k = KAlgebra::new(2).unwrap();
    let ctx = ModPContext::new(3, 1).unwrap();
    let e = PeriodicMatrix::from_entries(2, [(1, 2, 1)], PeriodicVector::zero(2));
    let f = PeriodicMatrix::from_entries(2, [(2, 3, 2)], PeriodicVector::zero(2));
    for r1 in 0..3 {
        for r2 in 0..3 {
            let x = KBarElement::basis(ctx, e.clone(), PeriodicVector::new(vec![r1, r2])).unwrap();
            let y = KBarElement::basis(ctx, f.clone(), PeriodicVector::new(vec![r2, r1])).unwrap();
            let bar = kbar_mul(&k, &x, &y).unwrap();
            assert_eq!(psi_h(&bar), khat_mul(&k, &psi_h(&x), &psi_h(&y)).unwrap());
        }
    }
}

#[test]
fn projection_reduces_diagonals() {
    let ctx = ModPContext::new(2, 1).unwrap();
    let mut t = LinComb::zero(Ring::Integer);
    t.add_int(PeriodicMatrix::from_entries(2, [(1, 2, 1)], PeriodicVector::new(vec![-1, 4])), &3.into());
    let x = KElement::from_terms(2, t).unwrap();
    let bar = project(&x, ctx).unwrap();
    let key = (PeriodicMatrix::from_entries(2, [(1, 2, 1)], PeriodicVector::zero(2)), PeriodicVector::new(vec![1, 0]));
    assert!(bar.terms.coeff(&key).is_one());
}
