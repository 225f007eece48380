use loopgl::enumerate::theta_window;
use loopgl::formula::{generator_action, Constraint};
use loopgl::lincomb::LinComb;
use loopgl::schur::{generator, SchurAlgebra, SchurElement, Strategy};
use loopgl::{PeriodicMatrix, Ring};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn generator_products_match_convolution_in_small_degree() {
    for (n, r) in [(2, 2), (3, 2), (2, 3)] {
        let s = SchurAlgebra::new(n, r).unwrap();
        let w = 2 * n as i64;
        for a in theta_window(n, r, w) {
            let ro = a.ro();
            for i in 1..=n as i64 {
                for j in i - w..=i + w {
                    for k in 1..=ro.get(j).min(3) {
                        if j == i {
                            continue;
                        }
                        let g = generator(k, i, j, &ro);
                        let lhs = s.gen_mul(k, i, j, &a).unwrap();
                        let rhs = s.mul_basis(&g, &a, Strategy::Oracle).unwrap();
                        assert_eq!(lhs.terms, rhs, "k={k} ({i},{j}) A={a}");
                    }
                }
            }
        }
    }
}

#[test]
fn both_column_constraints_agree_on_surviving_terms() {
    for a in theta_window(2, 3, 3) {
        for (i, j) in [(1, 2), (1, 3), (2, 0), (1, -1), (2, 6)] {
            for k in 1..=a.ro().get(j) {
                let mut x = generator_action(&a, k, i, j, Constraint::EveryColumn);
                let mut y: Vec<_> = generator_action(&a, k, i, j, Constraint::SkipJ).into_iter().filter(|(m, _)| m.diag().is_nonneg()).collect();
                x.sort();
                y.sort();
                assert_eq!(x, y, "{a} k={k} ({i},{j})");
            }
        }
    }
}

#[test]
fn formula_and_oracle_products_agree_on_random_pairs() {
    let s = SchurAlgebra::new(2, 3).unwrap();
    let basis: Vec<PeriodicMatrix> = theta_window(2, 3, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut nonzero = 0;
    for _ in 0..100 {
        let b = basis.choose(&mut rng).unwrap();
        let candidates: Vec<&PeriodicMatrix> = basis.iter().filter(|a| a.ro() == b.co()).collect();
        let a = *candidates.choose(&mut rng).unwrap();
        let x = s.mul_basis(b, a, Strategy::Formula).unwrap();
        let y = s.mul_basis(b, a, Strategy::Oracle).unwrap();
        assert_eq!(x, y, "[{b}]·[{a}]");
        nonzero += usize::from(!x.is_empty());
    }
    assert!(nonzero > 50);
}

#[test]
fn associativity_instance() {
    let s = SchurAlgebra::new(2, 2).unwrap();
    let v = |d: &[i64]| loopgl::PeriodicVector::new(d.to_vec());
    let e = SchurElement::basis(2, Ring::Integer, PeriodicMatrix::from_entries(2, [(1, 2, 1)], v(&[0, 1]))).unwrap();
    let f = SchurElement::basis(2, Ring::Integer, PeriodicMatrix::from_entries(2, [(2, 1, 1)], v(&[0, 1]))).unwrap();
    let h = SchurElement::basis(2, Ring::Integer, PeriodicMatrix::diagonal(v(&[1, 1]))).unwrap();
    for st in [Strategy::Formula, Strategy::Oracle] {
        let l = s.mul(&s.mul(&e, &f, st).unwrap(), &h, st).unwrap();
        let r = s.mul(&e, &s.mul(&f, &h, st).unwrap(), st).unwrap();
        assert_eq!(l, r);
    }
}

#[test]
fn mismatched_profiles_multiply_to_zero() {
    let s = SchurAlgebra::new(2, 2).unwrap();
    let v = |d: &[i64]| loopgl::PeriodicVector::new(d.to_vec());
    let b = PeriodicMatrix::diagonal(v(&[2, 0]));
    let a = PeriodicMatrix::diagonal(v(&[1, 1]));
    for st in [Strategy::Formula, Strategy::Oracle] {
        assert_eq!(s.mul_basis(&b, &a, st).unwrap(), LinComb::zero(Ring::Integer));
    }
}
