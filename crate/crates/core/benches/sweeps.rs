use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use loopgl::enumerate::{theta_pm_window, theta_window};
use loopgl::kstab::KAlgebra;
use loopgl::parallel::{map_collect, Parallelism};
use loopgl::schur::{generator, SchurAlgebra, Strategy};
use loopgl::PeriodicVector;

/// Every generator product on a windowed Theta(n, r), by formula and by convolution.
fn schur_sweep(mode: Parallelism, n: usize, r: i64) -> usize {
    let s = SchurAlgebra::new(n, r).unwrap();
    let w = 2 * n as i64;
    let mats = theta_window(n, r, w);
    map_collect(mode, &mats, |a| {
        let ro = a.ro();
        let mut agree = 0;
        for i in 1..=n as i64 {
            for j in (i - w..=i + w).filter(|&j| j != i) {
                for k in 1..=ro.get(j).min(3) {
                    let lhs = s.gen_mul(k, i, j, a).unwrap();
                    let rhs = s.mul_basis(&generator(k, i, j, &ro), a, Strategy::Oracle).unwrap();
                    agree += usize::from(lhs.terms == rhs);
                }
            }
        }
        agree
    })
    .into_iter()
    .sum()
}

/// Products of windowed K(2) basis elements with diagonals in [0, 2).
fn k_sweep(mode: Parallelism) -> usize {
    let k = KAlgebra::new(2).unwrap();
    let offs = theta_pm_window(2, 2, Some(2), Some(3), |_, _| true);
    let diags: Vec<PeriodicVector> = (0..2).flat_map(|x| (0..2).map(move |y| PeriodicVector::new(vec![x, y]))).collect();
    let elems: Vec<_> = offs.iter().flat_map(|o| diags.iter().map(move |d| o.add_diag(d))).collect();
    let pairs: Vec<_> = elems.iter().flat_map(|a| elems.iter().filter(|b| b.co() == a.ro()).map(move |b| (b.clone(), a.clone()))).collect();
    map_collect(mode, &pairs, |(b, a)| k.k_mul_basis(b, a).unwrap().terms.len()).into_iter().sum()
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("schur_formula_vs_convolution");
    g.sample_size(10);
    for mode in [Parallelism::Sequential, Parallelism::Rayon] {
        g.bench_with_input(BenchmarkId::new(format!("{mode:?}"), "S(2,3)"), &mode, |b, &m| b.iter(|| black_box(schur_sweep(m, 2, 3))));
        g.bench_with_input(BenchmarkId::new(format!("{mode:?}"), "S(3,2)"), &mode, |b, &m| b.iter(|| black_box(schur_sweep(m, 3, 2))));
    }
    g.finish();
    let mut g = c.benchmark_group("k_products");
    g.sample_size(10);
    for mode in [Parallelism::Sequential, Parallelism::Rayon] {
        g.bench_with_input(BenchmarkId::new(format!("{mode:?}"), "window 2"), &mode, |b, &m| b.iter(|| black_box(k_sweep(m))));
    }
    g.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
