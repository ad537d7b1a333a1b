use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fracspec_core::fracderiv::{assemble, assemble_ladder, assemble_naive, AssemblyBudget};
use fracspec_core::oracles::closed::{sech, v1};
use fracspec_core::{CacheKey, DiffOperator, FourierField, FourierTransform, OperatorCache, SpectralGrid};

fn random_even(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    half.iter().chain(half.iter().rev()).copied().collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn transform_round_trip() {
    for n in [4, 16, 64, 256] {
        let t = FourierTransform::new(n).unwrap();
        let u = random_even(n, n as u64);
        let back = t.inverse_real(&t.forward_real(&u).unwrap()).unwrap();
        assert!(max_diff(&u, &back) <= 1e-12, "N={n}");

        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let z: Vec<Complex64> = (0..2 * n).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
        let back = t.inverse_complex(&t.forward_complex(&z).unwrap()).unwrap();
        let err = z.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-12, "N={n}: {err}");
    }
}

#[test]
fn hermitian_symmetry_is_preserved() {
    let n = 64;
    let grid = SpectralGrid::new(n, 1.6).unwrap();
    let t = FourierTransform::new(n).unwrap();
    let field = t.forward_real(&grid.sample_even_extension(v1).unwrap()).unwrap();
    assert_eq!(field.hermitian_defect(), 0.0);
    for order in 1..=3 {
        let d = DiffOperator::new(order, n, 1.6).unwrap().apply(&field).unwrap();
        assert!(d.hermitian_defect() <= 1e-14 * d.max_abs(), "order {order}");
    }
    let sum = field.axpby(2.0, &field, -0.5).unwrap();
    assert!(sum.hermitian_defect() <= 1e-15);
}

#[test]
fn fast_assembly_matches_naive() {
    for n in [2, 4, 8] {
        for alpha in [0.0, 0.3, 0.5, 0.9, 1.0] {
            for level in 1..=3 {
                let fast = assemble(alpha, n, level, AssemblyBudget::default()).unwrap();
                let slow = assemble_naive(alpha, n, level).unwrap();
                let err = fast
                    .entries()
                    .iter()
                    .zip(slow.entries())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(err <= 1e-12, "N={n} a={alpha} m={level}: {err}");
            }
        }
    }
}

#[test]
fn real_and_complex_products_agree() {
    let n = 32;
    let grid = SpectralGrid::new(n, 3.9).unwrap();
    let field = FourierTransform::new(n)
        .unwrap()
        .forward_real(&grid.sample_even_extension(sech).unwrap())
        .unwrap();
    for alpha in [0.0, 0.25, 0.7, 1.0] {
        let op = assemble_ladder(alpha, n, &[1, 2, 3], AssemblyBudget::default()).unwrap();
        let full: Vec<f64> = op.apply(&field, 3.9).unwrap().iter().map(|c| c.re).collect();
        let fast = op.apply_real(&field, 3.9).unwrap();
        assert!(max_diff(&full, &fast) <= 1e-13, "a={alpha}");
    }
}

#[test]
fn operator_is_continuous_in_alpha() {
    let n = 16;
    let a = assemble(0.5, n, 2, AssemblyBudget::default()).unwrap();
    let b = assemble(0.5 + 1e-7, n, 2, AssemblyBudget::default()).unwrap();
    let diff = a.entries().iter().zip(b.entries()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(diff <= 1e-5 * a.max_abs(), "{diff}");
}

#[test]
fn constants_are_annihilated() {
    let n = 32;
    let t = FourierTransform::new(n).unwrap();
    let field = t.forward_real(&vec![0.75; 2 * n]).unwrap();
    for alpha in [0.0, 1.0 / 3.0, 1.0] {
        let op = assemble_ladder(alpha, n, &[1, 2, 3, 4], AssemblyBudget::default()).unwrap();
        let out = op.apply_real(&field, 2.0).unwrap();
        assert!(out.iter().all(|v| v.abs() <= 1e-13), "a={alpha}");
    }
}

#[test]
fn cache_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cache = OperatorCache::new(dir.path());
    let key = CacheKey::new(1.0 / 3.0, 16, vec![1, 2, 3]);
    let built = cache.build(&key).unwrap();
    cache.store(&built).unwrap();
    let loaded = cache.load(&key).unwrap();
    assert_eq!(built, loaded);
    let again = cache.build(&key).unwrap();
    assert_eq!(built, again);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn operator_is_linear(seed in 0u64..1000, a in -3.0f64..3.0, b in -3.0f64..3.0, alpha in 0.0f64..=1.0) {
        let n = 16;
        let t = FourierTransform::new(n).unwrap();
        let op = assemble_ladder(alpha, n, &[1, 2], AssemblyBudget::default()).unwrap();
        let f = t.forward_real(&random_even(n, seed)).unwrap();
        let g = t.forward_real(&random_even(n, seed + 1)).unwrap();
        let combo = f.axpby(a, &g, b).unwrap();
        let lhs = op.apply_real(&combo, 1.3).unwrap();
        let fa = op.apply_real(&f, 1.3).unwrap();
        let gb = op.apply_real(&g, 1.3).unwrap();
        let scale = fa.iter().chain(&gb).map(|v| v.abs()).fold(1.0, f64::max);
        for ((l, x), y) in lhs.iter().zip(&fa).zip(&gb) {
            prop_assert!((l - (a * x + b * y)).abs() <= 1e-12 * scale * (a.abs() + b.abs() + 1.0));
        }
    }

    #[test]
    fn real_fields_stay_hermitian(seed in 0u64..1000) {
        let n = 8;
        let t = FourierTransform::new(n).unwrap();
        let f: FourierField = t.forward_real(&random_even(n, seed)).unwrap();
        prop_assert!(f.hermitian_defect() == 0.0);
        let back = t.inverse_real(&f).unwrap();
        let again = t.forward_real(&back).unwrap();
        prop_assert!(again.hermitian_defect() == 0.0);
    }
}
