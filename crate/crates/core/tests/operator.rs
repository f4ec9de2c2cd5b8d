use std::sync::Arc;

use bilinear_lab::indices::Exponent;
use bilinear_lab::operator::{apply_bilinear, apply_bilinear_with, apply_linear, tau_symbol, LinearSymbol, Strategy};
use bilinear_lab::suites::{random_band_limited, tau_identity_errors, tau_sharpness, tau_test_symbol};
use bilinear_lab::symbols::{
    antidiagonal_constant, class_constant, make_antidiag_family, make_diag_family, make_lattice_block, make_wainger, Amplitude,
    ClassOptions, ClassSpec, CoefficientSource, FamilyParams, Multiplier, Symbol,
};
use bilinear_lab::partitions::UniformFamily;
use bilinear_lab::torus::{bracket, GridFunction, TorusGrid};
use bilinear_lab::LabError;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn constant_symbol_gives_pointwise_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for dim in [1, 2] {
        let g = TorusGrid::new(dim, 32, 8).unwrap();
        let f1 = random_band_limited(&g, 8, &mut rng).unwrap();
        let f2 = random_band_limited(&g, 8, &mut rng).unwrap();
        let one = Symbol::constant(dim, c(1.0, 0.0));
        let want: Vec<Complex64> = f1.samples().iter().zip(f2.samples()).map(|(a, b)| a * b).collect();
        for strategy in [Strategy::Auto, Strategy::Direct] {
            let out = apply_bilinear_with(&one, &f1, &f2, strategy).unwrap().output;
            let err = out.samples().iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err <= 1e-10, "dim {dim} {strategy:?}: {err}");
        }
    }
}

#[test]
fn separable_fast_path_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = TorusGrid::new(1, 64, 16).unwrap();
    for _ in 0..10 {
        let (s, t) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.0..1.0));
        let m1: Multiplier = Arc::new(move |xi: &[f64]| c(bracket(xi).powf(s), 0.0));
        let m2: Multiplier = Arc::new(move |xi: &[f64]| Complex64::from_polar(1.0, t * xi[0]));
        let sigma = Symbol::separable(1, m1.clone(), m2.clone());
        let f1 = random_band_limited(&g, 16, &mut rng).unwrap();
        let f2 = random_band_limited(&g, 16, &mut rng).unwrap();
        let fast = apply_bilinear_with(&sigma, &f1, &f2, Strategy::Auto).unwrap();
        let direct = apply_bilinear_with(&sigma, &f1, &f2, Strategy::Direct).unwrap();
        assert_eq!(fast.strategy, "separable");
        assert_eq!(direct.strategy, "direct");
        let want = f1.apply_multiplier(|xi| m1(xi)).product(&f2.apply_multiplier(|xi| m2(xi))).unwrap();
        assert!(fast.output.max_abs_diff(&want) <= 1e-10);
        assert!(direct.output.max_abs_diff(&want) <= 1e-10);
    }
}

#[test]
fn antidiag_family_hits_closed_form() {
    let grid = TorusGrid::new(1, 1024, 256).unwrap();
    let two = Exponent::from_int(2).unwrap();
    for level in 4..=7u32 {
        let params = FamilyParams::new(1, level, 0.4, [0.3, 0.7], [two, two], 0.05, CoefficientSource::PhaseCancel).unwrap();
        let sigma = make_antidiag_family(&params, 256).unwrap();
        let f1 = make_wainger(params.a1, params.b1, level, &grid).unwrap();
        let f2 = make_wainger(params.a2, params.b2, level, &grid).unwrap();
        let report = apply_bilinear_with(&sigma, &f1, &f2, Strategy::Auto).unwrap();
        assert_eq!(report.strategy, "table");
        assert_eq!(report.support_radius, 0);
        let want = antidiagonal_constant(&params);
        let got = report.output.coefficient([0, 0]);
        assert!((got - c(want, 0.0)).norm() <= 1e-9 * want.max(1.0), "level {level}: {got} vs {want}");
        assert!(report.output.samples().iter().all(|v| (v - c(want, 0.0)).norm() <= 1e-9 * want.max(1.0)));
    }
}

#[test]
fn operator_errors() {
    let a = TorusGrid::new(1, 32, 8).unwrap();
    let b = TorusGrid::new(1, 64, 8).unwrap();
    let one = Symbol::constant(1, c(1.0, 0.0));
    let fa = GridFunction::synthesize(a, &[([1, 0], c(1.0, 0.0))]).unwrap();
    let fb = GridFunction::synthesize(b, &[([1, 0], c(1.0, 0.0))]).unwrap();
    assert!(matches!(apply_bilinear(&one, &fa, &fb), Err(LabError::GridMismatch(_))));
    let wide = GridFunction::synthesize(a, &[([12, 0], c(1.0, 0.0))]).unwrap();
    assert!(matches!(apply_bilinear(&one, &wide, &fa), Err(LabError::BandLimit(_))));
    let amp: Amplitude = Arc::new(|_: &[f64], _: &[f64]| c(1.0, 0.0));
    let shifted = Symbol::modulated(1, vec![([10, 0], amp)]);
    let edge = GridFunction::synthesize(a, &[([8, 0], c(1.0, 0.0))]).unwrap();
    assert!(matches!(apply_bilinear(&shifted, &edge, &edge), Err(LabError::BandLimit(_))));
}

#[test]
fn linear_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = TorusGrid::new(1, 64, 16).unwrap();
    let f = random_band_limited(&g, 16, &mut rng).unwrap();
    let s = 1.3;
    let bessel: Multiplier = Arc::new(move |xi: &[f64]| c(bracket(xi).powf(s), 0.0));
    let out = apply_linear(&LinearSymbol::Multiplier(bessel), &f).unwrap();
    assert!(out.max_abs_diff(&f.bessel_potential(s)) <= 1e-12);

    let k0 = 5i64;
    let unit: Multiplier = Arc::new(|_: &[f64]| c(1.0, 0.0));
    let moved = apply_linear(&LinearSymbol::Modulated(vec![([k0, 0], unit)]), &f).unwrap();
    for k in -16i64..=16 {
        assert!((moved.coefficient([k + k0, 0]) - f.coefficient([k, 0])).norm() <= 1e-15);
    }

    let values: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let table = values.clone();
    let size = g.size() as i64;
    let random: Multiplier = Arc::new(move |xi: &[f64]| c(table[(xi[0] as i64).rem_euclid(size) as usize], 0.0));
    let out = apply_linear(&LinearSymbol::Multiplier(random), &f).unwrap();
    assert!(out.max_abs_diff(&f.apply_mask(&values).unwrap()) <= 1e-12);
}

#[test]
fn tau_with_zero_indices_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = TorusGrid::new(1, 64, 16).unwrap();
    for which in 0..6 {
        let sigma = tau_test_symbol(which, &mut rng).unwrap();
        let tau = tau_symbol(&sigma, 0.0, 0.0, 0.0).unwrap();
        let f1 = random_band_limited(&g, 8, &mut rng).unwrap();
        let f2 = random_band_limited(&g, 8, &mut rng).unwrap();
        let a = apply_bilinear(&sigma, &f1, &f2).unwrap();
        let b = apply_bilinear(&tau, &f1, &f2).unwrap();
        assert_eq!(a.samples(), b.samples());
    }
}

#[test]
fn tau_defining_identity() {
    let errors = tau_identity_errors(20, 11).unwrap();
    assert_eq!(errors.len(), 20);
    for (name, e) in errors {
        assert!(e <= 1e-8, "{name}: {e}");
    }
}

#[test]
fn tau_of_lattice_block_is_class_stable() {
    let block = make_lattice_block(1, 0.0, UniformFamily::new(0.1, false).unwrap()).unwrap();
    let tau = tau_symbol(&block, 1.0, 1.0, -1.0).unwrap();
    let report = class_constant(&tau, ClassSpec::General { s1: 1.0, s2: 1.0, s: -1.0, m: 0.0 }, &ClassOptions::default()).unwrap();
    assert!(report.stable, "{:?}", report.constants);

    let (matched, lowered) = tau_sharpness(7).unwrap();
    assert!(matched.stable, "{:?}", matched.constants);
    assert!(lowered.growth > 2.0, "{:?}", lowered.constants);
}

#[test]
fn bilinearity_and_spectral_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = TorusGrid::new(1, 64, 16).unwrap();
    for which in 0..6 {
        let sigma = tau_test_symbol(which, &mut rng).unwrap();
        let f1 = random_band_limited(&g, 8, &mut rng).unwrap();
        let h = random_band_limited(&g, 8, &mut rng).unwrap();
        let f2 = random_band_limited(&g, 8, &mut rng).unwrap();
        let alpha = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let lhs = apply_bilinear(&sigma, &f1.combine(alpha, &h, c(1.0, 0.0)).unwrap(), &f2).unwrap();
        let rhs = apply_bilinear(&sigma, &f1, &f2)
            .unwrap()
            .combine(alpha, &apply_bilinear(&sigma, &h, &f2).unwrap(), c(1.0, 0.0))
            .unwrap();
        assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
    }

    // sparse inputs: the output may only live on supp f̂_1 + supp f̂_2 + x-modes
    let amp: Amplitude = Arc::new(|a: &[f64], b: &[f64]| c(1.0 + a[0] * 0.1, b[0] * 0.05));
    let sigma = Symbol::modulated(1, vec![([0, 0], amp.clone()), ([3, 0], amp)]);
    let f1 = GridFunction::synthesize(g, &[([2, 0], c(1.0, 0.0)), ([-5, 0], c(0.3, 0.1))]).unwrap();
    let f2 = GridFunction::synthesize(g, &[([4, 0], c(0.7, 0.0)), ([1, 0], c(0.2, -0.4))]).unwrap();
    let out = apply_bilinear(&sigma, &f1, &f2).unwrap();
    let mut allowed = Vec::new();
    for a in [2i64, -5] {
        for b in [4i64, 1] {
            for eta in [0i64, 3] {
                allowed.push(a + b + eta);
            }
        }
    }
    for (i, v) in out.spectrum().iter().enumerate() {
        if !allowed.contains(&g.freq(i)[0]) {
            assert!(v.norm() <= 1e-12, "k = {}", g.freq(i)[0]);
        }
    }
}

#[test]
fn diag_table_matches_direct_sum() {
    let grid = TorusGrid::new(2, 128, 32).unwrap();
    let two = Exponent::from_int(2).unwrap();
    for source in [CoefficientSource::PhaseCancel, CoefficientSource::Rademacher { seed: 3 }] {
        let params = FamilyParams::new(2, 4, -0.5, [0.9, 0.3], [two, two], 0.05, source).unwrap();
        let sigma = make_diag_family(&params, 32).unwrap();
        let f1 = make_wainger(params.a1, params.b1, 4, &grid).unwrap();
        let f2 = make_wainger(params.a2, params.b2, 4, &grid).unwrap();
        let fast = apply_bilinear_with(&sigma, &f1, &f2, Strategy::Auto).unwrap();
        let direct = apply_bilinear_with(&sigma, &f1, &f2, Strategy::Direct).unwrap();
        assert_eq!(fast.strategy, "table");
        assert!(fast.pairs > 0);
        let scale = direct.output.max_coefficient();
        assert!(fast.output.spectral_diff(&direct.output) <= 1e-12 * scale, "{source:?}");
    }
}
