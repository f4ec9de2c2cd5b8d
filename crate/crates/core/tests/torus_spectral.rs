use std::f64::consts::PI;

use bilinear_lab::partitions::LpFamily;
use bilinear_lab::suites::random_band_limited;
use bilinear_lab::torus::{analyze, synthesize_dense, GridFunction, TorusGrid};
use bilinear_lab::LabError;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn grid1(n: usize, xi: usize) -> TorusGrid {
    TorusGrid::new(1, n, xi).unwrap()
}

#[test]
fn grid_rejects_bad_shapes() {
    assert!(matches!(TorusGrid::new(1, 12, 2), Err(LabError::InvalidGrid(_))));
    assert!(matches!(TorusGrid::new(1, 16, 5), Err(LabError::InvalidGrid(_))));
    assert!(matches!(TorusGrid::new(3, 16, 4), Err(LabError::InvalidGrid(_))));
    assert!(TorusGrid::new(2, 16, 4).is_ok());
}

#[test]
fn constant_has_only_zero_mode() {
    let g = grid1(32, 8);
    let f = GridFunction::from_fn(g, |_| c(1.0, 0.0));
    for (i, v) in f.spectrum().iter().enumerate() {
        let want = if g.freq(i)[0] == 0 { 1.0 } else { 0.0 };
        assert!((v - c(want, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn pure_mode_three() {
    let g = grid1(64, 16);
    let f = GridFunction::from_fn(g, |x| Complex64::from_polar(1.0, 3.0 * x[0]));
    assert!((f.coefficient([3, 0]) - c(1.0, 0.0)).norm() < 1e-14);
    let rest: f64 = f.spectrum().iter().map(|v| v.norm()).sum::<f64>() - 1.0;
    assert!(rest.abs() < 1e-12);
}

#[test]
fn round_trip_random_band_limited() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for dim in [1, 2] {
        let g = TorusGrid::new(dim, 32, 8).unwrap();
        let f = random_band_limited(&g, 8, &mut rng).unwrap();
        let back = synthesize_dense(&g, &analyze(&g, f.samples()));
        let scale = f.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let err = back.iter().zip(f.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-12 * scale, "dim {dim}: {err}");
    }
}

#[test]
fn synthesize_examples() {
    let g = grid1(16, 4);
    let one = GridFunction::synthesize(g, &[([0, 0], c(1.0, 0.0))]).unwrap();
    assert!(one.samples().iter().all(|v| (v - c(1.0, 0.0)).norm() < 1e-14));
    let m2 = GridFunction::synthesize(g, &[([-2, 0], c(1.0, 0.0))]).unwrap();
    for (j, v) in m2.samples().iter().enumerate() {
        let x = 2.0 * PI * j as f64 / 16.0;
        assert!((v - Complex64::from_polar(1.0, -2.0 * x)).norm() < 1e-13);
    }
    assert!(matches!(GridFunction::synthesize(g, &[([8, 0], c(1.0, 0.0))]), Err(LabError::OutsideWindow(_))));
}

#[test]
fn hermitian_spectrum_gives_real_samples() {
    let g = grid1(64, 16);
    let entries: Vec<_> = (-16i64..=16).map(|k| ([k, 0], c((-(k * k) as f64 / 20.0).exp(), 0.0))).collect();
    let f = GridFunction::synthesize(g, &entries).unwrap();
    assert!(f.samples().iter().all(|v| v.im.abs() <= 1e-12));
}

#[test]
fn bessel_potential_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = grid1(64, 16);
    let f = random_band_limited(&g, 16, &mut rng).unwrap();
    assert_eq!(f.bessel_potential(0.0).samples(), f.samples());
    let back = f.bessel_potential(1.7).bessel_potential(-1.7);
    assert!(back.max_abs_diff(&f) < 1e-10);
    let mode = GridFunction::synthesize(g, &[([3, 0], c(1.0, 0.0))]).unwrap();
    let out = mode.bessel_potential(2.0);
    assert!((out.coefficient([3, 0]) - c(10.0, 0.0)).norm() < 1e-12);
}

#[test]
fn band_projection_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = grid1(64, 16);
    let f = random_band_limited(&g, 16, &mut rng).unwrap();
    let ones = vec![1.0; g.len()];
    assert!(f.apply_mask(&ones).unwrap().max_abs_diff(&f) < 1e-14);

    let delta: Vec<f64> = (0..g.len()).map(|i| if g.freq(i)[0] == 0 { 1.0 } else { 0.0 }).collect();
    let mean = f.samples().iter().sum::<Complex64>() / g.len() as f64;
    let proj = f.apply_mask(&delta).unwrap();
    assert!(proj.samples().iter().all(|v| (v - mean).norm() < 1e-13));

    let m1: Vec<f64> = (0..g.len()).map(|i| if g.freq(i)[0] > 0 { 0.3 } else { 0.0 }).collect();
    let m2: Vec<f64> = (0..g.len()).map(|i| if g.freq(i)[0] < -2 { 1.5 } else { 0.0 }).collect();
    let sum: Vec<f64> = m1.iter().zip(&m2).map(|(a, b)| a + b).collect();
    let lhs = f.apply_mask(&m1).unwrap().combine(c(1.0, 0.0), &f.apply_mask(&m2).unwrap(), c(1.0, 0.0)).unwrap();
    assert!(lhs.max_abs_diff(&f.apply_mask(&sum).unwrap()) < 1e-13);
}

#[test]
fn plancherel_over_many_seeds() {
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 1 + (seed % 2) as usize;
        let g = TorusGrid::new(dim, 16, 4).unwrap();
        let f = random_band_limited(&g, 4, &mut rng).unwrap();
        let lhs: f64 = f.samples().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.cell_weight();
        let rhs: f64 = (2.0 * PI).powi(dim as i32) * f.spectrum().iter().map(|v| v.norm_sqr()).sum::<f64>();
        assert!((lhs - rhs).abs() <= 1e-10 * rhs, "seed {seed}");
    }
}

#[test]
fn littlewood_paley_pieces_reassemble() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for family in [LpFamily::standard(), LpFamily::sharp()] {
        let g = TorusGrid::new(2, 64, 16).unwrap();
        let f = random_band_limited(&g, 16, &mut rng).unwrap();
        let bands = family.bands_needed(16.0 * 2f64.sqrt());
        let mut total = GridFunction::zeros(g);
        for k in 0..=bands {
            total = total.combine(c(1.0, 0.0), &f.apply_mask(&family.mask(&g, k)).unwrap(), c(1.0, 0.0)).unwrap();
        }
        assert!(total.max_abs_diff(&f) < 1e-12);
    }
}

#[test]
fn bessel_commutes_with_masks() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = grid1(64, 16);
    let f = random_band_limited(&g, 16, &mut rng).unwrap();
    let mask = LpFamily::standard().mask(&g, 3);
    let a = f.bessel_potential(1.3).apply_mask(&mask).unwrap();
    let b = f.apply_mask(&mask).unwrap().bessel_potential(1.3);
    assert!(a.max_abs_diff(&b) <= 1e-12);
}
