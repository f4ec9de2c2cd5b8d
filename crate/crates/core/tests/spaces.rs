use std::f64::consts::PI;

use bilinear_lab::indices::Exponent;
use bilinear_lab::partitions::{LpFamily, UniformFamily};
use bilinear_lab::spaces::{
    bmo_norm, lebesgue_norm, local_hardy_norm, sobolev_norm, verify_embedding, wiener_amalgam_norm, Embedding,
};
use bilinear_lab::suites::random_band_limited;
use bilinear_lab::torus::{GridFunction, TorusGrid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn e(s: &str) -> Exponent {
    s.parse().unwrap()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn lebesgue_examples() {
    for dim in [1usize, 2] {
        let g = TorusGrid::new(dim, 16, 4).unwrap();
        let one = GridFunction::from_fn(g, |_| c(1.0));
        for p in ["1/2", "1", "2", "3"] {
            let want = (2.0 * PI).powf(dim as f64 / e(p).to_f64());
            assert!(rel(lebesgue_norm(&one, e(p)).value, want) < 1e-12);
        }
        assert_eq!(lebesgue_norm(&one, Exponent::INFINITY).value, 1.0);
    }
    let g = TorusGrid::new(1, 64, 16).unwrap();
    let mode = GridFunction::synthesize(g, &[([5, 0], c(1.0))]).unwrap();
    assert!(rel(lebesgue_norm(&mode, e("2")).value, (2.0 * PI).sqrt()) < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = random_band_limited(&g, 16, &mut rng).unwrap();
    let pl = 2.0 * PI * f.spectrum().iter().map(|v| v.norm_sqr()).sum::<f64>();
    assert!(rel(lebesgue_norm(&f, e("2")).value.powi(2), pl) < 1e-10);
}

#[test]
fn sobolev_of_a_mode() {
    let g = TorusGrid::new(1, 64, 16).unwrap();
    let mode = GridFunction::synthesize(g, &[([3, 0], c(1.0))]).unwrap();
    let v = sobolev_norm(&mode, e("1"), 2.0).value;
    assert!(rel(v, 10.0 * 2.0 * PI) < 1e-12);
}

#[test]
fn local_hardy_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = TorusGrid::new(1, 256, 64).unwrap();
    let lp = LpFamily::standard();
    for _ in 0..20 {
        let f = random_band_limited(&g, 64, &mut rng).unwrap();
        let h = local_hardy_norm(&f, e("2"), 0.0, &lp).unwrap().value;
        let l2 = lebesgue_norm(&f, e("2")).value;
        assert!(h >= l2 / 3f64.sqrt() && h <= l2 * 3f64.sqrt(), "{h} vs {l2}");
    }
    // spectrum inside the plateau 2^{ℓ-1/4} ≤ |ξ| ≤ 2^{ℓ+1/4} of the sharp family
    let sharp = LpFamily::sharp();
    let ell = 5;
    let lo = 2f64.powf(ell as f64 - 0.25).ceil() as i64;
    let hi = 2f64.powf(ell as f64 + 0.25).floor() as i64;
    let entries: Vec<_> =
        (lo..=hi).flat_map(|k| [([k, 0], Complex64::new(rng.gen(), rng.gen())), ([-k, 0], c(rng.gen()))]).collect();
    let f = GridFunction::synthesize(g, &entries).unwrap();
    for p in ["1/2", "1", "2"] {
        for s in [-0.5, 0.0, 1.25] {
            let h = local_hardy_norm(&f, e(p), s, &sharp).unwrap().value;
            let want = 2f64.powf(ell as f64 * s) * lebesgue_norm(&f, e(p)).value;
            assert!(rel(h, want) < 1e-12, "p={p} s={s}");
        }
    }
    let zero = GridFunction::zeros(g);
    assert_eq!(local_hardy_norm(&zero, e("1"), 0.0, &lp).unwrap().value, 0.0);
    assert!(local_hardy_norm(&f, Exponent::INFINITY, 0.0, &lp).is_err());
}

#[test]
fn bmo_examples() {
    let g = TorusGrid::new(1, 256, 64).unwrap();
    let konst = GridFunction::from_fn(g, |_| Complex64::new(-1.5, 2.0));
    assert!(rel(bmo_norm(&konst, 0.0).value, 2.5) < 1e-12);

    // mean-zero profile living on the dyadic cube [0, 2π/8)
    let side = 2.0 * PI / 8.0;
    let bump = |x: f64| if x > 0.0 && x < side { (PI * x / side).sin().powi(2) * (2.0 * PI * x / side).cos() } else { 0.0 };
    let f = GridFunction::from_fn(g, |x| c(bump(x[0])));
    let pts: Vec<Complex64> = f.samples()[..32].to_vec();
    let mean = pts.iter().sum::<Complex64>() / 32.0;
    let osc = pts.iter().map(|v| (v - mean).norm()).sum::<f64>() / 32.0;
    assert!(bmo_norm(&f, 0.0).value >= osc);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let f = random_band_limited(&g, 64, &mut rng).unwrap();
        assert!(bmo_norm(&f, 0.0).value <= 2.0 * lebesgue_norm(&f, Exponent::INFINITY).value * (1.0 + 1e-12));
    }
}

#[test]
fn amalgam_single_mode_closed_form() {
    let g = TorusGrid::new(1, 64, 16).unwrap();
    let nu0 = 7i64;
    let br = |k: i64| (1.0 + (k * k) as f64).sqrt();
    let mode = GridFunction::synthesize(g, &[([nu0, 0], c(1.0))]).unwrap();
    let narrow = UniformFamily::new(1.0, false).unwrap();
    let wide = UniformFamily::new(1.5, false).unwrap();
    for (p, q, s) in [("1", "2", 0.5), ("2", "1", -1.0), ("1/2", "3", 0.0)] {
        let (pe, qe) = (e(p), e(q));
        let qf = qe.to_f64();
        let lp_factor = (2.0 * PI).powf(1.0 / pe.to_f64());
        // only ν = ν_0 meets the mode, so ⟨ν_0⟩^s factors out
        let want = br(nu0).powf(s) * narrow.eval(&[0.0]) * lp_factor;
        let got = wiener_amalgam_norm(&mode, pe, qe, s, &narrow).value;
        assert!(rel(got, want) < 1e-12, "p={p} q={q}: {got} vs {want}");
        // wider bump: neighbours ν_0 ± 1 contribute with their own weights
        let seq: f64 = (-3i64..=3)
            .map(|d| (br(nu0 + d).powf(s) * wide.eval(&[d as f64])).powf(qf))
            .sum::<f64>()
            .powf(1.0 / qf);
        let got = wiener_amalgam_norm(&mode, pe, qe, s, &wide).value;
        assert!(rel(got, seq * lp_factor) < 1e-10, "p={p} q={q}: {got} vs {}", seq * lp_factor);
    }
}

#[test]
fn amalgam_l2_matches_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let exact = UniformFamily::new(1.0, true).unwrap();
    for dim in [1usize, 2] {
        let g = TorusGrid::new(dim, 32, 8).unwrap();
        let f = random_band_limited(&g, 8, &mut rng).unwrap();
        let w = wiener_amalgam_norm(&f, e("2"), e("2"), 0.0, &exact).value;
        let l2 = (2.0 * PI).powf(dim as f64 / 2.0) * f.spectrum().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!(rel(w, l2) < 1e-10);
    }
}

#[test]
fn amalgam_monotone_in_exponents() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = TorusGrid::new(1, 128, 32).unwrap();
    let phi = UniformFamily::new(1.0, true).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let f = random_band_limited(&g, 32, &mut rng).unwrap();
        let small = wiener_amalgam_norm(&f, e("1"), e("1"), 0.0, &phi).value;
        let big = wiener_amalgam_norm(&f, e("2"), e("2"), 0.0, &phi).value;
        worst = worst.max(big / small);
    }
    // W^{1,1} ↪ W^{2,2} with constant (2π)^{-1/2} on the torus
    assert!(worst <= (2.0 * PI).powf(-0.5) * (1.0 + 1e-12), "{worst}");
}

#[test]
fn embedding_examples() {
    let lp = LpFamily::standard();
    let phi = UniformFamily::new(1.0, true).unwrap();
    let g = TorusGrid::new(1, 128, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let f = random_band_limited(&g, 32, &mut rng).unwrap();
        for which in [Embedding::AmalgamToHardy, Embedding::HardyToAmalgam] {
            let r = verify_embedding(&f, which, e("2"), &lp, &phi).unwrap().ratio;
            assert!((1.0 / 3.0..=3.0).contains(&r), "{which:?}: {r}");
        }
    }
    let mode = GridFunction::synthesize(g, &[([9, 0], c(1.0))]).unwrap();
    for which in [Embedding::AmalgamToHardy, Embedding::HardyToAmalgam, Embedding::AmalgamToBmo, Embedding::BmoToAmalgam] {
        let r = verify_embedding(&mode, which, e("1"), &lp, &phi).unwrap().ratio;
        assert!(r.is_finite() && r > 0.0);
    }
    let mut max = 0.0f64;
    for _ in 0..200 {
        let f = random_band_limited(&g, 32, &mut rng).unwrap();
        max = max.max(verify_embedding(&f, Embedding::HardyToAmalgam, e("1"), &lp, &phi).unwrap().ratio);
    }
    assert!(max.is_finite() && max < 10.0, "{max}");
}

#[test]
fn homogeneity_and_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = TorusGrid::new(2, 32, 8).unwrap();
    let lp = LpFamily::standard();
    let phi = UniformFamily::new(1.0, true).unwrap();
    let f = random_band_limited(&g, 8, &mut rng).unwrap();
    let lam = Complex64::new(-1.3, 2.1);
    let lf = f.scale(lam);
    let norms = |h: &GridFunction| {
        vec![
            lebesgue_norm(h, e("1/2")).value,
            sobolev_norm(h, e("3"), 0.7).value,
            local_hardy_norm(h, e("1/2"), -0.4, &lp).unwrap().value,
            bmo_norm(h, 0.5).value,
            wiener_amalgam_norm(h, e("1"), e("2"), 1.0, &phi).value,
        ]
    };
    for (a, b) in norms(&lf).iter().zip(norms(&f)) {
        assert!(rel(*a, lam.norm() * b) < 1e-10);
    }
    let zero = GridFunction::zeros(g);
    assert!(norms(&zero).iter().all(|v| *v == 0.0));
    assert!(norms(&f).iter().all(|v| *v > 0.0));
}

#[test]
fn p_triangle_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = TorusGrid::new(1, 128, 32).unwrap();
    let lp = LpFamily::standard();
    for _ in 0..30 {
        let f = random_band_limited(&g, 32, &mut rng).unwrap();
        let h = random_band_limited(&g, 32, &mut rng).unwrap();
        let sum = f.combine(c(1.0), &h, c(1.0)).unwrap();
        for p in ["1/2", "1"] {
            let pe = e(p);
            let pf = pe.to_f64();
            let l = |x: &GridFunction| lebesgue_norm(x, pe).value.powf(pf);
            assert!(l(&sum) <= l(&f) + l(&h) + 1e-9);
            let hp = |x: &GridFunction| local_hardy_norm(x, pe, 0.0, &lp).unwrap().value.powf(pf);
            assert!(hp(&sum) <= hp(&f) + hp(&h) + 1e-9);
        }
    }
}

#[test]
fn profile_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = TorusGrid::new(1, 256, 64).unwrap();
    let a = LpFamily::standard();
    let b = LpFamily::with_profile(1.2, 1.7).unwrap();
    let phi_a = UniformFamily::new(1.0, true).unwrap();
    let phi_b = UniformFamily::new(0.8, true).unwrap();
    for _ in 0..100 {
        let f = random_band_limited(&g, 64, &mut rng).unwrap();
        let r = local_hardy_norm(&f, e("1"), 0.5, &a).unwrap().value / local_hardy_norm(&f, e("1"), 0.5, &b).unwrap().value;
        assert!((0.25..=4.0).contains(&r), "{r}");
        let w = wiener_amalgam_norm(&f, e("1"), e("2"), 0.5, &phi_a).value
            / wiener_amalgam_norm(&f, e("1"), e("2"), 0.5, &phi_b).value;
        assert!((0.25..=4.0).contains(&w), "{w}");
    }
}
