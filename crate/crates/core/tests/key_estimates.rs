use bilinear_lab::key_estimates::{
    conv_lhs, duality_check, empirical_constant, growth_trend, log_log_slope, ConvInstance, Distribution, VKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn delta(dim: usize, radius: usize) -> Vec<f64> {
    let side = 2 * radius + 1;
    let len = side.pow(dim as u32);
    let mut v = vec![0.0; len];
    v[len / 2] = 1.0;
    v
}

fn random_array(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(0.0..1.0)).collect()
}

#[test]
fn delta_inputs_give_one() {
    for dim in [1, 2] {
        for kind in VKind::ALL {
            let inst = ConvInstance::new(dim, kind, -0.3, 0.7, 3, delta(dim, 3), delta(dim, 3)).unwrap();
            assert!((conv_lhs(&inst) - 1.0).abs() < 1e-15);
        }
    }
}

#[test]
fn hand_enumeration_for_radius_two() {
    // μ = -4..4 collects 1,2,3,4,5,4,3,2,1 pairs
    let inst = ConvInstance::new(1, VKind::Product, 0.0, 0.0, 2, vec![1.0; 5], vec![1.0; 5]).unwrap();
    let counts: f64 = [1.0f64, 2.0, 3.0, 4.0, 5.0, 4.0, 3.0, 2.0, 1.0].iter().map(|c| c * c).sum();
    assert!((conv_lhs(&inst) - counts.sqrt()).abs() < 1e-12);
    assert_eq!(inst.convolution(), vec![1.0, 2.0, 3.0, 4.0, 5.0, 4.0, 3.0, 2.0, 1.0]);
}

#[test]
fn homogeneity_symmetry_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for dim in [1, 2] {
        let radius = if dim == 1 { 10 } else { 4 };
        let len = (2 * radius + 1usize).pow(dim as u32);
        for kind in VKind::ALL {
            let a1 = rng.gen_range(-1.0..0.0);
            let a2 = rng.gen_range(-1.0..0.0);
            let first = random_array(&mut rng, len);
            let second = random_array(&mut rng, len);
            let base = conv_lhs(&ConvInstance::new(dim, kind, a1, a2, radius, first.clone(), second.clone()).unwrap());

            let lam = 3.7;
            let scaled: Vec<f64> = first.iter().map(|v| v * lam).collect();
            let s = conv_lhs(&ConvInstance::new(dim, kind, a1, a2, radius, scaled, second.clone()).unwrap());
            assert!((s - lam * base).abs() <= 1e-12 * s);

            let bigger: Vec<f64> = first.iter().map(|v| v + rng.gen_range(0.0..0.5)).collect();
            let b = conv_lhs(&ConvInstance::new(dim, kind, a1, a2, radius, bigger, second.clone()).unwrap());
            assert!(b >= base);

            if kind == VKind::Product {
                let swapped = conv_lhs(&ConvInstance::new(dim, kind, a2, a1, radius, second, first).unwrap());
                assert!((swapped - base).abs() <= 1e-12 * base);
            }
        }
    }
}

#[test]
fn instances_reject_bad_arrays() {
    assert!(ConvInstance::new(1, VKind::Product, 0.0, 0.0, 2, vec![1.0; 4], vec![1.0; 5]).is_err());
    assert!(ConvInstance::new(1, VKind::Product, 0.0, 0.0, 2, vec![-1.0; 5], vec![1.0; 5]).is_err());
    assert!(ConvInstance::new(3, VKind::Product, 0.0, 0.0, 2, vec![1.0; 5], vec![1.0; 5]).is_err());
    assert!(empirical_constant(1, VKind::Product, 0.0, 0.0, 4, 0, Distribution::Uniform, 0).is_err());
}

#[test]
fn duality_matches_within_two_percent() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for kind in VKind::ALL {
        let inst = ConvInstance::new(1, kind, -0.25, -0.25, 4, random_array(&mut rng, 9), random_array(&mut rng, 9)).unwrap();
        let report = duality_check(&inst, 2000, 3);
        assert!(report.relative_gap <= 0.02, "{kind:?}: {report:?}");
        assert!((report.lhs - conv_lhs(&inst)).abs() <= 1e-12 * report.lhs);
    }
}

#[test]
fn critical_regime_constants_stay_within_factor_two() {
    for kind in VKind::ALL {
        let report = growth_trend(1, kind, -0.25, -0.25, &[8, 16, 32, 64], 8, &Distribution::ALL, 5).unwrap();
        assert!(report.spread <= 2.0, "{kind:?}: {:?}", report.constants);
    }
}

#[test]
fn subcritical_regime_is_bounded() {
    let report = growth_trend(1, VKind::Product, -1.0, 0.0, &[8, 16, 32, 64, 128], 8, &Distribution::ALL, 6).unwrap();
    assert!(report.spread <= 2.0, "{:?}", report.constants);
    assert!(report.slope <= 0.05, "slope {}", report.slope);
}

#[test]
fn violated_hypothesis_shows_growth() {
    for kind in VKind::ALL {
        let report = growth_trend(1, kind, -0.125, -0.125, &[8, 16, 32, 64, 128], 4, &[Distribution::Indicator], 7).unwrap();
        assert!(report.slope >= 0.2, "{kind:?}: slope {}", report.slope);
    }
}

#[test]
fn slope_of_power_law() {
    let pts: Vec<(f64, f64)> = [8.0f64, 16.0, 32.0, 64.0].iter().map(|&m| (m, 3.0 * m.powf(0.3))).collect();
    assert!((log_log_slope(&pts).unwrap() - 0.3).abs() < 1e-12);
    assert!(log_log_slope(&pts[..1]).is_err());
}
