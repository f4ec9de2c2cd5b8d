use std::f64::consts::PI;

use bilinear_lab::indices::{Exponent, IndexTuple, Q};
use bilinear_lab::key_estimates::{conv_lhs, ConvInstance, VKind};
use bilinear_lab::operator::apply_bilinear;
use bilinear_lab::partitions::{LpFamily, UniformFamily};
use bilinear_lab::spaces::lebesgue_norm;
use bilinear_lab::suites::{random_band_limited, random_tuple};
use bilinear_lab::symbols::Symbol;
use bilinear_lab::torus::{GridFunction, TorusGrid};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid(dim: usize) -> TorusGrid {
    if dim == 1 {
        TorusGrid::new(1, 64, 16).unwrap()
    } else {
        TorusGrid::new(2, 16, 4).unwrap()
    }
}

fn input(dim: usize, seed: u64) -> GridFunction {
    let g = grid(dim);
    random_band_limited(&g, g.band_limit() as i64, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![Just("1"), Just("4/3"), Just("2"), Just("3"), Just("4"), Just("inf")].prop_map(|s| s.parse().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plancherel(dim in 1usize..=2, seed in any::<u64>()) {
        let f = input(dim, seed);
        let two = Exponent::from_int(2).unwrap();
        let l2 = lebesgue_norm(&f, two).value;
        let coeffs: f64 = f.spectrum().iter().map(|c| c.norm_sqr()).sum();
        let want = ((2.0 * PI).powi(dim as i32) * coeffs).sqrt();
        prop_assert!((l2 - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn spectrum_roundtrip(dim in 1usize..=2, seed in any::<u64>()) {
        let f = input(dim, seed);
        let back = GridFunction::from_spectrum(*f.grid(), f.spectrum().to_vec()).unwrap();
        prop_assert!(back.max_abs_diff(&f) <= 1e-12);
    }

    #[test]
    fn bessel_potentials_compose(seed in any::<u64>(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let f = input(1, seed);
        let a = f.bessel_potential(s).bessel_potential(t);
        let b = f.bessel_potential(s + t);
        prop_assert!(a.spectral_diff(&b) <= 1e-10 * (1.0 + b.max_coefficient()));
    }

    #[test]
    fn lebesgue_norm_is_a_norm(seed in any::<u64>(), p in exponent(), lam in -3.0f64..3.0) {
        let f = input(1, seed);
        let g = input(1, seed.wrapping_add(1));
        let nf = lebesgue_norm(&f, p).value;
        let scaled = lebesgue_norm(&f.scale(Complex64::new(lam, 0.0)), p).value;
        prop_assert!((scaled - lam.abs() * nf).abs() <= 1e-10 * (1.0 + scaled));
        let sum = f.combine(Complex64::new(1.0, 0.0), &g, Complex64::new(1.0, 0.0)).unwrap();
        prop_assert!(lebesgue_norm(&sum, p).value <= nf + lebesgue_norm(&g, p).value + 1e-10);
    }

    #[test]
    fn bilinear_in_second_slot(seed in any::<u64>(), m in -1.5f64..0.5, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let sigma = Symbol::bracket_power(1, m);
        let f1 = input(1, seed);
        let f2 = input(1, seed.wrapping_add(1));
        let h = input(1, seed.wrapping_add(2));
        let alpha = Complex64::new(re, im);
        let one = Complex64::new(1.0, 0.0);
        // keep the sum inside the band
        let half = |f: GridFunction| {
            let g = *f.grid();
            let spec: Vec<Complex64> = f.spectrum().iter().enumerate()
                .map(|(i, c)| if g.freq(i)[0].abs() <= 8 { *c } else { Complex64::new(0.0, 0.0) })
                .collect();
            GridFunction::from_spectrum(g, spec).unwrap()
        };
        let (f1, f2, h) = (half(f1), half(f2), half(h));
        let lhs = apply_bilinear(&sigma, &f1, &f2.combine(one, &h, alpha).unwrap()).unwrap();
        let rhs = apply_bilinear(&sigma, &f1, &f2).unwrap()
            .combine(one, &apply_bilinear(&sigma, &f1, &h).unwrap(), alpha).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * (1.0 + alpha.norm()));
    }

    #[test]
    fn partitions_of_unity(x in -300.0f64..300.0, y in -300.0f64..300.0) {
        let lp = LpFamily::standard();
        let r = (x * x + y * y).sqrt();
        let total: f64 = (0..=lp.bands_needed(r)).map(|k| lp.member(k, &[x, y])).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        let phi = UniformFamily::new(1.0, true).unwrap();
        prop_assert!((phi.translate_sum(&[x, y]) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn index_invariants(seed in any::<u64>()) {
        let t = random_tuple(&mut ChaCha8Rng::seed_from_u64(seed));
        let swapped = IndexTuple { p1: t.p2, p2: t.p1, s1: t.s2, s2: t.s1, ..t };
        prop_assert_eq!(t.m_critical(), swapped.m_critical());
        prop_assert_eq!(t.kappa(), t.m_critical() + t.s1 + t.s2 - t.s - t.m);
        prop_assert_eq!(t.with_order(t.order_bound()).kappa(), Q::from(0));
        prop_assert!(t.m_critical() <= Q::from(0));
    }

    #[test]
    fn conv_lhs_is_homogeneous(seed in any::<u64>(), lam in 0.1f64..10.0, kind_ix in 0usize..3) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = VKind::ALL[kind_ix];
        let first: Vec<f64> = (0..9).map(|_| rng.gen_range(0.0..1.0)).collect();
        let second: Vec<f64> = (0..9).map(|_| rng.gen_range(0.0..1.0)).collect();
        let base = conv_lhs(&ConvInstance::new(1, kind, -0.3, -0.2, 4, first.clone(), second.clone()).unwrap());
        let scaled: Vec<f64> = second.iter().map(|v| v * lam).collect();
        let s = conv_lhs(&ConvInstance::new(1, kind, -0.3, -0.2, 4, first, scaled).unwrap());
        prop_assert!((s - lam * base).abs() <= 1e-12 * s);
    }
}
