//! Property suites over the library invariants, each a list of measured value vs limit.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomposition::{cone_split, fourier_series_expand, q_bound_check, support_geometry, SeriesOptions};
use crate::error::{LabError, Result};
use crate::indices::{interpolate, quasi_banach_plan, Exponent, IndexTuple, Sufficiency, Q};
use crate::key_estimates::{growth_trend, Distribution, GrowthReport, VKind};
use crate::operator::{apply_bilinear, tau_symbol};
use crate::partitions::{ConeFamily, LpFamily, PsFamily, UniformFamily};
use crate::spaces::{bmo_norm, lebesgue_norm, local_hardy_norm, sobolev_norm, verify_embedding, wiener_amalgam_norm, Embedding};
use crate::symbols::{
    class_constant, make_antidiag_family, make_lattice_block, Amplitude, ClassOptions, ClassReport, ClassSpec,
    CoefficientSource, FamilyParams, Multiplier, Symbol,
};
use crate::torus::{bracket, Freq, GridFunction, TorusGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Partitions,
    Norms,
    Lemma22,
    Decomposition,
    Tau,
    Embeddings,
    IndicesGolden,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::Partitions,
        SuiteName::Norms,
        SuiteName::Lemma22,
        SuiteName::Decomposition,
        SuiteName::Tau,
        SuiteName::Embeddings,
        SuiteName::IndicesGolden,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            SuiteName::Partitions => "partitions",
            SuiteName::Norms => "norms",
            SuiteName::Lemma22 => "lemma22",
            SuiteName::Decomposition => "decomposition",
            SuiteName::Tau => "tau",
            SuiteName::Embeddings => "embeddings",
            SuiteName::IndicesGolden => "indices-golden",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for SuiteName {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.id() == s)
            .ok_or_else(|| LabError::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `"<="` or `">="`.
    pub relation: &'static str,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, relation: "<=", limit, pass: value <= limit }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, relation: ">=", limit, pass: value >= limit }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteOptions {
    pub dim: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { dim: 1, seed: 1 }
    }
}

pub fn run_suite(name: SuiteName, opts: &SuiteOptions) -> Result<SuiteReport> {
    if opts.dim != 1 && opts.dim != 2 {
        return Err(LabError::InvalidParameter("dimension must be 1 or 2".into()));
    }
    let checks = match name {
        SuiteName::Partitions => partition_checks(opts)?,
        SuiteName::Norms => norm_checks(opts)?,
        SuiteName::Lemma22 => lemma22_checks(opts)?,
        SuiteName::Decomposition => decomposition_checks(opts)?,
        SuiteName::Tau => tau_checks(opts)?,
        SuiteName::Embeddings => embedding_checks(opts)?,
        SuiteName::IndicesGolden => indices_checks(opts)?,
    };
    let passed = checks.iter().all(|c| c.pass);
    Ok(SuiteReport { suite: name, checks, passed })
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-radius..radius)).collect()
}

/// `max |Σ_k ψ_k - 1|` over random points with `|ξ| ≤ 2^12`.
pub fn lp_sum_error(family: &LpFamily, dim: usize, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = family.bands_needed(2f64.powi(12) * 2f64.sqrt()) + 1;
    (0..samples)
        .map(|i| {
            let scale = 2f64.powf(rng.gen_range(-3.0..12.0));
            let mut xi = random_point(&mut rng, dim, scale);
            if i == 0 {
                xi.iter_mut().for_each(|v| *v = 0.0);
            }
            let total: f64 = (0..=top).map(|k| family.member(k, &xi)).sum();
            (total - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// `max |Σ_ν φ(ξ - ν) - 1|` for the exact uniform partition.
pub fn uniform_sum_error(dim: usize, samples: usize, seed: u64) -> f64 {
    let phi = UniformFamily::new(1.0, true).expect("valid radius");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| (phi.translate_sum(&random_point(&mut rng, dim, 50.0)) - 1.0).abs())
        .fold(0.0, f64::max)
}

/// `max |Σ_ℓ ⟨ℓ⟩^{-2L} ⟨ξ⟩^{2L} χ_ℓ(ξ) - 1|`.
pub fn resolution_error(l: u32, dim: usize, samples: usize, seed: u64) -> Result<f64> {
    let fam = PsFamily::new(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples)
        .map(|_| (fam.resolution_sum(&random_point(&mut rng, dim, 40.0)) - 1.0).abs())
        .fold(0.0, f64::max))
}

/// `max |Φ_0 + Φ_1 + Φ_2 - 1|` off the origin.
pub fn cone_sum_error(dim: usize, samples: usize, seed: u64) -> Result<f64> {
    let cone = ConeFamily::new(dim, 0.25)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples)
        .map(|_| {
            let scale = 2f64.powf(rng.gen_range(-6.0..8.0));
            let a = random_point(&mut rng, dim, scale);
            let b = random_point(&mut rng, dim, scale);
            (cone.pieces(&a, &b).iter().sum::<f64>() - 1.0).abs()
        })
        .fold(0.0, f64::max))
}

fn partition_checks(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let (d, seed) = (opts.dim, opts.seed);
    let mut out = vec![
        Check::at_most("lp standard sum", lp_sum_error(&LpFamily::standard(), d, 4000, seed), 1e-12),
        Check::at_most("lp sharp sum", lp_sum_error(&LpFamily::sharp(), d, 4000, seed), 1e-12),
        Check::at_most("uniform translate sum", uniform_sum_error(d, 4000, seed), 1e-12),
    ];
    for l in [2, 4] {
        out.push(Check::at_most(format!("chi resolution L={l}"), resolution_error(l, d, 2000, seed)?, 1e-10));
    }
    out.push(Check::at_most("cone pieces sum", cone_sum_error(d, 4000, seed)?, 1e-9));
    out.push(Check::at_least("cone cover margin", ConeFamily::new(d, 0.25)?.cover_margin(2000), 0.0));
    Ok(out)
}

/// Band-limited function with random spectrum on `|k|_∞ ≤ radius` and random polynomial decay.
pub fn random_band_limited(grid: &TorusGrid, radius: i64, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let d = grid.dim();
    let decay = rng.gen_range(0.0..2.0);
    let span = if d == 1 { 0 } else { radius };
    let mut entries = Vec::new();
    for u in -radius..=radius {
        for v in -span..=span {
            let k: Freq = [u, v];
            let r = ((u * u + v * v) as f64).sqrt();
            let amp = (1.0 + r).powf(-decay);
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
            entries.push((k, c));
        }
    }
    GridFunction::synthesize(*grid, &entries)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn norm_checks(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let d = opts.dim;
    let grid = if d == 1 { TorusGrid::new(1, 256, 64)? } else { TorusGrid::new(2, 64, 16)? };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let one: Exponent = Exponent::from_int(1)?;
    let two: Exponent = Exponent::from_int(2)?;
    let mut parseval = 0.0f64;
    let mut sobolev0 = 0.0f64;
    let mut holder = f64::NEG_INFINITY;
    let mut single_band = 0.0f64;
    for _ in 0..20 {
        let f = random_band_limited(&grid, 12, &mut rng)?;
        let g = random_band_limited(&grid, 12, &mut rng)?;
        let coef: f64 = f.spectrum().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        parseval = parseval.max(rel(lebesgue_norm(&f, two).value, (2.0 * PI).powf(d as f64 / 2.0) * coef));
        sobolev0 = sobolev0.max(rel(sobolev_norm(&f, one, 0.0).value, lebesgue_norm(&f, one).value));
        let fg = lebesgue_norm(&f.product(&g)?, one).value;
        holder = holder.max(fg / (lebesgue_norm(&f, two).value * lebesgue_norm(&g, two).value));
        // Spectrum inside the plateau of the sharp band k = 4.
        let k = 4u32;
        let entries: Vec<(Freq, Complex64)> = grid
            .freqs()
            .filter(|q| {
                let r = ((q[0] * q[0] + q[1] * q[1]) as f64).sqrt();
                r >= 2f64.powf(k as f64 - 0.25) && r <= 2f64.powf(k as f64 + 0.25)
            })
            .map(|q| (q, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let band = GridFunction::synthesize(grid, &entries)?;
        for p in [one, two] {
            let s = rng.gen_range(-1.0..1.0);
            let h = local_hardy_norm(&band, p, s, &LpFamily::sharp())?.value;
            single_band = single_band.max(rel(h, 2f64.powf(k as f64 * s) * lebesgue_norm(&band, p).value));
        }
    }
    let constant = GridFunction::synthesize(grid, &[([0, 0], Complex64::new(1.0, 0.0))])?;
    let mode = GridFunction::synthesize(grid, &[([5, 0], Complex64::new(2.0, 0.0))])?;
    let phi = UniformFamily::new(1.0, true)?;
    let amalgam = wiener_amalgam_norm(&mode, one, two, 1.0, &phi).value;
    let amalgam_want = 26f64.sqrt() * 2.0 * (2.0 * PI).powi(d as i32);
    Ok(vec![
        Check::at_most("parseval", parseval, 1e-12),
        Check::at_most("sobolev s=0 is lebesgue", sobolev0, 1e-14),
        Check::at_most("holder L2 x L2 -> L1", holder, 1.0 + 1e-12),
        Check::at_most("single sharp band hardy", single_band, 1e-10),
        Check::at_most("bmo of constant", (bmo_norm(&constant, 0.0).value - 1.0).abs(), 1e-12),
        Check::at_most("single mode amalgam", rel(amalgam, amalgam_want), 1e-10),
    ])
}

/// Bounded-regime and control trends per weight kind.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma22Row {
    pub kind: VKind,
    pub bounded: GrowthReport,
    pub control: GrowthReport,
}

/// `a_1 = a_2 = -n/4` against the control `a_1 = a_2 = -n/8`.
pub fn lemma22_trends(dim: usize, seed: u64) -> Result<Vec<Lemma22Row>> {
    let radii: &[usize] = if dim == 1 { &[8, 16, 32, 64] } else { &[4, 8, 12, 16] };
    let n = dim as f64;
    VKind::ALL
        .into_iter()
        .map(|kind| {
            let bounded = growth_trend(dim, kind, -n / 4.0, -n / 4.0, radii, 8, &Distribution::ALL, seed)?;
            let control = growth_trend(dim, kind, -n / 8.0, -n / 8.0, radii, 8, &[Distribution::Indicator], seed)?;
            Ok(Lemma22Row { kind, bounded, control })
        })
        .collect()
}

fn lemma22_checks(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for row in lemma22_trends(opts.dim, opts.seed)? {
        let k = format!("{:?}", row.kind);
        out.push(Check::at_most(format!("{k} bounded spread"), row.bounded.spread, 2.0));
        out.push(Check::at_most(format!("{k} bounded slope"), row.bounded.slope, 0.05));
        out.push(Check::at_least(format!("{k} control slope"), row.control.slope, 0.15));
    }
    Ok(out)
}

/// `⟨ξ_1+ξ_2⟩^{m_1} ⟨ξ_2⟩^{m_2} (1 + cos(x)/2)` in one dimension.
pub fn star1_test_symbol(m1: f64, m2: f64) -> Symbol {
    let base = move |a: &[f64], b: &[f64]| -> Complex64 {
        let s = [a[0] + b[0]];
        Complex64::new(bracket(&s).powf(m1) * bracket(b).powf(m2), 0.0)
    };
    let half: Amplitude = Arc::new(move |a, b| base(a, b) * 0.25);
    let modes: Vec<(Freq, Amplitude)> = vec![([0, 0], Arc::new(base)), ([1, 0], half.clone()), ([-1, 0], half)];
    Symbol::modulated(1, modes).with_param("m1", m1).with_param("m2", m2)
}

/// Reconstruction sup-errors of the star1 test symbol at `Ν = ((5), (-2))` for each `Κ_max`.
pub fn series_reconstruction(kmaxes: &[i64]) -> Result<Vec<(i64, f64)>> {
    let sigma = star1_test_symbol(-0.5, -0.5);
    let mut opts = SeriesOptions::for_dim(1);
    opts.kmax = kmaxes.iter().copied().max().unwrap_or(8);
    let series = fourier_series_expand(&sigma, [5, 0], [-2, 0], &opts)?;
    let xs = [[0.0, 0.0], [1.3, 0.0], [4.0, 0.0]];
    Ok(kmaxes.iter().map(|&k| (k, series.reconstruction_error(&sigma, k, 21, &xs))).collect())
}

/// `q_bound_check` of the star1 test symbol over base points at three dyadic scales.
pub fn series_q_bound() -> Result<crate::decomposition::QBoundReport> {
    let sigma = star1_test_symbol(-0.5, -0.5);
    let mut nus = Vec::new();
    for scale in [4i64, 16, 64] {
        nus.push(([scale, 0], [scale, 0]));
        nus.push(([scale, 0], [-scale / 2, 0]));
        nus.push(([-scale / 2, 0], [scale, 0]));
    }
    q_bound_check(&sigma, -0.5, -0.5, &nus, &SeriesOptions::for_dim(1))
}

fn decomposition_checks(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if opts.dim == 1 {
        let errs = series_reconstruction(&[2, 4, 8, 16])?;
        let monotone = errs.windows(2).all(|w| w[1].1 <= w[0].1);
        out.push(Check::at_least("reconstruction monotone in kmax", if monotone { 1.0 } else { 0.0 }, 1.0));
        let at8 = errs.iter().find(|e| e.0 == 8).map(|e| e.1).unwrap_or(f64::INFINITY);
        out.push(Check::at_most("reconstruction error at kmax 8", at8, 1e-3));
        out.push(Check::at_most("q bound spread", series_q_bound()?.spread, 8.0));
        let sigma = star1_test_symbol(-0.5, -0.5);
        let mut so = SeriesOptions::for_dim(1);
        so.kmax = 4;
        let series = fourier_series_expand(&sigma, [3, 0], [1, 0], &so)?;
        out.push(Check::at_most("P/Q identity", series.pq_identity_error(&[[0.0; 2], [2.0, 0.0]]), 1e-10));
    }
    let d = opts.dim;
    let block = make_lattice_block(d, 0.0, lattice_cutoff()?)?;
    let tau = tau_symbol(&block, 1.0, 1.0, -1.0)?;
    let spec = ClassSpec::General { s1: 1.0, s2: 1.0, s: -1.0, m: 0.0 };
    let cone = ConeFamily::new(d, 0.25)?;
    let split = cone_split(&tau, spec, 0.5, 0.5, cone)?;
    out.push(Check::at_most("cone split sum", split.sum_error(&tau, 10_000, 40.0, opts.seed), 1e-10));
    let geo = support_geometry(&cone, 20_000, opts.seed);
    out.push(Check::at_least("cone support geometry", if geo.holds { 1.0 } else { 0.0 }, 1.0));
    Ok(out)
}

/// `s ↦ ⟨ξ⟩^s` as a multiplier.
fn bracket_multiplier(s: f64) -> Multiplier {
    Arc::new(move |xi: &[f64]| Complex64::new(bracket(xi).powf(s), 0.0))
}

/// Symbols used by the `τ` identity draws; index 4 is `x`-dependent.
pub fn tau_test_symbol(which: usize, rng: &mut ChaCha8Rng) -> Result<Symbol> {
    let m = rng.gen_range(-1.0..0.5);
    Ok(match which % 6 {
        0 => Symbol::bracket_power(1, m),
        1 => Symbol::separable(1, bracket_multiplier(m), bracket_multiplier(rng.gen_range(-1.0..0.5))),
        2 => Symbol::of_sum(1, bracket_multiplier(m)),
        3 => {
            let c = rng.gen_range(0.05..0.2);
            Symbol::bilinear(
                1,
                Arc::new(move |a: &[f64], b: &[f64]| Complex64::from_polar(bracket(&[a[0] - b[0]]).powf(m), c * a[0] * b[0])),
            )
        }
        4 => {
            let amp = move |w: f64| -> Amplitude {
                Arc::new(move |a: &[f64], b: &[f64]| Complex64::new(w * bracket(&[a[0], b[0]]).powf(m), 0.3 * w * a[0] / (1.0 + b[0].abs())))
            };
            Symbol::modulated(1, vec![([0, 0], amp(1.0)), ([1, 0], amp(0.5)), ([-2, 0], amp(0.25))])
        }
        _ => {
            let two = Exponent::from_int(2)?;
            let params = FamilyParams::new(1, 3, m, [0.9, 0.9], [two, two], 0.05, CoefficientSource::PhaseCancel)?;
            make_antidiag_family(&params, 16)?
        }
    })
}

/// Relative sup-error of `T_τ(f_1,f_2)` against `⟨D⟩^s T_σ(⟨D⟩^{-s_1} f_1, ⟨D⟩^{-s_2} f_2)`.
pub fn tau_identity_errors(draws: usize, seed: u64) -> Result<Vec<(String, f64)>> {
    let grid = TorusGrid::new(1, 64, 16)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..draws {
        let sigma = tau_test_symbol(i, &mut rng)?;
        let (s1, s2, s) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let f1 = random_band_limited(&grid, 9, &mut rng)?;
        let f2 = random_band_limited(&grid, 9, &mut rng)?;
        let tau = tau_symbol(&sigma, s1, s2, s)?;
        let lhs = apply_bilinear(&tau, &f1, &f2)?;
        let rhs = apply_bilinear(&sigma, &f1.bessel_potential(-s1), &f2.bessel_potential(-s2))?.bessel_potential(s);
        let scale = rhs.samples().iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        out.push((sigma.name().to_string(), lhs.max_abs_diff(&rhs) / scale));
    }
    Ok(out)
}

/// Bumps supported in `[-1/10, 1/10]^n`, so neighbouring lattice bumps never overlap.
fn lattice_cutoff() -> Result<UniformFamily> {
    UniformFamily::new(0.1, false)
}

/// Class constants of `τ` of the lattice block for the matching class and for `s` lowered by `1/2`.
pub fn tau_sharpness(seed: u64) -> Result<(ClassReport, ClassReport)> {
    let (s1, s2, s, m) = (0.5, 0.25, 0.5, -0.5);
    let block = make_lattice_block(1, m, lattice_cutoff()?)?;
    let tau = tau_symbol(&block, s1, s2, s)?;
    let opts = ClassOptions { seed, ..ClassOptions::default() };
    let matched = class_constant(&tau, ClassSpec::General { s1, s2, s, m }, &opts)?;
    let lowered = class_constant(&tau, ClassSpec::General { s1, s2, s: s - 0.5, m }, &opts)?;
    Ok((matched, lowered))
}

fn tau_checks(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let worst = tau_identity_errors(20, opts.seed)?.into_iter().map(|e| e.1).fold(0.0, f64::max);
    let (matched, lowered) = tau_sharpness(opts.seed)?;
    Ok(vec![
        Check::at_most("tau identity", worst, 1e-8),
        Check::at_most("tau class spread", matched.spread, 4.0),
        Check::at_least("tau lowered s growth", lowered.growth, 2.0),
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingStat {
    pub which: Embedding,
    pub p: Exponent,
    /// Max ratio over the first half of the sample.
    pub max_half: f64,
    pub max_full: f64,
    /// `max_full / max_half - 1`.
    pub change: f64,
}

/// Max embedding ratios over `count` random band-limited functions, and over the first half.
pub fn embedding_stability(count: usize, seed: u64) -> Result<Vec<EmbeddingStat>> {
    let grid = TorusGrid::new(1, 128, 32)?;
    let lp = LpFamily::standard();
    let uniform = UniformFamily::new(1.0, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Exponent::from_int(1)?;
    let two = Exponent::from_int(2)?;
    let cases = [
        (Embedding::AmalgamToHardy, one),
        (Embedding::HardyToAmalgam, one),
        (Embedding::AmalgamToHardy, two),
        (Embedding::HardyToAmalgam, two),
        (Embedding::AmalgamToBmo, Exponent::INFINITY),
        (Embedding::BmoToAmalgam, Exponent::INFINITY),
    ];
    let mut ratios = vec![Vec::with_capacity(count); cases.len()];
    for _ in 0..count {
        let radius = rng.gen_range(1..=32);
        let f = random_band_limited(&grid, radius, &mut rng)?;
        for (slot, &(which, p)) in ratios.iter_mut().zip(&cases) {
            slot.push(verify_embedding(&f, which, p, &lp, &uniform)?.ratio);
        }
    }
    Ok(cases
        .iter()
        .zip(ratios)
        .map(|(&(which, p), r)| {
            let max_half = r[..count / 2].iter().copied().fold(0.0, f64::max);
            let max_full = r.iter().copied().fold(0.0, f64::max);
            EmbeddingStat { which, p, max_half, max_full, change: max_full / max_half - 1.0 }
        })
        .collect())
}

fn embedding_checks(opts: &SuiteOptions) -> Result<Vec<Check>> {
    Ok(embedding_stability(200, opts.seed)?
        .into_iter()
        .flat_map(|e| {
            let name = format!("{:?} p={}", e.which, e.p);
            [
                Check::at_most(format!("{name} max ratio finite"), if e.max_full.is_finite() { 0.0 } else { 1.0 }, 0.0),
                Check::at_most(format!("{name} max change on doubling"), e.change, 0.25),
            ]
        })
        .collect())
}

fn random_exponent(rng: &mut ChaCha8Rng) -> Exponent {
    let recips = [Q::new(0, 1), Q::new(1, 4), Q::new(1, 3), Q::new(1, 2), Q::new(2, 3), Q::new(1, 1), Q::new(3, 2), Q::new(2, 1)];
    Exponent::from_recip(recips[rng.gen_range(0..recips.len())]).expect("valid reciprocal")
}

fn random_quarter(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Q {
    Q::new(rng.gen_range(lo..=hi), 4)
}

pub fn random_tuple(rng: &mut ChaCha8Rng) -> IndexTuple {
    IndexTuple::new(
        rng.gen_range(1..=3),
        random_exponent(rng),
        random_exponent(rng),
        random_exponent(rng),
        random_quarter(rng, -8, 8),
        random_quarter(rng, -8, 8),
        random_quarter(rng, -8, 8),
        random_quarter(rng, -16, 8),
    )
    .expect("positive dimension")
}

/// Tuples where a sufficient condition holds while a necessary one fails.
pub fn classify_conflicts(count: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .filter(|_| {
            let t = random_tuple(&mut rng);
            t.sufficiency_check().verdict != Sufficiency::Fails && !t.necessity_check().consistent
        })
        .count()
}

/// Largest mismatch of `(p_j, s_j, p, s)` after interpolating the endpoints of the plan.
pub fn interpolation_mismatches(count: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let recips = [Q::new(1, 1), Q::new(5, 4), Q::new(3, 2), Q::new(2, 1), Q::new(3, 1)];
    let mut bad = 0;
    let mut tried = 0;
    while tried < count {
        let mut t = random_tuple(&mut rng);
        t.p1 = Exponent::from_recip(recips[rng.gen_range(0..recips.len())])?;
        t.p2 = Exponent::from_recip(recips[rng.gen_range(0..recips.len())])?;
        let Ok(plan) = quasi_banach_plan(&t) else { continue };
        tried += 1;
        let back = interpolate(&plan.first, &plan.second, plan.theta)?;
        if (back.p1, back.p2, back.p, back.s1, back.s2, back.s) != (t.p1, t.p2, t.p, t.s1, t.s2, t.s) {
            bad += 1;
        }
    }
    Ok(bad)
}

fn indices_checks(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let two = Exponent::from_int(2)?;
    let mut out = Vec::new();
    for n in 1..=3u32 {
        let t = IndexTuple::plain(n, two, two, two, Q::from_integer(0))?;
        let err = (t.m_critical() - Q::new(-(n as i64), 2)).abs();
        out.push(Check::at_most(format!("m_c(2,2,2) = -n/2 at n={n}"), crate::indices::rational_to_f64(err), 0.0));
    }
    let inf = Exponent::INFINITY;
    let t = IndexTuple::plain(3, inf, inf, inf, Q::from_integer(0))?;
    out.push(Check::at_most("m_c(inf,inf,inf) = -n at n=3", crate::indices::rational_to_f64((t.m_critical() + 3).abs()), 0.0));
    out.push(Check::at_most("interpolation reproduces (p_j, s_j)", interpolation_mismatches(500, opts.seed)? as f64, 0.0));
    out.push(Check::at_most("classify conflicts", classify_conflicts(100_000, opts.seed) as f64, 0.0));
    Ok(out)
}
