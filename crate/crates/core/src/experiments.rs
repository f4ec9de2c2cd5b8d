//! Growth experiments for the sharpness families, log-linear fits and record output.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::indices::{parse_rational, rational_to_f64, Exponent, IndexTuple, Q};
use crate::operator::apply_bilinear;
use crate::partitions::LpFamily;
use crate::spaces::{bmo_norm, local_hardy_norm_of_spectrum, sobolev_norm};
use crate::symbols::{
    antidiagonal_constant, diagonal_coefficients, make_antidiag_family, make_cone_dyadic, make_diag_family,
    make_product_family, make_wainger, product_khintchine_proxy, CoefficientSource, FamilyParams, RademacherSigns,
    Shell, Symbol,
};
use crate::torus::{GridFunction, TorusGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Diag,
    Antidiag,
    Product,
    ConeDyadic,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Diag, Family::Antidiag, Family::Product, Family::ConeDyadic];

    pub fn id(&self) -> &'static str {
        match self {
            Family::Diag => "diag",
            Family::Antidiag => "antidiag",
            Family::Product => "product",
            Family::ConeDyadic => "cone_dyadic",
        }
    }

    /// Families averaged over Rademacher sign draws.
    pub fn randomized(&self) -> bool {
        matches!(self, Family::Diag | Family::Product)
    }

    pub fn default_tolerance(&self) -> f64 {
        if self.randomized() {
            0.2
        } else {
            0.1
        }
    }

    /// The order at which the family's ratio stops growing: predicted slope is `m - bound`.
    pub fn order_bound(&self, t: &IndexTuple) -> Q {
        match self {
            Family::Diag => t.order_bound(),
            Family::Antidiag => t.paired_input_bound(),
            Family::Product => t.single_input_bound(2),
            Family::ConeDyadic => t.nq() * (t.p.recip() - t.p1.recip() - t.p2.recip()) + t.s1 + t.s2 - t.s,
        }
    }

    pub fn predicted_formula(&self) -> &'static str {
        match self {
            Family::Diag => "m - (min{n/p,n/2} - max{n/p1,n/2} - max{n/p2,n/2} + s1 + s2 - s)",
            Family::Antidiag => "m - (n - max{n/p1,n/2} - max{n/p2,n/2} + s1 + s2)",
            Family::Product => "m - (min{n/p,n/2} - max{n/p2,n/2} + s2 - s)",
            Family::ConeDyadic => "m + n/p1 + n/p2 - n/p + s - s1 - s2",
        }
    }

    /// Exact predicted slope of `log2(ratio)` per unit level.
    pub fn predicted_slope(&self, t: &IndexTuple) -> Q {
        t.m - self.order_bound(t)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diag" => Ok(Family::Diag),
            "antidiag" => Ok(Family::Antidiag),
            "product" => Ok(Family::Product),
            "cone_dyadic" | "cone-dyadic" | "cone" => Ok(Family::ConeDyadic),
            other => Err(LabError::Config(format!("unknown family {other:?}"))),
        }
    }
}

/// A rational given in JSON as a string (`"-1/2"`, `"0.25"`) or a number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Number {
    pub fn rational(&self) -> Result<Q> {
        match self {
            Number::Text(t) => parse_rational(t),
            Number::Int(i) => Ok(Q::from_integer(*i)),
            Number::Float(x) => parse_rational(&x.to_string()),
        }
    }

    pub fn exponent(&self) -> Result<Exponent> {
        match self {
            Number::Text(t) => t.parse(),
            _ => Exponent::finite(self.rational()?),
        }
    }
}

impl From<&str> for Number {
    fn from(s: &str) -> Self {
        Number::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub n: usize,
    #[serde(rename = "N")]
    pub size: usize,
    #[serde(rename = "Xi")]
    pub band_limit: usize,
}

impl GridConfig {
    pub fn grid(&self) -> Result<TorusGrid> {
        TorusGrid::new(self.n, self.size, self.band_limit)
    }
}

fn default_eps() -> f64 {
    0.05
}

fn default_trials() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub kind: Family,
    pub levels: Vec<u32>,
    /// Wainger exponents; `None` picks 0.9 for `p_j ≥ 2` and 0.1 otherwise.
    #[serde(default)]
    pub a1: Option<f64>,
    #[serde(default)]
    pub a2: Option<f64>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexConfig {
    pub p1: Number,
    pub p2: Number,
    pub p: Number,
    #[serde(default)]
    pub s1: Option<Number>,
    #[serde(default)]
    pub s2: Option<Number>,
    #[serde(default)]
    pub s: Option<Number>,
    /// Absolute order.
    #[serde(default)]
    pub m: Option<Number>,
    /// Order relative to the family's bound; used when `m` is absent.
    #[serde(default)]
    pub m_offset: Option<Number>,
}

fn default_discrimination() -> f64 {
    0.25
}

fn default_khintchine() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed `|slope - predicted|`; the family default when absent.
    #[serde(default)]
    pub slope: Option<f64>,
    /// Required slope gap between `bound + 1/2` and `bound`.
    #[serde(default = "default_discrimination")]
    pub discrimination: f64,
    /// Allowed factor between the trial mean of `ratio²` and its Khintchine closed form.
    #[serde(default = "default_khintchine")]
    pub khintchine_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { slope: None, discrimination: default_discrimination(), khintchine_factor: default_khintchine() }
    }
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub grid: GridConfig,
    pub family: FamilyConfig,
    pub indices: IndexConfig,
    /// Trial seeds; when fewer than `trials` are given the rest derive from the first.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Default configuration of each family at `m = bound + 1/2`.
    pub fn default_for(family: Family) -> Self {
        let (grid, levels) = match family {
            // D_ℓ is empty in one dimension.
            Family::Diag => (GridConfig { n: 2, size: 2048, band_limit: 512 }, (4..=8).collect()),
            Family::Antidiag | Family::Product => (GridConfig { n: 1, size: 1 << 14, band_limit: 1 << 12 }, (4..=8).collect()),
            // ψ̃_2 has no lattice points below level 7.
            Family::ConeDyadic => (GridConfig { n: 1, size: 1 << 16, band_limit: 1 << 14 }, (9..=13).collect()),
        };
        let (m, m_offset) = match family {
            Family::ConeDyadic => (Some(Number::from("-1/2")), None),
            _ => (None, Some(Number::from("1/2"))),
        };
        Self {
            grid,
            family: FamilyConfig { kind: family, levels, a1: None, a2: None, eps: default_eps(), trials: if family.randomized() { 64 } else { 1 } },
            indices: IndexConfig {
                p1: Number::from("2"),
                p2: Number::from("2"),
                p: Number::from("1"),
                s1: None,
                s2: None,
                s: None,
                m,
                m_offset,
            },
            seeds: default_seeds(),
            tolerances: Tolerances::default(),
        }
    }

    /// Copy with the order set to `bound + offset`.
    pub fn with_offset(&self, offset: Q) -> Self {
        let mut c = self.clone();
        c.indices.m = None;
        c.indices.m_offset = Some(Number::Text(offset.to_string()));
        c
    }

    pub fn tuple(&self) -> Result<IndexTuple> {
        let ix = &self.indices;
        let opt = |v: &Option<Number>| -> Result<Q> { v.as_ref().map_or(Ok(Q::from_integer(0)), |n| n.rational()) };
        let t = IndexTuple::new(
            self.grid.n as u32,
            ix.p1.exponent()?,
            ix.p2.exponent()?,
            ix.p.exponent()?,
            opt(&ix.s1)?,
            opt(&ix.s2)?,
            opt(&ix.s)?,
            Q::from_integer(0),
        )?;
        let m = match (&ix.m, &ix.m_offset) {
            (Some(m), _) => m.rational()?,
            (None, Some(off)) => self.family.kind.order_bound(&t) + off.rational()?,
            (None, None) => return Err(LabError::Config("indices need m or m_offset".into())),
        };
        Ok(t.with_order(m))
    }

    pub fn trial_seeds(&self) -> Vec<u64> {
        let count = if self.family.kind.randomized() { self.family.trials } else { 1 };
        let base = self.seeds.first().copied().unwrap_or(0);
        (0..count)
            .map(|i| match self.seeds.get(i) {
                Some(&s) => s,
                None => base.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64),
            })
            .collect()
    }

    /// `(a_1, a_2)`, defaulting by the side of 2 each `p_j` lies on.
    pub fn wainger_exponents(&self, t: &IndexTuple) -> [f64; 2] {
        let pick = |a: Option<f64>, p: Exponent| a.unwrap_or(if p.recip() <= Q::new(1, 2) { 0.9 } else { 0.1 });
        [pick(self.family.a1, t.p1), pick(self.family.a2, t.p2)]
    }

    pub fn slope_tolerance(&self) -> f64 {
        self.tolerances.slope.unwrap_or_else(|| self.family.kind.default_tolerance())
    }
}

/// One `(ℓ, trial)` measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub family: Family,
    pub tuple: IndexTuple,
    pub level: u32,
    pub seed: u64,
    /// `‖T(f_1, f_2)‖_{h^p_s}` (or `bmo_s` when `p = ∞`).
    pub norm_out: f64,
    /// `‖f_1‖_{L^{p_1}_{s_1}}`.
    pub norm_in1: f64,
    pub norm_in2: f64,
    pub ratio: f64,
    /// Seconds; not part of the CSV so that output stays reproducible.
    pub wall_time: f64,
}

fn output_norm(grid: &TorusGrid, spectrum: Vec<Complex64>, t: &IndexTuple) -> Result<f64> {
    let s = rational_to_f64(t.s);
    if t.p.is_infinite() {
        Ok(bmo_norm(&GridFunction::from_spectrum(*grid, spectrum)?, s).value)
    } else {
        Ok(local_hardy_norm_of_spectrum(grid, &spectrum, t.p, s, &LpFamily::sharp())?.value)
    }
}

/// Family symbol, both inputs and the sign keys of one level.
struct LevelSetup {
    symbol: Symbol,
    f1: GridFunction,
    f2: GridFunction,
    params: Option<FamilyParams>,
    shell: Option<Shell>,
}

fn family_params(cfg: &ExperimentConfig, t: &IndexTuple, level: u32) -> Result<FamilyParams> {
    FamilyParams::new(
        t.n as usize,
        level,
        rational_to_f64(t.m),
        cfg.wainger_exponents(t),
        [t.p1, t.p2],
        cfg.family.eps,
        CoefficientSource::PhaseCancel,
    )
}

fn setup_level(cfg: &ExperimentConfig, t: &IndexTuple, grid: &TorusGrid, level: u32) -> Result<LevelSetup> {
    let xi = grid.band_limit();
    let kind = cfg.family.kind;
    if kind == Family::ConeDyadic {
        let cone = make_cone_dyadic(grid.dim(), rational_to_f64(t.m), t.p1, t.p2, xi)?;
        return Ok(LevelSetup {
            f1: cone.input(1, grid, level)?,
            f2: cone.input(2, grid, level)?,
            symbol: cone.symbol,
            params: None,
            shell: None,
        });
    }
    let params = family_params(cfg, t, level)?;
    let f2 = make_wainger(params.a2, params.b2, level, grid)?;
    let (symbol, f1) = match kind {
        Family::Diag => (make_diag_family(&params, xi)?, make_wainger(params.a1, params.b1, level, grid)?),
        Family::Antidiag => (make_antidiag_family(&params, xi)?, make_wainger(params.a1, params.b1, level, grid)?),
        _ => (make_product_family(&params, xi)?, GridFunction::synthesize(*grid, &[([0, 0], Complex64::new(1.0, 0.0))])?),
    };
    let shell = kind.randomized().then(|| Shell::new(grid.dim(), level));
    Ok(LevelSetup { symbol, f1, f2, params: Some(params), shell })
}

/// Spectrum of `r(D) g` with seeded signs on the shell.
fn apply_signs(g: &GridFunction, signs: &RademacherSigns) -> Vec<Complex64> {
    let grid = *g.grid();
    g.spectrum()
        .iter()
        .enumerate()
        .map(|(i, c)| if c.norm() == 0.0 { *c } else { *c * signs.sign(grid.freq(i)) })
        .collect()
}

/// Records for every level and trial of the configured family.
///
/// Randomized families use `T_{σ·r(ξ_1+ξ_2)} = r(D) T_σ`: the operator is applied once with
/// phase-cancelling unit coefficients and each trial multiplies the output spectrum by signs.
pub fn run_growth(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    let grid = cfg.grid.grid()?;
    let t = cfg.tuple()?;
    let kind = cfg.family.kind;
    let seeds = cfg.trial_seeds();
    if kind.randomized() && seeds.len() < 16 {
        return Err(LabError::InvalidParameter(format!("{kind} needs at least 16 trials, got {}", seeds.len())));
    }
    let mut levels = cfg.family.levels.clone();
    levels.sort_unstable();
    levels.dedup();
    if levels.is_empty() {
        return Err(LabError::Config("no levels given".into()));
    }
    let (s1, s2) = (rational_to_f64(t.s1), rational_to_f64(t.s2));
    let mut records = Vec::new();
    for level in levels {
        let start = Instant::now();
        let setup = setup_level(cfg, &t, &grid, level)?;
        let in1 = sobolev_norm(&setup.f1, t.p1, s1).value;
        let in2 = sobolev_norm(&setup.f2, t.p2, s2).value;
        if !(in1 > 0.0 && in2 > 0.0) {
            return Err(LabError::Degenerate(format!("input norm vanishes at level {level}")));
        }
        let g = apply_bilinear(&setup.symbol, &setup.f1, &setup.f2)?;
        let shared = start.elapsed().as_secs_f64() / seeds.len() as f64;
        let mut push = |seed: u64, out: f64, secs: f64| {
            records.push(ExperimentRecord {
                family: kind,
                tuple: t,
                level,
                seed,
                norm_out: out,
                norm_in1: in1,
                norm_in2: in2,
                ratio: out / (in1 * in2),
                wall_time: shared + secs,
            })
        };
        match &setup.shell {
            Some(shell) => {
                for &seed in &seeds {
                    let tick = Instant::now();
                    let signs = RademacherSigns::new(seed, shell.points());
                    let out = output_norm(&grid, apply_signs(&g, &signs), &t)?;
                    push(seed, out, tick.elapsed().as_secs_f64());
                }
            }
            None => {
                let tick = Instant::now();
                let out = output_norm(&grid, g.spectrum().to_vec(), &t)?;
                push(seeds[0], out, tick.elapsed().as_secs_f64());
            }
        }
    }
    records.sort_by(|a, b| (a.level, a.seed).cmp(&(b.level, b.seed)));
    Ok(records)
}

/// Per-level aggregate of the records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStat {
    pub level: u32,
    pub trials: usize,
    /// `(mean ratio^p)^{1/p}` over trials (max when `p = ∞`).
    pub statistic: f64,
    pub max_ratio: f64,
    pub mean_square: f64,
}

pub fn level_statistics(records: &[ExperimentRecord], p: Exponent) -> Vec<LevelStat> {
    let mut groups: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for r in records {
        groups.entry(r.level).or_default().push(r.ratio);
    }
    groups
        .into_iter()
        .map(|(level, ratios)| {
            let k = ratios.len() as f64;
            let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
            let statistic = if p.is_infinite() {
                max_ratio
            } else {
                let pf = p.to_f64();
                (ratios.iter().map(|r| r.powf(pf)).sum::<f64>() / k).powf(1.0 / pf)
            };
            let mean_square = ratios.iter().map(|r| r * r).sum::<f64>() / k;
            LevelStat { level, trials: ratios.len(), statistic, max_ratio, mean_square }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    /// Base-2 exponent per unit level.
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of `log2` values.
    pub residual: f64,
    pub predicted: f64,
    pub tolerance: f64,
    pub verdict: bool,
    pub points: usize,
}

/// Least-squares line through `(ℓ, log2 y)`.
pub fn fit_points(points: &[(f64, f64)], predicted: f64, tolerance: f64) -> Result<FitResult> {
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(LabError::InsufficientPoints(format!("need 3 distinct levels, got {}", xs.len())));
    }
    if points.iter().any(|p| !(p.1 > 0.0) || !p.1.is_finite()) {
        return Err(LabError::Degenerate("fit values must be positive and finite".into()));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1.log2()).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1.log2() - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (points.iter().map(|p| (p.1.log2() - intercept - slope * p.0).powi(2)).sum::<f64>() / k).sqrt();
    Ok(FitResult {
        slope,
        intercept,
        residual,
        predicted,
        tolerance,
        verdict: (slope - predicted).abs() <= tolerance,
        points: points.len(),
    })
}

/// Fit of the per-level statistic of `records`.
pub fn fit_exponent(records: &[ExperimentRecord], p: Exponent, predicted: f64, tolerance: f64) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = level_statistics(records, p).iter().map(|s| (s.level as f64, s.statistic)).collect();
    fit_points(&pts, predicted, tolerance)
}

/// `2^{ℓs} (2π)^{n/p} (Σ_k |d_k|²)^{1/2} / (‖f_1‖ ‖f_2‖)`: the Khintchine value of the
/// sign-averaged ratio for the diagonal and product families.
pub fn khintchine_proxy(family: Family, params: &FamilyParams, t: &IndexTuple, in1: f64, in2: f64) -> Result<f64> {
    let l2 = match family {
        Family::Diag => diagonal_coefficients(params).iter().map(|(_, d)| d * d).sum::<f64>().sqrt(),
        Family::Product => product_khintchine_proxy(params),
        other => return Err(LabError::InvalidParameter(format!("{other} is not randomized"))),
    };
    let n = t.n as f64;
    let level = params.level as f64;
    let vol = (2.0 * PI).powf(n * rational_to_f64(t.p.recip()));
    Ok(2f64.powf(level * rational_to_f64(t.s)) * vol * l2 / (in1 * in2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KhintchineLevel {
    pub level: u32,
    pub mean_square: f64,
    pub closed_form_square: f64,
    /// `mean_square / closed_form_square`.
    pub factor: f64,
}

/// Trial mean of `ratio²` against the squared Khintchine value, per level.
pub fn khintchine_comparison(cfg: &ExperimentConfig, records: &[ExperimentRecord]) -> Result<Vec<KhintchineLevel>> {
    let t = cfg.tuple()?;
    let mut out = Vec::new();
    for stat in level_statistics(records, t.p) {
        let rec = records.iter().find(|r| r.level == stat.level).expect("level present");
        let params = family_params(cfg, &t, stat.level)?;
        let proxy = khintchine_proxy(cfg.family.kind, &params, &t, rec.norm_in1, rec.norm_in2)?;
        let closed = proxy * proxy;
        out.push(KhintchineLevel { level: stat.level, mean_square: stat.mean_square, closed_form_square: closed, factor: stat.mean_square / closed });
    }
    Ok(out)
}

/// Output coefficient at `0` of the anti-diagonal family and its closed form, per level.
pub fn antidiag_closed_form(cfg: &ExperimentConfig) -> Result<Vec<(u32, Complex64, f64)>> {
    if cfg.family.kind != Family::Antidiag {
        return Err(LabError::Config("closed form applies to the antidiag family".into()));
    }
    let grid = cfg.grid.grid()?;
    let t = cfg.tuple()?;
    let mut out = Vec::new();
    for &level in &cfg.family.levels {
        let setup = setup_level(cfg, &t, &grid, level)?;
        let g = apply_bilinear(&setup.symbol, &setup.f1, &setup.f2)?;
        let params = setup.params.expect("family params");
        out.push((level, g.coefficient([0, 0]), antidiagonal_constant(&params)));
    }
    Ok(out)
}

/// Slope of `log2 (Σ_{k∈Λ_ℓ} d_k²)^{1/2}` against `m - b_1 - b_2 + 3n/2`.
#[allow(clippy::too_many_arguments)]
pub fn dk_law(dim: usize, levels: &[u32], m: f64, a: [f64; 2], p: [Exponent; 2], eps: f64, tolerance: f64) -> Result<FitResult> {
    let mut pts = Vec::new();
    let mut predicted = 0.0;
    for &level in levels {
        let params = FamilyParams::new(dim, level, m, a, p, eps, CoefficientSource::Unit)?;
        predicted = m - params.b1 - params.b2 + 1.5 * dim as f64;
        let l2 = diagonal_coefficients(&params).iter().map(|(_, d)| d * d).sum::<f64>().sqrt();
        pts.push((level as f64, l2));
    }
    fit_points(&pts, predicted, tolerance)
}

/// Everything one configured experiment produces.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutput {
    pub family: Family,
    pub tuple: IndexTuple,
    pub predicted_formula: &'static str,
    pub predicted_exact: String,
    pub levels: Vec<LevelStat>,
    pub fit: FitResult,
    #[serde(skip)]
    pub records: Vec<ExperimentRecord>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let t = cfg.tuple()?;
    let kind = cfg.family.kind;
    let records = run_growth(cfg)?;
    let predicted = kind.predicted_slope(&t);
    let fit = fit_exponent(&records, t.p, rational_to_f64(predicted), cfg.slope_tolerance())?;
    Ok(ExperimentOutput {
        family: kind,
        tuple: t,
        predicted_formula: kind.predicted_formula(),
        predicted_exact: predicted.to_string(),
        levels: level_statistics(&records, t.p),
        fit,
        records,
    })
}

/// `{slope, predicted, residual, verdict}` plus the self-describing fields.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub family: Family,
    pub tuple: IndexTuple,
    pub predicted_formula: &'static str,
    pub predicted_exact: String,
    pub slope: f64,
    pub predicted: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: bool,
    pub levels: Vec<LevelStat>,
}

impl ExperimentOutput {
    pub fn summary(&self) -> Summary {
        Summary {
            family: self.family,
            tuple: self.tuple,
            predicted_formula: self.predicted_formula,
            predicted_exact: self.predicted_exact.clone(),
            slope: self.fit.slope,
            predicted: self.fit.predicted,
            residual: self.fit.residual,
            tolerance: self.fit.tolerance,
            verdict: self.fit.verdict,
            levels: self.levels.clone(),
        }
    }
}

pub const CSV_HEADER: [&str; 16] =
    ["family", "n", "N", "l", "seed", "p1", "p2", "p", "s1", "s2", "s", "m", "norm_out", "norm_in1", "norm_in2", "ratio"];

/// CSV text of `records` on a grid of side `size`.
pub fn records_to_csv(records: &[ExperimentRecord], size: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| LabError::Config(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in records {
        let t = &r.tuple;
        w.write_record([
            r.family.id().to_string(),
            t.n.to_string(),
            size.to_string(),
            r.level.to_string(),
            r.seed.to_string(),
            t.p1.to_string(),
            t.p2.to_string(),
            t.p.to_string(),
            t.s1.to_string(),
            t.s2.to_string(),
            t.s.to_string(),
            t.m.to_string(),
            r.norm_out.to_string(),
            r.norm_in1.to_string(),
            r.norm_in2.to_string(),
            r.ratio.to_string(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| LabError::Config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Slopes at `bound + 1/2`, `bound` and `bound - 1/2` for one family.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub family: Family,
    pub supercritical: FitResult,
    pub critical: FitResult,
    pub subcritical: FitResult,
    /// `slope(bound + 1/2) - slope(bound)`.
    pub gap: f64,
}

pub fn growth_witness(base: &ExperimentConfig) -> Result<WitnessReport> {
    let half = Q::new(1, 2);
    let mut fits = Vec::new();
    for off in [half, Q::from_integer(0), -half] {
        fits.push(run_experiment(&base.with_offset(off))?.fit);
    }
    let subcritical = fits.pop().expect("three fits");
    let critical = fits.pop().expect("three fits");
    let supercritical = fits.pop().expect("three fits");
    Ok(WitnessReport { family: base.family.kind, gap: supercritical.slope - critical.slope, supercritical, critical, subcritical })
}
