//! Brute-force checks of the weighted discrete convolution estimate
//! `‖Σ_{ν_1+ν_2=μ} V(ν_1,ν_2) A_1(ν_1) A_2(ν_2)‖_{ℓ²_μ} ≤ C ‖A_1‖_{ℓ²} ‖A_2‖_{ℓ²}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VKind {
    /// `⟨ν_1⟩^{a_1} ⟨ν_2⟩^{a_2}`
    Product,
    /// `⟨ν_1+ν_2⟩^{a_1} ⟨ν_2⟩^{a_2}`
    SumSecond,
    /// `⟨ν_1⟩^{a_1} ⟨ν_1+ν_2⟩^{a_2}`
    FirstSum,
}

impl VKind {
    pub const ALL: [VKind; 3] = [VKind::Product, VKind::SumSecond, VKind::FirstSum];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// I.i.d. uniform entries on `[0,1)`.
    Uniform,
    /// About 10% of the entries nonzero.
    Sparse,
    /// Indicators of centered boxes; the first trial is the full box.
    Indicator,
    /// `⟨ν⟩^{-n/2} / log2(2+|ν|)`, randomly perturbed after the first trial.
    Power,
}

impl Distribution {
    pub const ALL: [Distribution; 4] = [Distribution::Uniform, Distribution::Sparse, Distribution::Indicator, Distribution::Power];
}

/// Nonnegative arrays on `[-M, M]^n ∩ ℤ^n`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvInstance {
    pub dim: usize,
    pub kind: VKind,
    pub a1: f64,
    pub a2: f64,
    pub radius: usize,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

fn side(radius: usize) -> usize {
    2 * radius + 1
}

fn bracket_power(v: &[i64], a: f64) -> f64 {
    let r2: i64 = v.iter().map(|t| t * t).sum();
    (1.0 + r2 as f64).powf(a / 2.0)
}

impl ConvInstance {
    pub fn new(dim: usize, kind: VKind, a1: f64, a2: f64, radius: usize, first: Vec<f64>, second: Vec<f64>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(LabError::InvalidParameter("dimension must be 1 or 2".into()));
        }
        let len = side(radius).pow(dim as u32);
        if first.len() != len || second.len() != len {
            return Err(LabError::InvalidParameter(format!("arrays must have {len} entries")));
        }
        if first.iter().chain(&second).any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(LabError::InvalidParameter("arrays must be finite and nonnegative".into()));
        }
        Ok(Self { dim, kind, a1, a2, radius, first, second })
    }

    fn point(&self, idx: usize) -> [i64; 2] {
        let s = side(self.radius);
        let r = self.radius as i64;
        if self.dim == 1 {
            [idx as i64 - r, 0]
        } else {
            [(idx / s) as i64 - r, (idx % s) as i64 - r]
        }
    }

    /// `μ ↦ Σ_{ν_1+ν_2=μ} V A_1(ν_1) A_2(ν_2)` on `[-2M, 2M]^n`.
    pub fn convolution(&self) -> Vec<f64> {
        let d = self.dim;
        let r = self.radius as i64;
        let out_side = (4 * r + 1) as usize;
        let mut out = vec![0.0; out_side.pow(d as u32)];
        let pts: Vec<[i64; 2]> = (0..self.first.len()).map(|i| self.point(i)).collect();
        let p1: Vec<f64> = pts.iter().map(|p| bracket_power(&p[..d], self.a1)).collect();
        let p2: Vec<f64> = pts.iter().map(|p| bracket_power(&p[..d], self.a2)).collect();
        // ⟨μ⟩^a on the output box, indexed like `out`.
        let sum_power = |a: f64| -> Vec<f64> {
            (0..out.len())
                .map(|i| {
                    let mu = if d == 1 {
                        [i as i64 - 2 * r, 0]
                    } else {
                        [(i / out_side) as i64 - 2 * r, (i % out_side) as i64 - 2 * r]
                    };
                    bracket_power(&mu[..d], a)
                })
                .collect()
        };
        let w_sum = match self.kind {
            VKind::Product => None,
            VKind::SumSecond => Some(sum_power(self.a1)),
            VKind::FirstSum => Some(sum_power(self.a2)),
        };
        for (i, &x) in self.first.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (j, &y) in self.second.iter().enumerate() {
                if y == 0.0 {
                    continue;
                }
                let mu = [pts[i][0] + pts[j][0], pts[i][1] + pts[j][1]];
                let o = if d == 1 {
                    (mu[0] + 2 * r) as usize
                } else {
                    (mu[0] + 2 * r) as usize * out_side + (mu[1] + 2 * r) as usize
                };
                let v = match (self.kind, &w_sum) {
                    (VKind::Product, _) => p1[i] * p2[j],
                    (VKind::SumSecond, Some(w)) => w[o] * p2[j],
                    (VKind::FirstSum, Some(w)) => p1[i] * w[o],
                    _ => unreachable!(),
                };
                out[o] += v * x * y;
            }
        }
        out
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// `‖Σ_{ν_1+ν_2=μ} V(ν_1,ν_2) A_1(ν_1) A_2(ν_2)‖_{ℓ²_μ}`.
pub fn conv_lhs(inst: &ConvInstance) -> f64 {
    l2(&inst.convolution())
}

fn draw(rng: &mut ChaCha8Rng, dim: usize, radius: usize, dist: Distribution, trial: usize) -> Vec<f64> {
    let s = side(radius);
    let len = s.pow(dim as u32);
    let r = radius as i64;
    let coords = |i: usize| -> [i64; 2] {
        if dim == 1 {
            [i as i64 - r, 0]
        } else {
            [(i / s) as i64 - r, (i % s) as i64 - r]
        }
    };
    match dist {
        Distribution::Uniform => (0..len).map(|_| rng.gen::<f64>()).collect(),
        Distribution::Sparse => {
            let mut v: Vec<f64> = (0..len).map(|_| if rng.gen_bool(0.1) { rng.gen::<f64>() } else { 0.0 }).collect();
            if v.iter().all(|&x| x == 0.0) {
                let i = rng.gen_range(0..len);
                v[i] = 1.0;
            }
            v
        }
        Distribution::Indicator => {
            let half = if trial == 0 { r } else { rng.gen_range(0..=r) };
            (0..len)
                .map(|i| {
                    let p = coords(i);
                    if p[..dim].iter().all(|c| c.abs() <= half) {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        }
        Distribution::Power => (0..len)
            .map(|i| {
                let p = coords(i);
                let norm = (p[..dim].iter().map(|c| (c * c) as f64).sum::<f64>()).sqrt();
                let base = bracket_power(&p[..dim], -(dim as f64) / 2.0) / (2.0 + norm).log2();
                if trial == 0 {
                    base
                } else {
                    base * rng.gen_range(0.5..1.0)
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantReport {
    pub dim: usize,
    pub kind: VKind,
    pub a1: f64,
    pub a2: f64,
    pub radius: usize,
    pub distribution: Distribution,
    pub trials: usize,
    /// Max over trials of `conv_lhs / (‖A_1‖ ‖A_2‖)`.
    pub constant: f64,
    pub mean: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn empirical_constant(
    dim: usize,
    kind: VKind,
    a1: f64,
    a2: f64,
    radius: usize,
    trials: usize,
    distribution: Distribution,
    seed: u64,
) -> Result<ConstantReport> {
    if trials == 0 {
        return Err(LabError::InvalidParameter("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    let mut total = 0.0;
    for t in 0..trials {
        let first = draw(&mut rng, dim, radius, distribution, t);
        let second = draw(&mut rng, dim, radius, distribution, t);
        let denom = l2(&first) * l2(&second);
        let inst = ConvInstance::new(dim, kind, a1, a2, radius, first, second)?;
        let ratio = conv_lhs(&inst) / denom;
        best = best.max(ratio);
        total += ratio;
    }
    Ok(ConstantReport { dim, kind, a1, a2, radius, distribution, trials, constant: best, mean: total / trials as f64 })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(LabError::InsufficientPoints(format!("need at least 2 points, got {}", points.len())));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(LabError::InsufficientPoints("all abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub kind: VKind,
    pub a1: f64,
    pub a2: f64,
    pub radii: Vec<usize>,
    /// Max over distributions, per radius.
    pub constants: Vec<f64>,
    pub per_distribution: Vec<(Distribution, Vec<f64>)>,
    pub spread: f64,
    pub slope: f64,
}

/// Constants over several box radii and distributions, with the trend statistics.
pub fn growth_trend(
    dim: usize,
    kind: VKind,
    a1: f64,
    a2: f64,
    radii: &[usize],
    trials: usize,
    distributions: &[Distribution],
    seed: u64,
) -> Result<GrowthReport> {
    let mut per_distribution = Vec::new();
    for &dist in distributions {
        let mut row = Vec::new();
        for &m in radii {
            row.push(empirical_constant(dim, kind, a1, a2, m, trials, dist, seed)?.constant);
        }
        per_distribution.push((dist, row));
    }
    let constants: Vec<f64> = (0..radii.len())
        .map(|i| per_distribution.iter().map(|(_, r)| r[i]).fold(0.0, f64::max))
        .collect();
    let hi = constants.iter().copied().fold(0.0, f64::max);
    let lo = constants.iter().copied().fold(f64::INFINITY, f64::min);
    let pts: Vec<(f64, f64)> = radii.iter().zip(&constants).map(|(&m, &c)| (m as f64, c)).collect();
    Ok(GrowthReport {
        kind,
        a1,
        a2,
        radii: radii.to_vec(),
        constants,
        per_distribution,
        spread: hi / lo,
        slope: log_log_slope(&pts)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    pub lhs: f64,
    pub dual: f64,
    pub relative_gap: f64,
    pub iterations: usize,
}

/// `sup { Σ_μ A_0(μ) Σ_{ν_1+ν_2=μ} V A_1 A_2 : A_0 ≥ 0, ‖A_0‖_{ℓ²} = 1 }` by projected gradient ascent.
pub fn duality_check(inst: &ConvInstance, iterations: usize, seed: u64) -> DualityReport {
    let conv = inst.convolution();
    let lhs = l2(&conv);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a0: Vec<f64> = (0..conv.len()).map(|_| rng.gen::<f64>()).collect();
    let normalize = |v: &mut Vec<f64>| {
        let n = l2(v);
        if n > 0.0 {
            v.iter_mut().for_each(|x| *x /= n);
        }
    };
    normalize(&mut a0);
    let step = 0.5;
    let objective = |a: &[f64]| a.iter().zip(&conv).map(|(x, y)| x * y).sum::<f64>();
    let mut best = objective(&a0);
    for _ in 0..iterations {
        for (x, g) in a0.iter_mut().zip(&conv) {
            *x = (*x + step * g).max(0.0);
        }
        normalize(&mut a0);
        best = best.max(objective(&a0));
    }
    let relative_gap = if lhs > 0.0 { (lhs - best).abs() / lhs } else { 0.0 };
    DualityReport { lhs, dual: best, relative_gap, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_gives_one() {
        for kind in VKind::ALL {
            let mut a = vec![0.0; 5];
            a[2] = 1.0;
            let inst = ConvInstance::new(1, kind, -0.3, -0.7, 2, a.clone(), a).unwrap();
            assert!((conv_lhs(&inst) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_slope() {
        let pts: Vec<(f64, f64)> = [8.0f64, 16.0, 32.0].iter().map(|&m| (m, 3.0 * m.powf(0.4))).collect();
        assert!((log_log_slope(&pts).unwrap() - 0.4).abs() < 1e-12);
    }
}
