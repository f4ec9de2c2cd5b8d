//! Norms of `L^p`, `L^p_s`, `h^p_s`, `bmo_s` and `W^{p,q}_s` on the torus grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::indices::{rational_to_f64, Exponent, IndexTuple, Q};
use crate::partitions::{LpFamily, UniformFamily};
use crate::torus::{bracket, freq_f64, freq_norm, synthesize_dense, GridFunction, TorusGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpaceId {
    Lebesgue,
    Sobolev,
    LocalHardy,
    Bmo,
    SobolevBmo,
    WienerAmalgam,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormValue {
    pub space: SpaceId,
    pub p: Option<Exponent>,
    pub q: Option<Exponent>,
    pub s: f64,
    pub value: f64,
    pub dim: usize,
    pub size: usize,
}

impl NormValue {
    fn new(space: SpaceId, grid: &TorusGrid, p: Option<Exponent>, q: Option<Exponent>, s: f64, value: f64) -> Self {
        Self { space, p, q, s, value, dim: grid.dim(), size: grid.size() }
    }
}

/// `((2π/N)^n Σ |g_j|^p)^{1/p}` for nonnegative samples `g`, or the max when `p = ∞`.
pub fn lp_of_moduli(grid: &TorusGrid, moduli: impl Iterator<Item = f64>, p: Exponent) -> f64 {
    if p.is_infinite() {
        return moduli.fold(0.0, f64::max);
    }
    let pf = p.to_f64();
    let w = grid.cell_weight();
    let total: f64 = if pf == 2.0 {
        moduli.map(|v| v * v).sum()
    } else if pf == 1.0 {
        moduli.sum()
    } else {
        moduli.map(|v| v.powf(pf)).sum()
    };
    (w * total).powf(1.0 / pf)
}

pub fn lebesgue_norm(f: &GridFunction, p: Exponent) -> NormValue {
    let v = lp_of_moduli(f.grid(), f.samples().iter().map(|c| c.norm()), p);
    NormValue::new(SpaceId::Lebesgue, f.grid(), Some(p), None, 0.0, v)
}

/// `‖⟨D⟩^s f‖_{L^p}`.
pub fn sobolev_norm(f: &GridFunction, p: Exponent, s: f64) -> NormValue {
    let g = f.bessel_potential(s);
    let mut out = lebesgue_norm(&g, p);
    out.space = SpaceId::Sobolev;
    out.s = s;
    out
}

fn support_of(spectrum: &[Complex64]) -> Vec<usize> {
    let peak = spectrum.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Vec::new();
    }
    let floor = peak * 1e-15;
    spectrum
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > floor)
        .map(|(i, _)| i)
        .collect()
}

/// `‖(Σ_k 2^{2ks} |ψ_k(D) f|²)^{1/2}‖_{L^p}`.
///
/// Every band meeting the spectrum of `f` is included, so no truncation occurs.
pub fn local_hardy_norm(f: &GridFunction, p: Exponent, s: f64, family: &LpFamily) -> Result<NormValue> {
    local_hardy_norm_of_spectrum(f.grid(), f.spectrum(), p, s, family)
}

/// [`local_hardy_norm`] of the function with the given dense spectrum in FFT order.
pub fn local_hardy_norm_of_spectrum(grid: &TorusGrid, spectrum: &[Complex64], p: Exponent, s: f64, family: &LpFamily) -> Result<NormValue> {
    if p.is_infinite() {
        return Err(LabError::InvalidParameter("h^p needs p < inf; use bmo_norm".into()));
    }
    if spectrum.len() != grid.len() {
        return Err(LabError::GridMismatch(format!("expected {} coefficients, got {}", grid.len(), spectrum.len())));
    }
    let grid = *grid;
    let dim = grid.dim();
    let support = support_of(spectrum);
    let radius = support
        .iter()
        .map(|&i| freq_norm(grid.freq(i), dim))
        .fold(0.0, f64::max);
    let top = family.bands_needed(radius);
    let mut square = vec![0.0f64; grid.len()];
    let mut band = vec![Complex64::new(0.0, 0.0); grid.len()];
    for k in 0..=top {
        let weight = 2f64.powf(2.0 * k as f64 * s);
        let values: Vec<f64> = support
            .iter()
            .map(|&i| family.member_radial(k, freq_norm(grid.freq(i), dim)))
            .collect();
        if values.iter().all(|&v| v == 0.0) {
            continue;
        }
        band.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for (&i, &v) in support.iter().zip(&values) {
            band[i] = spectrum[i] * v;
        }
        let samples = synthesize_dense(&grid, &band);
        for (acc, c) in square.iter_mut().zip(&samples) {
            *acc += weight * c.norm_sqr();
        }
    }
    let v = lp_of_moduli(&grid, square.iter().map(|v| v.sqrt()), p);
    Ok(NormValue::new(SpaceId::LocalHardy, &grid, Some(p), None, s, v))
}

/// Dyadic `bmo` norm of `⟨D⟩^s f`: largest mean oscillation over dyadic cubes of side `≤ 1`
/// plus largest mean of `|f|` over dyadic cubes of side `≥ 1`.
pub fn bmo_norm(f: &GridFunction, s: f64) -> NormValue {
    let g = f.bessel_potential(s);
    let grid = *f.grid();
    let n = grid.size();
    let dim = grid.dim();
    let samples = g.samples();
    let mut osc_sup = 0.0f64;
    let mut mean_sup = 0.0f64;
    let levels = n.trailing_zeros();
    for j in 0..=levels {
        let cubes = 1usize << j;
        let side_pts = n >> j;
        let side = 2.0 * PI / cubes as f64;
        let count = cubes.pow(dim as u32);
        let pts = side_pts.pow(dim as u32) as f64;
        for c in 0..count {
            let (c0, c1) = if dim == 1 { (c, 0) } else { (c / cubes, c % cubes) };
            let idx = |a: usize, b: usize| -> usize {
                if dim == 1 {
                    c0 * side_pts + a
                } else {
                    (c0 * side_pts + a) * n + c1 * side_pts + b
                }
            };
            let inner = if dim == 1 { 1 } else { side_pts };
            if side >= 1.0 {
                let mut total = 0.0;
                for a in 0..side_pts {
                    for b in 0..inner {
                        total += samples[idx(a, b)].norm();
                    }
                }
                mean_sup = mean_sup.max(total / pts);
            }
            if side <= 1.0 {
                let mut mean = Complex64::new(0.0, 0.0);
                for a in 0..side_pts {
                    for b in 0..inner {
                        mean += samples[idx(a, b)];
                    }
                }
                mean /= pts;
                let mut dev = 0.0;
                for a in 0..side_pts {
                    for b in 0..inner {
                        dev += (samples[idx(a, b)] - mean).norm();
                    }
                }
                osc_sup = osc_sup.max(dev / pts);
            }
        }
    }
    let space = if s == 0.0 { SpaceId::Bmo } else { SpaceId::SobolevBmo };
    NormValue::new(space, &grid, None, None, s, osc_sup + mean_sup)
}

/// `‖(Σ_ν ⟨ν⟩^{sq} |φ(D-ν) f|^q)^{1/q}‖_{L^p}`.
pub fn wiener_amalgam_norm(f: &GridFunction, p: Exponent, q: Exponent, s: f64, family: &UniformFamily) -> NormValue {
    let grid = *f.grid();
    let dim = grid.dim();
    let support = support_of(f.spectrum());
    let value = if family.radius() <= 1.0 {
        // Each piece is a single exponential, so |φ(D-ν)f| is constant in x.
        let phi0 = family.eval(&[0.0; 2][..dim]);
        let terms = support.iter().map(|&i| {
            let k = freq_f64(grid.freq(i), dim);
            bracket(&k[..dim]).powf(s) * phi0 * f.spectrum()[i].norm()
        });
        let seq = seq_norm(terms, q);
        if p.is_infinite() {
            seq
        } else {
            grid.volume().powf(1.0 / p.to_f64()) * seq
        }
    } else {
        wiener_general(f, &support, p, q, s, family)
    };
    NormValue::new(SpaceId::WienerAmalgam, &grid, Some(p), Some(q), s, value)
}

fn seq_norm(terms: impl Iterator<Item = f64>, q: Exponent) -> f64 {
    if q.is_infinite() {
        terms.fold(0.0, f64::max)
    } else {
        let qf = q.to_f64();
        terms.map(|v| v.powf(qf)).sum::<f64>().powf(1.0 / qf)
    }
}

fn wiener_general(f: &GridFunction, support: &[usize], p: Exponent, q: Exponent, s: f64, family: &UniformFamily) -> f64 {
    let grid = *f.grid();
    let dim = grid.dim();
    let n = grid.size();
    let reach = family.reach();
    let roots: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect();
    let mut centers: Vec<[i64; 2]> = Vec::new();
    for &i in support {
        let k = grid.freq(i);
        let span = if dim == 1 { 0 } else { reach };
        for d0 in -reach..=reach {
            for d1 in -span..=span {
                centers.push([k[0] + d0, if dim == 1 { 0 } else { k[1] + d1 }]);
            }
        }
    }
    centers.sort();
    centers.dedup();
    let mut acc = vec![0.0f64; grid.len()];
    let qf = q.to_f64();
    for nu in centers {
        let nuf = freq_f64(nu, dim);
        let modes: Vec<([i64; 2], Complex64)> = support
            .iter()
            .filter_map(|&i| {
                let k = grid.freq(i);
                let kf = freq_f64(k, dim);
                let w = family.eval(&[kf[0] - nuf[0], kf[1] - nuf[1]][..dim]);
                (w != 0.0).then(|| (k, f.spectrum()[i] * w))
            })
            .collect();
        if modes.is_empty() {
            continue;
        }
        let weight = bracket(&nuf[..dim]).powf(s);
        for (x, slot) in acc.iter_mut().enumerate() {
            let mut v = Complex64::new(0.0, 0.0);
            for (k, c) in &modes {
                let phase = if dim == 1 {
                    (k[0] * x as i64).rem_euclid(n as i64)
                } else {
                    (k[0] * (x / n) as i64 + k[1] * (x % n) as i64).rem_euclid(n as i64)
                };
                v += c * roots[phase as usize];
            }
            let a = weight * v.norm();
            if q.is_infinite() {
                *slot = slot.max(a);
            } else {
                *slot += a.powf(qf);
            }
        }
    }
    let moduli = acc.into_iter().map(|v| if q.is_infinite() { v } else { v.powf(1.0 / qf) });
    lp_of_moduli(&grid, moduli, p)
}

/// The four embeddings between amalgam, Hardy and `bmo` norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Embedding {
    /// `W^{p,2}_{α(p)} → h^p`
    AmalgamToHardy,
    /// `h^p → W^{p,2}_{β(p)}`
    HardyToAmalgam,
    /// `W^{∞,2}_{n/2} → bmo`
    AmalgamToBmo,
    /// `bmo → W^{∞,2}`
    BmoToAmalgam,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub which: Embedding,
    pub source: NormValue,
    pub target: NormValue,
    pub ratio: f64,
}

/// Ratio `target norm / source norm` for one embedding.
pub fn verify_embedding(
    f: &GridFunction,
    which: Embedding,
    p: Exponent,
    lp: &LpFamily,
    uniform: &UniformFamily,
) -> Result<EmbeddingReport> {
    let dim = f.grid().dim() as u32;
    let t = IndexTuple::plain(dim, p, p, p, Q::from_integer(0))?;
    let two: Exponent = Exponent::from_int(2)?;
    let inf = Exponent::INFINITY;
    let (source, target) = match which {
        Embedding::AmalgamToHardy => (
            wiener_amalgam_norm(f, p, two, rational_to_f64(t.alpha(p)), uniform),
            local_hardy_norm(f, p, 0.0, lp)?,
        ),
        Embedding::HardyToAmalgam => (
            local_hardy_norm(f, p, 0.0, lp)?,
            wiener_amalgam_norm(f, p, two, rational_to_f64(t.beta(p)), uniform),
        ),
        Embedding::AmalgamToBmo => (
            wiener_amalgam_norm(f, inf, two, dim as f64 / 2.0, uniform),
            bmo_norm(f, 0.0),
        ),
        Embedding::BmoToAmalgam => (bmo_norm(f, 0.0), wiener_amalgam_norm(f, inf, two, 0.0, uniform)),
    };
    if source.value == 0.0 {
        return Err(LabError::Degenerate("source norm is zero".into()));
    }
    let ratio = target.value / source.value;
    Ok(EmbeddingReport { which, source, target, ratio })
}
