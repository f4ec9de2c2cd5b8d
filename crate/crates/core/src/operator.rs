//! Linear and bilinear pseudo-differential operators on the torus, and the `τ`-transform.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::symbols::{Amplitude, Multiplier, Symbol, SymbolForm};
use crate::torus::{bracket, freq_add, freq_f64, Freq, GridFunction, TorusGrid};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// How [`apply_bilinear_with`] evaluates the double sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Sparse table, separable product or sum-multiplier path when available.
    Auto,
    /// Plain double sum over the input supports.
    Direct,
}

#[derive(Debug, Clone)]
pub struct OperatorReport {
    pub output: GridFunction,
    /// Largest `|k|_∞` carrying a nonzero output coefficient.
    pub support_radius: i64,
    /// Number of `(k_1, k_2)` terms evaluated (zero on the FFT paths).
    pub pairs: u64,
    pub strategy: &'static str,
}

/// `T_σ(f_1, f_2)` with the automatic strategy.
pub fn apply_bilinear(sigma: &Symbol, f1: &GridFunction, f2: &GridFunction) -> Result<GridFunction> {
    Ok(apply_bilinear_with(sigma, f1, f2, Strategy::Auto)?.output)
}

pub fn apply_bilinear_with(
    sigma: &Symbol,
    f1: &GridFunction,
    f2: &GridFunction,
    strategy: Strategy,
) -> Result<OperatorReport> {
    let grid = *f1.grid();
    if grid != *f2.grid() {
        return Err(LabError::GridMismatch(format!("{:?} vs {:?}", grid, f2.grid())));
    }
    if sigma.dim() != grid.dim() {
        return Err(LabError::GridMismatch(format!(
            "symbol dimension {} on a {}-dimensional grid",
            sigma.dim(),
            grid.dim()
        )));
    }
    let s1 = f1.band_support()?;
    let s2 = f2.band_support()?;
    let (output, pairs, name) = match (strategy, sigma.form(), sigma.table()) {
        (Strategy::Auto, SymbolForm::Separable(m1, m2), _) => {
            let g1 = f1.apply_multiplier(|xi| m1(xi));
            let g2 = f2.apply_multiplier(|xi| m2(xi));
            (g1.product(&g2)?, 0, "separable")
        }
        (Strategy::Auto, SymbolForm::OfSum(w), _) => (f1.product(f2)?.apply_multiplier(|xi| w(xi)), 0, "of_sum"),
        (Strategy::Auto, _, Some(table)) | (Strategy::Direct, SymbolForm::LatticeOnly, Some(table)) => {
            let mut spectrum = vec![ZERO; grid.len()];
            let pairs = table.contract(&|k| f1.coefficient(k), &|k| f2.coefficient(k), &mut |k, v| {
                spectrum[grid.wrap_index(k)] += v;
            });
            (GridFunction::from_spectrum(grid, spectrum)?, pairs, "table")
        }
        (_, SymbolForm::LatticeOnly, None) => {
            return Err(LabError::LatticeOnly(format!("{} has neither evaluator nor table", sigma.name())));
        }
        (_, SymbolForm::Modulated(modes), _) => {
            let mut spectrum = vec![ZERO; grid.len()];
            let mut pairs = 0u64;
            for (eta, a) in modes {
                pairs += direct_sum(&grid, &s1, &s2, *eta, &mut spectrum, |x, y| a(x, y))?;
            }
            (GridFunction::from_spectrum(grid, spectrum)?, pairs, "modulated")
        }
        _ => {
            let mut spectrum = vec![ZERO; grid.len()];
            let zero = [0.0; 2];
            let pairs = direct_sum(&grid, &s1, &s2, [0, 0], &mut spectrum, |x, y| {
                sigma.eval(&zero[..grid.dim()], x, y)
            })?;
            (GridFunction::from_spectrum(grid, spectrum)?, pairs, "direct")
        }
    };
    let support_radius = output
        .spectrum()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, _)| {
            let k = grid.freq(i);
            k[0].abs().max(k[1].abs())
        })
        .max()
        .unwrap_or(0);
    Ok(OperatorReport { output, support_radius, pairs, strategy: name })
}

fn direct_sum(
    grid: &TorusGrid,
    s1: &[(Freq, Complex64)],
    s2: &[(Freq, Complex64)],
    eta: Freq,
    spectrum: &mut [Complex64],
    amp: impl Fn(&[f64], &[f64]) -> Complex64,
) -> Result<u64> {
    let d = grid.dim();
    let mut pairs = 0u64;
    for &(k1, a) in s1 {
        let x1 = freq_f64(k1, d);
        for &(k2, b) in s2 {
            let x2 = freq_f64(k2, d);
            let v = amp(&x1[..d], &x2[..d]);
            pairs += 1;
            if v == ZERO {
                continue;
            }
            let out = freq_add(freq_add(k1, k2), eta);
            let idx = if eta == [0, 0] {
                grid.wrap_index(out)
            } else {
                grid.index(out).ok_or_else(|| {
                    LabError::BandLimit(format!("x-mode {:?} pushes output to {:?}", &eta[..d], &out[..d]))
                })?
            };
            spectrum[idx] += v * a * b;
        }
    }
    Ok(pairs)
}

/// Symbol `σ(x, ξ)` of a linear operator.
#[derive(Clone)]
pub enum LinearSymbol {
    Multiplier(Multiplier),
    /// `Σ_η e^{ix·η} a_η(ξ)`.
    Modulated(Vec<(Freq, Multiplier)>),
}

/// `σ(X, D) f`.
pub fn apply_linear(sigma: &LinearSymbol, f: &GridFunction) -> Result<GridFunction> {
    let grid = *f.grid();
    let d = grid.dim();
    match sigma {
        LinearSymbol::Multiplier(m) => {
            f.band_support()?;
            Ok(f.apply_multiplier(|xi| m(xi)))
        }
        LinearSymbol::Modulated(modes) => {
            let support = f.band_support()?;
            let mut spectrum = vec![ZERO; grid.len()];
            for (eta, a) in modes {
                for &(k, c) in &support {
                    let kf = freq_f64(k, d);
                    let out = freq_add(k, *eta);
                    let idx = grid.index(out).ok_or_else(|| {
                        LabError::BandLimit(format!("x-mode {:?} pushes output to {:?}", &eta[..d], &out[..d]))
                    })?;
                    spectrum[idx] += a(&kf[..d]) * c;
                }
            }
            GridFunction::from_spectrum(grid, spectrum)
        }
    }
}

fn weights(d: usize, s1: f64, s2: f64) -> impl Fn(&[f64], &[f64]) -> f64 {
    move |a: &[f64], b: &[f64]| bracket(&a[..d]).powf(-s1) * bracket(&b[..d]).powf(-s2)
}

fn shifted_bracket(eta: Freq, a: &[f64], b: &[f64], s: f64) -> f64 {
    let mut v = [0.0; 2];
    for i in 0..a.len() {
        v[i] = eta[i] as f64 + a[i] + b[i];
    }
    bracket(&v[..a.len()]).powf(s)
}

/// `τ(x, ξ_1, ξ_2)` with `T_τ(f_1, f_2) = ⟨D⟩^s T_σ(⟨D⟩^{-s_1} f_1, ⟨D⟩^{-s_2} f_2)`.
pub fn tau_symbol(sigma: &Symbol, s1: f64, s2: f64, s: f64) -> Result<Symbol> {
    if s1 == 0.0 && s2 == 0.0 && s == 0.0 {
        return Ok(sigma.clone());
    }
    for v in [s1, s2, s] {
        if !v.is_finite() {
            return Err(LabError::InvalidParameter("smoothness indices must be finite".into()));
        }
    }
    let d = sigma.dim();
    let table = sigma.weighted_table(s1, s2, s);
    let form = match sigma.form() {
        SymbolForm::LatticeOnly => SymbolForm::LatticeOnly,
        SymbolForm::Modulated(modes) => SymbolForm::Modulated(
            modes
                .iter()
                .map(|(eta, a)| {
                    let (eta, a, w) = (*eta, a.clone(), weights(d, s1, s2));
                    let amp: Amplitude = Arc::new(move |x: &[f64], y: &[f64]| a(x, y) * (shifted_bracket(eta, x, y, s) * w(x, y)));
                    (eta, amp)
                })
                .collect(),
        ),
        _ => {
            let inner = sigma.clone();
            let w = weights(d, s1, s2);
            let zero = [0.0; 2];
            let amp: Amplitude = Arc::new(move |x: &[f64], y: &[f64]| {
                inner.eval(&zero[..d], x, y) * (shifted_bracket([0, 0], x, y, s) * w(x, y))
            });
            SymbolForm::Bilinear(amp)
        }
    };
    let name = format!("tau[{}]", sigma.name());
    Ok(sigma
        .replace_form(&name, form, table)
        .with_param("tau_s1", s1)
        .with_param("tau_s2", s2)
        .with_param("tau_s", s))
}
