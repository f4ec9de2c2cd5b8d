//! Fourier-series expansion of frequency-localized symbols and the radial/conic splitting.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::indices::{rational_to_f64, IndexTuple};
use crate::partitions::{ConeFamily, PlateauCutoff, PsFamily, UniformFamily};
use crate::symbols::{class_constant, Amplitude, ClassOptions, ClassReport, ClassSpec, Symbol, SymbolForm};
use crate::torus::Freq;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Quadrature and truncation controls for [`fourier_series_expand`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesOptions {
    /// Integration-by-parts order `K ≥ 1`.
    pub k_order: u32,
    /// Order `L ≥ 1` of the `χ_ℓ` family.
    pub l_order: u32,
    /// Retained `|k_i|_∞ ≤ kmax`.
    pub kmax: i64,
    /// Quadrature points per axis over one period `2π`; a power of two.
    pub resolution: usize,
    pub self_check: bool,
    /// Largest allowed change of any retained coefficient when the resolution is doubled,
    /// relative to the largest coefficient.
    pub tolerance: f64,
}

impl SeriesOptions {
    pub fn for_dim(dim: usize) -> Self {
        Self {
            k_order: 1,
            l_order: 2,
            kmax: 8,
            resolution: if dim == 1 { 512 } else { 32 },
            self_check: dim == 1,
            tolerance: 1e-8,
        }
    }
}

/// `P_{Ν,Κ}` for every retained `Κ`, stored per `x`-frequency of the symbol.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesCoefficients {
    pub dim: usize,
    pub nu1: Freq,
    pub nu2: Freq,
    pub k_order: u32,
    pub l_order: u32,
    pub kmax: i64,
    pub resolution: usize,
    /// `x`-frequencies `η` of the symbol.
    pub modes: Vec<Freq>,
    /// Retained `(k_1, k_2)`, packed as `[k_1, k_2]`.
    pub keys: Vec<(Freq, Freq)>,
    /// `coefficients[mode][key]`.
    pub coefficients: Vec<Vec<Complex64>>,
    /// Largest change observed under resolution doubling (0 when not checked).
    pub quadrature_change: f64,
}

fn cutoff() -> UniformFamily {
    UniformFamily::new(1.0, true).expect("valid radius")
}

fn companion() -> PlateauCutoff {
    PlateauCutoff::new(1.0, 3.0).expect("valid plateau")
}

fn mode_amplitudes(sigma: &Symbol) -> Result<Vec<(Freq, Amplitude)>> {
    match sigma.form() {
        SymbolForm::LatticeOnly => Err(LabError::LatticeOnly(sigma.name().to_string())),
        SymbolForm::Modulated(modes) => Ok(modes.clone()),
        _ => {
            let s = sigma.clone();
            let d = sigma.dim();
            let amp: Amplitude = Arc::new(move |a: &[f64], b: &[f64]| s.eval(&[0.0; 2][..d], a, b));
            Ok(vec![([0, 0], amp)])
        }
    }
}

fn fft_all_axes(data: &mut [Complex64], m: usize, axes: usize) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    let total = data.len();
    let mut line = vec![ZERO; m];
    for a in 0..axes {
        let stride = m.pow((axes - 1 - a) as u32);
        for base in 0..total {
            if (base / stride) % m != 0 {
                continue;
            }
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = data[base + j * stride];
            }
            fft.process(&mut line);
            for (j, v) in line.iter().enumerate() {
                data[base + j * stride] = *v;
            }
        }
    }
}

fn retained_keys(dim: usize, kmax: i64) -> Vec<(Freq, Freq)> {
    let mut keys = Vec::new();
    let span = if dim == 1 { 0 } else { kmax };
    for a in -kmax..=kmax {
        for b in -span..=span {
            for c in -kmax..=kmax {
                for d in -span..=span {
                    keys.push(([a, b], [c, d]));
                }
            }
        }
    }
    keys
}

fn quadrature(
    amp: &Amplitude,
    dim: usize,
    nu1: Freq,
    nu2: Freq,
    m: usize,
    keys: &[(Freq, Freq)],
) -> Vec<Complex64> {
    let axes = 2 * dim;
    let phi = cutoff();
    let total = m.pow(axes as u32);
    let wrap = |j: usize| -> f64 {
        let jj = if j < m / 2 { j as f64 } else { j as f64 - m as f64 };
        2.0 * PI * jj / m as f64
    };
    let profile: Vec<f64> = (0..m).map(|j| phi.profile_1d(wrap(j))).collect();
    let mut data = vec![ZERO; total];
    let mut idx = vec![0usize; axes];
    for (flat, slot) in data.iter_mut().enumerate() {
        let mut rem = flat;
        for a in (0..axes).rev() {
            idx[a] = rem % m;
            rem /= m;
        }
        let w: f64 = idx.iter().map(|&j| profile[j]).product();
        if w == 0.0 {
            continue;
        }
        let mut x1 = [0.0; 2];
        let mut x2 = [0.0; 2];
        for i in 0..dim {
            x1[i] = nu1[i] as f64 + wrap(idx[i]);
            x2[i] = nu2[i] as f64 + wrap(idx[dim + i]);
        }
        *slot = amp(&x1[..dim], &x2[..dim]) * w;
    }
    fft_all_axes(&mut data, m, axes);
    let norm = (m as f64).powi(axes as i32);
    keys.iter()
        .map(|(k1, k2)| {
            let mut flat = 0usize;
            let mut phase = 0.0;
            for i in 0..dim {
                flat = flat * m + k1[i].rem_euclid(m as i64) as usize;
                phase += (nu1[i] * k1[i]) as f64;
            }
            for i in 0..dim {
                flat = flat * m + k2[i].rem_euclid(m as i64) as usize;
                phase += (nu2[i] * k2[i]) as f64;
            }
            data[flat] / norm * Complex64::from_polar(1.0, -phase)
        })
        .collect()
}

/// Coefficients `P_{Ν,Κ}` of `σ_Ν = σ φ(ξ_1-ν_1) φ(ξ_2-ν_2)` on the period `2π`,
/// with `φ` the exact partition supported in `[-1,1]^n`.
pub fn fourier_series_expand(sigma: &Symbol, nu1: Freq, nu2: Freq, opts: &SeriesOptions) -> Result<SeriesCoefficients> {
    let dim = sigma.dim();
    if opts.k_order == 0 || opts.l_order == 0 {
        return Err(LabError::InvalidParameter("K and L must be at least 1".into()));
    }
    if opts.kmax < 0 {
        return Err(LabError::InvalidParameter("kmax must be nonnegative".into()));
    }
    let m = opts.resolution;
    if !m.is_power_of_two() || (m as i64) < 2 * opts.kmax + 2 || m < 16 {
        return Err(LabError::Quadrature(format!(
            "resolution {m} must be a power of two >= max(16, 2 kmax + 2)"
        )));
    }
    let amps = mode_amplitudes(sigma)?;
    let keys = retained_keys(dim, opts.kmax);
    let coefficients: Vec<Vec<Complex64>> = amps.iter().map(|(_, a)| quadrature(a, dim, nu1, nu2, m, &keys)).collect();
    let mut change = 0.0;
    if opts.self_check {
        let peak = coefficients.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        for ((_, a), coarse) in amps.iter().zip(&coefficients) {
            let fine = quadrature(a, dim, nu1, nu2, 2 * m, &keys);
            for (u, v) in coarse.iter().zip(&fine) {
                change = f64::max(change, (u - v).norm() / peak);
            }
        }
        if change > opts.tolerance {
            return Err(LabError::Quadrature(format!(
                "doubling the resolution changed coefficients by {change:.3e} > {:.1e}",
                opts.tolerance
            )));
        }
    }
    Ok(SeriesCoefficients {
        dim,
        nu1,
        nu2,
        k_order: opts.k_order,
        l_order: opts.l_order,
        kmax: opts.kmax,
        resolution: m,
        modes: amps.iter().map(|(e, _)| *e).collect(),
        keys,
        coefficients,
        quadrature_change: change,
    })
}

fn phase(eta: Freq, x: &[f64]) -> Complex64 {
    let t: f64 = x.iter().enumerate().map(|(i, v)| eta[i] as f64 * v).sum();
    Complex64::from_polar(1.0, t)
}

impl SeriesCoefficients {
    /// `⟨(k_1, k_2)⟩`.
    pub fn key_bracket(&self, key: usize) -> f64 {
        let (a, b) = self.keys[key];
        let s: i64 = (0..self.dim).map(|i| a[i] * a[i] + b[i] * b[i]).sum();
        (1.0 + s as f64).sqrt()
    }

    pub fn p_value(&self, key: usize, x: &[f64]) -> Complex64 {
        self.modes.iter().zip(&self.coefficients).map(|(eta, c)| c[key] * phase(*eta, x)).sum()
    }

    /// `Q_{Ν,Κ} = ⟨(k_1,k_2)⟩^{2K} P_{Ν,Κ}`.
    pub fn q_value(&self, key: usize, x: &[f64]) -> Complex64 {
        self.p_value(key, x) * self.key_bracket(key).powi(2 * self.k_order as i32)
    }

    /// Frequencies `ℓ` with some `Q_{Ν,Κ,ℓ} ≠ 0`.
    pub fn ells(&self) -> Vec<Freq> {
        let fam = PsFamily::new(self.l_order).expect("L >= 1");
        let mut out = Vec::new();
        for eta in &self.modes {
            let span = if self.dim == 1 { 0 } else { 1 };
            for a in -1..=1 {
                for b in -span..=span {
                    let ell = [eta[0] + a, eta[1] + b];
                    let ef = [ell[0] as f64, ell[1] as f64];
                    let xf = [eta[0] as f64, eta[1] as f64];
                    if fam.chi(&ef[..self.dim], &xf[..self.dim]) != 0.0 && !out.contains(&ell) {
                        out.push(ell);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// `Q_{Ν,Κ,ℓ}(x) = F^{-1}[χ_ℓ ⟨·⟩^{2L} F Q_{Ν,Κ}](x)`.
    pub fn q_ell(&self, key: usize, ell: Freq, x: &[f64]) -> Complex64 {
        let fam = PsFamily::new(self.l_order).expect("L >= 1");
        let d = self.dim;
        let kb = self.key_bracket(key).powi(2 * self.k_order as i32);
        let ef = [ell[0] as f64, ell[1] as f64];
        self.modes
            .iter()
            .zip(&self.coefficients)
            .map(|(eta, c)| {
                let xf = [eta[0] as f64, eta[1] as f64];
                let w = fam.chi(&ef[..d], &xf[..d]) * (1.0 + xf[..d].iter().map(|v| v * v).sum::<f64>()).powi(self.l_order as i32);
                c[key] * kb * w * phase(*eta, x)
            })
            .sum()
    }

    /// Largest `|P - ⟨Κ⟩^{-2K} Σ_ℓ ⟨ℓ⟩^{-2L} Q_{Ν,Κ,ℓ}|` over keys and the given points.
    pub fn pq_identity_error(&self, xs: &[[f64; 2]]) -> f64 {
        let ells = self.ells();
        let mut worst = 0.0f64;
        for key in 0..self.keys.len() {
            let kb = self.key_bracket(key).powi(-2 * self.k_order as i32);
            for x in xs {
                let x = &x[..self.dim];
                let sum: Complex64 = ells
                    .iter()
                    .map(|ell| {
                        let lb = 1.0 + (0..self.dim).map(|i| (ell[i] * ell[i]) as f64).sum::<f64>();
                        self.q_ell(key, *ell, x) * lb.powi(-(self.l_order as i32))
                    })
                    .sum();
                worst = worst.max((self.p_value(key, x) - sum * kb).norm());
            }
        }
        worst
    }

    /// `Σ_{|k_i|_∞ ≤ kmax} e^{i(ξ_1·k_1+ξ_2·k_2)} P_{Ν,Κ}(x) φ̃(ξ_1-ν_1) φ̃(ξ_2-ν_2)`.
    pub fn reconstruct(&self, x: &[f64], xi1: &[f64], xi2: &[f64], kmax: i64) -> Complex64 {
        let d = self.dim;
        let tilde = companion();
        let mut s1 = [0.0; 2];
        let mut s2 = [0.0; 2];
        for i in 0..d {
            s1[i] = xi1[i] - self.nu1[i] as f64;
            s2[i] = xi2[i] - self.nu2[i] as f64;
        }
        let env = tilde.eval(&s1[..d]) * tilde.eval(&s2[..d]);
        if env == 0.0 {
            return ZERO;
        }
        let mut total = ZERO;
        for (key, (k1, k2)) in self.keys.iter().enumerate() {
            if (0..d).any(|i| k1[i].abs() > kmax || k2[i].abs() > kmax) {
                continue;
            }
            let t: f64 = (0..d).map(|i| xi1[i] * k1[i] as f64 + xi2[i] * k2[i] as f64).sum();
            total += Complex64::from_polar(1.0, t) * self.p_value(key, x);
        }
        total * env
    }

    /// Sup of `|reconstruction - σ_Ν|` on a tensor grid over `Ν + [-1,1]^{2n}`.
    pub fn reconstruction_error(&self, sigma: &Symbol, kmax: i64, per_axis: usize, xs: &[[f64; 2]]) -> f64 {
        let d = self.dim;
        let phi = cutoff();
        let axes = 2 * d;
        let per_axis = per_axis.max(2);
        let offsets: Vec<f64> = (0..per_axis).map(|j| -1.0 + 2.0 * j as f64 / (per_axis - 1) as f64).collect();
        // Phase tables per axis: e^{i ξ k} for |k| ≤ kmax.
        let kcount = (2 * kmax + 1) as usize;
        let mut worst = 0.0f64;
        let total = per_axis.pow(axes as u32);
        let keys: Vec<usize> = (0..self.keys.len())
            .filter(|&key| {
                let (k1, k2) = self.keys[key];
                (0..d).all(|i| k1[i].abs() <= kmax && k2[i].abs() <= kmax)
            })
            .collect();
        for x in xs {
            let x = &x[..d];
            let coeffs: Vec<Complex64> = keys.iter().map(|&k| self.p_value(k, x)).collect();
            for flat in 0..total {
                let mut rem = flat;
                let mut pt = [0.0; 4];
                for a in (0..axes).rev() {
                    let o = offsets[rem % per_axis];
                    rem /= per_axis;
                    let base = if a < d { self.nu1[a] } else { self.nu2[a - d] } as f64;
                    pt[a] = base + o;
                }
                let tables: Vec<Vec<Complex64>> = (0..axes)
                    .map(|a| (0..kcount).map(|j| Complex64::from_polar(1.0, pt[a] * (j as f64 - kmax as f64))).collect())
                    .collect();
                let mut approx = ZERO;
                for (ci, &key) in keys.iter().enumerate() {
                    let (k1, k2) = self.keys[key];
                    let mut e = coeffs[ci];
                    for i in 0..d {
                        e *= tables[i][(k1[i] + kmax) as usize] * tables[d + i][(k2[i] + kmax) as usize];
                    }
                    approx += e;
                }
                let (a, b) = (&pt[..d], &pt[d..2 * d]);
                let mut s1 = [0.0; 2];
                let mut s2 = [0.0; 2];
                for i in 0..d {
                    s1[i] = a[i] - self.nu1[i] as f64;
                    s2[i] = b[i] - self.nu2[i] as f64;
                }
                let exact = sigma.eval(x, a, b) * (phi.eval(&s1[..d]) * phi.eval(&s2[..d]));
                worst = worst.max((approx - exact).norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QBoundEntry {
    pub nu1: Freq,
    pub nu2: Freq,
    pub sup_q: f64,
    pub weight: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QBoundReport {
    pub m1: f64,
    pub m2: f64,
    pub entries: Vec<QBoundEntry>,
    pub spread: f64,
    pub bounded: bool,
}

/// `sup_{Κ,ℓ,x} |Q_{Ν,Κ,ℓ}| / (⟨ν_1+ν_2⟩^{m_1} ⟨ν_2⟩^{m_2})` for each `Ν`; bounded when max/min ≤ 8.
pub fn q_bound_check(sigma: &Symbol, m1: f64, m2: f64, nus: &[(Freq, Freq)], opts: &SeriesOptions) -> Result<QBoundReport> {
    if nus.is_empty() {
        return Err(LabError::InvalidParameter("no base points given".into()));
    }
    let d = sigma.dim();
    let xs: Vec<[f64; 2]> = if sigma.x_dependent() {
        let per: usize = 8;
        (0..per.pow(d as u32))
            .map(|j| {
                let a = 2.0 * PI * (j % per) as f64 / per as f64;
                let b = 2.0 * PI * (j / per) as f64 / per as f64;
                [a, b]
            })
            .collect()
    } else {
        vec![[0.0; 2]]
    };
    let mut entries = Vec::new();
    for &(nu1, nu2) in nus {
        let series = fourier_series_expand(sigma, nu1, nu2, opts)?;
        let ells = series.ells();
        let mut sup = 0.0f64;
        for key in 0..series.keys.len() {
            for ell in &ells {
                for x in &xs {
                    sup = sup.max(series.q_ell(key, *ell, &x[..d]).norm());
                }
            }
        }
        let sum: Vec<f64> = (0..d).map(|i| (nu1[i] + nu2[i]) as f64).collect();
        let second: Vec<f64> = (0..d).map(|i| nu2[i] as f64).collect();
        let weight = crate::torus::bracket(&sum).powf(m1) * crate::torus::bracket(&second).powf(m2);
        entries.push(QBoundEntry { nu1, nu2, sup_q: sup, weight, ratio: sup / weight });
    }
    let hi = entries.iter().map(|e| e.ratio).fold(0.0, f64::max);
    let lo = entries.iter().map(|e| e.ratio).fold(f64::INFINITY, f64::min);
    let spread = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    Ok(QBoundReport { m1, m2, entries, spread, bounded: spread <= 8.0 })
}

/// `σ = σΦ + σ_0 + σ_1 + σ_2`.
#[derive(Clone)]
pub struct ConeSplit {
    pub sigma_phi: Symbol,
    pub pieces: [Symbol; 3],
    /// Classes of `σ_0`, `σ_1`, `σ_2`.
    pub specs: [ClassSpec; 3],
    pub t0: f64,
    pub t2: f64,
    pub cone: ConeFamily,
}

/// Midpoints of the admissible intervals for `t_0` and `t_2`, clamped at 0.
pub fn default_shifts(t: &IndexTuple) -> (f64, f64) {
    let f = rational_to_f64;
    let a = f(t.upper(t.p.conjugate()));
    let b = f(t.lower(t.p1.conjugate()));
    let s = f(t.s);
    let t0 = (s + a - b / 2.0).max(0.0);
    let up2 = f(t.upper(t.p2));
    let low = f(t.lower(t.p));
    let s2 = f(t.s2);
    let t2 = (up2 - s2 - low / 2.0).max(0.0);
    (t0, t2)
}

pub fn cone_split(sigma: &Symbol, spec: ClassSpec, t0: f64, t2: f64, cone: ConeFamily) -> Result<ConeSplit> {
    let ClassSpec::General { s1, s2, s, m } = spec else {
        return Err(LabError::InvalidParameter("cone_split needs a general class".into()));
    };
    if !(t0 >= 0.0 && t2 >= 0.0) {
        return Err(LabError::InvalidParameter(format!("shifts must be nonnegative, got ({t0}, {t2})")));
    }
    if sigma.dim() != cone.dim() {
        return Err(LabError::GridMismatch("cone family dimension".into()));
    }
    let c1 = cone;
    let radial: Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync> = Arc::new(move |a, b| c1.radial(a, b));
    let sigma_phi = sigma.multiplied_by("sigma_phi", radial);
    let piece = |j: usize| -> Symbol {
        let c = cone;
        let w: Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync> = Arc::new(move |a, b| {
            let outer = 1.0 - c.radial(a, b);
            if outer == 0.0 {
                0.0
            } else {
                outer * c.pieces(a, b)[j]
            }
        });
        sigma.multiplied_by(&format!("sigma_{j}"), w)
    };
    Ok(ConeSplit {
        sigma_phi,
        pieces: [piece(0), piece(1), piece(2)],
        specs: [
            ClassSpec::Star1 { m1: s - t0, m2: m - s1 - s2 + t0 },
            ClassSpec::Sep { m1: s - s1 + m + t2, m2: -s2 - t2 },
            ClassSpec::Sep { m1: -s1 - t2, m2: s - s2 + m + t2 },
        ],
        t0,
        t2,
        cone,
    })
}

impl ConeSplit {
    /// Largest `|σ - (σΦ + σ_0 + σ_1 + σ_2)|` over random points in `[-r, r]^{2n}` off the origin.
    pub fn sum_error(&self, sigma: &Symbol, points: usize, radius: f64, seed: u64) -> f64 {
        let d = sigma.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..points {
            let x = [rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI)];
            let mut a = [0.0; 2];
            let mut b = [0.0; 2];
            for i in 0..d {
                a[i] = rng.gen_range(-radius..radius);
                b[i] = rng.gen_range(-radius..radius);
            }
            let (x, a, b) = (&x[..d], &a[..d], &b[..d]);
            let total = self.sigma_phi.eval(x, a, b) + self.pieces.iter().map(|p| p.eval(x, a, b)).sum::<Complex64>();
            worst = worst.max((total - sigma.eval(x, a, b)).norm());
        }
        worst
    }

    /// `class_constant` of each `σ_j` against its class.
    pub fn memberships(&self, opts: &ClassOptions) -> Result<Vec<ClassReport>> {
        self.pieces.iter().zip(&self.specs).map(|(p, s)| class_constant(p, *s, opts)).collect()
    }
}

/// Observed support relations on `supp σ_1`: `|ξ_2| ≤ C|ξ_1|` and `|ξ_1| ≈ |ξ_1+ξ_2|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportGeometry {
    pub samples_in_support: usize,
    /// Largest `|ξ_2|/|ξ_1|`.
    pub max_second_over_first: f64,
    /// Range of `|ξ_1|/|ξ_1+ξ_2|`.
    pub first_over_sum: (f64, f64),
    /// `1/c`; the lower end of `first_over_sum` is checked against `c/√2`.
    pub bound: f64,
    pub holds: bool,
}

pub fn support_geometry(cone: &ConeFamily, points: usize, seed: u64) -> SupportGeometry {
    let d = cone.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>().sqrt();
    let mut count = 0;
    let mut max21 = 0.0f64;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for _ in 0..points {
        let mut a = [0.0; 2];
        let mut b = [0.0; 2];
        for i in 0..d {
            a[i] = rng.gen_range(-4.0..4.0);
            b[i] = rng.gen_range(-4.0..4.0);
        }
        let (a, b) = (&a[..d], &b[..d]);
        let weight = (1.0 - cone.radial(a, b)) * cone.pieces(a, b)[1];
        if !(weight > 0.0) {
            continue;
        }
        count += 1;
        let s: Vec<f64> = a.iter().zip(b).map(|(u, v)| u + v).collect();
        max21 = max21.max(norm(b) / norm(a));
        let r = norm(a) / norm(&s);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    // on the unit sphere |η_1|, |η_1+η_2| > c and |η_1+η_2| <= √2
    let bound = 1.0 / cone.constant();
    let holds = max21 <= bound && hi <= bound && lo >= cone.constant() / 2f64.sqrt();
    SupportGeometry { samples_in_support: count, max_second_over_first: max21, first_over_sum: (lo, hi), bound, holds }
}
