//! Periodic grids on `[0, 2π)^n` and band-limited functions on them.
//!
//! Coefficients follow `f(x) = Σ_ξ f̂(ξ) e^{i x·ξ}`, so `f̂` is the forward DFT
//! divided by `N^n`. Spectra are stored in FFT order.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Integer frequency. Only the first `dim` components are meaningful.
pub type Freq = [i64; 2];

/// Relative size of out-of-band spectral content that is still treated as roundoff.
pub const BAND_TOLERANCE: f64 = 1e-11;

/// Uniform grid of `N^n` points on the torus together with the band limit `Ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGrid {
    dim: usize,
    size: usize,
    band_limit: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, size: usize, band_limit: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(LabError::InvalidGrid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if size < 4 || !size.is_power_of_two() {
            return Err(LabError::InvalidGrid(format!("N must be a power of two >= 4, got {size}")));
        }
        if band_limit == 0 || 4 * band_limit > size {
            return Err(LabError::InvalidGrid(format!(
                "band limit must satisfy 1 <= Xi <= N/4, got Xi={band_limit}, N={size}"
            )));
        }
        Ok(Self { dim, size, band_limit })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    /// Number of grid points, `N^n`.
    pub fn len(&self) -> usize {
        self.size.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.size as f64
    }

    /// Quadrature weight of a single cell, `(2π/N)^n`.
    pub fn cell_weight(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total volume `(2π)^n`.
    pub fn volume(&self) -> f64 {
        (2.0 * PI).powi(self.dim as i32)
    }

    fn axis_freq(&self, j: usize) -> i64 {
        if j < self.size / 2 {
            j as i64
        } else {
            j as i64 - self.size as i64
        }
    }

    fn axis_index(&self, k: i64) -> usize {
        k.rem_euclid(self.size as i64) as usize
    }

    /// Frequency stored at flat index `idx`.
    pub fn freq(&self, idx: usize) -> Freq {
        if self.dim == 1 {
            [self.axis_freq(idx), 0]
        } else {
            [self.axis_freq(idx / self.size), self.axis_freq(idx % self.size)]
        }
    }

    /// Grid point stored at flat index `idx`.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let h = self.spacing();
        if self.dim == 1 {
            [h * idx as f64, 0.0]
        } else {
            [h * (idx / self.size) as f64, h * (idx % self.size) as f64]
        }
    }

    /// Whether `k` lies in the window `{-N/2, .., N/2-1}^n`.
    pub fn in_window(&self, k: Freq) -> bool {
        let lo = -(self.size as i64 / 2);
        let hi = self.size as i64 / 2 - 1;
        (0..self.dim).all(|i| k[i] >= lo && k[i] <= hi)
    }

    /// Whether every component of `k` is at most `Ξ` in absolute value.
    pub fn admissible(&self, k: Freq) -> bool {
        let xi = self.band_limit as i64;
        (0..self.dim).all(|i| k[i].abs() <= xi)
    }

    /// Flat index of `k`, or `None` outside the window.
    pub fn index(&self, k: Freq) -> Option<usize> {
        if !self.in_window(k) {
            return None;
        }
        Some(self.wrap_index(k))
    }

    /// Flat index of `k` reduced modulo `N` on each axis.
    pub fn wrap_index(&self, k: Freq) -> usize {
        if self.dim == 1 {
            self.axis_index(k[0])
        } else {
            self.axis_index(k[0]) * self.size + self.axis_index(k[1])
        }
    }

    pub fn freqs(&self) -> impl Iterator<Item = Freq> + '_ {
        (0..self.len()).map(move |i| self.freq(i))
    }

    pub(crate) fn check_same(&self, other: &TorusGrid) -> Result<()> {
        if self != other {
            return Err(LabError::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// Euclidean length of the first `dim` components.
pub fn freq_norm(k: Freq, dim: usize) -> f64 {
    let mut s = 0.0;
    for &c in k.iter().take(dim) {
        s += (c as f64) * (c as f64);
    }
    s.sqrt()
}

/// Japanese bracket `(1 + |ξ|²)^{1/2}`.
pub fn bracket(xi: &[f64]) -> f64 {
    (1.0 + xi.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

pub fn freq_f64(k: Freq, dim: usize) -> [f64; 2] {
    let mut out = [0.0; 2];
    for i in 0..dim {
        out[i] = k[i] as f64;
    }
    out
}

pub fn freq_add(a: Freq, b: Freq) -> Freq {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn freq_neg(a: Freq) -> Freq {
    [-a[0], -a[1]]
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    // Column buffer for 2D transforms, kept so large grids are not reallocated per call.
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

fn transform(grid: &TorusGrid, data: &mut [Complex64], inverse: bool) {
    let n = grid.size;
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    if grid.dim == 1 {
        fft.process(data);
        return;
    }
    fft.process(data);
    SCRATCH.with(|cell| {
        let mut col = cell.borrow_mut();
        col.resize(n * n, Complex64::new(0.0, 0.0));
        transpose(data, &mut col, n);
        fft.process(&mut col);
        transpose(&col, data, n);
    });
}

/// `dst[c][r] = src[r][c]` in cache-sized tiles.
fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    const TILE: usize = 32;
    for rb in (0..n).step_by(TILE) {
        for cb in (0..n).step_by(TILE) {
            for r in rb..(rb + TILE).min(n) {
                for c in cb..(cb + TILE).min(n) {
                    dst[c * n + r] = src[r * n + c];
                }
            }
        }
    }
}

/// Forward transform with the `1/N^n` normalisation.
pub fn analyze(grid: &TorusGrid, samples: &[Complex64]) -> Vec<Complex64> {
    let mut data = samples.to_vec();
    transform(grid, &mut data, false);
    let scale = 1.0 / grid.len() as f64;
    for v in &mut data {
        *v *= scale;
    }
    data
}

/// Inverse of [`analyze`].
pub fn synthesize_dense(grid: &TorusGrid, spectrum: &[Complex64]) -> Vec<Complex64> {
    let mut data = spectrum.to_vec();
    transform(grid, &mut data, true);
    data
}

/// A function on the torus, kept both as samples and as Fourier coefficients.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: TorusGrid,
    samples: Vec<Complex64>,
    spectrum: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(grid: TorusGrid) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, samples: z.clone(), spectrum: z }
    }

    pub fn from_samples(grid: TorusGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(LabError::GridMismatch(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        let spectrum = analyze(&grid, &samples);
        Ok(Self { grid, samples, spectrum })
    }

    /// Builds from a dense spectrum in FFT order. The spectrum is kept as given.
    pub fn from_spectrum(grid: TorusGrid, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(LabError::GridMismatch(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                spectrum.len()
            )));
        }
        let samples = synthesize_dense(&grid, &spectrum);
        Ok(Self { grid, samples, spectrum })
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn([f64; 2]) -> Complex64) -> Self {
        let samples: Vec<Complex64> = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        let spectrum = analyze(&grid, &samples);
        Self { grid, samples, spectrum }
    }

    /// Builds from sparse coefficients. Repeated frequencies are summed.
    pub fn synthesize(grid: TorusGrid, entries: &[(Freq, Complex64)]) -> Result<Self> {
        let mut spectrum = vec![Complex64::new(0.0, 0.0); grid.len()];
        for &(k, v) in entries {
            let idx = grid
                .index(k)
                .ok_or_else(|| LabError::OutsideWindow(format!("{:?}", &k[..grid.dim])))?;
            spectrum[idx] += v;
        }
        Self::from_spectrum(grid, spectrum)
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }

    pub fn coefficient(&self, k: Freq) -> Complex64 {
        match self.grid.index(k) {
            Some(i) => self.spectrum[i],
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn max_coefficient(&self) -> f64 {
        self.spectrum.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Nonzero coefficients with all components within `Ξ`.
    ///
    /// Errors if more than roundoff sits outside the band; that roundoff is dropped.
    pub fn band_support(&self) -> Result<Vec<(Freq, Complex64)>> {
        let peak = self.max_coefficient();
        let floor = peak * 1e-15;
        let mut out = Vec::new();
        for (i, &c) in self.spectrum.iter().enumerate() {
            let a = c.norm();
            if a == 0.0 || a <= floor {
                continue;
            }
            let k = self.grid.freq(i);
            if self.grid.admissible(k) {
                out.push((k, c));
            } else if a > BAND_TOLERANCE * peak.max(1e-300) {
                return Err(LabError::BandLimit(format!(
                    "coefficient {:.3e} at {:?} exceeds Xi={}",
                    a,
                    &k[..self.grid.dim],
                    self.grid.band_limit
                )));
            }
        }
        Ok(out)
    }

    /// Multiplies the spectrum by `m(ξ)`.
    pub fn apply_multiplier(&self, m: impl Fn(&[f64]) -> Complex64) -> Self {
        let dim = self.grid.dim;
        let spectrum: Vec<Complex64> = self
            .spectrum
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if c == Complex64::new(0.0, 0.0) {
                    return c;
                }
                let k = freq_f64(self.grid.freq(i), dim);
                c * m(&k[..dim])
            })
            .collect();
        Self::from_spectrum(self.grid, spectrum).expect("same grid")
    }

    /// Multiplies the spectrum by a precomputed real mask.
    pub fn apply_mask(&self, mask: &[f64]) -> Result<Self> {
        if mask.len() != self.grid.len() {
            return Err(LabError::GridMismatch("mask length".into()));
        }
        let spectrum = self.spectrum.iter().zip(mask).map(|(c, m)| c * m).collect();
        Self::from_spectrum(self.grid, spectrum)
    }

    /// `⟨D⟩^s f`.
    pub fn bessel_potential(&self, s: f64) -> Self {
        if s == 0.0 {
            return self.clone();
        }
        self.apply_multiplier(|xi| Complex64::new(bracket(xi).powf(s), 0.0))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|v| v * a).collect(),
            spectrum: self.spectrum.iter().map(|v| v * a).collect(),
        }
    }

    /// `a f + b g`.
    pub fn combine(&self, a: Complex64, other: &GridFunction, b: Complex64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(u, v)| a * u + b * v).collect(),
            spectrum: self.spectrum.iter().zip(&other.spectrum).map(|(u, v)| a * u + b * v).collect(),
        })
    }

    /// Pointwise product. Errors when the product would alias.
    pub fn product(&self, other: &GridFunction) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        self.band_support()?;
        other.band_support()?;
        let samples = self.samples.iter().zip(&other.samples).map(|(u, v)| u * v).collect();
        Self::from_samples(self.grid, samples)
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max)
    }

    /// Maximum distance between the two spectra.
    pub fn spectral_diff(&self, other: &GridFunction) -> f64 {
        self.spectrum
            .iter()
            .zip(&other.spectrum)
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max)
    }
}
