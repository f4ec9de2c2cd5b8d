//! Smooth cutoffs and partitions of unity in frequency space.
//!
//! Every profile is built from the bump `β(t) = exp(1 - 1/(1-t²))` on `(-1, 1)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{LabError, Result};
use crate::torus::{bracket, freq_f64, TorusGrid};

/// `exp(1 - 1/(1-t²))` for `|t| < 1`, zero otherwise. `bump(0) = 1`.
pub fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// Smooth transition: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let rise = bump(t - 1.0);
        rise / (rise + bump(t))
    }
}

/// 1 for `r ≤ inner`, 0 for `r ≥ outer`.
pub fn plateau(r: f64, inner: f64, outer: f64) -> f64 {
    smooth_step((outer - r) / (outer - inner))
}

/// Plateau in `log2 r`: 1 when `|log2(r/center)| ≤ inner`, 0 when it is `≥ outer`.
pub fn log_plateau(r: f64, center: f64, inner: f64, outer: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    plateau((r / center).log2().abs(), inner, outer)
}

fn euclid(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Littlewood–Paley family `ψ_0 = ρ(|ξ|)`, `ψ_k(ξ) = ψ_0(2^{-k}ξ) - ψ_0(2^{-k+1}ξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpFamily {
    inner: f64,
    outer: f64,
    sharp: bool,
}

impl LpFamily {
    /// `ψ_0 = 1` on `|ξ| ≤ 1`, supported in `|ξ| ≤ 2`.
    pub fn standard() -> Self {
        Self { inner: 1.0, outer: 2.0, sharp: false }
    }

    /// `ψ_0 = 1` on `|ξ| ≤ 2^{1/4}`, supported in `|ξ| ≤ 2^{3/4}`, so `ψ_k = 1`
    /// on `2^{k-1/4} ≤ |ξ| ≤ 2^{k+1/4}`.
    pub fn sharp() -> Self {
        Self { inner: 2f64.powf(0.25), outer: 2f64.powf(0.75), sharp: true }
    }

    /// Any radial profile with `1 ≤ inner < outer ≤ 2`.
    pub fn with_profile(inner: f64, outer: f64) -> Result<Self> {
        if !(1.0..2.0).contains(&inner) || outer <= inner || outer > 2.0 {
            return Err(LabError::InvalidParameter(format!(
                "LP profile needs 1 <= inner < outer <= 2, got ({inner}, {outer})"
            )));
        }
        Ok(Self { inner, outer, sharp: false })
    }

    pub fn is_sharp(&self) -> bool {
        self.sharp
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    fn psi0(&self, r: f64) -> f64 {
        plateau(r, self.inner, self.outer)
    }

    pub fn member(&self, k: u32, xi: &[f64]) -> f64 {
        self.member_radial(k, euclid(xi))
    }

    pub fn member_radial(&self, k: u32, r: f64) -> f64 {
        if k == 0 {
            self.psi0(r)
        } else {
            let s = 2f64.powi(-(k as i32));
            self.psi0(s * r) - self.psi0(2.0 * s * r)
        }
    }

    /// Smallest `K` such that `Σ_{k≤K} ψ_k = 1` on `|ξ| ≤ radius`.
    pub fn bands_needed(&self, radius: f64) -> u32 {
        let mut k = 0;
        while 2f64.powi(k as i32) * self.inner < radius {
            k += 1;
        }
        k
    }

    /// `ψ_k` sampled on the frequency window of `grid`.
    pub fn mask(&self, grid: &TorusGrid, k: u32) -> Vec<f64> {
        let dim = grid.dim();
        (0..grid.len())
            .map(|i| {
                let f = freq_f64(grid.freq(i), dim);
                self.member(k, &f[..dim])
            })
            .collect()
    }
}

/// Uniform frequency cutoff `φ` and its integer translates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformFamily {
    radius: f64,
    exact: bool,
}

impl UniformFamily {
    /// `exact` requests `Σ_ν φ(ξ-ν) = 1`, which needs `radius > 1/2`.
    /// Otherwise `φ` is the plain bump of the given radius, with `φ(0) = 1`.
    pub fn new(radius: f64, exact: bool) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(LabError::InvalidParameter(format!("radius must be positive, got {radius}")));
        }
        if exact && radius <= 0.5 {
            return Err(LabError::InvalidParameter(format!(
                "an exact partition needs radius > 1/2, got {radius}"
            )));
        }
        Ok(Self { radius, exact })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn profile_1d(&self, t: f64) -> f64 {
        let r = self.radius;
        let own = bump(t / r);
        if !self.exact || own == 0.0 {
            return own;
        }
        let reach = r.ceil() as i64 + 1;
        let base = t.round() as i64;
        let mut total = 0.0;
        for nu in (base - reach)..=(base + reach) {
            total += bump((t - nu as f64) / r);
        }
        own / total
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        xi.iter().map(|&t| self.profile_1d(t)).product()
    }

    /// `Σ_ν φ(ξ - ν)`.
    pub fn translate_sum(&self, xi: &[f64]) -> f64 {
        let reach = self.radius.ceil() as i64 + 1;
        let mut prod = 1.0;
        for &t in xi {
            let base = t.round() as i64;
            let mut s = 0.0;
            for nu in (base - reach)..=(base + reach) {
                s += self.profile_1d(t - nu as f64);
            }
            prod *= s;
        }
        prod
    }

    /// Integer points `ν` with `φ(k - ν) ≠ 0` possible, per axis.
    pub fn reach(&self) -> i64 {
        self.radius.ceil() as i64
    }
}

/// Tensor plateau: 1 on `[-inner, inner]^n`, supported in `[-outer, outer]^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauCutoff {
    inner: f64,
    outer: f64,
}

impl PlateauCutoff {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner >= 0.0 && outer > inner) {
            return Err(LabError::InvalidParameter(format!("plateau needs 0 <= inner < outer, got ({inner}, {outer})")));
        }
        Ok(Self { inner, outer })
    }

    /// Companion of `φ`: equal to 1 on `supp φ`, supported in twice the radius.
    pub fn companion(phi: &UniformFamily) -> Self {
        Self { inner: phi.radius, outer: 2.0 * phi.radius }
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        xi.iter().map(|&t| plateau(t.abs(), self.inner, self.outer)).product()
    }
}

/// Family `χ_ℓ(ξ) = ⟨ℓ⟩^{2L} ⟨ξ⟩^{-2L} θ(ξ - ℓ)` with `θ` an exact partition supported in `[-1,1]^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsFamily {
    l: u32,
    theta: UniformFamily,
}

impl PsFamily {
    pub fn new(l: u32) -> Result<Self> {
        if l == 0 {
            return Err(LabError::InvalidParameter("L must be at least 1".into()));
        }
        Ok(Self { l, theta: UniformFamily { radius: 1.0, exact: true } })
    }

    pub fn order(&self) -> u32 {
        self.l
    }

    pub fn theta(&self) -> &UniformFamily {
        &self.theta
    }

    pub fn chi(&self, ell: &[f64], xi: &[f64]) -> f64 {
        let shifted: Vec<f64> = xi.iter().zip(ell).map(|(a, b)| a - b).collect();
        let th = self.theta.eval(&shifted);
        if th == 0.0 {
            return 0.0;
        }
        (bracket(ell) / bracket(xi)).powi(2 * self.l as i32) * th
    }

    /// `Σ_ℓ ⟨ℓ⟩^{-2L} ⟨ξ⟩^{2L} χ_ℓ(ξ)`.
    pub fn resolution_sum(&self, xi: &[f64]) -> f64 {
        let dim = xi.len();
        let base: Vec<i64> = xi.iter().map(|t| t.round() as i64).collect();
        let mut total = 0.0;
        let count = 5usize.pow(dim as u32);
        for c in 0..count {
            let mut ell = [0.0; 2];
            let mut rem = c;
            for i in 0..dim {
                ell[i] = (base[i] + (rem % 5) as i64 - 2) as f64;
                rem /= 5;
            }
            let ell = &ell[..dim];
            let w = (bracket(xi) / bracket(ell)).powi(2 * self.l as i32);
            total += w * self.chi(ell, xi);
        }
        total
    }

    /// `∫ |F^{-1} χ_ℓ|` over `ℝ^n`, by sampling `χ_ℓ` with step `1/per_unit` on a box of side `box_side`.
    pub fn inverse_transform_l1(&self, ell: &[i64], per_unit: usize, box_side: usize) -> Result<f64> {
        let dim = ell.len();
        if dim == 0 || dim > 2 {
            return Err(LabError::InvalidParameter("dimension must be 1 or 2".into()));
        }
        let m = per_unit * box_side;
        if !m.is_power_of_two() || box_side < 4 {
            return Err(LabError::InvalidParameter("per_unit * box_side must be a power of two, box_side >= 4".into()));
        }
        let h = 1.0 / per_unit as f64;
        let ellf: Vec<f64> = ell.iter().map(|&v| v as f64).collect();
        let mut data = vec![Complex64::new(0.0, 0.0); m.pow(dim as u32)];
        let offset = |j: usize| -> f64 {
            let jj = if j < m / 2 { j as f64 } else { j as f64 - m as f64 };
            jj * h
        };
        for (idx, slot) in data.iter_mut().enumerate() {
            let mut xi = [0.0; 2];
            if dim == 1 {
                xi[0] = ellf[0] + offset(idx);
            } else {
                xi[0] = ellf[0] + offset(idx / m);
                xi[1] = ellf[1] + offset(idx % m);
            }
            *slot = Complex64::new(self.chi(&ellf, &xi[..dim]), 0.0);
        }
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_inverse(m);
        if dim == 1 {
            fft.process(&mut data);
        } else {
            fft.process(&mut data);
            let mut col = vec![Complex64::new(0.0, 0.0); m * m];
            for r in 0..m {
                for c in 0..m {
                    col[c * m + r] = data[r * m + c];
                }
            }
            fft.process(&mut col);
            data = col;
        }
        // F^{-1}χ(x) = (2π)^{-n} ∫ e^{ixξ} χ(ξ) dξ ≈ (2π)^{-n} h^n Σ; x-spacing is 2π/(m h).
        let scale = (h / (2.0 * PI)).powi(dim as i32);
        let dx = (2.0 * PI / (m as f64 * h)).powi(dim as i32);
        Ok(data.iter().map(|v| v.norm() * scale).sum::<f64>() * dx)
    }
}

/// Radial cutoff plus three conic pieces on `ℝ^n × ℝ^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeFamily {
    dim: usize,
    c: f64,
    shrink: f64,
    width: f64,
}

impl ConeFamily {
    pub fn new(dim: usize, c: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(LabError::InvalidParameter(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(c > 0.0 && c < 1.0) {
            return Err(LabError::InvalidParameter(format!("cone constant must lie in (0,1), got {c}")));
        }
        let fam = Self { dim, c, shrink: c / 5.0, width: c / 2.0 };
        fam.check_cover()?;
        Ok(fam)
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn gate(&self, r: f64) -> f64 {
        smooth_step((r - self.c - self.shrink) / self.width)
    }

    /// `(ρ_0, ρ_1, ρ_2)` as functions of `(|η_1|, |η_2|, |η_1+η_2|)`; homogeneous of degree 0.
    fn rho_from_norms(&self, a1: f64, a2: f64, a12: f64, scale: f64) -> [f64; 3] {
        let (a1, a2, a12) = (a1 / scale, a2 / scale, a12 / scale);
        [
            self.gate(a1) * self.gate(a2),
            self.gate(a12) * self.gate(a1),
            self.gate(a12) * self.gate(a2),
        ]
    }

    fn norms(&self, xi1: &[f64], xi2: &[f64]) -> (f64, f64, f64, f64) {
        let a1 = euclid(xi1);
        let a2 = euclid(xi2);
        let mut s = 0.0;
        for i in 0..self.dim {
            let v = xi1[i] + xi2[i];
            s += v * v;
        }
        let a12 = s.sqrt();
        (a1, a2, a12, (a1 * a1 + a2 * a2).sqrt())
    }

    /// `(Φ_0, Φ_1, Φ_2)` at a nonzero point.
    pub fn pieces(&self, xi1: &[f64], xi2: &[f64]) -> [f64; 3] {
        let (a1, a2, a12, r) = self.norms(xi1, xi2);
        if r == 0.0 {
            return [f64::NAN; 3];
        }
        let rho = self.rho_from_norms(a1, a2, a12, r);
        let total = rho[0] + rho[1] + rho[2];
        [rho[0] / total, rho[1] / total, rho[2] / total]
    }

    /// Radial cutoff: 1 on `|(ξ_1,ξ_2)| ≤ 1`, supported in `|(ξ_1,ξ_2)| ≤ 2`.
    pub fn radial(&self, xi1: &[f64], xi2: &[f64]) -> f64 {
        let (_, _, _, r) = self.norms(xi1, xi2);
        plateau(r, 1.0, 2.0)
    }

    /// Whether a unit point `(η_1,η_2)` lies in the open set `V_j`.
    pub fn in_cone(&self, j: usize, a1: f64, a2: f64, a12: f64) -> bool {
        let c = self.c;
        match j {
            0 => a1 > c && a2 > c,
            1 => a12 > c && a1 > c,
            _ => a12 > c && a2 > c,
        }
    }

    /// Samples the sphere through `|η_1| = cos t`, `|η_2| = sin t` and the angle between the two
    /// blocks, which determines `|η_1+η_2|`. Returns the smallest `Σρ_j` seen.
    pub fn cover_margin(&self, samples: usize) -> f64 {
        let angles: Vec<f64> = if self.dim == 1 {
            vec![1.0, -1.0]
        } else {
            let k = (samples as f64).sqrt().ceil() as usize;
            (0..=k).map(|i| (PI * i as f64 / k as f64).cos()).collect()
        };
        let nt = samples / angles.len().max(1);
        let mut worst = f64::INFINITY;
        for i in 0..=nt {
            let t = 0.5 * PI * i as f64 / nt as f64;
            let (a1, a2) = (t.cos(), t.sin());
            for &cphi in &angles {
                let a12 = (1.0 + 2.0 * a1 * a2 * cphi).max(0.0).sqrt();
                let covered = (0..3).any(|j| self.in_cone(j, a1, a2, a12));
                let rho = self.rho_from_norms(a1, a2, a12, 1.0);
                let total = if covered { rho[0] + rho[1] + rho[2] } else { 0.0 };
                worst = worst.min(total);
            }
        }
        worst
    }

    fn check_cover(&self) -> Result<()> {
        let margin = self.cover_margin(100_000);
        if margin < 0.5 {
            return Err(LabError::CoverFailure(format!(
                "c = {} leaves sphere points with total cone weight {:.3e}",
                self.c, margin
            )));
        }
        Ok(())
    }
}
