//! Bilinear symbols, symbol-class constants, and the explicit symbol and input families.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::indices::Exponent;
use crate::partitions::{bump, log_plateau, UniformFamily};
use crate::torus::{bracket, freq_add, freq_f64, freq_norm, Freq, GridFunction, TorusGrid};

/// `(ξ_1, ξ_2) ↦ σ(ξ_1, ξ_2)`.
pub type Amplitude = Arc<dyn Fn(&[f64], &[f64]) -> Complex64 + Send + Sync>;
/// `ξ ↦ m(ξ)`.
pub type Multiplier = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// How a symbol can be evaluated.
#[derive(Clone)]
pub enum SymbolForm {
    /// Any `x`-independent `σ(ξ_1, ξ_2)`.
    Bilinear(Amplitude),
    /// `m_1(ξ_1) m_2(ξ_2)`.
    Separable(Multiplier, Multiplier),
    /// `w(ξ_1 + ξ_2)`.
    OfSum(Multiplier),
    /// `Σ_η e^{ix·η} a_η(ξ_1, ξ_2)` with finitely many `x`-frequencies `η`.
    Modulated(Vec<(Freq, Amplitude)>),
    /// Only lattice values are known.
    LatticeOnly,
}

/// Lattice pairs `(k_1, k_2)` where a symbol is nonzero, with its values.
pub trait LatticeSupport: Send + Sync {
    fn for_each(&self, visit: &mut dyn FnMut(Freq, Freq, Complex64));
    fn value(&self, k1: Freq, k2: Freq) -> Option<Complex64>;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Σ_{k_1+k_2=k} v(k_1,k_2) a(k_1) b(k_2)`, handed to `out` per output frequency `k`.
    /// Returns the number of pairs visited.
    fn contract(&self, a: &dyn Fn(Freq) -> Complex64, b: &dyn Fn(Freq) -> Complex64, out: &mut dyn FnMut(Freq, Complex64)) -> u64 {
        let mut pairs = 0u64;
        self.for_each(&mut |k1, k2, v| {
            pairs += 1;
            let x = a(k1);
            if x == ZERO {
                return;
            }
            let y = b(k2);
            if y == ZERO {
                return;
            }
            out(freq_add(k1, k2), v * x * y);
        });
        pairs
    }
}

/// Explicit list of lattice pairs.
#[derive(Debug, Clone, Default)]
pub struct SparseTable {
    entries: Vec<(Freq, Freq, Complex64)>,
    index: HashMap<(Freq, Freq), usize>,
}

impl SparseTable {
    pub fn new(mut entries: Vec<(Freq, Freq, Complex64)>) -> Self {
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let index = entries.iter().enumerate().map(|(i, e)| ((e.0, e.1), i)).collect();
        Self { entries, index }
    }

    pub fn entries(&self) -> &[(Freq, Freq, Complex64)] {
        &self.entries
    }
}

impl LatticeSupport for SparseTable {
    fn for_each(&self, visit: &mut dyn FnMut(Freq, Freq, Complex64)) {
        for &(a, b, v) in &self.entries {
            visit(a, b, v);
        }
    }

    fn value(&self, k1: Freq, k2: Freq) -> Option<Complex64> {
        self.index.get(&(k1, k2)).map(|&i| self.entries[i].2)
    }

    fn len(&self) -> usize {
        self.entries.len()
    }
}

/// Table values multiplied by `⟨k_1+k_2⟩^s ⟨k_1⟩^{-s_1} ⟨k_2⟩^{-s_2}`.
pub struct WeightedSupport {
    inner: Arc<dyn LatticeSupport>,
    dim: usize,
    s1: f64,
    s2: f64,
    s: f64,
}

impl WeightedSupport {
    fn weight(&self, k1: Freq, k2: Freq) -> f64 {
        let d = self.dim;
        let a = freq_f64(k1, d);
        let b = freq_f64(k2, d);
        let c = freq_f64(freq_add(k1, k2), d);
        bracket(&c[..d]).powf(self.s) * bracket(&a[..d]).powf(-self.s1) * bracket(&b[..d]).powf(-self.s2)
    }
}

impl LatticeSupport for WeightedSupport {
    fn for_each(&self, visit: &mut dyn FnMut(Freq, Freq, Complex64)) {
        self.inner.for_each(&mut |a, b, v| visit(a, b, v * self.weight(a, b)));
    }

    fn value(&self, k1: Freq, k2: Freq) -> Option<Complex64> {
        self.inner.value(k1, k2).map(|v| v * self.weight(k1, k2))
    }

    fn len(&self) -> usize {
        self.inner.len()
    }
}

/// A bilinear symbol `σ(x, ξ_1, ξ_2)` with family metadata.
#[derive(Clone)]
pub struct Symbol {
    name: String,
    params: Vec<(String, f64)>,
    dim: usize,
    form: SymbolForm,
    table: Option<Arc<dyn LatticeSupport>>,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("dim", &self.dim)
            .field("x_dependent", &self.x_dependent())
            .field("table", &self.table.as_ref().map(|t| t.len()))
            .finish()
    }
}

impl Symbol {
    pub fn new(name: impl Into<String>, dim: usize, form: SymbolForm) -> Self {
        Self { name: name.into(), params: Vec::new(), dim, form, table: None }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.push((key.to_string(), value));
        self
    }

    pub fn with_table(mut self, table: Arc<dyn LatticeSupport>) -> Self {
        self.table = Some(table);
        self
    }

    /// `σ ≡ c`.
    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::new("constant", dim, SymbolForm::OfSum(Arc::new(move |_| c)))
    }

    /// `⟨(ξ_1, ξ_2)⟩^m`.
    pub fn bracket_power(dim: usize, m: f64) -> Self {
        Self::new(
            "bracket_power",
            dim,
            SymbolForm::Bilinear(Arc::new(move |a, b| {
                let r2: f64 = a.iter().chain(b).map(|v| v * v).sum();
                Complex64::new((1.0 + r2).powf(m / 2.0), 0.0)
            })),
        )
        .with_param("m", m)
    }

    pub fn separable(dim: usize, m1: Multiplier, m2: Multiplier) -> Self {
        Self::new("separable", dim, SymbolForm::Separable(m1, m2))
    }

    pub fn of_sum(dim: usize, w: Multiplier) -> Self {
        Self::new("of_sum", dim, SymbolForm::OfSum(w))
    }

    pub fn bilinear(dim: usize, a: Amplitude) -> Self {
        Self::new("bilinear", dim, SymbolForm::Bilinear(a))
    }

    pub fn modulated(dim: usize, modes: Vec<(Freq, Amplitude)>) -> Self {
        Self::new("modulated", dim, SymbolForm::Modulated(modes))
    }

    pub fn lattice_only(dim: usize, table: SparseTable) -> Self {
        Self::new("lattice_only", dim, SymbolForm::LatticeOnly).with_table(Arc::new(table))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &SymbolForm {
        &self.form
    }

    pub fn table(&self) -> Option<&Arc<dyn LatticeSupport>> {
        self.table.as_ref()
    }

    pub fn x_dependent(&self) -> bool {
        match &self.form {
            SymbolForm::Modulated(modes) => modes.iter().any(|(eta, _)| eta[..self.dim].iter().any(|&v| v != 0)),
            _ => false,
        }
    }

    pub fn is_evaluable(&self) -> bool {
        !matches!(self.form, SymbolForm::LatticeOnly)
    }

    /// `x`-frequencies carried by the symbol.
    pub fn x_modes(&self) -> Vec<Freq> {
        match &self.form {
            SymbolForm::Modulated(modes) => modes.iter().map(|(eta, _)| *eta).collect(),
            _ => vec![[0, 0]],
        }
    }

    /// `σ(x, ξ_1, ξ_2)`; `x` is ignored by `x`-independent symbols.
    pub fn eval(&self, x: &[f64], xi1: &[f64], xi2: &[f64]) -> Complex64 {
        match &self.form {
            SymbolForm::Bilinear(a) => a(xi1, xi2),
            SymbolForm::Separable(m1, m2) => m1(xi1) * m2(xi2),
            SymbolForm::OfSum(w) => {
                let mut s = [0.0; 2];
                for i in 0..self.dim {
                    s[i] = xi1[i] + xi2[i];
                }
                w(&s[..self.dim])
            }
            SymbolForm::Modulated(modes) => modes
                .iter()
                .map(|(eta, a)| {
                    let phase: f64 = (0..self.dim).map(|i| eta[i] as f64 * x[i]).sum();
                    a(xi1, xi2) * Complex64::from_polar(1.0, phase)
                })
                .sum(),
            SymbolForm::LatticeOnly => self.lattice_value(xi1, xi2).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }

    fn lattice_value(&self, xi1: &[f64], xi2: &[f64]) -> Option<Complex64> {
        let table = self.table.as_ref()?;
        let mut k1 = [0i64; 2];
        let mut k2 = [0i64; 2];
        for i in 0..self.dim {
            if xi1[i].fract() != 0.0 || xi2[i].fract() != 0.0 {
                return None;
            }
            k1[i] = xi1[i] as i64;
            k2[i] = xi2[i] as i64;
        }
        Some(table.value(k1, k2).unwrap_or(ZERO))
    }

    /// `x`-independent value `σ(ξ_1, ξ_2)` at lattice frequencies.
    pub fn lattice_eval(&self, k1: Freq, k2: Freq) -> Complex64 {
        if let (SymbolForm::LatticeOnly, Some(t)) = (&self.form, &self.table) {
            return t.value(k1, k2).unwrap_or(ZERO);
        }
        let a = freq_f64(k1, self.dim);
        let b = freq_f64(k2, self.dim);
        self.eval(&[0.0; 2][..self.dim], &a[..self.dim], &b[..self.dim])
    }

    /// `σ(x, ξ_1, ξ_2) w(ξ_1, ξ_2)`. The lattice table is dropped.
    pub fn multiplied_by(&self, name: &str, w: Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>) -> Symbol {
        let form = match &self.form {
            SymbolForm::Modulated(modes) => SymbolForm::Modulated(
                modes
                    .iter()
                    .map(|(eta, a)| {
                        let (a, w) = (a.clone(), w.clone());
                        let amp: Amplitude = Arc::new(move |x: &[f64], y: &[f64]| {
                            let f = w(x, y);
                            if f == 0.0 {
                                ZERO
                            } else {
                                a(x, y) * f
                            }
                        });
                        (*eta, amp)
                    })
                    .collect(),
            ),
            _ => {
                let inner = self.clone();
                let d = self.dim;
                let amp: Amplitude = Arc::new(move |x: &[f64], y: &[f64]| {
                    let f = w(x, y);
                    if f == 0.0 {
                        ZERO
                    } else {
                        inner.eval(&[0.0; 2][..d], x, y) * f
                    }
                });
                SymbolForm::Bilinear(amp)
            }
        };
        self.replace_form(name, form, None)
    }

    pub(crate) fn replace_form(&self, name: &str, form: SymbolForm, table: Option<Arc<dyn LatticeSupport>>) -> Symbol {
        Symbol { name: name.to_string(), params: self.params.clone(), dim: self.dim, form, table }
    }

    pub(crate) fn weighted_table(&self, s1: f64, s2: f64, s: f64) -> Option<Arc<dyn LatticeSupport>> {
        self.table.as_ref().map(|t| {
            Arc::new(WeightedSupport { inner: t.clone(), dim: self.dim, s1, s2, s }) as Arc<dyn LatticeSupport>
        })
    }
}

/// Symbol classes and their weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ClassSpec {
    /// `(1+|ξ_1|+|ξ_2|)^m`
    Iso { m: f64 },
    /// `(1+|ξ_1|)^{m_1} (1+|ξ_2|)^{m_2}`
    Sep { m1: f64, m2: f64 },
    /// `(1+|ξ_1+ξ_2|)^{m_1} (1+|ξ_2|)^{m_2}`
    Star1 { m1: f64, m2: f64 },
    /// `(1+|ξ_1|)^{m_1} (1+|ξ_1+ξ_2|)^{m_2}`
    Star2 { m1: f64, m2: f64 },
    /// `⟨ξ_1+ξ_2⟩^s ⟨ξ_1⟩^{-s_1} ⟨ξ_2⟩^{-s_2} ⟨(ξ_1,ξ_2)⟩^m`
    General { s1: f64, s2: f64, s: f64, m: f64 },
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

impl ClassSpec {
    pub fn weight(&self, xi1: &[f64], xi2: &[f64]) -> f64 {
        let sum: Vec<f64> = xi1.iter().zip(xi2).map(|(a, b)| a + b).collect();
        match *self {
            ClassSpec::Iso { m } => (1.0 + norm(xi1) + norm(xi2)).powf(m),
            ClassSpec::Sep { m1, m2 } => (1.0 + norm(xi1)).powf(m1) * (1.0 + norm(xi2)).powf(m2),
            ClassSpec::Star1 { m1, m2 } => (1.0 + norm(&sum)).powf(m1) * (1.0 + norm(xi2)).powf(m2),
            ClassSpec::Star2 { m1, m2 } => (1.0 + norm(xi1)).powf(m1) * (1.0 + norm(&sum)).powf(m2),
            ClassSpec::General { s1, s2, s, m } => {
                let all: Vec<f64> = xi1.iter().chain(xi2).copied().collect();
                bracket(&sum).powf(s) * bracket(xi1).powf(-s1) * bracket(xi2).powf(-s2) * bracket(&all).powf(m)
            }
        }
    }
}

/// Sampling controls for [`class_constant`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassOptions {
    /// Largest `|α|`, `|β_1|`, `|β_2|`.
    pub order: u32,
    /// Dyadic annuli `j`: `max(|ξ_1|,|ξ_2|) ∈ [2^{j-1}, 2^j)`, or `[0,1)` for `j = 0`.
    pub annuli: Vec<u32>,
    pub anchors: usize,
    pub free_points: usize,
    pub x_points: usize,
    pub step: f64,
    pub threshold: f64,
    pub seed: u64,
    /// Extra lattice anchors `(ξ_1, ξ_2)`, each used in the annulus that contains it.
    /// Sparse symbols such as the diagonal family are invisible to random anchors.
    pub pinned: Vec<Vec<f64>>,
}

impl Default for ClassOptions {
    fn default() -> Self {
        Self {
            order: 2,
            annuli: vec![3, 4, 5, 6],
            anchors: 8,
            free_points: 64,
            x_points: 6,
            step: 2f64.powi(-6),
            threshold: 4.0,
            seed: 7,
            pinned: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeConstant {
    pub alpha: Vec<u32>,
    pub beta1: Vec<u32>,
    pub beta2: Vec<u32>,
    /// Supremum of the ratio on each annulus.
    pub per_annulus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub spec: ClassSpec,
    pub annuli: Vec<u32>,
    /// Max over derivative tuples, per annulus.
    pub constants: Vec<f64>,
    pub tuples: Vec<DerivativeConstant>,
    /// `max/min` of `constants`.
    pub spread: f64,
    /// Last over first annulus constant.
    pub growth: f64,
    pub stable: bool,
}

fn multi_indices(dim: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if dim == 1 {
        for a in 0..=max {
            out.push(vec![a]);
        }
    } else {
        for a in 0..=max {
            for b in 0..=(max - a) {
                out.push(vec![a, b]);
            }
        }
    }
    out
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// Stencil `(offset, weight)` of the central difference of order `k` with step `h`.
fn stencil(k: u32, h: f64) -> Vec<(f64, f64)> {
    let scale = h.powi(-(k as i32));
    (0..=k)
        .map(|j| {
            let off = (k as f64 / 2.0 - j as f64) * h;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            (off, sign * binomial(k, j) * scale)
        })
        .collect()
}

/// Central-difference derivative of `f` on `ℝ^{2n}` with per-coordinate orders.
fn mixed_difference(f: &dyn Fn(&[f64]) -> Complex64, point: &[f64], orders: &[u32], h: f64) -> Complex64 {
    let stencils: Vec<Vec<(f64, f64)>> = orders.iter().map(|&k| stencil(k, h)).collect();
    let dims = point.len();
    let mut counters = vec![0usize; dims];
    let mut total = ZERO;
    let mut p = point.to_vec();
    loop {
        let mut w = 1.0;
        for d in 0..dims {
            let (off, wt) = stencils[d][counters[d]];
            p[d] = point[d] + off;
            w *= wt;
        }
        total += f(&p) * w;
        let mut d = 0;
        loop {
            if d == dims {
                return total;
            }
            counters[d] += 1;
            if counters[d] < stencils[d].len() {
                break;
            }
            counters[d] = 0;
            d += 1;
        }
    }
}

fn sample_annulus(rng: &mut ChaCha8Rng, dim: usize, j: u32, lattice: bool) -> Vec<f64> {
    let (lo, hi) = if j == 0 { (0.0, 1.0) } else { (2f64.powi(j as i32 - 1), 2f64.powi(j as i32)) };
    loop {
        let mut v = vec![0.0; 2 * dim];
        for c in v.iter_mut() {
            let t = rng.gen_range(-hi..hi);
            *c = if lattice { t.round() } else { t };
        }
        let r = norm(&v[..dim]).max(norm(&v[dim..]));
        if r >= lo && r < hi {
            return v;
        }
    }
}

fn annulus_of(xi1: &[f64], xi2: &[f64]) -> u32 {
    let r = norm(xi1).max(norm(xi2));
    if r < 1.0 {
        0
    } else {
        r.log2().floor() as u32 + 1
    }
}

fn offset_set(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<f64>> {
    let axis = [0.0, 0.04, -0.04, 0.08, -0.08, 0.2, -0.2, 0.5];
    if dim == 1 {
        let mut out = Vec::new();
        for &a in &axis {
            for &b in &axis {
                out.push(vec![a, b]);
            }
        }
        out
    } else {
        let mut out = vec![vec![0.0; 4]];
        for _ in 0..47 {
            out.push((0..4).map(|_| axis[rng.gen_range(0..axis.len())]).collect());
        }
        out
    }
}

/// Finite-difference estimate of the class constants of `σ` for `spec` on dyadic annuli.
pub fn class_constant(sigma: &Symbol, spec: ClassSpec, opts: &ClassOptions) -> Result<ClassReport> {
    if !sigma.is_evaluable() {
        return Err(LabError::LatticeOnly(sigma.name().to_string()));
    }
    if opts.order > 4 {
        return Err(LabError::InvalidParameter("derivative order is capped at 4".into()));
    }
    if opts.annuli.is_empty() {
        return Err(LabError::InvalidParameter("no annuli requested".into()));
    }
    let dim = sigma.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let offsets = offset_set(&mut rng, dim);
    let modes: Vec<(Freq, Amplitude)> = match sigma.form() {
        SymbolForm::Modulated(m) => m.clone(),
        _ => Vec::new(),
    };
    let x_dep = sigma.x_dependent();
    let xs: Vec<[f64; 2]> = if x_dep {
        (0..opts.x_points.max(1)).map(|_| [rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI)]).collect()
    } else {
        vec![[0.0; 2]]
    };
    let alphas = if x_dep { multi_indices(dim, opts.order) } else { vec![vec![0; dim]] };
    let betas = multi_indices(dim, opts.order);
    let mut tuples = Vec::new();
    for alpha in &alphas {
        for b1 in &betas {
            for b2 in &betas {
                tuples.push(DerivativeConstant {
                    alpha: alpha.clone(),
                    beta1: b1.clone(),
                    beta2: b2.clone(),
                    per_annulus: vec![0.0; opts.annuli.len()],
                });
            }
        }
    }
    for (ai, &j) in opts.annuli.iter().enumerate() {
        let mut points = Vec::new();
        let mut anchors: Vec<Vec<f64>> = (0..opts.anchors).map(|_| sample_annulus(&mut rng, dim, j, true)).collect();
        anchors.extend(opts.pinned.iter().filter(|p| p.len() == 2 * dim && annulus_of(&p[..dim], &p[dim..]) == j).cloned());
        for anchor in anchors {
            for off in &offsets {
                points.push(anchor.iter().zip(off).map(|(a, o)| a + o).collect::<Vec<f64>>());
            }
        }
        for _ in 0..opts.free_points {
            points.push(sample_annulus(&mut rng, dim, j, false));
        }
        for point in &points {
            let w = spec.weight(&point[..dim], &point[dim..]);
            let mut cache: HashMap<(Vec<u32>, Vec<u32>), Vec<Complex64>> = HashMap::new();
            for t in tuples.iter_mut() {
                let orders: Vec<u32> = t.beta1.iter().chain(&t.beta2).copied().collect();
                let key = (t.beta1.clone(), t.beta2.clone());
                let per_mode = cache.entry(key).or_insert_with(|| {
                    if x_dep || !modes.is_empty() {
                        modes
                            .iter()
                            .map(|(_, a)| {
                                let f = |q: &[f64]| a(&q[..dim], &q[dim..]);
                                mixed_difference(&f, point, &orders, opts.step)
                            })
                            .collect()
                    } else {
                        let f = |q: &[f64]| sigma.eval(&[0.0; 2][..dim], &q[..dim], &q[dim..]);
                        vec![mixed_difference(&f, point, &orders, opts.step)]
                    }
                });
                let mut sup = 0.0f64;
                for x in &xs {
                    let v: Complex64 = if modes.is_empty() {
                        per_mode[0]
                    } else {
                        modes
                            .iter()
                            .zip(per_mode.iter())
                            .map(|((eta, _), d)| {
                                let mut factor = Complex64::new(1.0, 0.0);
                                let mut phase = 0.0;
                                for i in 0..dim {
                                    factor *= Complex64::new(0.0, eta[i] as f64).powu(t.alpha[i]);
                                    phase += eta[i] as f64 * x[i];
                                }
                                d * factor * Complex64::from_polar(1.0, phase)
                            })
                            .sum()
                    };
                    sup = sup.max(v.norm());
                }
                let r = sup / w;
                if r > t.per_annulus[ai] {
                    t.per_annulus[ai] = r;
                }
            }
        }
    }
    let constants: Vec<f64> = (0..opts.annuli.len())
        .map(|ai| tuples.iter().map(|t| t.per_annulus[ai]).fold(0.0, f64::max))
        .collect();
    let hi = constants.iter().copied().fold(0.0, f64::max);
    let lo = constants.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    let growth = constants[constants.len() - 1] / constants[0];
    Ok(ClassReport {
        spec,
        annuli: opts.annuli.clone(),
        constants,
        tuples,
        spread,
        growth,
        stable: spread <= opts.threshold,
    })
}

/// `Σ_{ν_1,ν_2} (1+|ν_1|+|ν_2|)^m φ(ξ_1-ν_1) φ(ξ_2-ν_2)`.
pub fn make_lattice_block(dim: usize, m: f64, phi: UniformFamily) -> Result<Symbol> {
    if dim != 1 && dim != 2 {
        return Err(LabError::InvalidParameter("dimension must be 1 or 2".into()));
    }
    let amp: Amplitude = Arc::new(move |a: &[f64], b: &[f64]| {
        let r = phi.radius();
        let ranges = |v: &[f64]| -> Vec<(i64, i64)> { v.iter().map(|t| ((t - r).ceil() as i64, (t + r).floor() as i64)).collect() };
        let ra = ranges(a);
        let rb = ranges(b);
        let pts = |rg: &[(i64, i64)]| -> Vec<[i64; 2]> {
            let mut out = Vec::new();
            if rg.len() == 1 {
                for u in rg[0].0..=rg[0].1 {
                    out.push([u, 0]);
                }
            } else {
                for u in rg[0].0..=rg[0].1 {
                    for v in rg[1].0..=rg[1].1 {
                        out.push([u, v]);
                    }
                }
            }
            out
        };
        let d = a.len();
        let mut total = 0.0;
        for n1 in pts(&ra) {
            let shift1: Vec<f64> = (0..d).map(|i| a[i] - n1[i] as f64).collect();
            let w1 = phi.eval(&shift1);
            if w1 == 0.0 {
                continue;
            }
            for n2 in pts(&rb) {
                let shift2: Vec<f64> = (0..d).map(|i| b[i] - n2[i] as f64).collect();
                let w2 = phi.eval(&shift2);
                if w2 == 0.0 {
                    continue;
                }
                let weight = (1.0 + freq_norm(n1, d) + freq_norm(n2, d)).powf(m);
                total += weight * w1 * w2;
            }
        }
        Complex64::new(total, 0.0)
    });
    Ok(Symbol::new("lattice_block", dim, SymbolForm::Bilinear(amp))
        .with_param("m", m)
        .with_param("phi_radius", phi.radius()))
}

/// Coefficient choice for the sharpness families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoefficientSource {
    /// `c = 1`.
    Unit,
    /// Phases that cancel those of the Wainger inputs.
    PhaseCancel,
    /// Phase cancellation times seeded Rademacher signs.
    Rademacher { seed: u64 },
}

/// Parameters shared by the sharpness families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyParams {
    pub dim: usize,
    pub level: u32,
    pub m: f64,
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub eps: f64,
    pub source: CoefficientSource,
}

impl FamilyParams {
    /// Sets `b_j = n/2 + (1-a_j)(n/2 - n/p_j) + ε`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dim: usize,
        level: u32,
        m: f64,
        a: [f64; 2],
        p: [Exponent; 2],
        eps: f64,
        source: CoefficientSource,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(LabError::InvalidParameter("dimension must be 1 or 2".into()));
        }
        if level < 3 {
            return Err(LabError::InvalidParameter(format!("level must be at least 3, got {level}")));
        }
        for &aj in &a {
            if !(aj > 0.0 && aj < 1.0) {
                return Err(LabError::InvalidParameter(format!("a_j must lie in (0,1), got {aj}")));
            }
        }
        if !(eps > 0.0) {
            return Err(LabError::InvalidParameter("eps must be positive".into()));
        }
        let n = dim as f64;
        let b = |aj: f64, pj: Exponent| n / 2.0 + (1.0 - aj) * (n / 2.0 - n / pj.to_f64()) + eps;
        Ok(Self { dim, level, m, a1: a[0], a2: a[1], b1: b(a[0], p[0]), b2: b(a[1], p[1]), eps, source })
    }

    pub fn with_order(&self, m: f64) -> Self {
        Self { m, ..*self }
    }

    pub fn with_source(&self, source: CoefficientSource) -> Self {
        Self { source, ..*self }
    }

    pub fn outer_radius(&self) -> f64 {
        2f64.powf(self.level as f64 + 0.125)
    }
}

/// The integer shell `Λ_ℓ = {k : 2^{ℓ-1/8} ≤ |k| ≤ 2^{ℓ+1/8}}` with a dense membership table.
#[derive(Debug, Clone)]
pub struct Shell {
    dim: usize,
    level: u32,
    radius: i64,
    points: Vec<Freq>,
    angles: Vec<f64>,
    lookup: Vec<i32>,
}

impl Shell {
    pub fn new(dim: usize, level: u32) -> Self {
        let lo2 = 2f64.powf(2.0 * level as f64 - 0.25);
        let hi2 = 2f64.powf(2.0 * level as f64 + 0.25);
        let radius = hi2.sqrt().ceil() as i64;
        let side = (2 * radius + 1) as usize;
        let mut points = Vec::new();
        let span = if dim == 1 { 0 } else { radius };
        for u in -radius..=radius {
            for v in -span..=span {
                let r2 = (u * u + v * v) as f64;
                if r2 >= lo2 && r2 <= hi2 {
                    points.push([u, v]);
                }
            }
        }
        if dim == 2 {
            points.sort_by(|a, b| {
                let ta = (a[1] as f64).atan2(a[0] as f64);
                let tb = (b[1] as f64).atan2(b[0] as f64);
                ta.partial_cmp(&tb).unwrap().then(a.cmp(b))
            });
        }
        let angles = points.iter().map(|p| (p[1] as f64).atan2(p[0] as f64)).collect();
        let mut lookup = vec![-1i32; side.pow(dim as u32)];
        let mut shell = Self { dim, level, radius, points, angles, lookup: Vec::new() };
        for (i, p) in shell.points.iter().enumerate() {
            lookup[shell.slot(*p).unwrap()] = i as i32;
        }
        shell.lookup = lookup;
        shell
    }

    fn slot(&self, k: Freq) -> Option<usize> {
        let r = self.radius;
        let side = 2 * r + 1;
        if k[0].abs() > r || (self.dim == 2 && k[1].abs() > r) {
            return None;
        }
        Some(if self.dim == 1 {
            (k[0] + r) as usize
        } else {
            ((k[0] + r) * side + k[1] + r) as usize
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn points(&self) -> &[Freq] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, k: Freq) -> Option<usize> {
        if self.dim == 1 && k[1] != 0 {
            return None;
        }
        let s = self.slot(k)?;
        let v = self.lookup[s];
        (v >= 0).then_some(v as usize)
    }

    pub fn contains(&self, k: Freq) -> bool {
        self.index_of(k).is_some()
    }

    /// Visits every `(k_1, k_2)` with `k_1, k_2, k_1+k_2 ∈ Λ_ℓ`, as indices into [`Shell::points`].
    pub fn for_each_pair(&self, mut visit: impl FnMut(usize, usize, usize)) {
        let n = self.points.len();
        if n == 0 {
            return;
        }
        if self.dim == 1 {
            for i in 0..n {
                for j in 0..n {
                    if let Some(k) = self.index_of(freq_add(self.points[i], self.points[j])) {
                        visit(i, j, k);
                    }
                }
            }
            return;
        }
        // |k1+k2| ∈ Λ_ℓ forces the angle between k1 and k2 into a narrow band.
        let lo2 = 2f64.powf(-0.25);
        let hi2 = 2f64.powf(0.25);
        let cos_max = (hi2 - 2.0 * lo2) / (2.0 * lo2);
        let cos_min = (lo2 - 2.0 * hi2) / (2.0 * hi2);
        let margin = 0.02;
        let phi_lo = cos_max.acos() - margin;
        let phi_hi = cos_min.acos() + margin;
        for i in 0..n {
            let t = self.angles[i];
            for sign in [1.0, -1.0] {
                let (a, b) = if sign > 0.0 { (t + phi_lo, t + phi_hi) } else { (t - phi_hi, t - phi_lo) };
                self.for_angle_range(a, b, |j| {
                    if let Some(k) = self.index_of(freq_add(self.points[i], self.points[j])) {
                        visit(i, j, k);
                    }
                });
            }
        }
    }

    fn for_angle_range(&self, a: f64, b: f64, mut f: impl FnMut(usize)) {
        let wrap = |t: f64| -> f64 {
            let mut u = (t + PI).rem_euclid(2.0 * PI) - PI;
            if u >= PI {
                u -= 2.0 * PI;
            }
            u
        };
        let (wa, wb) = (wrap(a), wrap(b));
        let lower = |x: f64| self.angles.partition_point(|&v| v < x);
        if wa <= wb {
            for j in lower(wa)..lower(wb + 1e-12) {
                f(j);
            }
        } else {
            for j in lower(wa)..self.angles.len() {
                f(j);
            }
            for j in 0..lower(wb + 1e-12) {
                f(j);
            }
        }
    }

    /// Number of pairs in `D_ℓ`.
    pub fn pair_count(&self) -> u64 {
        let mut c = 0u64;
        self.for_each_pair(|_, _, _| c += 1);
        c
    }
}

/// Seeded Rademacher signs indexed by frequency.
#[derive(Debug, Clone)]
pub struct RademacherSigns {
    keys: Vec<Freq>,
    signs: Vec<f64>,
}

impl RademacherSigns {
    pub fn new(seed: u64, keys: &[Freq]) -> Self {
        let mut keys = keys.to_vec();
        keys.sort();
        keys.dedup();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let signs = keys.iter().map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
        Self { keys, signs }
    }

    pub fn sign(&self, k: Freq) -> f64 {
        match self.keys.binary_search(&k) {
            Ok(i) => self.signs[i],
            Err(_) => 1.0,
        }
    }
}

fn radial(k: Freq, dim: usize) -> f64 {
    freq_norm(k, dim)
}

fn phase_of(k: Freq, dim: usize, a: f64) -> Complex64 {
    Complex64::from_polar(1.0, -radial(k, dim).powf(a))
}

/// `φ` with support `[-1/4, 1/4]^n` used by the sharpness families.
pub fn family_cutoff() -> UniformFamily {
    UniformFamily::new(0.25, false).expect("valid radius")
}

fn nearest(v: &[f64]) -> Freq {
    let mut k = [0i64; 2];
    for (i, t) in v.iter().enumerate() {
        k[i] = t.round() as i64;
    }
    k
}

fn cutoff_at(phi: &UniformFamily, v: &[f64], k: Freq) -> f64 {
    let mut d = [0.0; 2];
    for i in 0..v.len() {
        d[i] = v[i] - k[i] as f64;
    }
    phi.eval(&d[..v.len()])
}

fn check_band(params: &FamilyParams, band_limit: usize) -> Result<()> {
    if params.outer_radius() > band_limit as f64 {
        return Err(LabError::BandLimit(format!(
            "level {} needs 2^(l+1/8) = {:.1} <= Xi = {}",
            params.level,
            params.outer_radius(),
            band_limit
        )));
    }
    Ok(())
}

/// Implicit table over `D_ℓ` for the diagonal family.
pub struct DiagonalPairs {
    shell: Arc<Shell>,
    signs: Option<RademacherSigns>,
    phase1: Vec<Complex64>,
    phase2: Vec<Complex64>,
    power: Vec<f64>,
}

impl DiagonalPairs {
    fn new(params: FamilyParams) -> Self {
        let shell = Arc::new(Shell::new(params.dim, params.level));
        Self::with_shell(shell, params)
    }

    fn with_shell(shell: Arc<Shell>, params: FamilyParams) -> Self {
        let d = params.dim;
        let (phase1, phase2) = match params.source {
            CoefficientSource::Unit => (vec![Complex64::new(1.0, 0.0); shell.len()], vec![Complex64::new(1.0, 0.0); shell.len()]),
            _ => (
                shell.points().iter().map(|&k| phase_of(k, d, params.a1)).collect(),
                shell.points().iter().map(|&k| phase_of(k, d, params.a2)).collect(),
            ),
        };
        let signs = match params.source {
            CoefficientSource::Rademacher { seed } => Some(RademacherSigns::new(seed, shell.points())),
            _ => None,
        };
        let max_r2 = shell.points().iter().map(|k| k[0] * k[0] + k[1] * k[1]).max().unwrap_or(0) as usize;
        let power = (0..=2 * max_r2).map(|j| (1.0 + j as f64).powf(params.m / 2.0)).collect();
        Self { shell, signs, phase1, phase2, power }
    }

    fn coefficient(&self, i: usize, j: usize, k: usize) -> Complex64 {
        let p = self.shell.points();
        let (a, b) = (p[i], p[j]);
        let r2 = (a[0] * a[0] + a[1] * a[1] + b[0] * b[0] + b[1] * b[1]) as usize;
        let sign = self.signs.as_ref().map_or(1.0, |s| s.sign(p[k]));
        self.phase1[i] * self.phase2[j] * (sign * self.power[r2])
    }

    pub fn shell(&self) -> &Shell {
        &self.shell
    }
}

impl LatticeSupport for DiagonalPairs {
    fn for_each(&self, visit: &mut dyn FnMut(Freq, Freq, Complex64)) {
        let p = self.shell.points();
        self.shell.for_each_pair(|i, j, k| visit(p[i], p[j], self.coefficient(i, j, k)));
    }

    fn value(&self, k1: Freq, k2: Freq) -> Option<Complex64> {
        let i = self.shell.index_of(k1)?;
        let j = self.shell.index_of(k2)?;
        let k = self.shell.index_of(freq_add(k1, k2))?;
        Some(self.coefficient(i, j, k))
    }

    fn len(&self) -> usize {
        self.shell.pair_count() as usize
    }

    fn contract(&self, a: &dyn Fn(Freq) -> Complex64, b: &dyn Fn(Freq) -> Complex64, out: &mut dyn FnMut(Freq, Complex64)) -> u64 {
        let p = self.shell.points();
        let av: Vec<Complex64> = p.iter().zip(&self.phase1).map(|(&k, c)| a(k) * c).collect();
        let bv: Vec<Complex64> = p.iter().zip(&self.phase2).map(|(&k, c)| b(k) * c).collect();
        let mut acc = vec![ZERO; p.len()];
        let mut pairs = 0u64;
        self.shell.for_each_pair(|i, j, k| {
            pairs += 1;
            let r2 = (p[i][0] * p[i][0] + p[i][1] * p[i][1] + p[j][0] * p[j][0] + p[j][1] * p[j][1]) as usize;
            acc[k] += av[i] * bv[j] * self.power[r2];
        });
        for (k, v) in acc.into_iter().enumerate() {
            let sign = self.signs.as_ref().map_or(1.0, |s| s.sign(p[k]));
            out(p[k], v * sign);
        }
        pairs
    }
}

fn table_symbol(name: &str, params: &FamilyParams, table: Arc<dyn LatticeSupport>, eval_pair: Arc<dyn Fn(&[f64], &[f64]) -> Option<(Freq, Freq)> + Send + Sync>) -> Symbol {
    let phi = family_cutoff();
    let t2 = table.clone();
    let amp: Amplitude = Arc::new(move |a: &[f64], b: &[f64]| match eval_pair(a, b) {
        Some((k1, k2)) => match t2.value(k1, k2) {
            Some(v) => v * cutoff_at(&phi, a, k1) * cutoff_at(&phi, b, k2),
            None => ZERO,
        },
        None => ZERO,
    });
    Symbol::new(name, params.dim, SymbolForm::Bilinear(amp))
        .with_table(table)
        .with_param("level", params.level as f64)
        .with_param("m", params.m)
        .with_param("a1", params.a1)
        .with_param("a2", params.a2)
        .with_param("b1", params.b1)
        .with_param("b2", params.b2)
        .with_param("eps", params.eps)
}

/// `σ_ℓ = Σ_{(k_1,k_2) ∈ D_ℓ} c_{k_1,k_2} ⟨(k_1,k_2)⟩^m φ(ξ_1-k_1) φ(ξ_2-k_2)`.
pub fn make_diag_family(params: &FamilyParams, band_limit: usize) -> Result<Symbol> {
    check_band(params, band_limit)?;
    let table: Arc<dyn LatticeSupport> = Arc::new(DiagonalPairs::new(*params));
    Ok(table_symbol("diag", params, table, Arc::new(|a, b| Some((nearest(a), nearest(b))))))
}

/// `d_k = Σ_{k_1+k_2=k, k_j ∈ Λ_ℓ} ⟨(k_1,k_2)⟩^m |k_1|^{-b_1} |k_2|^{-b_2}` for every `k ∈ Λ_ℓ`.
pub fn diagonal_coefficients(params: &FamilyParams) -> Vec<(Freq, f64)> {
    let shell = Shell::new(params.dim, params.level);
    let d = params.dim;
    let w1: Vec<f64> = shell.points().iter().map(|&k| radial(k, d).powf(-params.b1)).collect();
    let w2: Vec<f64> = shell.points().iter().map(|&k| radial(k, d).powf(-params.b2)).collect();
    let max_r2 = shell.points().iter().map(|k| k[0] * k[0] + k[1] * k[1]).max().unwrap_or(0) as usize;
    let power: Vec<f64> = (0..=2 * max_r2).map(|j| (1.0 + j as f64).powf(params.m / 2.0)).collect();
    let mut acc = vec![0.0; shell.len()];
    let p = shell.points();
    shell.for_each_pair(|i, j, k| {
        let r2 = (p[i][0] * p[i][0] + p[i][1] * p[i][1] + p[j][0] * p[j][0] + p[j][1] * p[j][1]) as usize;
        acc[k] += power[r2] * w1[i] * w2[j];
    });
    p.iter().copied().zip(acc).collect()
}

/// `σ_ℓ = Σ_{μ ∈ Λ_ℓ} c_μ ⟨μ⟩^m φ(ξ_1-μ) φ(ξ_2+μ)` with `c_μ = e^{-i(|μ|^{a_1}+|μ|^{a_2})}`.
pub fn make_antidiag_family(params: &FamilyParams, band_limit: usize) -> Result<Symbol> {
    check_band(params, band_limit)?;
    let shell = Shell::new(params.dim, params.level);
    let d = params.dim;
    let entries = shell
        .points()
        .iter()
        .map(|&mu| {
            let c = match params.source {
                CoefficientSource::Unit => Complex64::new(1.0, 0.0),
                _ => phase_of(mu, d, params.a1) * phase_of(mu, d, params.a2),
            };
            let mf = freq_f64(mu, d);
            (mu, [-mu[0], -mu[1]], c * bracket(&mf[..d]).powf(params.m))
        })
        .collect();
    let table: Arc<dyn LatticeSupport> = Arc::new(SparseTable::new(entries));
    Ok(table_symbol("antidiag", params, table, Arc::new(|a, b| Some((nearest(a), nearest(b))))))
}

/// `Σ_{μ ∈ Λ_ℓ} ⟨μ⟩^m |μ|^{-b_1-b_2}`.
pub fn antidiagonal_constant(params: &FamilyParams) -> f64 {
    let shell = Shell::new(params.dim, params.level);
    let d = params.dim;
    shell
        .points()
        .iter()
        .map(|&mu| {
            let mf = freq_f64(mu, d);
            bracket(&mf[..d]).powf(params.m) * radial(mu, d).powf(-params.b1 - params.b2)
        })
        .sum()
}

/// `σ_ℓ = φ(ξ_1) Σ_{μ ∈ Λ_ℓ} c_μ ⟨μ⟩^m φ(ξ_2-μ)` with `c_μ = r_μ(ω) e^{-i|μ|^{a_2}}`.
pub fn make_product_family(params: &FamilyParams, band_limit: usize) -> Result<Symbol> {
    check_band(params, band_limit)?;
    let shell = Shell::new(params.dim, params.level);
    let d = params.dim;
    let signs = match params.source {
        CoefficientSource::Rademacher { seed } => Some(RademacherSigns::new(seed, shell.points())),
        _ => None,
    };
    let entries = shell
        .points()
        .iter()
        .map(|&mu| {
            let mut c = match params.source {
                CoefficientSource::Unit => Complex64::new(1.0, 0.0),
                _ => phase_of(mu, d, params.a2),
            };
            if let Some(s) = &signs {
                c *= s.sign(mu);
            }
            let mf = freq_f64(mu, d);
            ([0, 0], mu, c * bracket(&mf[..d]).powf(params.m))
        })
        .collect();
    let table: Arc<dyn LatticeSupport> = Arc::new(SparseTable::new(entries));
    Ok(table_symbol("product", params, table, Arc::new(|a, b| Some((nearest(a), nearest(b))))))
}

/// `(Σ_{μ ∈ Λ_ℓ} ⟨μ⟩^{2m} |μ|^{-2b_2})^{1/2}`.
pub fn product_khintchine_proxy(params: &FamilyParams) -> f64 {
    let shell = Shell::new(params.dim, params.level);
    let d = params.dim;
    shell
        .points()
        .iter()
        .map(|&mu| {
            let mf = freq_f64(mu, d);
            bracket(&mf[..d]).powf(2.0 * params.m) * radial(mu, d).powf(-2.0 * params.b2)
        })
        .sum::<f64>()
        .sqrt()
}

/// `f̂(k) = φ_ℓ(k) |k|^{-b} e^{i|k|^a}` with `φ_ℓ = 1` on `2^{ℓ-1/4} ≤ |k| ≤ 2^{ℓ+1/4}`,
/// supported in `2^{ℓ-1/2} ≤ |k| ≤ 2^{ℓ+1/2}`.
pub fn make_wainger(a: f64, b: f64, level: u32, grid: &TorusGrid) -> Result<GridFunction> {
    let outer = 2f64.powf(level as f64 + 0.5);
    if outer > grid.band_limit() as f64 {
        return Err(LabError::BandLimit(format!(
            "level {level} needs 2^(l+1/2) = {outer:.1} <= Xi = {}",
            grid.band_limit()
        )));
    }
    let dim = grid.dim();
    let r = outer.ceil() as i64;
    let span = if dim == 1 { 0 } else { r };
    let center = 2f64.powi(level as i32);
    let mut entries = Vec::new();
    for u in -r..=r {
        for v in -span..=span {
            let k = [u, v];
            let rad = radial(k, dim);
            let cut = wainger_cutoff(rad, center);
            if cut == 0.0 {
                continue;
            }
            entries.push((k, Complex64::from_polar(cut * rad.powf(-b), rad.powf(a))));
        }
    }
    GridFunction::synthesize(*grid, &entries)
}

/// The cutoff `φ_ℓ` of [`make_wainger`] as a function of `|k|`.
pub fn wainger_cutoff(radius: f64, center: f64) -> f64 {
    log_plateau(radius, center, 0.25, 0.5)
}

/// Dyadic-sum symbol `σ = Σ_k 2^{km} Ψ(2^{-k}ξ_1, 2^{-k}ξ_2)` and its matched inputs.
#[derive(Clone)]
pub struct ConeDyadic {
    pub dim: usize,
    pub m: f64,
    pub p1: Exponent,
    pub p2: Exponent,
    pub max_term: u32,
    pub symbol: Symbol,
}

/// `Ψ(ξ_1, ξ_2)`: 1 on `|log2|ξ_1|| ≤ 1/8`, `|log2|ξ_2| + 4| ≤ 1/8`, supported where both are `≤ 1/4`.
pub fn cone_dyadic_profile(r1: f64, r2: f64) -> f64 {
    log_plateau(r1, 1.0, 0.125, 0.25) * log_plateau(r2, 2f64.powi(-4), 0.125, 0.25)
}

/// `ψ̃_j` as a bump in `log2|ξ|` supported in `|log2|ξ| - c_j| < 1/8` with `c_1 = 0`, `c_2 = -4`.
pub fn cone_dyadic_input_profile(j: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let c = if j == 1 { 0.0 } else { -4.0 };
    bump((r.log2() - c) * 8.0)
}

pub fn make_cone_dyadic(dim: usize, m: f64, p1: Exponent, p2: Exponent, band_limit: usize) -> Result<ConeDyadic> {
    if dim != 1 && dim != 2 {
        return Err(LabError::InvalidParameter("dimension must be 1 or 2".into()));
    }
    // Terms with 2^{k-1/4} beyond twice the band limit cannot meet admissible inputs.
    let max_term = ((2.0 * band_limit as f64).log2() + 0.25).floor() as u32;
    let amp: Amplitude = Arc::new(move |a: &[f64], b: &[f64]| {
        let r1 = norm(a);
        let r2 = norm(b);
        if r1 == 0.0 || r2 == 0.0 {
            return ZERO;
        }
        let k = r1.log2().round();
        if k < 0.0 || k > max_term as f64 {
            return ZERO;
        }
        let s = 2f64.powf(-k);
        Complex64::new(2f64.powf(k * m) * cone_dyadic_profile(s * r1, s * r2), 0.0)
    });
    let symbol = Symbol::new("cone_dyadic", dim, SymbolForm::Bilinear(amp)).with_param("m", m);
    Ok(ConeDyadic { dim, m, p1, p2, max_term, symbol })
}

impl ConeDyadic {
    /// `f̂_{j,ℓ}(k) = 2^{ℓn(1/p_j - 1)} ψ̃_j(2^{-ℓ}k)`.
    pub fn input(&self, j: usize, grid: &TorusGrid, level: u32) -> Result<GridFunction> {
        if grid.dim() != self.dim {
            return Err(LabError::GridMismatch("dimension".into()));
        }
        let outer = 2f64.powf(level as f64 + 0.125);
        if outer > grid.band_limit() as f64 {
            return Err(LabError::BandLimit(format!("level {level} exceeds Xi = {}", grid.band_limit())));
        }
        let n = self.dim as f64;
        let pj = if j == 1 { self.p1 } else { self.p2 };
        let amp = 2f64.powf(level as f64 * n * (1.0 / pj.to_f64() - 1.0));
        let scale = 2f64.powi(-(level as i32));
        let r = outer.ceil() as i64;
        let span = if self.dim == 1 { 0 } else { r };
        let mut entries = Vec::new();
        for u in -r..=r {
            for v in -span..=span {
                let k = [u, v];
                let val = cone_dyadic_input_profile(j, scale * radial(k, self.dim));
                if val != 0.0 {
                    entries.push((k, Complex64::new(amp * val, 0.0)));
                }
            }
        }
        GridFunction::synthesize(*grid, &entries)
    }
}
