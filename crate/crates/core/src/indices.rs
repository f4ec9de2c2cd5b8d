//! Exact rational arithmetic for exponents, smoothness indices and orders.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub type Q = Rational64;

/// Nearest `f64` to an exact rational.
pub fn rational_to_f64(v: Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn qmax(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

fn qmin(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}

/// Parses `"3"`, `"-1/2"` or `"0.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    let bad = || LabError::InvalidParameter(format!("cannot parse rational {text:?}"));
    if let Some((a, b)) = t.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Q::new(a, b));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" || int == "+" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = frac.parse().map_err(|_| bad())?;
        let frac_q = Q::new(num, den);
        let whole = Q::from_integer(int_part);
        return Ok(if neg { whole - frac_q } else { whole + frac_q });
    }
    t.parse::<i64>().map(Q::from_integer).map_err(|_| bad())
}

/// A Lebesgue exponent in `(0, ∞]`, stored as its reciprocal (`0` for `∞`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Exponent {
    recip: Q,
}

impl Exponent {
    pub const INFINITY: Exponent = Exponent { recip: Q::new_raw(0, 1) };

    pub fn finite(p: Q) -> Result<Self> {
        if p <= Q::zero() {
            return Err(LabError::InvalidParameter(format!("exponent must be positive, got {p}")));
        }
        Ok(Self { recip: p.recip() })
    }

    pub fn from_int(p: i64) -> Result<Self> {
        Self::finite(Q::from_integer(p))
    }

    pub fn from_recip(r: Q) -> Result<Self> {
        if r < Q::zero() {
            return Err(LabError::InvalidParameter(format!("reciprocal exponent must be >= 0, got {r}")));
        }
        Ok(Self { recip: r })
    }

    pub fn recip(&self) -> Q {
        self.recip
    }

    pub fn is_infinite(&self) -> bool {
        self.recip.is_zero()
    }

    /// The exponent itself, `None` for `∞`.
    pub fn value(&self) -> Option<Q> {
        if self.is_infinite() {
            None
        } else {
            Some(self.recip.recip())
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.value() {
            None => f64::INFINITY,
            Some(v) => *v.numer() as f64 / *v.denom() as f64,
        }
    }

    /// `p' = p/(p-1)` for `1 < p ≤ ∞` and `p' = ∞` for `0 < p ≤ 1`.
    pub fn conjugate(&self) -> Exponent {
        if self.recip >= Q::one() {
            Exponent::INFINITY
        } else {
            Exponent { recip: Q::one() - self.recip }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "inf"),
            Some(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Exponent {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity") || t == "∞" {
            return Ok(Exponent::INFINITY);
        }
        Exponent::finite(parse_rational(t)?)
    }
}

impl TryFrom<String> for Exponent {
    type Error = LabError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Exponent> for String {
    fn from(e: Exponent) -> String {
        e.to_string()
    }
}

mod rational_str {
    use super::{parse_rational, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse_rational(&t).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(Q::from_integer(i)),
        }
    }
}

/// `(n, p_1, p_2, p, s_1, s_2, s, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexTuple {
    pub n: u32,
    pub p1: Exponent,
    pub p2: Exponent,
    pub p: Exponent,
    #[serde(with = "rational_str")]
    pub s1: Q,
    #[serde(with = "rational_str")]
    pub s2: Q,
    #[serde(with = "rational_str")]
    pub s: Q,
    #[serde(with = "rational_str")]
    pub m: Q,
}

/// Which of the two sufficient conditions applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sufficiency {
    CriticalOk,
    SubcriticalOk,
    Fails,
}

/// Spaces that must be read as `bmo` because the exponent is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct BmoFlags {
    pub first: bool,
    pub second: bool,
    pub target: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SufficiencyReport {
    pub verdict: Sufficiency,
    pub reasons: Vec<String>,
    pub bmo: BmoFlags,
}

/// Necessary conditions for boundedness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NecessaryCondition {
    /// `m ≤ m_c + s_1 + s_2 - s`, i.e. `κ ≥ 0`.
    Order,
    /// `s_1 ≤ max{n/p_1, n/2} + κ`.
    FirstSmoothness,
    /// `s_2 ≤ max{n/p_2, n/2} + κ`.
    SecondSmoothness,
    /// `s ≥ -max{n/p', n/2} - κ`.
    TargetSmoothness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecessityReport {
    pub consistent: bool,
    pub violated: Vec<NecessaryCondition>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    BoundedByTheorem,
    UnboundedByTheorem,
    Undetermined,
}

impl IndexTuple {
    #[allow(clippy::too_many_arguments)]
    pub fn new(n: u32, p1: Exponent, p2: Exponent, p: Exponent, s1: Q, s2: Q, s: Q, m: Q) -> Result<Self> {
        if n == 0 {
            return Err(LabError::InvalidParameter("dimension must be positive".into()));
        }
        Ok(Self { n, p1, p2, p, s1, s2, s, m })
    }

    /// Tuple with all smoothness indices zero.
    pub fn plain(n: u32, p1: Exponent, p2: Exponent, p: Exponent, m: Q) -> Result<Self> {
        Self::new(n, p1, p2, p, Q::zero(), Q::zero(), Q::zero(), m)
    }

    pub fn nq(&self) -> Q {
        Q::from_integer(self.n as i64)
    }

    /// `max{n/r, n/2}`.
    pub fn upper(&self, e: Exponent) -> Q {
        self.nq() * qmax(e.recip(), q(1, 2))
    }

    /// `min{n/r, n/2}`.
    pub fn lower(&self, e: Exponent) -> Q {
        self.nq() * qmin(e.recip(), q(1, 2))
    }

    pub fn holder_admissible(&self) -> bool {
        self.p.recip() <= self.p1.recip() + self.p2.recip()
    }

    /// `m_c(p_1,p_2,p) = min{n/p,n/2} - max{n/p_1,n/2} - max{n/p_2,n/2}`.
    pub fn m_critical(&self) -> Q {
        self.lower(self.p) - self.upper(self.p1) - self.upper(self.p2)
    }

    /// `m_c + s_1 + s_2 - s`.
    pub fn order_bound(&self) -> Q {
        self.m_critical() + self.s1 + self.s2 - self.s
    }

    pub fn kappa(&self) -> Q {
        self.order_bound() - self.m
    }

    /// `min{n/p,n/2} - max{n/p_j,n/2} + s_j - s`, the bound carried by the `j`-th input alone.
    pub fn single_input_bound(&self, j: usize) -> Q {
        let (pj, sj) = if j == 1 { (self.p1, self.s1) } else { (self.p2, self.s2) };
        self.lower(self.p) - self.upper(pj) + sj - self.s
    }

    /// `n - max{n/p_1,n/2} - max{n/p_2,n/2} + s_1 + s_2`.
    pub fn paired_input_bound(&self) -> Q {
        self.nq() - self.upper(self.p1) - self.upper(self.p2) + self.s1 + self.s2
    }

    /// `α(r) = max{0, n/2 - n/r}`.
    pub fn alpha(&self, r: Exponent) -> Q {
        qmax(Q::zero(), self.nq() * (q(1, 2) - r.recip()))
    }

    /// `β(r) = min{0, n/2 - n/r}`.
    pub fn beta(&self, r: Exponent) -> Q {
        qmin(Q::zero(), self.nq() * (q(1, 2) - r.recip()))
    }

    pub fn bmo_flags(&self) -> BmoFlags {
        BmoFlags { first: self.p1.is_infinite(), second: self.p2.is_infinite(), target: self.p.is_infinite() }
    }

    pub fn sufficiency_check(&self) -> SufficiencyReport {
        let bmo = self.bmo_flags();
        let mut reasons = Vec::new();
        if !self.holder_admissible() {
            reasons.push("1/p > 1/p1 + 1/p2".to_string());
            return SufficiencyReport { verdict: Sufficiency::Fails, reasons, bmo };
        }
        let k = self.kappa();
        let u1 = self.upper(self.p1);
        let u2 = self.upper(self.p2);
        let ut = self.upper(self.p.conjugate());
        if k.is_zero() {
            if self.s1 >= u1 {
                reasons.push(format!("s1 = {} is not < {}", self.s1, u1));
            }
            if self.s2 >= u2 {
                reasons.push(format!("s2 = {} is not < {}", self.s2, u2));
            }
            if self.s <= -ut {
                reasons.push(format!("s = {} is not > {}", self.s, -ut));
            }
            let verdict = if reasons.is_empty() { Sufficiency::CriticalOk } else { Sufficiency::Fails };
            return SufficiencyReport { verdict, reasons, bmo };
        }
        if k.is_negative() {
            reasons.push(format!("m = {} exceeds the critical order {}", self.m, self.order_bound()));
            return SufficiencyReport { verdict: Sufficiency::Fails, reasons, bmo };
        }
        if self.s1 > u1 + k {
            reasons.push(format!("s1 = {} is not <= {}", self.s1, u1 + k));
        }
        if self.s2 > u2 + k {
            reasons.push(format!("s2 = {} is not <= {}", self.s2, u2 + k));
        }
        if self.s < -ut - k {
            reasons.push(format!("s = {} is not >= {}", self.s, -ut - k));
        }
        let verdict = if reasons.is_empty() { Sufficiency::SubcriticalOk } else { Sufficiency::Fails };
        SufficiencyReport { verdict, reasons, bmo }
    }

    pub fn necessity_check(&self) -> NecessityReport {
        let k = self.kappa();
        let mut violated = Vec::new();
        if k.is_negative() {
            violated.push(NecessaryCondition::Order);
        }
        if self.s1 > self.upper(self.p1) + k {
            violated.push(NecessaryCondition::FirstSmoothness);
        }
        if self.s2 > self.upper(self.p2) + k {
            violated.push(NecessaryCondition::SecondSmoothness);
        }
        if self.s < -self.upper(self.p.conjugate()) - k {
            violated.push(NecessaryCondition::TargetSmoothness);
        }
        NecessityReport { consistent: violated.is_empty(), violated }
    }

    pub fn classify(&self) -> Classification {
        if !self.holder_admissible() {
            return Classification::Undetermined;
        }
        if self.sufficiency_check().verdict != Sufficiency::Fails {
            Classification::BoundedByTheorem
        } else if !self.necessity_check().consistent {
            Classification::UnboundedByTheorem
        } else {
            Classification::Undetermined
        }
    }

    /// Same tuple with `m` replaced.
    pub fn with_order(&self, m: Q) -> Self {
        Self { m, ..*self }
    }

    /// JSON-ready summary of every derived quantity.
    pub fn summary(&self) -> IndexSummary {
        IndexSummary {
            tuple: *self,
            m_critical: self.m_critical().to_string(),
            order_bound: self.order_bound().to_string(),
            kappa: self.kappa().to_string(),
            alpha_p: self.alpha(self.p).to_string(),
            beta_p: self.beta(self.p).to_string(),
            p_conjugate: self.p.conjugate().to_string(),
            p1_conjugate: self.p1.conjugate().to_string(),
            p2_conjugate: self.p2.conjugate().to_string(),
            sufficiency: self.sufficiency_check(),
            necessity: self.necessity_check(),
            classification: self.classify(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexSummary {
    pub tuple: IndexTuple,
    pub m_critical: String,
    pub order_bound: String,
    pub kappa: String,
    pub alpha_p: String,
    pub beta_p: String,
    pub p_conjugate: String,
    pub p1_conjugate: String,
    pub p2_conjugate: String,
    pub sufficiency: SufficiencyReport,
    pub necessity: NecessityReport,
    pub classification: Classification,
}

/// Largest `m` with `Op(S^m_{0,0}) ⊂ B(h^p_s → h^{p̃}_{s̃})` in the linear case:
/// `min{n/p̃,n/2} - max{n/p,n/2} + s - s̃`.
pub fn linear_order_bound(n: u32, p: Exponent, p_tilde: Exponent, s: Q, s_tilde: Q) -> Result<Q> {
    if n == 0 {
        return Err(LabError::InvalidParameter("dimension must be positive".into()));
    }
    if p_tilde.recip() > p.recip() {
        return Err(LabError::InvalidParameter("the linear bound needs p <= p~".into()));
    }
    let nq = Q::from_integer(n as i64);
    let half = nq * q(1, 2);
    Ok(qmin(nq * p_tilde.recip(), half) - qmax(nq * p.recip(), half) + s - s_tilde)
}

/// Affine combination `(1-θ)A + θB` of reciprocal exponents, smoothness indices and order.
pub fn interpolate(a: &IndexTuple, b: &IndexTuple, theta: Q) -> Result<IndexTuple> {
    if a.n != b.n {
        return Err(LabError::InvalidParameter("tuples have different dimensions".into()));
    }
    if theta <= Q::zero() || theta >= Q::one() {
        return Err(LabError::InvalidParameter(format!("theta must lie in (0,1), got {theta}")));
    }
    let w = Q::one() - theta;
    let mix = |x: Exponent, y: Exponent| Exponent::from_recip(w * x.recip() + theta * y.recip());
    Ok(IndexTuple {
        n: a.n,
        p1: mix(a.p1, b.p1)?,
        p2: mix(a.p2, b.p2)?,
        p: mix(a.p, b.p)?,
        s1: w * a.s1 + theta * b.s1,
        s2: w * a.s2 + theta * b.s2,
        s: w * a.s + theta * b.s,
        m: w * a.m + theta * b.m,
    })
}

/// Endpoint tuples and weight used to reach `0 < p_1, p_2 ≤ 1` by interpolation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterpolationPlan {
    pub first: IndexTuple,
    pub second: IndexTuple,
    pub theta: Q,
}

/// Builds the `(q, t)` and `(r, u)` endpoints at the critical order, for `p_1, p_2 ≤ 1`
/// with `(p_1, p_2) ≠ (1, 1)` handled as well as the symmetric case.
pub fn quasi_banach_plan(t: &IndexTuple) -> Result<InterpolationPlan> {
    let r1 = t.p1.recip();
    let r2 = t.p2.recip();
    if r1 < Q::one() || r2 < Q::one() {
        return Err(LabError::InvalidParameter("plan needs p1, p2 <= 1".into()));
    }
    let n = t.nq();
    let half = q(1, 2);
    let sum = r1 + r2;
    if sum == Q::one() {
        return Err(LabError::Degenerate("1/p1 + 1/p2 = 1".into()));
    }
    let first = IndexTuple {
        p1: Exponent::from_recip(sum - half)?,
        p2: Exponent::from_recip(half)?,
        s1: t.s1 + n * r2 - n * half,
        s2: t.s2 + n * half - n * r2,
        ..*t
    };
    let second = IndexTuple {
        p1: Exponent::from_recip(half)?,
        p2: Exponent::from_recip(sum - half)?,
        s1: t.s1 + n * half - n * r1,
        s2: t.s2 + n * r1 - n * half,
        ..*t
    };
    let first = first.with_order(first.order_bound());
    let second = second.with_order(second.order_bound());
    let theta = (r2 - half) / (sum - Q::one());
    Ok(InterpolationPlan { first, second, theta })
}
