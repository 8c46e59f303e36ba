//! Classical and integrated empirical-process statistics.
//!
//! All statistics are computed from the probability-integral-transformed,
//! sorted sample. The integrated uniform empirical process
//! `Aₙ(u) = ∫₀ᵘ √n (Gₙ(s) − s) ds` is piecewise quadratic between order
//! statistics, so its supremum and integrals are evaluated exactly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::Density;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatisticKind {
    /// Kolmogorov `Dₙ`.
    D,
    /// Chapman-Moses `ωₙ¹`.
    W1,
    /// Cramér-von Mises `ωₙ²`.
    W2,
    /// Watson `Uₙ²`.
    U2,
    Dbar,
    W1bar,
    W2bar,
    U2bar,
}

/// How a statistic scales with `n`; dividing by the scale gives the quantity
/// converging to `b(T, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scaling {
    SqrtN,
    N,
}

impl StatisticKind {
    pub const ALL: [StatisticKind; 8] = [
        StatisticKind::D,
        StatisticKind::W1,
        StatisticKind::W2,
        StatisticKind::U2,
        StatisticKind::Dbar,
        StatisticKind::W1bar,
        StatisticKind::W2bar,
        StatisticKind::U2bar,
    ];

    pub const CLASSICAL: [StatisticKind; 4] =
        [StatisticKind::D, StatisticKind::W1, StatisticKind::W2, StatisticKind::U2];

    pub const INTEGRATED: [StatisticKind; 4] = [
        StatisticKind::Dbar,
        StatisticKind::W1bar,
        StatisticKind::W2bar,
        StatisticKind::U2bar,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StatisticKind::D => "D",
            StatisticKind::W1 => "W1",
            StatisticKind::W2 => "W2",
            StatisticKind::U2 => "U2",
            StatisticKind::Dbar => "Dbar",
            StatisticKind::W1bar => "W1bar",
            StatisticKind::W2bar => "W2bar",
            StatisticKind::U2bar => "U2bar",
        }
    }

    pub fn index(&self) -> usize {
        *self as usize
    }

    pub fn is_integrated(&self) -> bool {
        self.index() >= 4
    }

    /// `ω¹` and `ω̄¹` are signed; every other statistic is nonnegative.
    pub fn is_signed(&self) -> bool {
        matches!(self, StatisticKind::W1 | StatisticKind::W1bar)
    }

    pub fn scaling(&self) -> Scaling {
        match self {
            StatisticKind::D | StatisticKind::W1 | StatisticKind::Dbar | StatisticKind::W1bar => Scaling::SqrtN,
            _ => Scaling::N,
        }
    }

    pub fn normalize(&self, value: f64, n: usize) -> f64 {
        match self.scaling() {
            Scaling::SqrtN => value / (n as f64).sqrt(),
            Scaling::N => value / n as f64,
        }
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatisticKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = StatisticKind::ALL.iter().map(|k| k.as_str()).collect();
                Error::Config(format!("unknown statistic `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

/// Ascending sample in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation("sample must contain at least one value".into()));
        }
        if let Some(i) = values.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Domain {
                index: i,
                value: values[i],
                density: "uniform(0,1)".into(),
            });
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Probability integral transform `F(xᵢ)`, sorted.
pub fn pit(raw: &[f64], d: &dyn Density) -> Result<SortedSample> {
    if raw.is_empty() {
        return Err(Error::Validation("sample must contain at least one value".into()));
    }
    let sup = d.support();
    let mut values = Vec::with_capacity(raw.len());
    for (index, &x) in raw.iter().enumerate() {
        if !x.is_finite() || !sup.contains(x) {
            return Err(Error::Domain {
                index,
                value: x,
                density: d.name().to_string(),
            });
        }
        values.push(d.cdf(x));
    }
    SortedSample::new(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticResult {
    pub kind: StatisticKind,
    pub value: f64,
    pub n: usize,
}

impl StatisticResult {
    pub fn normalized(&self) -> f64 {
        self.kind.normalize(self.value, self.n)
    }
}

/// `Dₙ, ωₙ¹, ωₙ², Uₙ²` for a sorted slice in `[0, 1]`.
pub fn classical_values(u: &[f64]) -> [f64; 4] {
    let n = u.len() as f64;
    let mut d: f64 = 0.0;
    let mut w2 = 1.0 / (12.0 * n);
    let mut sum = 0.0;
    for (i, &x) in u.iter().enumerate() {
        let i = i as f64;
        d = d.max((i + 1.0) / n - x).max(x - i / n);
        let c = x - (2.0 * i + 1.0) / (2.0 * n);
        w2 += c * c;
        sum += x;
    }
    let w1 = n.sqrt() * (0.5 - sum / n);
    [n.sqrt() * d, w1, w2, w2 - w1 * w1]
}

pub fn classical_stats(s: &SortedSample) -> [StatisticResult; 4] {
    let vals = classical_values(s.values());
    let n = s.len();
    std::array::from_fn(|i| StatisticResult {
        kind: StatisticKind::CLASSICAL[i],
        value: vals[i],
        n,
    })
}

/// One segment `[start, end]` of `Aₙ(u) = √n (c + k u − u²/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProcessSegment {
    pub start: f64,
    pub end: f64,
    /// Fraction of the sample at or below `start`, `Gₙ` on the segment.
    pub slope: f64,
    pub intercept: f64,
}

impl ProcessSegment {
    /// Local coefficients of `c + k u − u²/2` in `t = u − start`.
    fn local(&self) -> (f64, f64, f64) {
        let a = self.start;
        (self.intercept + self.slope * a - 0.5 * a * a, self.slope - a, -0.5)
    }
}

/// Exact piecewise-quadratic representation of `Aₙ`.
///
/// `Aₙ(0) = 0` and `Aₙ(1) = ωₙ¹ = √n (1/2 − ū)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegratedProcess {
    pub n: usize,
    pub segments: Vec<ProcessSegment>,
}

pub fn integrated_process(s: &SortedSample) -> IntegratedProcess {
    let u = s.values();
    let n = u.len();
    let nf = n as f64;
    let mut segments = Vec::with_capacity(n + 1);
    let mut start = 0.0;
    let mut cum = 0.0;
    let mut i = 0;
    while i <= n {
        // Absorb ties so zero-length segments never appear.
        while i < n && u[i] <= start {
            cum += u[i];
            i += 1;
        }
        let end = if i < n { u[i] } else { 1.0 };
        if end > start || i == n {
            segments.push(ProcessSegment {
                start,
                end,
                slope: i as f64 / nf,
                intercept: -cum / nf,
            });
        }
        if i == n {
            break;
        }
        start = end;
    }
    IntegratedProcess { n, segments }
}

impl IntegratedProcess {
    pub fn eval(&self, u: f64) -> f64 {
        let seg = self
            .segments
            .iter()
            .find(|s| u <= s.end)
            .unwrap_or_else(|| self.segments.last().expect("at least one segment"));
        (self.n as f64).sqrt() * (seg.intercept + seg.slope * u - 0.5 * u * u)
    }

    /// `D̄ₙ, ω̄ₙ¹, ω̄ₙ², Ūₙ²`.
    pub fn values(&self) -> [f64; 4] {
        let mut sup: f64 = 0.0;
        let mut int1 = 0.0;
        let mut int2 = 0.0;
        for seg in &self.segments {
            let len = seg.end - seg.start;
            let (p0, p1, p2) = seg.local();
            let at = |t: f64| p0 + t * (p1 + t * p2);
            sup = sup.max(p0.abs()).max(at(len).abs());
            if p1 > 0.0 && p1 < len {
                sup = sup.max(at(p1).abs());
            }
            let (l2, l3) = (len * len, len * len * len);
            int1 += p0 * len + p1 * l2 / 2.0 + p2 * l3 / 3.0;
            int2 += p0 * p0 * len
                + p0 * p1 * l2
                + (p1 * p1 + 2.0 * p0 * p2) * l3 / 3.0
                + p1 * p2 * l2 * l2 / 2.0
                + p2 * p2 * l3 * l2 / 5.0;
        }
        let nf = self.n as f64;
        let w1bar = nf.sqrt() * int1;
        let w2bar = nf * int2;
        [nf.sqrt() * sup, w1bar, w2bar, w2bar - w1bar * w1bar]
    }
}

pub fn integrated_stats(p: &IntegratedProcess) -> [StatisticResult; 4] {
    let vals = p.values();
    std::array::from_fn(|i| StatisticResult {
        kind: StatisticKind::INTEGRATED[i],
        value: vals[i],
        n: p.n,
    })
}

/// All eight statistics, indexed by [`StatisticKind::index`].
pub fn all_values(s: &SortedSample) -> [f64; 8] {
    let c = classical_values(s.values());
    let i = integrated_process(s).values();
    [c[0], c[1], c[2], c[3], i[0], i[1], i[2], i[3]]
}

pub fn all_stats(s: &SortedSample) -> Vec<StatisticResult> {
    let vals = all_values(s);
    StatisticKind::ALL
        .iter()
        .map(|&kind| StatisticResult {
            kind,
            value: vals[kind.index()],
            n: s.len(),
        })
        .collect()
}
