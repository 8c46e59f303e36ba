//! Local asymptotic optimality checks for `D̄` (uniform law) and `Ū²`
//! (arcsine law).

use std::f64::consts::PI;

use serde::Serialize;

use super::indices::local_index;
use crate::distributions::{Density, Support};
use crate::error::Result;
use crate::gof_statistics::StatisticKind;

#[derive(Debug, Clone, Serialize)]
pub struct LaoReport {
    pub statistic: StatisticKind,
    pub density: String,
    pub efficiency: f64,
    pub is_lao: bool,
    /// `sup |F(x) − 1/2 − x (F(b) − 1/2)/b|` on `[−b, b]`, for `D̄`.
    pub linearity_residual: Option<f64>,
    /// `sup |F(x) − arcsin(x/b)/π − 1/2|` on `[−b, b]`, for `Ū²`.
    pub arcsine_residual: Option<f64>,
}

pub const LAO_TOLERANCE: f64 = 1e-6;

/// Half-width used for the residual scans. Unbounded laws are cut at their
/// `1 − 10⁻⁶` quantile, where neither shape can hold.
fn reach(d: &dyn Density) -> f64 {
    match d.support() {
        Support::Bounded(b) => b,
        Support::Real => d.quantile(1.0 - 1e-6),
    }
}

fn scan(b: f64, g: impl Fn(f64) -> f64) -> f64 {
    (0..=4000)
        .map(|i| -b + 2.0 * b * i as f64 / 4000.0)
        .map(|x| g(x).abs())
        .fold(0.0, f64::max)
}

pub fn linearity_residual(d: &dyn Density) -> f64 {
    let b = reach(d);
    let slope = d.centered_cdf(b) / b;
    scan(b, |x| d.centered_cdf(x) - x * slope)
}

pub fn arcsine_residual(d: &dyn Density) -> f64 {
    let b = reach(d);
    scan(b, |x| d.centered_cdf(x) - (x / b).clamp(-1.0, 1.0).asin() / PI)
}

pub fn lao_check(kind: StatisticKind, d: &dyn Density) -> Result<LaoReport> {
    let efficiency = local_index(kind, d)?.efficiency;
    Ok(LaoReport {
        statistic: kind,
        density: d.name().to_string(),
        efficiency,
        is_lao: (efficiency - 1.0).abs() < LAO_TOLERANCE,
        linearity_residual: (kind == StatisticKind::Dbar).then(|| linearity_residual(d)),
        arcsine_residual: (kind == StatisticKind::U2bar).then(|| arcsine_residual(d)),
    })
}
