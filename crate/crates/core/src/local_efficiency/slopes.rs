//! `b(T, θ)` limits, locally approximated exact slopes and the slope/KL route.

use serde::Serialize;

use super::indices::{local_index, slope_coefficient};
use crate::distributions::SharedDensity;
use crate::error::Result;
use crate::gof_statistics::StatisticKind;
use crate::skew_model::{ExcessProfile, SkewAlternative, DEFAULT_PROFILE_STEPS};

/// All eight `b(T, θ)` values for one alternative, in `StatisticKind::ALL`
/// order. Signed statistics keep their sign.
pub fn b_values(a: &SkewAlternative) -> [f64; 8] {
    if a.theta() == 0.0 {
        return [0.0; 8];
    }
    b_values_from(&a.excess_profile(DEFAULT_PROFILE_STEPS))
}

pub fn b_values_from(p: &ExcessProfile) -> [f64; 8] {
    [
        p.sup_excess,
        p.int_excess,
        p.int_excess_sq,
        p.int_excess_sq - p.int_excess * p.int_excess,
        p.sup_integrated,
        p.int_integrated,
        p.int_integrated_sq,
        p.int_integrated_sq - p.int_integrated * p.int_integrated,
    ]
}

/// Almost-sure limit of the normalized statistic under the alternative.
pub fn b_function(kind: StatisticKind, a: &SkewAlternative) -> Result<f64> {
    Ok(b_values(a)[kind.index()])
}

/// `c(T, θ)` through the local coefficient map. Valid only for small θ.
pub fn slope_from_b(kind: StatisticKind, b: f64) -> f64 {
    let (coef, power) = slope_coefficient(kind);
    coef * b.powi(power)
}

pub fn exact_slope(kind: StatisticKind, a: &SkewAlternative) -> Result<f64> {
    Ok(slope_from_b(kind, b_function(kind, a)?))
}

/// `c(T, θ) / (2K(θ))` for all eight statistics at once.
pub fn slope_ratios(a: &SkewAlternative) -> Result<[f64; 8]> {
    let b = b_values(a);
    let k2 = 2.0 * a.kullback_leibler()?;
    let mut out = [0.0; 8];
    for kind in StatisticKind::ALL {
        out[kind.index()] = slope_from_b(kind, b[kind.index()]) / k2;
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteReport {
    pub statistic: StatisticKind,
    pub base: String,
    pub skewing: String,
    pub ratios: Vec<(f64, f64)>,
    pub extrapolated: f64,
    pub analytic: f64,
    pub error: f64,
}

/// Richardson step on θ² from ratios at θ₁ and θ₂ (θ₂ < θ₁).
pub fn richardson(theta1: f64, r1: f64, theta2: f64, r2: f64) -> f64 {
    let s = (theta1 / theta2).powi(2);
    (s * r2 - r1) / (s - 1.0)
}

/// Compare the slope/KL ratio along `theta_grid` (decreasing) with the
/// analytic efficiency, for every statistic.
pub fn route_consistency(f: SharedDensity, g: SharedDensity, theta_grid: &[f64]) -> Result<Vec<RouteReport>> {
    if theta_grid.len() < 2 {
        return Err(crate::Error::Validation("route check needs at least two θ values".into()));
    }
    let mut table = Vec::with_capacity(theta_grid.len());
    for &t in theta_grid {
        let a = SkewAlternative::new(f.clone(), g.clone(), t)?;
        table.push(slope_ratios(&a)?);
    }
    let n = theta_grid.len();
    StatisticKind::ALL
        .iter()
        .map(|&kind| {
            let i = kind.index();
            let ratios: Vec<(f64, f64)> = theta_grid.iter().zip(&table).map(|(&t, r)| (t, r[i])).collect();
            let extrapolated = richardson(theta_grid[n - 2], table[n - 2][i], theta_grid[n - 1], table[n - 1][i]);
            let analytic = local_index(kind, f.as_ref())?.efficiency;
            Ok(RouteReport {
                statistic: kind,
                base: f.name().to_string(),
                skewing: g.name().to_string(),
                ratios,
                extrapolated,
                analytic,
                error: (extrapolated - analytic).abs(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DensityKind::*;
    use crate::gof_statistics::StatisticKind::*;

    fn alt(f: crate::distributions::DensityKind, g: crate::distributions::DensityKind, t: f64) -> SkewAlternative {
        SkewAlternative::new(f.shared(), g.shared(), t).unwrap()
    }

    #[test]
    fn zero_theta_gives_zero() {
        let a = alt(Normal, Logistic, 0.0);
        assert_eq!(b_values(&a), [0.0; 8]);
        assert_eq!(exact_slope(W2bar, &a).unwrap(), 0.0);
    }

    #[test]
    fn dbar_local_expansion_uniform() {
        let a = alt(Uniform, Uniform, 1e-3);
        // 2 g(0) sup|q| = 2 · (1/2) · (1/6)
        let b = b_function(Dbar, &a).unwrap();
        assert!((b / 1e-3 / (1.0 / 6.0) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn u2bar_bracket_identity() {
        for t in [0.05, 0.5, 2.0] {
            let b = b_values(&alt(Logistic, Normal, t));
            assert!((b[U2bar.index()] - (b[W2bar.index()] - b[W1bar.index()].powi(2))).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_w1bar_b_matches_closed_form() {
        // f = G = uniform: D(w) on u = 2w − 1 is θ(u² − 1)/4 for θ ≤ 1,
        // so I(1) and ∫I follow by integration.
        let t = 0.5;
        let b = b_values(&alt(Uniform, Uniform, t));
        assert!((b[W1.index()] - (-t / 6.0)).abs() < 1e-13);
        assert!((b[W1bar.index()] - (-t / 12.0)).abs() < 1e-13);
    }

    #[test]
    fn slope_route_short_checks() {
        let r = slope_ratios(&alt(Uniform, Uniform, 1e-2)).unwrap();
        assert!((r[Dbar.index()] - 1.0).abs() < 1e-2);
        for g in [Normal, Logistic] {
            let r = slope_ratios(&alt(Uniform, g, 1e-2)).unwrap();
            assert!((r[W2bar.index()] - 0.968).abs() < 1e-3, "{g}");
        }
    }

    #[test]
    fn richardson_removes_quadratic_term() {
        let r = |t: f64| 0.7 + 3.0 * t * t;
        assert!((richardson(1e-2, r(1e-2), 1e-3, r(1e-3)) - 0.7).abs() < 1e-14);
    }
}
