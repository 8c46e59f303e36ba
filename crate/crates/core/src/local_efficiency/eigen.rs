//! Large-deviation eigen-constants and leading functions.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gof_statistics::StatisticKind;
use crate::roots::newton_bracketed;

/// Consecutive positive roots `κ₁ < κ₂ < …` of `tan x + tanh x = 0` and
/// `μ₀ = κ₁⁴`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenConstants {
    pub kappa: Vec<f64>,
    pub mu0: f64,
}

pub fn tan_tanh(x: f64) -> f64 {
    x.tan() + x.tanh()
}

/// Roots of `tan x + tanh x` bracketed on `((j − 1/2)π, jπ)`: there `tan`
/// climbs from −∞ to 0 while `−tanh` stays in `(−1, 0)`. The left end is
/// nudged off the pole.
pub fn eigen_constants(count: usize) -> Result<EigenConstants> {
    if count == 0 {
        return Err(Error::Validation("need at least one eigen-constant".into()));
    }
    let mut kappa = Vec::with_capacity(count);
    for j in 1..=count {
        let lo = j as f64 * PI - FRAC_PI_2 + 1e-6;
        let hi = j as f64 * PI;
        let root = newton_bracketed(
            tan_tanh,
            |x| {
                let c = x.cos();
                let ch = x.cosh();
                1.0 / (c * c) + 1.0 / (ch * ch)
            },
            lo,
            hi,
            1e-16,
        )?;
        kappa.push(root);
    }
    let mu0 = kappa[0].powi(4);
    Ok(EigenConstants { kappa, mu0 })
}

/// `μ₀ = κ₁⁴`, computed once.
pub fn mu0() -> f64 {
    static MU0: OnceLock<f64> = OnceLock::new();
    *MU0.get_or_init(|| eigen_constants(1).expect("first root is always bracketed").mu0)
}

/// Leading functions: `ψ_j(x) = cos κ_j sinh(κ_j(1−x)) + cosh κ_j sin(κ_j(1−x))`
/// for `ω̄²`, `sin(πjx)` for `Ū²`.
pub fn leading_function(kind: StatisticKind, j: usize, x: f64) -> Result<f64> {
    if j == 0 {
        return Err(Error::Validation("leading function index starts at 1".into()));
    }
    match kind {
        StatisticKind::W2bar => {
            let k = *eigen_constants(j)?.kappa.last().expect("j ≥ 1");
            Ok(k.cos() * (k * (1.0 - x)).sinh() + k.cosh() * (k * (1.0 - x)).sin())
        }
        StatisticKind::U2bar => Ok((PI * j as f64 * x).sin()),
        other => Err(Error::Config(format!(
            "leading functions are tabulated for W2bar and U2bar only, not {other}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_root_and_mu0() {
        let e = eigen_constants(10).unwrap();
        // κ₁ by plain bisection, independent of the Newton path.
        let (mut lo, mut hi) = (2.0f64, 3.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if tan_tanh(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((e.kappa[0] - 0.5 * (lo + hi)).abs() < 1e-13);
        assert!((e.kappa[0] - 2.36502).abs() < 1e-5);
        assert!((e.mu0 - 31.2852).abs() < 5e-4);
        for (j, &k) in e.kappa.iter().enumerate() {
            assert!(tan_tanh(k).abs() < 1e-12, "residual at j = {}", j + 1);
            let jf = (j + 1) as f64;
            assert!(k > (jf - 0.5) * PI && k < jf * PI);
        }
        assert!(e.kappa.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fifty_roots_bracketed() {
        assert_eq!(eigen_constants(50).unwrap().kappa.len(), 50);
        assert!(eigen_constants(0).is_err());
    }

    #[test]
    fn leading_functions_vanish_at_one() {
        for j in 1..6 {
            assert!(leading_function(StatisticKind::W2bar, j, 1.0).unwrap().abs() < 1e-12);
            assert!(leading_function(StatisticKind::U2bar, j, 0.0).unwrap().abs() < 1e-15);
            assert!(leading_function(StatisticKind::U2bar, j, 1.0).unwrap().abs() < 1e-12);
        }
        assert!(leading_function(StatisticKind::D, 1, 0.5).is_err());
    }

    #[test]
    fn first_leading_function_keeps_sign() {
        let mid = leading_function(StatisticKind::W2bar, 1, 0.5).unwrap();
        let min = (0..10_000)
            .map(|i| i as f64 / 10_000.0)
            .map(|x| leading_function(StatisticKind::W2bar, 1, x).unwrap() * mid)
            .fold(f64::INFINITY, f64::min);
        assert!(min > 0.0);
        // The second one changes sign.
        let vals: Vec<f64> = (0..1000)
            .map(|i| leading_function(StatisticKind::W2bar, 2, i as f64 / 1000.0).unwrap())
            .collect();
        assert!(vals.iter().any(|&v| v > 0.0) && vals.iter().any(|&v| v < 0.0));
    }
}
