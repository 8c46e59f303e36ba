//! Named invariant suites, each a list of pass/fail checks.

use std::fmt;
use std::str::FromStr;

use rand::distributions::Open01;
use rand::Rng;
use serde::Serialize;

use crate::distributions::DensityKind;
use crate::error::{Error, Result};
use crate::gof_statistics::{all_values, classical_values, integrated_process, SortedSample, StatisticKind};
use crate::local_efficiency::{eigen_constants, lao_check, route_consistency, tan_tanh};
use crate::montecarlo::replicate_rng;
use crate::skew_model::{verify_condition2, verify_condition3, DEFAULT_THETA_GRID};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Conditions,
    Slopes,
    Lao,
    Eigen,
    Statistics,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Conditions, Suite::Slopes, Suite::Lao, Suite::Eigen, Suite::Statistics];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Conditions => "conditions",
            Suite::Slopes => "slopes",
            Suite::Lao => "lao",
            Suite::Eigen => "eigen",
            Suite::Statistics => "statistics",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|k| k.as_str()).collect();
                Error::Config(format!("unknown suite `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Tolerances for the suites that compare against published constants.
#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub mu0_tolerance: f64,
    pub route_tolerance: f64,
    pub samples: usize,
    pub grid: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            mu0_tolerance: 5e-4,
            route_tolerance: 1e-3,
            samples: 1000,
            grid: 100_000,
            seed: crate::montecarlo::DEFAULT_SEED,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Vec<Check>> {
    match suite {
        Suite::Eigen => eigen_suite(opts),
        Suite::Lao => lao_suite(),
        Suite::Conditions => conditions_suite(),
        Suite::Slopes => slopes_suite(opts),
        Suite::Statistics => statistics_suite(opts),
    }
}

fn eigen_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let e = eigen_constants(10)?;
    let mut out = vec![Check::new(
        "mu0 = 31.2852",
        (e.mu0 - 31.2852).abs() <= opts.mu0_tolerance,
        format!("mu0 = {:.10}, kappa1 = {:.12}", e.mu0, e.kappa[0]),
    )];
    for (j, &k) in e.kappa.iter().enumerate() {
        let r = tan_tanh(k).abs();
        out.push(Check::new(format!("residual kappa{}", j + 1), r < 1e-12, format!("{r:.3e} at {k:.12}")));
    }
    Ok(out)
}

fn lao_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let r = lao_check(StatisticKind::Dbar, &DensityKind::Uniform)?;
    let lin = r.linearity_residual.unwrap_or(f64::NAN);
    out.push(Check::new(
        "Dbar LAO at uniform",
        r.is_lao && lin < 1e-10,
        format!("efficiency {:.12}, linearity residual {lin:.3e}", r.efficiency),
    ));
    let r = lao_check(StatisticKind::U2bar, &DensityKind::Arcsine)?;
    out.push(Check::new(
        "U2bar LAO at arcsine",
        r.is_lao,
        format!(
            "efficiency {:.12}, arcsine residual {:.3e}",
            r.efficiency,
            r.arcsine_residual.unwrap_or(f64::NAN)
        ),
    ));
    for d in DensityKind::ALL {
        let r = lao_check(StatisticKind::W1bar, &d)?;
        out.push(Check::new(
            format!("W1bar not LAO at {d}"),
            !r.is_lao && r.efficiency < 1.0,
            format!("efficiency {:.6}", r.efficiency),
        ));
    }
    Ok(out)
}

fn conditions_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for f in DensityKind::ALL {
        for g in DensityKind::ALL {
            let c2 = verify_condition2(f.shared(), g.shared(), &DEFAULT_THETA_GRID)?;
            out.push(Check::new(
                format!("excess expansion {f}/{g}"),
                c2.decreasing,
                format!("{:?}", c2.ratios),
            ));
            let c3 = verify_condition3(f.shared(), g.shared(), &DEFAULT_THETA_GRID)?;
            let last = c3.ratios.last().map_or(f64::NAN, |r| r.1);
            let rel = (last / c3.limit - 1.0).abs();
            out.push(Check::new(
                format!("KL expansion {f}/{g}"),
                rel < 1e-4,
                format!("K/θ² = {last:.8} vs {:.8}", c3.limit),
            ));
        }
    }
    Ok(out)
}

fn slopes_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for f in [DensityKind::Uniform, DensityKind::Normal] {
        for g in [DensityKind::Normal, DensityKind::Logistic] {
            for r in route_consistency(f.shared(), g.shared(), &DEFAULT_THETA_GRID)? {
                out.push(Check::new(
                    format!("route {} {f}/{g}", r.statistic),
                    r.error < opts.route_tolerance,
                    format!("extrapolated {:.8}, analytic {:.8}", r.extrapolated, r.analytic),
                ));
            }
        }
    }
    Ok(out)
}

/// `D̄ₙ, ω̄ₙ¹, ω̄ₙ², Ūₙ²` from `Aₙ` on a uniform grid of `m` cells augmented
/// with the sample points: exact sup on the nodes, trapezoid for `∫A` and
/// Simpson for `∫A²`.
pub fn grid_integrated_values(u: &[f64], m: usize) -> [f64; 4] {
    let n = u.len() as f64;
    let mut pts: Vec<f64> = (0..=m).map(|j| j as f64 / m as f64).chain(u.iter().copied()).collect();
    pts.sort_by(f64::total_cmp);
    // Running count and sum of sample points strictly below x.
    let mut k = 0usize;
    let mut s = 0.0;
    let mut a_at = |x: f64| {
        while k < u.len() && u[k] < x {
            s += u[k];
            k += 1;
        }
        n.sqrt() * ((k as f64 * x - s) / n - 0.5 * x * x)
    };
    let mut sup: f64 = 0.0;
    let (mut i1, mut i2) = (0.0, 0.0);
    let mut prev_x = pts[0];
    let mut prev = a_at(prev_x);
    sup = sup.max(prev.abs());
    for &x in &pts[1..] {
        let mid = a_at(0.5 * (prev_x + x));
        let cur = a_at(x);
        let h = x - prev_x;
        i1 += 0.5 * h * (prev + cur);
        i2 += h / 6.0 * (prev * prev + 4.0 * mid * mid + cur * cur);
        sup = sup.max(cur.abs());
        prev = cur;
        prev_x = x;
    }
    [sup, i1, i2, i2 - i1 * i1]
}

fn statistics_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut worst = [0.0f64; 4];
    let mut identity: f64 = 0.0;
    for r in 0..opts.samples as u64 {
        let mut rng = replicate_rng(opts.seed, r);
        let n = rng.gen_range(1..=50);
        let raw: Vec<f64> = (0..n).map(|_| rng.sample(Open01)).collect();
        let s = SortedSample::new(raw)?;
        let exact = integrated_process(&s).values();
        let grid = grid_integrated_values(s.values(), opts.grid);
        for i in 0..4 {
            worst[i] = worst[i].max((exact[i] - grid[i]).abs());
        }
        let all = all_values(&s);
        let c = classical_values(s.values());
        identity = identity
            .max((all[7] - (all[6] - all[5] * all[5])).abs())
            .max((c[3] - (c[2] - c[1] * c[1])).abs());
    }
    let names = ["Dbar", "W1bar", "W2bar", "U2bar"];
    let tols = [1e-6, 1e-8, 1e-8, 1e-8];
    let mut out: Vec<Check> = (0..4)
        .map(|i| {
            Check::new(
                format!("{} exact vs grid", names[i]),
                worst[i] < tols[i],
                format!("max |diff| {:.3e} over {} samples", worst[i], opts.samples),
            )
        })
        .collect();
    out.push(Check::new("Watson identities", identity < 1e-10, format!("max residual {identity:.3e}")));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn fast_suites_pass() {
        for s in [Suite::Eigen, Suite::Lao] {
            let checks = run_suite(s, &SuiteOptions::default()).unwrap();
            assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        }
        let opts = SuiteOptions {
            samples: 50,
            grid: 20_000,
            ..Default::default()
        };
        let checks = run_suite(Suite::Statistics, &opts).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn grid_oracle_single_point() {
        // n = 1, u₁ = 1/2: A = −u²/2 up to 1/2, then climbs back to 0 at 1.
        let g = grid_integrated_values(&[0.5], 1000);
        assert!((g[0] - 0.125).abs() < 1e-12);
    }
}
