//! Finite-sample power against skew alternatives.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_replicates, replicate_rng, NullTable, SCHEMA_VERSION, VERSION};
use crate::distributions::SharedDensity;
use crate::error::{Error, Result};
use crate::gof_statistics::{all_values, pit, StatisticKind};
use crate::skew_model::SkewAlternative;

/// Rejection region relative to the null distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    /// Reject for large values.
    Upper,
    /// Reject for small values.
    Lower,
    /// Reject for large `|T|`. Same as `Upper` for the nonnegative statistics.
    TwoSided,
}

impl Sidedness {
    pub fn default_for(kind: StatisticKind) -> Self {
        if kind.is_signed() {
            Sidedness::TwoSided
        } else {
            Sidedness::Upper
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Sidedness::Upper => "upper",
            Sidedness::Lower => "lower",
            Sidedness::TwoSided => "two-sided",
        }
    }

    /// `(threshold, rejects)` for a null table at `level`.
    pub fn rule(self, table: &NullTable, level: f64) -> Result<RejectionRule> {
        let signed = table.statistic.is_signed();
        Ok(match self {
            Sidedness::Upper => RejectionRule::Above(table.quantile(1.0 - level)?),
            Sidedness::TwoSided if !signed => RejectionRule::Above(table.quantile(1.0 - level)?),
            Sidedness::Lower => RejectionRule::Below(table.quantile(level)?),
            Sidedness::TwoSided => RejectionRule::AbsAbove(table.abs_quantile(1.0 - level)?),
        })
    }
}

impl fmt::Display for Sidedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sidedness {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "upper" => Ok(Sidedness::Upper),
            "lower" => Ok(Sidedness::Lower),
            "two-sided" | "two_sided" | "twosided" => Ok(Sidedness::TwoSided),
            other => Err(Error::Config(format!(
                "unknown sidedness `{other}`; expected upper, lower or two-sided"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RejectionRule {
    Above(f64),
    Below(f64),
    AbsAbove(f64),
}

impl RejectionRule {
    pub fn rejects(&self, value: f64) -> bool {
        match *self {
            RejectionRule::Above(c) => value > c,
            RejectionRule::Below(c) => value < c,
            RejectionRule::AbsAbove(c) => value.abs() > c,
        }
    }

    pub fn threshold(&self) -> f64 {
        match *self {
            RejectionRule::Above(c) | RejectionRule::Below(c) | RejectionRule::AbsAbove(c) => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerPoint {
    pub theta: f64,
    pub rejections: usize,
    pub power: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCurve {
    pub schema_version: u32,
    pub version: String,
    pub statistic: StatisticKind,
    pub base: String,
    pub skewing: String,
    pub n: usize,
    pub level: f64,
    pub sidedness: Sidedness,
    pub critical_value: f64,
    pub replicates: usize,
    pub seed: u64,
    pub theta_grid: Vec<f64>,
    pub points: Vec<PowerPoint>,
}

fn validate(table: Option<&NullTable>, kind: StatisticKind, n: usize) -> Result<&NullTable> {
    let table = table.ok_or_else(|| Error::Dependency(format!("a null table for {kind} at n = {n} is required")))?;
    if table.statistic != kind || table.n != n {
        return Err(Error::Dependency(format!(
            "null table is for {} at n = {}, not {kind} at n = {n}",
            table.statistic, table.n
        )));
    }
    Ok(table)
}

/// Rejection rate over `replicates` skew samples of size `n`.
///
/// Replicate `r` uses stream `(seed, r)` for every θ, so curves over θ share
/// their random numbers.
#[allow(clippy::too_many_arguments)]
pub fn power(
    kind: StatisticKind,
    a: &SkewAlternative,
    n: usize,
    level: f64,
    replicates: usize,
    seed: u64,
    table: Option<&NullTable>,
    sidedness: Sidedness,
) -> Result<PowerPoint> {
    check_replicates(replicates)?;
    let table = validate(table, kind, n)?;
    let rule = sidedness.rule(table, level)?;
    let f = a.base();
    let decisions: Vec<bool> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            let x = a.sample_with(&mut rng, n);
            pit(&x, f).map(|s| rule.rejects(all_values(&s)[kind.index()]))
        })
        .collect::<Result<_>>()?;
    let rejections = decisions.iter().filter(|&&d| d).count();
    let p = rejections as f64 / replicates as f64;
    Ok(PowerPoint {
        theta: a.theta(),
        rejections,
        power: p,
        std_error: (p * (1.0 - p) / replicates as f64).sqrt(),
    })
}

#[allow(clippy::too_many_arguments)]
pub fn power_curve(
    kind: StatisticKind,
    f: SharedDensity,
    g: SharedDensity,
    n: usize,
    level: f64,
    theta_grid: &[f64],
    replicates: usize,
    seed: u64,
    table: Option<&NullTable>,
    sidedness: Sidedness,
) -> Result<PowerCurve> {
    let checked = validate(table, kind, n)?;
    let critical_value = sidedness.rule(checked, level)?.threshold();
    let points = theta_grid
        .iter()
        .map(|&t| {
            let a = SkewAlternative::new(f.clone(), g.clone(), t)?;
            power(kind, &a, n, level, replicates, seed, table, sidedness)
        })
        .collect::<Result<_>>()?;
    Ok(PowerCurve {
        schema_version: SCHEMA_VERSION,
        version: VERSION.to_string(),
        statistic: kind,
        base: f.name().to_string(),
        skewing: g.name().to_string(),
        n,
        level,
        sidedness,
        critical_value,
        replicates,
        seed,
        theta_grid: theta_grid.to_vec(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DensityKind::*;
    use crate::montecarlo::null_table;
    use StatisticKind::*;

    #[test]
    fn requires_matching_table() {
        let a = SkewAlternative::new(Normal.shared(), Normal.shared(), 1.0).unwrap();
        let err = power(D, &a, 20, 0.05, 1000, 1, None, Sidedness::Upper).unwrap_err();
        assert!(matches!(err, Error::Dependency(_)));
        let t = null_table(D, 30, 1000, 1).unwrap();
        assert!(power(D, &a, 20, 0.05, 1000, 1, Some(&t), Sidedness::Upper).is_err());
    }

    #[test]
    fn sidedness_parsing_and_defaults() {
        assert_eq!("Two-Sided".parse::<Sidedness>().unwrap(), Sidedness::TwoSided);
        assert!("both".parse::<Sidedness>().is_err());
        assert_eq!(Sidedness::default_for(W1bar), Sidedness::TwoSided);
        assert_eq!(Sidedness::default_for(W2bar), Sidedness::Upper);
    }

    #[test]
    fn null_calibration() {
        let t = null_table(W2bar, 40, 4000, 3).unwrap();
        let a = SkewAlternative::new(Logistic.shared(), Normal.shared(), 0.0).unwrap();
        let p = power(W2bar, &a, 40, 0.05, 4000, 99, Some(&t), Sidedness::Upper).unwrap();
        let se = (0.05f64 * 0.95 / 4000.0).sqrt();
        assert!((p.power - 0.05).abs() < 3.0 * se, "{p:?}");
        assert!((p.std_error - (p.power * (1.0 - p.power) / 4000.0).sqrt()).abs() < 1e-15);
    }
}
