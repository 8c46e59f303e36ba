//! Simulated null distributions and critical values.

use serde::{Deserialize, Serialize};

use super::{check_replicates, simulate_null, NullSampler, SCHEMA_VERSION, VERSION};
use crate::error::{Error, Result};
use crate::gof_statistics::StatisticKind;

/// Lower-tail levels, used by lower one-sided tests of signed statistics.
pub const LOWER_LEVELS: [f64; 3] = [0.01, 0.05, 0.10];
/// Upper-tail levels.
pub const UPPER_LEVELS: [f64; 3] = [0.90, 0.95, 0.99];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullTable {
    pub schema_version: u32,
    pub version: String,
    pub statistic: StatisticKind,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    pub sampler: String,
    pub quantile_method: String,
    /// `(level, quantile)` pairs, levels ascending.
    pub quantiles: Vec<(f64, f64)>,
    /// Quantiles of `|T|` at the upper levels, for two-sided tests of the
    /// signed statistics.
    pub abs_quantiles: Option<Vec<(f64, f64)>>,
}

/// Type-7 sample quantile: linear interpolation between order statistics
/// at position `(n − 1)p`.
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "quantile of an empty sample");
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn lookup(pairs: &[(f64, f64)], level: f64) -> Option<f64> {
    pairs.iter().find(|(l, _)| (l - level).abs() < 1e-12).map(|p| p.1)
}

impl NullTable {
    fn build(kind: StatisticKind, n: usize, replicates: usize, seed: u64, sampler: &str, mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let quantiles = LOWER_LEVELS
            .iter()
            .chain(UPPER_LEVELS.iter())
            .map(|&p| (p, quantile_type7(&values, p)))
            .collect();
        let abs_quantiles = kind.is_signed().then(|| {
            let mut abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
            abs.sort_by(f64::total_cmp);
            UPPER_LEVELS.iter().map(|&p| (p, quantile_type7(&abs, p))).collect()
        });
        NullTable {
            schema_version: SCHEMA_VERSION,
            version: VERSION.to_string(),
            statistic: kind,
            n,
            replicates,
            seed,
            sampler: sampler.to_string(),
            quantile_method: "type-7".to_string(),
            quantiles,
            abs_quantiles,
        }
    }

    pub fn quantile(&self, level: f64) -> Result<f64> {
        lookup(&self.quantiles, level)
            .ok_or_else(|| Error::Dependency(format!("no {level} quantile tabulated for {}", self.statistic)))
    }

    pub fn abs_quantile(&self, level: f64) -> Result<f64> {
        self.abs_quantiles
            .as_deref()
            .and_then(|q| lookup(q, level))
            .ok_or_else(|| Error::Dependency(format!("no |T| {level} quantile tabulated for {}", self.statistic)))
    }
}

/// Null tables for all eight statistics from one shared simulation, in
/// `StatisticKind::ALL` order.
pub fn null_tables_with(sampler: &NullSampler, n: usize, replicates: usize, seed: u64) -> Result<Vec<NullTable>> {
    check_replicates(replicates)?;
    let sims = simulate_null(sampler, n, replicates, seed)?;
    let label = sampler.label();
    Ok(StatisticKind::ALL
        .iter()
        .map(|&k| {
            let column = sims.iter().map(|row| row[k.index()]).collect();
            NullTable::build(k, n, replicates, seed, &label, column)
        })
        .collect())
}

pub fn null_tables(n: usize, replicates: usize, seed: u64) -> Result<Vec<NullTable>> {
    null_tables_with(&NullSampler::Uniform, n, replicates, seed)
}

/// One statistic's table. The values match the corresponding entry of
/// [`null_tables`] for the same arguments.
pub fn null_table(kind: StatisticKind, n: usize, replicates: usize, seed: u64) -> Result<NullTable> {
    Ok(null_tables(n, replicates, seed)?.swap_remove(kind.index()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use StatisticKind::*;

    #[test]
    fn type7_matches_hand_values() {
        let s = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_type7(&s, 0.0), 1.0);
        assert_eq!(quantile_type7(&s, 1.0), 4.0);
        assert!((quantile_type7(&s, 0.5) - 2.5).abs() < 1e-15);
        assert!((quantile_type7(&s, 0.9) - 3.7).abs() < 1e-12);
        assert_eq!(quantile_type7(&[5.0], 0.3), 5.0);
    }

    #[test]
    fn monotone_and_reproducible() {
        let a = null_tables(30, 2000, 11).unwrap();
        let b = null_tables(30, 2000, 11).unwrap();
        assert_eq!(a, b);
        for t in &a {
            assert!(t.quantiles.windows(2).all(|w| w[0].1 <= w[1].1), "{}", t.statistic);
            assert!(t.quantile(0.99).unwrap() > t.quantile(0.95).unwrap());
            assert_eq!(t.abs_quantiles.is_some(), t.statistic.is_signed());
        }
        assert_eq!(null_table(W2bar, 30, 2000, 11).unwrap(), a[W2bar.index()]);
    }

    #[test]
    fn too_few_replicates() {
        assert!(matches!(null_tables(10, 999, 1), Err(Error::Validation(_))));
    }

    #[test]
    fn missing_level_is_dependency_error() {
        let t = null_table(D, 10, 1000, 1).unwrap();
        assert!(matches!(t.quantile(0.975), Err(Error::Dependency(_))));
        assert!(t.abs_quantile(0.95).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = null_table(W1bar, 10, 1000, 3).unwrap();
        let back: NullTable = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(t, back);
    }
}
