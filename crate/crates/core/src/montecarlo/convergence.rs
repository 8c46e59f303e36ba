//! Empirical convergence of `T_n/√n` or `T_n/n` to `b(T, θ)`.

use rayon::prelude::*;
use serde::Serialize;

use super::{replicate_rng, SCHEMA_VERSION, VERSION};
use crate::error::{Error, Result};
use crate::gof_statistics::{all_values, pit, StatisticKind};
use crate::local_efficiency::b_function;
use crate::skew_model::SkewAlternative;

pub const DEFAULT_N_GRID: [usize; 3] = [100, 1000, 10_000];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BConvergenceRow {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub std_error: f64,
    /// `|mean − b|`.
    pub deviation: f64,
    /// `deviation / std_error`.
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BConvergenceReport {
    pub schema_version: u32,
    pub version: String,
    pub statistic: StatisticKind,
    pub base: String,
    pub skewing: String,
    pub theta: f64,
    pub b: f64,
    pub replicates: usize,
    pub seed: u64,
    pub rows: Vec<BConvergenceRow>,
    /// `|mean − b| / |b|` at the largest `n`.
    pub max_relative_deviation: f64,
}

/// Mean and spread of the normalized statistic across replicates for each
/// `n`, next to the exact limit.
pub fn verify_b_convergence(
    kind: StatisticKind,
    a: &SkewAlternative,
    n_grid: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<BConvergenceReport> {
    if a.theta() <= 0.0 {
        return Err(Error::Validation("b-convergence needs θ > 0".into()));
    }
    if replicates < 2 || n_grid.is_empty() || n_grid.contains(&0) {
        return Err(Error::Validation("need at least two replicates and positive sample sizes".into()));
    }
    let b = b_function(kind, a)?;
    let f = a.base();
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let values: Vec<f64> = (0..replicates as u64)
            .into_par_iter()
            .map(|r| {
                let mut rng = replicate_rng(seed ^ (n as u64).rotate_left(32), r);
                let x = a.sample_with(&mut rng, n);
                pit(&x, f).map(|s| kind.normalize(all_values(&s)[kind.index()], n))
            })
            .collect::<Result<_>>()?;
        let m = values.len() as f64;
        let mean = values.iter().sum::<f64>() / m;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
        let sd = var.sqrt();
        let std_error = sd / m.sqrt();
        let deviation = (mean - b).abs();
        rows.push(BConvergenceRow {
            n,
            mean,
            sd,
            std_error,
            deviation,
            z: deviation / std_error,
        });
    }
    let last = rows.last().expect("non-empty grid");
    Ok(BConvergenceReport {
        schema_version: SCHEMA_VERSION,
        version: VERSION.to_string(),
        statistic: kind,
        base: f.name().to_string(),
        skewing: a.skewing().name().to_string(),
        theta: a.theta(),
        b,
        replicates,
        seed,
        max_relative_deviation: last.deviation / b.abs(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DensityKind::*;
    use StatisticKind::*;

    #[test]
    fn rejects_null() {
        let a = SkewAlternative::new(Normal.shared(), Normal.shared(), 0.0).unwrap();
        assert!(verify_b_convergence(D, &a, &[10], 10, 1).is_err());
    }

    #[test]
    fn dbar_deviation_shrinks() {
        let a = SkewAlternative::new(Normal.shared(), Normal.shared(), 1.0).unwrap();
        let r = verify_b_convergence(Dbar, &a, &[100, 10_000], 200, 4).unwrap();
        assert!(r.rows[1].deviation < r.rows[0].deviation, "{:?}", r.rows);
        assert!(r.b > 0.0);
    }
}
