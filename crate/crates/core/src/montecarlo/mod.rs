//! Seeded Monte Carlo: null tables, finite-sample power under skew
//! alternatives and empirical convergence of the normalized statistics.
//!
//! Replicate `r` draws from its own ChaCha8 stream `(seed, r)`, and
//! replicates are collected in index order, so every result is a pure
//! function of its parameters and seed whatever the worker count.

mod cache;
mod convergence;
mod ks;
mod null;
mod power;

use rand::distributions::Open01;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distributions::SharedDensity;
use crate::error::{Error, Result};
use crate::gof_statistics::{all_values, SortedSample};

pub use cache::{cache_dir, cache_key, cached_null_tables, CACHE_ENV};
pub use convergence::{verify_b_convergence, BConvergenceReport, BConvergenceRow, DEFAULT_N_GRID};
pub use ks::{kolmogorov_survival, ks_two_sample, KsResult};
pub use null::{null_table, null_tables, quantile_type7, NullTable, LOWER_LEVELS, UPPER_LEVELS};
pub use power::{power, power_curve, PowerCurve, PowerPoint, Sidedness};

pub const SCHEMA_VERSION: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 20_240_611;
pub const MIN_REPLICATES: usize = 1000;

/// Independent stream for replicate `r`.
pub fn replicate_rng(seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    rng
}

/// How a null sample is produced before the statistics see it.
#[derive(Debug, Clone)]
pub enum NullSampler {
    /// Uniform draws used directly.
    Uniform,
    /// Draws from `F` by inversion, then mapped back through `F`.
    Pit(SharedDensity),
}

impl NullSampler {
    pub fn label(&self) -> String {
        match self {
            NullSampler::Uniform => "uniform".into(),
            NullSampler::Pit(d) => format!("pit:{}", d.name()),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng, n: usize) -> Result<SortedSample> {
        let u: Vec<f64> = (0..n).map(|_| rng.sample(Open01)).collect();
        match self {
            NullSampler::Uniform => SortedSample::new(u),
            NullSampler::Pit(d) => {
                let x: Vec<f64> = u.iter().map(|&p| inverse(d.as_ref(), p)).collect();
                crate::gof_statistics::pit(&x, d.as_ref())
            }
        }
    }
}

/// Quantile through the lower tail on both sides, keeping upper-tail draws
/// as accurate as lower-tail ones.
fn inverse(d: &dyn crate::distributions::Density, p: f64) -> f64 {
    if p <= 0.5 {
        d.quantile(p)
    } else {
        -d.quantile(1.0 - p)
    }
}

fn check_replicates(replicates: usize) -> Result<()> {
    if replicates < MIN_REPLICATES {
        return Err(Error::Validation(format!(
            "at least {MIN_REPLICATES} replicates are required, got {replicates}"
        )));
    }
    Ok(())
}

/// All eight statistics for each null replicate, in replicate order.
pub fn simulate_null(sampler: &NullSampler, n: usize, replicates: usize, seed: u64) -> Result<Vec<[f64; 8]>> {
    if n == 0 {
        return Err(Error::Validation("sample size must be at least 1".into()));
    }
    (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            sampler.draw(&mut rng, n).map(|s| all_values(&s))
        })
        .collect()
}

/// Run `job` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build a {threads}-thread pool: {e}")))?;
    Ok(pool.install(job))
}
