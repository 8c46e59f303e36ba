//! Goodness-of-fit statistics based on the integrated empirical process and
//! their local Bahadur efficiency under generalized skew alternatives.
//!
//! The crate covers the symmetric base laws ([`distributions`]), the skew
//! family `2f(x)G(θx)` ([`skew_model`]), exact computation of the eight test
//! statistics ([`gof_statistics`]), the analytic efficiency engine
//! ([`local_efficiency`]) and a seeded Monte Carlo suite ([`montecarlo`]).

pub mod data;
pub mod distributions;
pub mod error;
pub mod gof_statistics;
pub mod local_efficiency;
pub mod montecarlo;
pub mod quadrature;
pub mod roots;
pub mod skew_model;
pub mod special;
pub mod verify;

pub use distributions::{make_density, Density, DensityKind, NumericDensity, SharedDensity, Support};
pub use error::{Error, Result};
pub use gof_statistics::{SortedSample, StatisticKind, StatisticResult};
pub use skew_model::SkewAlternative;
