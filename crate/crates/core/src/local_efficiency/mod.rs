//! Local Bahadur indices and efficiencies of the eight statistics under skew
//! alternatives, computed analytically (quadrature and root finding only).
//!
//! The efficiency of `T` at `f` is `l(T, f) / σ²(f)`. The indices come from
//! the functionals of `v(x) = ∫_{−∞}^x u f(u) du` and `q(s) = ∫_{−∞}^s v f`.
//! A second route, `c(T, θ) / (2K(θ))` for small θ, rebuilds the same numbers
//! from the exact `b(T, θ)` limits and the Kullback–Leibler information.

mod eigen;
mod indices;
mod lao;
mod slopes;
mod table;

pub use eigen::{eigen_constants, leading_function, mu0, tan_tanh, EigenConstants};
pub use indices::{
    index_from, local_index, local_index_classical, local_index_integrated, report_from, slope_coefficient,
    Functionals, LocalIndexReport,
};
pub use lao::{arcsine_residual, lao_check, linearity_residual, LaoReport, LAO_TOLERANCE};
pub use slopes::{
    b_function, b_values, b_values_from, exact_slope, richardson, route_consistency, slope_from_b, slope_ratios,
    RouteReport,
};
pub use table::{round3, table1, EfficiencyTable, TableCell, REFERENCE, TABLE_TOLERANCE};
