//! Double limits, double derivatives and the theorems built on them.

mod estimate;
mod extrema;
mod limit;
mod schwarz;
mod solve;

pub use estimate::{double_derivative, DerivConfig, DerivEstimate, SignedEstimate};
pub use extrema::{
    classify_stationary, critical_points, monotonicity_classify, Classification, CriticalKind, CriticalPoint,
    Monotonicity, MonotonicityReport,
};
pub use limit::double_limit;
pub(crate) use limit::approach;
pub use schwarz::{mixed_partials_check, MixedPartials};
pub use solve::{
    cauchy_mvt_solve, intermediate_point, mvt_solve, rolle_solve, CauchyResult, MeanValueResult, SolverConfig,
};
