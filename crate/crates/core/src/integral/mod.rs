//! Double Newton, Riemann and improper integrals.

mod cov;
mod ftc;
mod improper;
mod newton;
mod riemann;

pub use cov::{change_of_variables_integral, pullback, CovResult, CovSpec, Jacobian};
pub use ftc::{ftc1_check, ftc2_check, Ftc1Report, Ftc2Report, FtcPoint};
pub use improper::{improper_newton_integral, open_interval, ImproperConfig, ImproperVerdict};
pub use newton::{accumulate_field, integral_mean_point, newton_integral};
pub use riemann::{riemann_integral, riemann_sum, RiemannConfig, SampleRule};
