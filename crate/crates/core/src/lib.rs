//! Jacobi theta functions, elliptic integrals and the probability laws built
//! from them: Brownian transition kernels on `[-1, 1]`, hitting times, the
//! discrete Gaussian `theta_2`/`theta_3` distributions and the Kolmogorov
//! distribution. Every identity is computable from two independent sides.

pub mod brownian;
pub mod discrete_gaussian;
pub mod elliptic;
pub mod error;
pub mod kolmogorov;
pub mod series;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
pub use series::SeriesPolicy;
pub use theta::{LatticeParam, ThetaKind};
