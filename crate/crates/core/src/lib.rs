//! Restricted AR and VAR models fitted to a target autocovariance function.
//!
//! The linear fit generalizes the Yule–Walker equations to arbitrary
//! regression lags `j` and equation lags `l`. Around it sit the von Kármán
//! turbulence target, theoretical autocovariances and spectra, a genetic
//! search over lag schemes, and seeded synthesis of realizations.
//!
//! Numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

// `!(x > 0)` is how argument checks reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ar;
pub mod error;
pub mod io;
pub mod linalg;
pub mod optimizer;
pub mod scalar;
pub mod spectrum;
pub mod synthesis;
pub mod target;
pub mod turbulence;
pub mod var;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type ArModel = ar::RestrictedArModel<f64>;
pub type VarModel = var::RestrictedVarModel<f64>;
pub type Target = target::TargetAutocovariance<f64>;
pub type CovarianceFunction = var::CovarianceMatrixFunction<f64>;
pub type TurbulenceModel = turbulence::IsotropicModel<f64>;
pub type Mat = linalg::Matrix<f64>;
