//! Restricted vector autoregressive models.

mod covariance;
mod covfn;
mod fit;
mod model;

pub use covariance::{
    covariance_via_companion, covariance_via_companion_with, covariance_via_vma, default_vma_order, CompanionOptions,
    MAX_VMA_ORDER,
};
pub use covfn::CovarianceMatrixFunction;
pub use fit::{fit_var_linear, EIGEN_CLAMP};
pub use model::RestrictedVarModel;
