//! Univariate restricted autoregressive models.

mod autocov;
mod fit;
mod lags;
mod model;
mod spectrum;

pub use autocov::{autocovariance_until, theoretical_autocovariance, AutocovMethod};
pub use fit::{fit_linear, fit_nonlinear, fit_nonlinear_with, NewtonOptions, MAX_CONDITION};
pub use lags::{LagSelection, LagVector};
pub use model::{RestrictedArModel, STATIONARITY_MARGIN};
pub use spectrum::{ar_spectrum, ar_spectrum_cosine, mse, spectrum_autocovariance};

pub(crate) use fit::noise_from_variance;
