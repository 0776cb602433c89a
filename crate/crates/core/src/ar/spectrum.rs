use std::f64::consts::PI;

use crate::ar::autocov::{autocovariance_until, theoretical_autocovariance, AutocovMethod};
use crate::ar::model::RestrictedArModel;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectrum::{check_wavenumber, cosine_series, SERIES_CUTOFF};
use crate::target::TargetAutocovariance;

/// Longest autocovariance sequence the cosine-series spectrum will sum.
const MAX_SERIES_LEN: usize = 1_000_000;

/// One-sided AR spectrum from the coefficients:
/// `(1/k_max)·(b²/σ₀²) / |1 − Σ a_{j_n} exp(−i·j_n·π·k/k_max)|²`.
pub fn ar_spectrum<T: Scalar>(model: &RestrictedArModel<T>, k: T, k_max: T, variance_scale: T) -> Result<T> {
    check_wavenumber(k, k_max)?;
    check_scale(variance_scale)?;
    let w = T::lit(PI) * k / k_max;
    let (mut re, mut im) = (T::one(), T::zero());
    for (&j, &a) in model.j().as_slice().iter().zip(model.a()) {
        let phase = w * T::from_usize_lossy(j);
        re -= a * phase.cos();
        im += a * phase.sin();
    }
    let b2 = model.b() * model.b();
    Ok(b2 / variance_scale / (re * re + im * im) / k_max)
}

/// One-sided AR spectrum from the cosine series of the theoretical autocovariance,
/// truncated once `|γ^AR_l|` stays below the series cutoff.
pub fn ar_spectrum_cosine<T: Scalar>(model: &RestrictedArModel<T>, k: T, k_max: T, variance_scale: T) -> Result<T> {
    check_scale(variance_scale)?;
    let g = autocovariance_until(model, T::lit(SERIES_CUTOFF), MAX_SERIES_LEN)?;
    Ok(cosine_series(&g, k, k_max)? / variance_scale)
}

/// Autocovariance to use for repeated cosine-series evaluations of one model.
pub fn spectrum_autocovariance<T: Scalar>(model: &RestrictedArModel<T>) -> Result<Vec<T>> {
    autocovariance_until(model, T::lit(SERIES_CUTOFF), MAX_SERIES_LEN)
}

fn check_scale<T: Scalar>(variance_scale: T) -> Result<()> {
    if variance_scale > T::zero() && variance_scale.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "variance scale must be positive, got {variance_scale}"
        )))
    }
}

/// Mean squared error `(1/M)·Σ_{l=0}^{M} (γᵀ_l − γ^AR_l)²`.
pub fn mse<T: Scalar>(model: &RestrictedArModel<T>, target: &TargetAutocovariance<T>, max_lag_m: usize) -> Result<T> {
    if max_lag_m == 0 {
        return Err(Error::InvalidInput("M must be positive".into()));
    }
    target.require(max_lag_m as isize)?;
    let g = theoretical_autocovariance(model, max_lag_m, AutocovMethod::DirectSolve)?;
    let sum: T = target.values()[..=max_lag_m]
        .iter()
        .zip(&g)
        .map(|(&t, &m)| (t - m) * (t - m))
        .sum();
    Ok(sum / T::from_usize_lossy(max_lag_m))
}
