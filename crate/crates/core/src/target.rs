use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Discrete target autocovariance `γᵀ_0..γᵀ_n` sampled at spacing `delta_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetAutocovariance<T> {
    values: Vec<T>,
    delta_r: T,
}

impl<T: Scalar> TargetAutocovariance<T> {
    pub fn new(values: Vec<T>, delta_r: T) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("target autocovariance is empty".into()));
        }
        if !(delta_r > T::zero()) || !delta_r.is_finite() {
            return Err(Error::InvalidInput(format!(
                "lag spacing must be positive, got {delta_r}"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "target autocovariance has non-finite values".into(),
            ));
        }
        let g0 = values[0];
        if !(g0 > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "target variance must be positive, got {g0}"
            )));
        }
        // Cauchy–Schwarz, with rounding slack
        let bound = g0 * (T::one() + T::lit(1e-12));
        if let Some((lag, v)) = values.iter().enumerate().find(|(_, v)| v.abs() > bound) {
            return Err(Error::InvalidInput(format!(
                "|γ_{lag}| = {} exceeds γ_0 = {g0}",
                v.abs()
            )));
        }
        Ok(Self { values, delta_r })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn delta_r(&self) -> T {
        self.delta_r
    }

    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    /// `γ_lag`, using `γ_{-l} = γ_l`.
    pub fn get(&self, lag: isize) -> Option<T> {
        self.values.get(lag.unsigned_abs()).copied()
    }

    /// `γ_lag`, or [`Error::InsufficientTarget`] when the target is too short.
    pub fn require(&self, lag: isize) -> Result<T> {
        self.get(lag).ok_or(Error::InsufficientTarget {
            needed: lag.unsigned_abs(),
            available: self.max_lag(),
        })
    }

    /// Copy truncated to lags `0..=max_lag`.
    pub fn truncated(&self, max_lag: usize) -> Self {
        let n = (max_lag + 1).min(self.values.len());
        Self {
            values: self.values[..n].to_vec(),
            delta_r: self.delta_r,
        }
    }
}
