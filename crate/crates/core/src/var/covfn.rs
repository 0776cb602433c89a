use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::scalar::Scalar;
use crate::target::TargetAutocovariance;

/// Covariance matrix function `Γ_0..Γ_n` of a `k`-variate stationary process,
/// `Γ_l = E[z_t z_{t−l}ᵀ]`. Negative lags are served as `Γ_{−l} = Γ_lᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrixFunction<T> {
    k: usize,
    mats: Vec<Matrix<T>>,
}

impl<T: Scalar> CovarianceMatrixFunction<T> {
    /// Validates shapes, finiteness, and symmetry and semi-definiteness of `Γ_0`.
    pub fn new(mats: Vec<Matrix<T>>) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| Error::InvalidInput("covariance function is empty".into()))?;
        let k = first.rows();
        if k == 0 || mats.iter().any(|m| m.rows() != k || m.cols() != k) {
            return Err(Error::InvalidInput(
                "covariance matrices must all be k×k with k ≥ 1".into(),
            ));
        }
        if mats.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidInput("covariance function has non-finite entries".into()));
        }
        let scale = first.max_abs();
        let tol = T::lit(1e-10) * scale.max(T::one());
        if !first.is_symmetric(tol) {
            return Err(Error::InvalidInput("Γ_0 is not symmetric".into()));
        }
        let (eig, _) = symmetric_eigen(first);
        if eig[0] < -tol {
            return Err(Error::InvalidInput(format!(
                "Γ_0 is not positive semi-definite (eigenvalue {})",
                eig[0]
            )));
        }
        Ok(Self { k, mats })
    }

    pub(crate) fn new_unchecked(k: usize, mats: Vec<Matrix<T>>) -> Self {
        Self { k, mats }
    }

    /// Univariate function wrapped as `1×1` matrices.
    pub fn from_scalar(target: &TargetAutocovariance<T>) -> Self {
        let mats = target
            .values()
            .iter()
            .map(|&v| Matrix::from_row_slice(1, 1, &[v]))
            .collect();
        Self { k: 1, mats }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_lag(&self) -> usize {
        self.mats.len() - 1
    }

    /// Stored matrices `Γ_0..Γ_n`.
    pub fn mats(&self) -> &[Matrix<T>] {
        &self.mats
    }

    /// `Γ_lag` for any sign of `lag`, or `None` beyond the stored range.
    pub fn try_get(&self, lag: isize) -> Option<Matrix<T>> {
        let m = self.mats.get(lag.unsigned_abs())?;
        Some(if lag < 0 { m.transpose() } else { m.clone() })
    }

    /// `Γ_lag`.
    ///
    /// # Panics
    /// When `|lag|` exceeds [`max_lag`](Self::max_lag).
    pub fn get(&self, lag: isize) -> Matrix<T> {
        self.try_get(lag)
            .unwrap_or_else(|| panic!("lag {lag} outside 0..={}", self.max_lag()))
    }

    pub fn require(&self, lag: isize) -> Result<Matrix<T>> {
        self.try_get(lag).ok_or(Error::InsufficientTarget {
            needed: lag.unsigned_abs(),
            available: self.max_lag(),
        })
    }

    /// `γ_{z_a, z_b, lag}`, the `(a, b)` entry of `Γ_lag`.
    pub fn entry(&self, lag: isize, a: usize, b: usize) -> Option<T> {
        let m = self.mats.get(lag.unsigned_abs())?;
        Some(if lag < 0 { m[(b, a)] } else { m[(a, b)] })
    }

    /// Sequence of the `(a, b)` entry over lags `0..=n`.
    pub fn component(&self, a: usize, b: usize) -> Vec<T> {
        self.mats.iter().map(|m| m[(a, b)]).collect()
    }

    pub fn truncated(&self, max_lag: usize) -> Self {
        let n = (max_lag + 1).min(self.mats.len());
        Self {
            k: self.k,
            mats: self.mats[..n].to_vec(),
        }
    }

    /// Largest entrywise difference over the common lag range.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.mats
            .iter()
            .zip(&other.mats)
            .fold(T::zero(), |m, (a, b)| m.max(a.sub(b).max_abs()))
    }
}
