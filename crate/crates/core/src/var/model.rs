use crate::ar::{LagVector, RestrictedArModel, STATIONARITY_MARGIN};
use crate::error::{Error, Result};
use crate::linalg::{spectral_radius, Matrix};
use crate::scalar::Scalar;

/// Restricted vector autoregression `z_t = Σ A_{j_i} z_{t−j_i} + B·ε_t` with lower-triangular `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedVarModel<T> {
    k: usize,
    j: LagVector,
    a: Vec<Matrix<T>>,
    b: Matrix<T>,
}

impl<T: Scalar> RestrictedVarModel<T> {
    pub fn new(j: LagVector, a: Vec<Matrix<T>>, b: Matrix<T>) -> Result<Self> {
        let k = b.rows();
        if k == 0 || !b.is_square() {
            return Err(Error::InvalidInput("noise matrix must be square and non-empty".into()));
        }
        if a.len() != j.len() {
            return Err(Error::InvalidInput(format!(
                "{} coefficient matrices for {} lags",
                a.len(),
                j.len()
            )));
        }
        if a.iter().any(|m| m.rows() != k || m.cols() != k) {
            return Err(Error::InvalidInput(format!("coefficient matrices must be {k}×{k}")));
        }
        if a.iter().any(|m| !m.is_finite()) || !b.is_finite() {
            return Err(Error::InvalidInput("non-finite model entries".into()));
        }
        if !b.is_lower_triangular() || (0..k).any(|i| b[(i, i)] < T::zero()) {
            return Err(Error::InvalidInput(
                "noise matrix must be lower triangular with non-negative diagonal".into(),
            ));
        }
        let model = Self { k, j, a, b };
        let rho = spectral_radius(&model.companion());
        if !(rho < STATIONARITY_MARGIN) {
            return Err(Error::NonStationary { spectral_radius: rho });
        }
        Ok(model)
    }

    /// Univariate model viewed as a `1×1` VAR.
    pub fn from_ar(model: &RestrictedArModel<T>) -> Self {
        Self {
            k: 1,
            j: model.j().clone(),
            a: model.a().iter().map(|&x| Matrix::from_row_slice(1, 1, &[x])).collect(),
            b: Matrix::from_row_slice(1, 1, &[model.b()]),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn j(&self) -> &LagVector {
        &self.j
    }

    pub fn a(&self) -> &[Matrix<T>] {
        &self.a
    }

    pub fn b(&self) -> &Matrix<T> {
        &self.b
    }

    pub fn order(&self) -> usize {
        self.j.last()
    }

    /// Innovation covariance `BBᵀ`.
    pub fn noise_covariance(&self) -> Matrix<T> {
        self.b.matmul(&self.b.transpose())
    }

    /// Zero-padded `Φ_1..Φ_p`.
    pub fn phi(&self) -> Vec<Matrix<T>> {
        let mut phi = vec![Matrix::zeros(self.k, self.k); self.order()];
        for (&lag, a) in self.j.as_slice().iter().zip(&self.a) {
            phi[lag - 1] = a.clone();
        }
        phi
    }

    /// `pk×pk` companion matrix of the first-order representation.
    pub fn companion(&self) -> Matrix<T> {
        let (k, p) = (self.k, self.order());
        let mut c = Matrix::zeros(p * k, p * k);
        for (&lag, a) in self.j.as_slice().iter().zip(&self.a) {
            c.set_block(0, (lag - 1) * k, a);
        }
        for i in k..p * k {
            c[(i, i - k)] = T::one();
        }
        c
    }

    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(&self.companion())
    }
}
