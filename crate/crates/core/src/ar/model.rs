use crate::ar::lags::LagVector;
use crate::error::{Error, Result};
use crate::linalg::schur_cohn_stable;
use crate::scalar::Scalar;

/// Largest admissible companion eigenvalue modulus.
pub const STATIONARITY_MARGIN: f64 = 1.0 - 1e-10;

/// Restricted autoregressive model `z_t = Σ a_{j_i} z_{t−j_i} + b·ε_t`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedArModel<T> {
    j: LagVector,
    a: Vec<T>,
    b: T,
}

impl<T: Scalar> RestrictedArModel<T> {
    /// Builds a model, rejecting non-stationary coefficient sets.
    pub fn new(j: LagVector, a: Vec<T>, b: T) -> Result<Self> {
        if a.len() != j.len() {
            return Err(Error::InvalidInput(format!(
                "{} coefficients for {} lags",
                a.len(),
                j.len()
            )));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite regression coefficient".into()));
        }
        if !(b >= T::zero()) || !b.is_finite() {
            return Err(Error::InvalidInput(format!(
                "noise coefficient must be finite and non-negative, got {b}"
            )));
        }
        let model = Self { j, a, b };
        let phi = model.phi();
        if !schur_cohn_stable(&phi, T::lit(STATIONARITY_MARGIN)) {
            return Err(Error::NonStationary {
                spectral_radius: root_radius(&phi),
            });
        }
        Ok(model)
    }

    /// Unrestricted AR(p) with `φ_1..φ_p` and noise `σ`.
    pub fn unrestricted(phi: Vec<T>, sigma: T) -> Result<Self> {
        Self::new(LagVector::consecutive(phi.len())?, phi, sigma)
    }

    pub fn j(&self) -> &LagVector {
        &self.j
    }

    pub fn a(&self) -> &[T] {
        &self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// Number of regression terms `N`.
    pub fn n_terms(&self) -> usize {
        self.j.len()
    }

    /// Order `p = j_N`.
    pub fn order(&self) -> usize {
        self.j.last()
    }

    /// Zero-padded coefficients `φ_1..φ_p` with `φ_h = a_h` for `h ∈ j` and 0 otherwise.
    pub fn phi(&self) -> Vec<T> {
        let mut phi = vec![T::zero(); self.order()];
        for (&lag, &a) in self.j.as_slice().iter().zip(&self.a) {
            phi[lag - 1] = a;
        }
        phi
    }

    /// Largest modulus among the companion-matrix eigenvalues.
    pub fn spectral_radius(&self) -> f64 {
        root_radius(&self.phi())
    }
}

/// Spectral radius of the companion matrix of `φ`, bisecting on the Schur–Cohn test.
fn root_radius<T: Scalar>(phi: &[T]) -> f64 {
    let phi: Vec<f64> = phi.iter().map(|x| x.to_f64_lossy()).collect();
    if phi.iter().any(|x| !x.is_finite()) {
        return f64::NAN;
    }
    // Cauchy bound on the roots of z^p − Σ φ_h z^{p−h}
    let mut hi = 1.0 + phi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut lo = 0.0f64;
    if phi.iter().all(|&x| x == 0.0) {
        return 0.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if schur_cohn_stable(&phi, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
