//! Stationary homogeneous isotropic turbulence with the von Kármán spectrum.
//!
//! Provides the longitudinal and transverse correlation functions, the
//! velocity covariance tensor, the one-sided von Kármán spectrum and the
//! discrete targets (single point and two point) that the AR/VAR fits consume.
//! Separations and wavenumbers are non-dimensional (`r/L`, `k·L`) unless noted.

pub mod special;

use std::f64::consts::PI;

pub use special::{bessel_k, gamma_fn};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::spectrum::cosine_series;
use crate::target::TargetAutocovariance;
use crate::var::CovarianceMatrixFunction;

/// Below this non-dimensional separation `f` and `g` take their limit value 1.
const ORIGIN_BRANCH: f64 = 1e-8;

/// Parameters of the isotropic von Kármán model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotropicModel<T> {
    gamma_exponent: T,
    length_scale: T,
    sigma0_sq: T,
}

impl<T: Scalar> Default for IsotropicModel<T> {
    fn default() -> Self {
        Self {
            gamma_exponent: T::lit(5.0 / 6.0),
            length_scale: T::one(),
            sigma0_sq: T::one(),
        }
    }
}

impl<T: Scalar> IsotropicModel<T> {
    pub fn new(gamma_exponent: T, length_scale: T, sigma0_sq: T) -> Result<Self> {
        if !(gamma_exponent > T::lit(0.5)) || !gamma_exponent.is_finite() {
            return Err(Error::InvalidInput(format!(
                "von Kármán exponent must exceed 1/2, got {gamma_exponent}"
            )));
        }
        if !(length_scale > T::zero()) || !length_scale.is_finite() {
            return Err(Error::InvalidInput(format!(
                "length scale must be positive, got {length_scale}"
            )));
        }
        if !(sigma0_sq > T::zero()) || !sigma0_sq.is_finite() {
            return Err(Error::InvalidInput(format!(
                "variance must be positive, got {sigma0_sq}"
            )));
        }
        Ok(Self {
            gamma_exponent,
            length_scale,
            sigma0_sq,
        })
    }

    /// Default length scale and variance with the given exponent.
    pub fn with_exponent(gamma_exponent: T) -> Result<Self> {
        Self::new(gamma_exponent, T::one(), T::one())
    }

    pub fn gamma_exponent(&self) -> T {
        self.gamma_exponent
    }

    pub fn length_scale(&self) -> T {
        self.length_scale
    }

    pub fn sigma0_sq(&self) -> T {
        self.sigma0_sq
    }

    /// Integral length scale `L_u^x = λ·L`.
    pub fn integral_length_scale(&self) -> Result<T> {
        Ok(lambda_ratio(self)? * self.length_scale)
    }

    fn bessel_order(&self) -> T {
        self.gamma_exponent - T::lit(0.5)
    }

    fn prefactor(&self) -> Result<T> {
        Ok(T::lit(2.0) / gamma_fn(self.bessel_order())?)
    }
}

/// `λ = Γ(1/2)·Γ(γ) / Γ(γ − 1/2)`.
pub fn lambda_ratio<T: Scalar>(model: &IsotropicModel<T>) -> Result<T> {
    let g = model.gamma_exponent;
    Ok(gamma_fn(T::lit(0.5))? * gamma_fn(g)? / gamma_fn(g - T::lit(0.5))?)
}

fn check_separation<T: Scalar>(r: T) -> Result<()> {
    if r >= T::zero() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "separation must be finite and non-negative, got {r}"
        )))
    }
}

/// Longitudinal correlation `f(r̊) = 2/Γ(γ−½)·(r̊/2)^{γ−½}·K_{γ−½}(r̊)`.
pub fn longitudinal_f<T: Scalar>(r_nd: T, model: &IsotropicModel<T>) -> Result<T> {
    check_separation(r_nd)?;
    if r_nd < T::lit(ORIGIN_BRANCH) {
        return Ok(T::one());
    }
    let nu = model.bessel_order();
    let half_r = r_nd / T::lit(2.0);
    Ok(model.prefactor()? * half_r.powf(nu) * bessel_k(nu, r_nd)?)
}

/// Transverse correlation `g(r̊) = f(r̊) − 2/Γ(γ−½)·(r̊/2)^{γ+½}·K_{γ−3/2}(r̊)`.
pub fn transverse_g<T: Scalar>(r_nd: T, model: &IsotropicModel<T>) -> Result<T> {
    check_separation(r_nd)?;
    if r_nd < T::lit(ORIGIN_BRANCH) {
        return Ok(T::one());
    }
    let half_r = r_nd / T::lit(2.0);
    let extra = model.prefactor()?
        * half_r.powf(model.gamma_exponent + T::lit(0.5))
        * bessel_k(model.gamma_exponent - T::lit(1.5), r_nd)?;
    Ok(longitudinal_f(r_nd, model)? - extra)
}

/// Velocity covariance tensor `R(r) = σ₀²([f−g]·r rᵀ/rᵀr + g·I)` for a dimensional separation.
pub fn covariance_tensor<T: Scalar>(r_vec: [T; 3], model: &IsotropicModel<T>) -> Result<Matrix<T>> {
    if r_vec.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("separation vector must be finite".into()));
    }
    let r2: T = r_vec.iter().map(|&x| x * x).sum();
    let s = model.sigma0_sq;
    if r2 == T::zero() {
        return Ok(Matrix::identity(3).scale(s));
    }
    let r = r2.sqrt();
    let r_nd = r / model.length_scale;
    let f = longitudinal_f(r_nd, model)?;
    let g = transverse_g(r_nd, model)?;
    Ok(Matrix::from_fn(3, 3, |i, j| {
        let delta = if i == j { g } else { T::zero() };
        s * ((f - g) * r_vec[i] * r_vec[j] / r2 + delta)
    }))
}

/// Non-dimensional `(1,1)` tensor entry: longitudinal velocity at two points
/// separated by `along` (streamwise) and `across` (lateral).
fn longitudinal_cross<T: Scalar>(along: T, across: T, model: &IsotropicModel<T>) -> Result<T> {
    let r2 = along * along + across * across;
    if r2 == T::zero() {
        return Ok(T::one());
    }
    let r = r2.sqrt();
    let f = longitudinal_f(r, model)?;
    let g = transverse_g(r, model)?;
    Ok((f - g) * along * along / r2 + g)
}

fn check_grid<T: Scalar>(delta_r_nd: T, n_lags: usize) -> Result<()> {
    if !(delta_r_nd > T::zero()) || !delta_r_nd.is_finite() {
        return Err(Error::InvalidInput(format!(
            "lag spacing must be positive, got {delta_r_nd}"
        )));
    }
    if n_lags == 0 {
        return Err(Error::InvalidInput("at least one lag is required".into()));
    }
    Ok(())
}

/// Target `γᵀ_l = R̊_u(l·Δr̊) = f(l·Δr̊)` for `l = 0..=n_lags`.
pub fn make_target<T: Scalar>(
    model: &IsotropicModel<T>,
    delta_r_nd: T,
    n_lags: usize,
) -> Result<TargetAutocovariance<T>> {
    check_grid(delta_r_nd, n_lags)?;
    let values = (0..=n_lags)
        .map(|l| longitudinal_f(T::from_usize_lossy(l) * delta_r_nd, model))
        .collect::<Result<Vec<_>>>()?;
    TargetAutocovariance::new(values, delta_r_nd)
}

/// Two-point target for the longitudinal component at points a lateral
/// distance `delta_y_nd` apart, with lag `l` mapped to streamwise separation `l·Δr̊`.
pub fn make_two_point_target<T: Scalar>(
    model: &IsotropicModel<T>,
    delta_r_nd: T,
    delta_y_nd: T,
    n_lags: usize,
) -> Result<CovarianceMatrixFunction<T>> {
    check_grid(delta_r_nd, n_lags)?;
    if !(delta_y_nd >= T::zero()) || !delta_y_nd.is_finite() {
        return Err(Error::InvalidInput(format!(
            "lateral separation must be non-negative, got {delta_y_nd}"
        )));
    }
    let mats = (0..=n_lags)
        .map(|l| {
            let along = T::from_usize_lossy(l) * delta_r_nd;
            let auto = longitudinal_f(along, model)?;
            let cross = longitudinal_cross(along, delta_y_nd, model)?;
            Ok(Matrix::from_row_slice(2, 2, &[auto, cross, cross, auto]))
        })
        .collect::<Result<Vec<_>>>()?;
    CovarianceMatrixFunction::new(mats)
}

/// Non-dimensional one-sided von Kármán spectrum, in premultiplied form:
/// `Γ(γ)/(√π·Γ(γ−½)) · 2k̊ / (1+k̊²)^γ` with angular wavenumber `k̊ = k·L`.
pub fn von_karman_spectrum<T: Scalar>(k_nd: T, model: &IsotropicModel<T>) -> Result<T> {
    if !(k_nd >= T::zero()) || !k_nd.is_finite() {
        return Err(Error::Domain(format!(
            "wavenumber must be finite and non-negative, got {k_nd}"
        )));
    }
    let g = model.gamma_exponent;
    let c = gamma_fn(g)? / (T::lit(PI).sqrt() * gamma_fn(g - T::lit(0.5))?);
    Ok(c * T::lit(2.0) * k_nd / (T::one() + k_nd * k_nd).powf(g))
}

/// One-sided spectrum of the discrete target, `(1/k̊_max)[γᵀ_0 + 2Σ γᵀ_l cos(π l k̊/k̊_max)]`.
pub fn target_spectrum<T: Scalar>(target: &TargetAutocovariance<T>, k_nd: T, k_max: T) -> Result<T> {
    cosine_series(target.values(), k_nd, k_max)
}
