use log::warn;

use crate::ar::{LagSelection, MAX_CONDITION};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_semidefinite, condition_one, symmetric_eigen, Lu, Matrix};
use crate::scalar::Scalar;
use crate::var::covfn::CovarianceMatrixFunction;
use crate::var::model::RestrictedVarModel;

/// Eigenvalues of `BBᵀ` down to this value are clamped to zero; below it the target is unrealizable.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Restricted VAR fit: `A = Γ_l·Γ_{j,l}⁻¹`, `BBᵀ = Γ_0 − Σ A_i Γ_{j_i}ᵀ`, `B` by Cholesky.
///
/// Block `(m, n)` of the `kN×kN` matrix `Γ_{j,l}` is `Γ_{l_n − j_m}`.
pub fn fit_var_linear<T: Scalar>(
    target: &CovarianceMatrixFunction<T>,
    sel: &LagSelection,
) -> Result<RestrictedVarModel<T>> {
    target.require(sel.max_target_lag() as isize)?;
    let k = target.k();
    let j = sel.j().as_slice();
    let l = sel.l().as_slice();
    let n = j.len();
    let lag = |x: usize, y: usize| x as isize - y as isize;

    // transposed system Γ_{j,l}ᵀ·Aᵀ = Γ_lᵀ: block (n, m) is Γ_{l_n − j_m}ᵀ
    let mut system = Matrix::zeros(k * n, k * n);
    for (row, &ln) in l.iter().enumerate() {
        for (col, &jm) in j.iter().enumerate() {
            system.set_block(row * k, col * k, &target.get(lag(ln, jm)).transpose());
        }
    }
    let mut rhs = Matrix::zeros(k * n, k);
    for (row, &ln) in l.iter().enumerate() {
        rhs.set_block(row * k, 0, &target.get(ln as isize).transpose());
    }
    let lu = Lu::factor(&system)?;
    let cond = condition_one(&system, &lu).to_f64_lossy();
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(Error::NonInvertible { condition: cond });
    }
    let at = lu.solve_matrix(&rhs);
    let a: Vec<Matrix<T>> = (0..n).map(|m| at.block(m * k, 0, k, k).transpose()).collect();

    let mut explained = Matrix::zeros(k, k);
    for (am, &jm) in a.iter().zip(j) {
        explained.add_assign(&am.matmul(&target.get(jm as isize).transpose()));
    }
    let gamma0 = target.get(0);
    let b = noise_factor(&gamma0.sub(&explained), gamma0.max_abs())?;
    RestrictedVarModel::new(sel.j().clone(), a, b)
}

/// Lower Cholesky factor of the symmetrized innovation covariance.
fn noise_factor<T: Scalar>(bbt: &Matrix<T>, scale: T) -> Result<Matrix<T>> {
    let sym = bbt.add(&bbt.transpose()).scale(T::lit(0.5));
    if sym.rows() == 1 {
        // keeps the univariate case identical to the AR fit
        return crate::ar::noise_from_variance(sym[(0, 0)], scale)
            .map(|b| Matrix::from_row_slice(1, 1, &[b]))
            .or_else(|_| clamp_or_reject(&sym));
    }
    if let Some(b) = cholesky(&sym) {
        return Ok(b);
    }
    clamp_or_reject(&sym)
}

fn clamp_or_reject<T: Scalar>(sym: &Matrix<T>) -> Result<Matrix<T>> {
    let (eig, vecs) = symmetric_eigen(sym);
    let clamp = T::lit(EIGEN_CLAMP);
    if eig[0] < -clamp {
        return Err(Error::NotRealizable(format!(
            "BBᵀ has eigenvalue {} below −{EIGEN_CLAMP:e}",
            eig[0]
        )));
    }
    warn!("clamping BBᵀ eigenvalue {} to zero", eig[0]);
    let d = Matrix::from_fn(eig.len(), eig.len(), |i, j| {
        if i == j {
            eig[i].max(T::zero())
        } else {
            T::zero()
        }
    });
    let fixed = vecs.matmul(&d).matmul(&vecs.transpose());
    cholesky_semidefinite(&fixed, clamp).ok_or_else(|| Error::NotRealizable("BBᵀ is not positive semi-definite".into()))
}
