use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::scalar::Scalar;
use crate::var::covfn::CovarianceMatrixFunction;
use crate::var::model::RestrictedVarModel;

/// Limits for the companion (Kronecker) covariance solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompanionOptions {
    /// Largest companion dimension `p·k`; the dense system has `(p·k)²` unknowns.
    pub max_dim: usize,
}

impl Default for CompanionOptions {
    fn default() -> Self {
        Self { max_dim: 48 }
    }
}

/// Exact covariance matrix function `Γ_0..Γ_n` through the first-order companion form.
pub fn covariance_via_companion<T: Scalar>(
    model: &RestrictedVarModel<T>,
    n: usize,
) -> Result<CovarianceMatrixFunction<T>> {
    covariance_via_companion_with(model, n, CompanionOptions::default())
}

pub fn covariance_via_companion_with<T: Scalar>(
    model: &RestrictedVarModel<T>,
    n: usize,
    opts: CompanionOptions,
) -> Result<CovarianceMatrixFunction<T>> {
    let (k, p) = (model.k(), model.order());
    let dim = p * k;
    if dim > opts.max_dim {
        return Err(Error::Resource(format!(
            "companion dimension p·k = {dim} exceeds the limit {}; use the VMA approximation instead",
            opts.max_dim
        )));
    }
    let phi_star = model.companion();
    let mut q_star = Matrix::zeros(dim, dim);
    q_star.set_block(0, 0, &model.noise_covariance());

    // vec(Γ*_0) = (I − Φ*⊗Φ*)⁻¹ vec(Σ*Σ*ᵀ), column stacking
    let system = Matrix::identity(dim * dim).sub(&phi_star.kron(&phi_star));
    let v = Lu::factor(&system)?.solve(&q_star.vec_columns());
    let g_star = Matrix::from_columns_vec(dim, dim, &v);

    let mut mats: Vec<Matrix<T>> = (0..p).map(|h| g_star.block(0, h * k, k, k)).collect();
    let g0 = &mats[0];
    mats[0] = g0.add(&g0.transpose()).scale(T::lit(0.5));
    extend(model, &mut mats, n);
    mats.truncate(n + 1);
    Ok(CovarianceMatrixFunction::new_unchecked(k, mats))
}

/// Appends `Γ_l = Σ Φ_i Γ_{l−i}` until lag `n`.
fn extend<T: Scalar>(model: &RestrictedVarModel<T>, mats: &mut Vec<Matrix<T>>, n: usize) {
    let k = model.k();
    while mats.len() <= n {
        let l = mats.len();
        let mut g = Matrix::zeros(k, k);
        for (&i, a) in model.j().as_slice().iter().zip(model.a()) {
            let prev = if i <= l {
                mats[l - i].clone()
            } else {
                mats[i - l].transpose()
            };
            g.add_assign(&a.matmul(&prev));
        }
        mats.push(g);
    }
}

/// Growth of `‖Ψ_q‖` over `‖Ψ_0‖` taken as divergence.
const DIVERGENCE: f64 = 1e6;

fn psi_weights<T: Scalar>(model: &RestrictedVarModel<T>, q: usize) -> Vec<Matrix<T>> {
    let k = model.k();
    let mut psi = vec![Matrix::identity(k)];
    for i in 1..=q {
        let mut s = Matrix::zeros(k, k);
        for (&j, a) in model.j().as_slice().iter().zip(model.a()) {
            if j <= i {
                s.add_assign(&a.matmul(&psi[i - j]));
            }
        }
        psi.push(s);
    }
    psi
}

/// Covariance from the moving-average representation truncated after `q` terms:
/// `Γ_l = Σ_{i=l}^{q} Ψ_i BBᵀ Ψ_{i−l}ᵀ`, identically zero for `l > q`.
pub fn covariance_via_vma<T: Scalar>(
    model: &RestrictedVarModel<T>,
    q: usize,
    n: usize,
) -> Result<CovarianceMatrixFunction<T>> {
    let k = model.k();
    let psi = psi_weights(model, q);
    let growth = psi[q].max_abs().to_f64_lossy();
    if !(growth <= DIVERGENCE) {
        return Err(Error::NonStationary {
            spectral_radius: model.spectral_radius(),
        });
    }
    let bbt = model.noise_covariance();
    let weighted: Vec<Matrix<T>> = psi.iter().map(|p| p.matmul(&bbt)).collect();
    let mats = (0..=n)
        .map(|l| {
            let mut g = Matrix::zeros(k, k);
            for i in l..=q {
                g.add_assign(&weighted[i].matmul(&psi[i - l].transpose()));
            }
            g
        })
        .collect();
    Ok(CovarianceMatrixFunction::new_unchecked(k, mats))
}

/// Upper limit of [`default_vma_order`].
pub const MAX_VMA_ORDER: usize = 10_000;

/// Smallest `q` with `‖Ψ_q BBᵀ‖_max < 1e-10·‖Γ_0‖_max`, capped at [`MAX_VMA_ORDER`].
///
/// `Γ_0` is estimated by the partial sums of the moving-average series.
pub fn default_vma_order<T: Scalar>(model: &RestrictedVarModel<T>) -> usize {
    let k = model.k();
    let bbt = model.noise_covariance();
    let mut psi = vec![Matrix::identity(k)];
    let mut gamma0 = bbt.clone();
    for q in 1..=MAX_VMA_ORDER {
        let mut s = Matrix::zeros(k, k);
        for (&j, a) in model.j().as_slice().iter().zip(model.a()) {
            if j <= q {
                s.add_assign(&a.matmul(&psi[q - j]));
            }
        }
        let w = s.matmul(&bbt);
        gamma0.add_assign(&w.matmul(&s.transpose()));
        psi.push(s);
        if w.max_abs() < T::lit(1e-10) * gamma0.max_abs() {
            return q;
        }
    }
    MAX_VMA_ORDER
}
