use crate::ar::autocov::{theoretical_autocovariance, AutocovMethod};
use crate::ar::lags::{LagSelection, LagVector};
use crate::ar::model::RestrictedArModel;
use crate::error::{Error, Result};
use crate::linalg::{solve_checked, Lu, Matrix};
use crate::scalar::Scalar;
use crate::target::TargetAutocovariance;

/// Systems whose 1-norm condition number exceeds this are reported as non-invertible.
pub const MAX_CONDITION: f64 = 1e12;

/// Relative slack below zero tolerated in `b²` before declaring the target unrealizable.
const NOISE_SLACK: f64 = 1e-12;

pub(crate) fn noise_from_variance<T: Scalar>(b2: T, gamma0: T) -> Result<T> {
    if b2 >= T::zero() {
        Ok(b2.sqrt())
    } else if b2 >= -T::lit(NOISE_SLACK) * gamma0 {
        Ok(T::zero())
    } else {
        Err(Error::NotRealizable(format!("noise variance b² = {b2} is negative")))
    }
}

/// Generalized Yule–Walker fit: `a = γ_l·γ_{j,l}⁻¹` and `b² = γ_0 − a·γ_jᵀ`.
///
/// `γ_{j,l}` is the `N×N` matrix with entries `γ_{|l_n − j_m|}`.
pub fn fit_linear<T: Scalar>(target: &TargetAutocovariance<T>, sel: &LagSelection) -> Result<RestrictedArModel<T>> {
    target.require(sel.max_target_lag() as isize)?;
    let j = sel.j().as_slice();
    let l = sel.l().as_slice();
    let n = j.len();
    let g = |lag: usize| target.values()[lag];
    // row n of the transposed system holds equation l_n: Σ_m a_m γ_{|l_n − j_m|} = γ_{l_n}
    let system = Matrix::from_fn(n, n, |row, col| g(l[row].abs_diff(j[col])));
    let rhs: Vec<T> = l.iter().map(|&ln| g(ln)).collect();
    let a = solve_checked(&system, &rhs, MAX_CONDITION)?;
    let gamma0 = g(0);
    let explained: T = a.iter().zip(j).map(|(&am, &jm)| am * g(jm)).sum();
    let b = noise_from_variance(gamma0 - explained, gamma0)?;
    RestrictedArModel::new(sel.j().clone(), a, b)
}

/// Budget for the damped Newton iteration of [`fit_nonlinear`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Absolute tolerance on the max-norm residual, relative to `γ_0`.
    pub tolerance: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tolerance: 1e-12,
        }
    }
}

/// Exact-match fit: the model reproduces the target at every lag in `match_lags`.
///
/// `match_lags` must start at 0 and contain `N + 1` lags not exceeding `p = j_N`.
/// The remaining autocovariances up to lag `p` become unknowns, which makes
/// the `p + 1` autocovariance equations non-linear in the model coefficients.
pub fn fit_nonlinear<T: Scalar>(
    target: &TargetAutocovariance<T>,
    j: &LagVector,
    match_lags: &[usize],
) -> Result<RestrictedArModel<T>> {
    fit_nonlinear_with(target, j, match_lags, NewtonOptions::default())
}

pub fn fit_nonlinear_with<T: Scalar>(
    target: &TargetAutocovariance<T>,
    j: &LagVector,
    match_lags: &[usize],
    opts: NewtonOptions,
) -> Result<RestrictedArModel<T>> {
    let p = j.last();
    let n = j.len();
    if match_lags.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "{} match lags given, {} required",
            match_lags.len(),
            n + 1
        )));
    }
    if match_lags[0] != 0 {
        return Err(Error::InvalidInput("match lags must start at 0".into()));
    }
    if match_lags.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("match lags must be strictly increasing".into()));
    }
    if match_lags[n] > p {
        return Err(Error::InvalidInput(format!(
            "match lag {} exceeds the model order {p}",
            match_lags[n]
        )));
    }
    target.require(match_lags[n] as isize)?;
    let gamma0 = target.values()[0];

    // slot of each lag 0..=p: either a fixed target value or an unknown
    let unknown_lags: Vec<usize> = (0..=p).filter(|l| !match_lags.contains(l)).collect();
    let mut slot = vec![None; p + 1];
    for (u, &lag) in unknown_lags.iter().enumerate() {
        slot[lag] = Some(n + 1 + u);
    }
    let dim = p + 1;

    let mut x = initial_guess(target, j, match_lags, &unknown_lags);
    let gamma_at = |x: &[T], lag: usize| match slot[lag] {
        Some(idx) => x[idx],
        None => target.values()[lag],
    };
    let residual = |x: &[T]| -> Vec<T> {
        (0..dim)
            .map(|l| {
                let mut r = gamma_at(x, l);
                for (i, &ji) in j.as_slice().iter().enumerate() {
                    r -= x[i] * gamma_at(x, l.abs_diff(ji));
                }
                if l == 0 {
                    r -= x[n];
                }
                r
            })
            .collect()
    };
    let norm = |r: &[T]| r.iter().fold(T::zero(), |m, v| m.max(v.abs()));

    let tol = T::lit(opts.tolerance.max(64.0 * T::epsilon().to_f64_lossy())) * gamma0;
    let mut r = residual(&x);
    let mut rn = norm(&r);
    let mut iterations = 0;
    while !(rn <= tol) {
        if iterations == opts.max_iterations || !rn.is_finite() {
            return Err(Error::Convergence {
                iterations,
                residual: rn.to_f64_lossy(),
            });
        }
        iterations += 1;
        let mut jac = Matrix::<T>::zeros(dim, dim);
        for l in 0..dim {
            if let Some(idx) = slot[l] {
                jac[(l, idx)] += T::one();
            }
            for (i, &ji) in j.as_slice().iter().enumerate() {
                let lag = l.abs_diff(ji);
                jac[(l, i)] -= gamma_at(&x, lag);
                if let Some(idx) = slot[lag] {
                    jac[(l, idx)] -= x[i];
                }
            }
            if l == 0 {
                jac[(0, n)] -= T::one();
            }
        }
        let neg: Vec<T> = r.iter().map(|&v| -v).collect();
        let step = Lu::factor(&jac)?.solve(&neg);
        // halve the step until the residual decreases
        let mut t = T::one();
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<T> = x.iter().zip(&step).map(|(&xi, &si)| xi + t * si).collect();
            let tr = residual(&trial);
            let tn = norm(&tr);
            if tn < rn {
                x = trial;
                r = tr;
                rn = tn;
                accepted = true;
                break;
            }
            t /= T::lit(2.0);
        }
        if !accepted {
            return Err(Error::Convergence {
                iterations,
                residual: rn.to_f64_lossy(),
            });
        }
    }
    let b = noise_from_variance(x[n], gamma0)?;
    RestrictedArModel::new(j.clone(), x[..n].to_vec(), b)
}

/// Starting point `(a, b², unknown γ's)` from the linear fit on the positive match lags.
fn initial_guess<T: Scalar>(
    target: &TargetAutocovariance<T>,
    j: &LagVector,
    match_lags: &[usize],
    unknown_lags: &[usize],
) -> Vec<T> {
    let n = j.len();
    let gamma0 = target.values()[0];
    let linear = LagVector::new(match_lags[1..].to_vec())
        .and_then(|l| LagSelection::new(j.clone(), l))
        .and_then(|sel| fit_linear(target, &sel));
    let mut x = Vec::with_capacity(n + 1 + unknown_lags.len());
    match linear {
        Ok(model) => {
            let g = theoretical_autocovariance(&model, j.last(), AutocovMethod::DirectSolve)
                .unwrap_or_else(|_| vec![T::zero(); j.last() + 1]);
            x.extend_from_slice(model.a());
            x.push(model.b() * model.b());
            x.extend(unknown_lags.iter().map(|&lag| g[lag]));
        }
        Err(_) => {
            x.extend(std::iter::repeat_n(T::zero(), n));
            x.push(gamma0);
            x.extend(
                unknown_lags
                    .iter()
                    .map(|&lag| target.get(lag as isize).unwrap_or(T::zero())),
            );
        }
    }
    x
}
