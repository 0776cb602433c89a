use crate::ar::model::RestrictedArModel;
use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::scalar::Scalar;

/// How the theoretical autocovariance of an AR model is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AutocovMethod {
    /// One `(n'+1)×(n'+1)` solve of the autocovariance equations at lags `0..=n'`, `n' = max(n, p)`.
    #[default]
    DirectSolve,
    /// Solve the equations at lags `0..=p`, then extend with `γ_l = Σ a_i γ_{l−j_i}`.
    Recursive,
}

/// Solves the autocovariance equations at lags `0..=n` (requires `n ≥ p`).
///
/// Row `l` reads `γ_l − Σ_h φ_h γ_{|l−h|} = b²·[l = 0]`.
fn solve_equations<T: Scalar>(model: &RestrictedArModel<T>, n: usize) -> Result<Vec<T>> {
    let mut m = Matrix::<T>::identity(n + 1);
    for l in 0..=n {
        for (&h, &a) in model.j().as_slice().iter().zip(model.a()) {
            let col = l.abs_diff(h);
            m[(l, col)] -= a;
        }
    }
    let mut rhs = vec![T::zero(); n + 1];
    rhs[0] = model.b() * model.b();
    Ok(Lu::factor(&m)?.solve(&rhs))
}

/// Extends `gammas` (holding at least `p` values) with `γ_l = Σ a_i γ_{l−j_i}` up to lag `n`.
pub(crate) fn extend_recursively<T: Scalar>(model: &RestrictedArModel<T>, gammas: &mut Vec<T>, n: usize) {
    while gammas.len() <= n {
        let l = gammas.len();
        let mut s = T::zero();
        for (&h, &a) in model.j().as_slice().iter().zip(model.a()) {
            s += a * gammas[l.abs_diff(h)];
        }
        gammas.push(s);
    }
}

/// Theoretical autocovariance `γ^AR_0..γ^AR_n` of a stationary model.
pub fn theoretical_autocovariance<T: Scalar>(
    model: &RestrictedArModel<T>,
    n: usize,
    method: AutocovMethod,
) -> Result<Vec<T>> {
    let p = model.order();
    let mut gammas = match method {
        AutocovMethod::DirectSolve => solve_equations(model, n.max(p))?,
        AutocovMethod::Recursive => {
            if n < p {
                return Err(Error::InvalidInput(format!(
                    "recursive method needs n ≥ p = {p}, got n = {n}"
                )));
            }
            let mut g = solve_equations(model, p)?;
            extend_recursively(model, &mut g, n);
            g
        }
    };
    if gammas.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonInvertible {
            condition: f64::INFINITY,
        });
    }
    gammas.truncate(n + 1);
    Ok(gammas)
}

/// Autocovariance extended until `p` consecutive lags fall below `cutoff` in magnitude, capped at `max_len` values.
pub fn autocovariance_until<T: Scalar>(model: &RestrictedArModel<T>, cutoff: T, max_len: usize) -> Result<Vec<T>> {
    let p = model.order();
    let mut g = theoretical_autocovariance(model, p, AutocovMethod::Recursive)?;
    let mut quiet = g.iter().rev().take_while(|x| x.abs() < cutoff).count();
    while quiet < p && g.len() < max_len {
        let n = g.len();
        extend_recursively(model, &mut g, n);
        if g[n].abs() < cutoff {
            quiet += 1;
        } else {
            quiet = 0;
        }
    }
    Ok(g)
}
