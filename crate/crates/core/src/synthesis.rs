//! Seeded synthesis of AR/VAR realizations and sample/ensemble autocovariance estimates.
//!
//! Realization `r` draws its innovations from a ChaCha20 stream selected by
//! `r`, so any realization can be regenerated independently of the others.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ar::RestrictedArModel;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::var::{CovarianceMatrixFunction, RestrictedVarModel};

/// Burn-in per unit of model order when none is given.
pub const BURN_IN_PER_ORDER: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisConfig {
    /// Samples kept per realization.
    pub length: usize,
    pub n_realizations: usize,
    /// Samples discarded before the kept ones; `None` means `100·p`.
    pub burn_in: Option<usize>,
    pub rng_seed: u64,
}

impl SynthesisConfig {
    pub fn new(length: usize, n_realizations: usize, rng_seed: u64) -> Self {
        Self {
            length,
            n_realizations,
            burn_in: None,
            rng_seed,
        }
    }

    pub fn burn_in_for(&self, order: usize) -> usize {
        self.burn_in.unwrap_or(BURN_IN_PER_ORDER * order)
    }

    fn validate(&self) -> Result<()> {
        if self.length == 0 || self.n_realizations == 0 {
            return Err(Error::InvalidInput(
                "length and number of realizations must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Innovation generator for realization `index`.
pub fn realization_rng(seed: u64, index: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn normal<T: Scalar>(rng: &mut ChaCha20Rng) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Realization `index` of an AR model, started from zeros.
pub fn ar_realization<T: Scalar>(model: &RestrictedArModel<T>, config: &SynthesisConfig, index: usize) -> Vec<T> {
    let burn = config.burn_in_for(model.order());
    let total = burn + config.length;
    let mut rng = realization_rng(config.rng_seed, index);
    let mut z: Vec<T> = Vec::with_capacity(total);
    for t in 0..total {
        let mut s = T::zero();
        for (&j, &a) in model.j().as_slice().iter().zip(model.a()) {
            if j <= t {
                s += a * z[t - j];
            }
        }
        s += model.b() * normal::<T>(&mut rng);
        z.push(s);
    }
    z.split_off(burn)
}

/// Realization `index` of a VAR model as `length` vectors of dimension `k`.
pub fn var_realization<T: Scalar>(
    model: &RestrictedVarModel<T>,
    config: &SynthesisConfig,
    index: usize,
) -> Vec<Vec<T>> {
    let k = model.k();
    let burn = config.burn_in_for(model.order());
    let total = burn + config.length;
    let mut rng = realization_rng(config.rng_seed, index);
    let mut z: Vec<Vec<T>> = Vec::with_capacity(total);
    let b = model.b();
    for t in 0..total {
        let eps: Vec<T> = (0..k).map(|_| normal::<T>(&mut rng)).collect();
        let zt: Vec<T> = (0..k)
            .map(|r| {
                let mut s = T::zero();
                for (&j, a) in model.j().as_slice().iter().zip(model.a()) {
                    if j <= t {
                        let past = &z[t - j];
                        for c in 0..k {
                            s += a[(r, c)] * past[c];
                        }
                    }
                }
                for c in 0..=r {
                    s += b[(r, c)] * eps[c];
                }
                s
            })
            .collect();
        z.push(zt);
    }
    z.split_off(burn)
}

pub fn synthesize_ar<T: Scalar>(model: &RestrictedArModel<T>, config: &SynthesisConfig) -> Result<Vec<Vec<T>>> {
    config.validate()?;
    Ok((0..config.n_realizations)
        .into_par_iter()
        .map(|r| ar_realization(model, config, r))
        .collect())
}

pub fn synthesize_var<T: Scalar>(model: &RestrictedVarModel<T>, config: &SynthesisConfig) -> Result<Vec<Vec<Vec<T>>>> {
    config.validate()?;
    Ok((0..config.n_realizations)
        .into_par_iter()
        .map(|r| var_realization(model, config, r))
        .collect())
}

/// Biased estimator `γ̂_l = (1/T)·Σ_{t=l}^{T−1} z_t z_{t−l}` (no mean removal).
pub fn sample_autocovariance<T: Scalar>(realization: &[T], max_lag: usize) -> Result<Vec<T>> {
    let n = realization.len();
    if max_lag >= n {
        return Err(Error::InvalidInput(format!(
            "max lag {max_lag} must be below the series length {n}"
        )));
    }
    let inv = T::one() / T::from_usize_lossy(n);
    Ok((0..=max_lag)
        .map(|l| {
            realization[l..]
                .iter()
                .zip(realization)
                .map(|(&x, &y)| x * y)
                .sum::<T>()
                * inv
        })
        .collect())
}

/// Biased estimator `Γ̂_l = (1/T)·Σ_t z_t z_{t−l}ᵀ` of a vector series.
pub fn sample_covariance<T: Scalar>(realization: &[Vec<T>], max_lag: usize) -> Result<Vec<Matrix<T>>> {
    let n = realization.len();
    if max_lag >= n {
        return Err(Error::InvalidInput(format!(
            "max lag {max_lag} must be below the series length {n}"
        )));
    }
    let k = realization[0].len();
    if realization.iter().any(|v| v.len() != k) {
        return Err(Error::InvalidInput("vector series has inconsistent dimension".into()));
    }
    let inv = T::one() / T::from_usize_lossy(n);
    Ok((0..=max_lag)
        .map(|l| {
            let mut g = Matrix::zeros(k, k);
            for t in l..n {
                let (now, past) = (&realization[t], &realization[t - l]);
                for a in 0..k {
                    for b in 0..k {
                        g[(a, b)] += now[a] * past[b];
                    }
                }
            }
            g.scale(inv)
        })
        .collect())
}

/// Pointwise mean of sample autocovariances over realizations.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleEstimate<G> {
    pub gamma_e: Vec<G>,
    pub n_realizations: usize,
    pub max_lag: usize,
}

/// Ensemble estimate from per-realization sample autocovariances of equal length.
pub fn ensemble_from_samples<T: Scalar>(per_realization: Vec<Vec<T>>) -> Result<EnsembleEstimate<T>> {
    let count = per_realization.len();
    let len = per_realization
        .first()
        .map(Vec::len)
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput("no realizations".into()))?;
    if per_realization.iter().any(|g| g.len() != len) {
        return Err(Error::InvalidInput("sample autocovariances differ in length".into()));
    }
    let mut acc = vec![T::zero(); len];
    for g in &per_realization {
        for (s, &v) in acc.iter_mut().zip(g) {
            *s += v;
        }
    }
    let inv = T::one() / T::from_usize_lossy(count);
    Ok(EnsembleEstimate {
        gamma_e: acc.into_iter().map(|s| s * inv).collect(),
        n_realizations: count,
        max_lag: len - 1,
    })
}

pub fn ensemble_autocovariance<T: Scalar>(realizations: &[Vec<T>], max_lag: usize) -> Result<EnsembleEstimate<T>> {
    if realizations.is_empty() {
        return Err(Error::InvalidInput("no realizations".into()));
    }
    let per = realizations
        .par_iter()
        .map(|r| sample_autocovariance(r, max_lag))
        .collect::<Result<Vec<_>>>()?;
    ensemble_from_samples(per)
}

/// Ensemble estimate generated realization by realization, without keeping the series.
pub fn ensemble_autocovariance_of<T: Scalar>(
    model: &RestrictedArModel<T>,
    config: &SynthesisConfig,
    max_lag: usize,
) -> Result<EnsembleEstimate<T>> {
    config.validate()?;
    let per = (0..config.n_realizations)
        .into_par_iter()
        .map(|r| sample_autocovariance(&ar_realization(model, config, r), max_lag))
        .collect::<Result<Vec<_>>>()?;
    ensemble_from_samples(per)
}

pub fn ensemble_covariance<T: Scalar>(
    realizations: &[Vec<Vec<T>>],
    max_lag: usize,
) -> Result<EnsembleEstimate<Matrix<T>>> {
    let per = realizations
        .par_iter()
        .map(|r| sample_covariance(r, max_lag))
        .collect::<Result<Vec<_>>>()?;
    ensemble_covariance_from_samples(per)
}

/// Matrix counterpart of [`ensemble_from_samples`].
pub fn ensemble_covariance_from_samples<T: Scalar>(
    per_realization: Vec<Vec<Matrix<T>>>,
) -> Result<EnsembleEstimate<Matrix<T>>> {
    let first = per_realization
        .first()
        .and_then(|g| g.first())
        .ok_or_else(|| Error::InvalidInput("no realizations".into()))?;
    let (k, len) = (first.rows(), per_realization[0].len());
    if per_realization
        .iter()
        .any(|g| g.len() != len || g.iter().any(|m| m.rows() != k))
    {
        return Err(Error::InvalidInput(
            "realizations differ in dimension or lag range".into(),
        ));
    }
    let mut acc = vec![Matrix::zeros(k, k); len];
    for g in &per_realization {
        for (s, m) in acc.iter_mut().zip(g) {
            s.add_assign(m);
        }
    }
    let inv = T::one() / T::from_usize_lossy(per_realization.len());
    Ok(EnsembleEstimate {
        gamma_e: acc.into_iter().map(|m| m.scale(inv)).collect(),
        n_realizations: per_realization.len(),
        max_lag: len - 1,
    })
}

impl<T: Scalar> EnsembleEstimate<Matrix<T>> {
    pub fn into_covariance_function(self) -> CovarianceMatrixFunction<T> {
        let k = self.gamma_e[0].rows();
        CovarianceMatrixFunction::new_unchecked(k, self.gamma_e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ar::LagVector;

    #[test]
    fn impulse_autocovariance() {
        let mut x = vec![0.0f64; 8];
        x[0] = 1.0;
        let g = sample_autocovariance(&x, 3).unwrap();
        assert_eq!(g, vec![0.125, 0.0, 0.0, 0.0]);
        assert!(sample_autocovariance(&x, 8).is_err());
    }

    #[test]
    fn zero_noise_gives_zero_series() {
        let m = RestrictedArModel::unrestricted(vec![0.5f64, 0.2], 0.0).unwrap();
        let r = synthesize_ar(&m, &SynthesisConfig::new(50, 3, 1)).unwrap();
        assert!(r.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn realizations_are_reproducible_and_distinct() {
        let m = RestrictedArModel::new(LagVector::new(vec![1, 3]).unwrap(), vec![0.4f64, 0.2], 1.0).unwrap();
        let cfg = SynthesisConfig {
            burn_in: Some(20),
            ..SynthesisConfig::new(100, 4, 11)
        };
        let a = synthesize_ar(&m, &cfg).unwrap();
        let b = synthesize_ar(&m, &cfg).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
        assert_eq!(a[2], ar_realization(&m, &cfg, 2));
        assert!(a.iter().all(|r| r.len() == 100));
    }

    #[test]
    fn scalar_var_matches_ar_bitwise() {
        let m = RestrictedArModel::new(LagVector::new(vec![1, 2, 5]).unwrap(), vec![0.6f64, 0.2, 0.05], 0.7).unwrap();
        let cfg = SynthesisConfig::new(500, 2, 99);
        let ar = synthesize_ar(&m, &cfg).unwrap();
        let var = synthesize_var(&RestrictedVarModel::from_ar(&m), &cfg).unwrap();
        for (x, y) in ar.iter().zip(&var) {
            let y: Vec<f64> = y.iter().map(|v| v[0]).collect();
            assert_eq!(x, &y);
        }
    }

    #[test]
    fn single_realization_ensemble() {
        let x = vec![1.0f64, -0.5, 0.25, 2.0];
        let e = ensemble_autocovariance(std::slice::from_ref(&x), 2).unwrap();
        assert_eq!(e.gamma_e, sample_autocovariance(&x, 2).unwrap());
        assert_eq!(e.n_realizations, 1);
    }
}
