//! Wavenumber axis and the cosine-series form of a one-sided spectrum.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Autocovariance values below this magnitude are dropped from cosine series.
pub const SERIES_CUTOFF: f64 = 1e-12;

/// How the Nyquist wavenumber relates to the sampling step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WavenumberConvention {
    /// `k_max = π/Δr`, the convention of the von Kármán spectrum.
    #[default]
    Angular,
    /// `k_max = 1/(2Δr)`.
    Cyclic,
}

impl WavenumberConvention {
    pub fn k_max<T: Scalar>(self, delta_r: T) -> T {
        match self {
            WavenumberConvention::Angular => T::lit(PI) / delta_r,
            WavenumberConvention::Cyclic => T::one() / (T::lit(2.0) * delta_r),
        }
    }

    /// Factor converting a wavenumber in this convention to an angular one.
    pub fn to_angular<T: Scalar>(self) -> T {
        match self {
            WavenumberConvention::Angular => T::one(),
            WavenumberConvention::Cyclic => T::lit(2.0 * PI),
        }
    }
}

pub(crate) fn check_wavenumber<T: Scalar>(k: T, k_max: T) -> Result<()> {
    if !(k_max > T::zero()) {
        return Err(Error::Domain(format!("k_max must be positive, got {k_max}")));
    }
    if !(k >= T::zero() && k <= k_max) {
        return Err(Error::Domain(format!("wavenumber {k} outside [0, {k_max}]")));
    }
    Ok(())
}

/// Number of leading values kept by the cosine series.
pub(crate) fn significant_len<T: Scalar>(gammas: &[T]) -> usize {
    let cut = T::lit(SERIES_CUTOFF);
    gammas.iter().rposition(|g| g.abs() >= cut).map_or(1, |i| i + 1).max(1)
}

/// `(1/k_max)·[γ_0 + 2 Σ_{l≥1} γ_l cos(π l k / k_max)]`.
pub fn cosine_series<T: Scalar>(gammas: &[T], k: T, k_max: T) -> Result<T> {
    check_wavenumber(k, k_max)?;
    let n = significant_len(gammas).min(gammas.len());
    let w = T::lit(PI) * k / k_max;
    let mut s = T::zero();
    for l in (1..n).rev() {
        s += gammas[l] * (w * T::from_usize_lossy(l)).cos();
    }
    Ok((gammas[0] + T::lit(2.0) * s) / k_max)
}

/// `points` equally spaced wavenumbers covering `[0, k_max]` inclusive.
pub fn grid<T: Scalar>(k_max: T, points: usize) -> Vec<T> {
    match points {
        0 => Vec::new(),
        1 => vec![T::zero()],
        _ => {
            let step = k_max / T::from_usize_lossy(points - 1);
            (0..points)
                .map(|i| {
                    if i + 1 == points {
                        k_max
                    } else {
                        step * T::from_usize_lossy(i)
                    }
                })
                .collect()
        }
    }
}

/// Location of the maximum of `f` on `[lo, hi]`: dense scan then golden-section refinement.
pub fn argmax<T: Scalar>(f: impl Fn(T) -> T, lo: T, hi: T, points: usize) -> T {
    let pts = grid(hi - lo, points.max(3))
        .into_iter()
        .map(|d| lo + d)
        .collect::<Vec<_>>();
    let (imax, _) =
        pts.iter().map(|&k| f(k)).enumerate().fold(
            (0, T::neg_infinity()),
            |best, (i, v)| if v > best.1 { (i, v) } else { best },
        );
    let mut a = pts[imax.saturating_sub(1)];
    let mut b = pts[(imax + 1).min(pts.len() - 1)];
    let phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= T::epsilon() * (T::one() + a.abs() + b.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / T::lit(2.0)
}
