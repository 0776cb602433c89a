//! Genetic search over lag schemes `(j, l)` minimizing the autocovariance MSE,
//! plus the Yule–Walker and Krenk reference schemes.

mod benchmark;
mod chromosome;
mod ga;

pub use benchmark::{benchmark, BenchmarkRow};
pub use chromosome::{is_feasible, repair, Chromosome};
pub use ga::{optimize, optimize_observed, GaConfig, GenerationLog, OptimizationResult};

use crate::ar::{LagSelection, LagVector};
use crate::error::Result;

/// Yule–Walker scheme `j = l = [1, 2, ..., N]`.
pub fn baseline_yw(n: usize) -> Result<LagSelection> {
    Ok(LagSelection::matched(LagVector::consecutive(n)?))
}

/// Krenk scheme `j = l = [1, 2, 4, ..., 2^{N−1}]`.
pub fn baseline_krenk(n: usize) -> Result<LagSelection> {
    let lags = (0..n).map(|i| 1usize << i).collect();
    Ok(LagSelection::matched(LagVector::new(lags)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baselines() {
        assert_eq!(baseline_yw(3).unwrap().j().as_slice(), &[1, 2, 3]);
        assert_eq!(baseline_yw(1).unwrap().l().as_slice(), &[1]);
        assert_eq!(baseline_krenk(3).unwrap().j().as_slice(), &[1, 2, 4]);
        assert_eq!(baseline_krenk(5).unwrap().l().as_slice(), &[1, 2, 4, 8, 16]);
        assert!(baseline_yw(0).is_err());
    }
}
