use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::ar::{fit_linear, mse, LagSelection};
use crate::error::{Error, Result};
use crate::optimizer::ga::{optimize_observed, GaConfig, GenerationLog};
use crate::optimizer::{baseline_krenk, baseline_yw};
use crate::scalar::Scalar;
use crate::target::TargetAutocovariance;

/// One line of the benchmark table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub n: usize,
    pub approach: String,
    pub mse: f64,
    pub j: Vec<usize>,
    pub l: Vec<usize>,
}

impl BenchmarkRow {
    fn new(n: usize, approach: impl Into<String>, mse: f64, sel: &LagSelection) -> Self {
        Self {
            n,
            approach: approach.into(),
            mse,
            j: sel.j().as_slice().to_vec(),
            l: sel.l().as_slice().to_vec(),
        }
    }
}

/// Compares the Yule–Walker, Krenk and two GA searches (bands `delta0` and `delta1`) for every `N` in the range.
///
/// The wider search is seeded with the winner of the narrower one. `on_generation`
/// receives `(N, label, log entry)` for each GA generation.
pub fn benchmark<T: Scalar>(
    target: &TargetAutocovariance<T>,
    n_range: RangeInclusive<usize>,
    config: &GaConfig,
    deltas: (usize, usize),
    mut on_generation: impl FnMut(usize, &str, &GenerationLog),
) -> Result<Vec<BenchmarkRow>> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo == 0 || lo > hi {
        return Err(Error::InvalidInput(format!("invalid range {lo}..={hi}")));
    }
    // the Krenk scheme for the largest N reaches lag 2^{N−1}
    let krenk_reach = 1usize
        .checked_shl((hi - 1) as u32)
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::InvalidInput(format!("N = {hi} is too large")))?;
    target.require(krenk_reach.max(config.mse_max_lag_m) as isize)?;

    let m = config.mse_max_lag_m;
    let mut rows = Vec::new();
    for n in n_range {
        for (label, sel) in [("YW", baseline_yw(n)?), ("Krenk", baseline_krenk(n)?)] {
            let model = fit_linear(target, &sel)?;
            rows.push(BenchmarkRow::new(
                n,
                label,
                mse(&model, target, m)?.to_f64_lossy(),
                &sel,
            ));
        }
        let mut seeds = Vec::new();
        for delta in [deltas.0, deltas.1] {
            let label = format!("GA-{delta}");
            let cfg = GaConfig {
                delta,
                rng_seed: config.rng_seed.wrapping_add(((n as u64) << 32) | delta as u64),
                ..config.clone()
            };
            let result = optimize_observed(target, n, &cfg, &seeds, |_| {})?;
            for entry in &result.log {
                on_generation(n, &label, entry);
            }
            rows.push(BenchmarkRow::new(
                n,
                &label,
                result.mse.to_f64_lossy(),
                &result.selection,
            ));
            seeds.push(result.selection);
        }
    }
    Ok(rows)
}
