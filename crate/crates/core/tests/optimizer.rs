mod common;

use common::turbulence_target;
use covarfit::ar::{fit_linear, mse, LagSelection};
use covarfit::optimizer::{
    baseline_krenk, baseline_yw, benchmark, is_feasible, optimize, optimize_observed, repair, GaConfig,
};
use proptest::prelude::*;

fn small(delta: usize, seed: u64) -> GaConfig {
    GaConfig {
        population_size: 60,
        generations: 40,
        delta,
        rng_seed: seed,
        ..GaConfig::default()
    }
}

fn scheme_mse(sel: &LagSelection) -> f64 {
    let t = turbulence_target(200);
    mse(&fit_linear(&t, sel).unwrap(), &t, 41).unwrap()
}

#[test]
fn single_term_with_wide_band_uses_lag_two() {
    let t = turbulence_target(200);
    let r = optimize(&t, 1, &small(10, 1)).unwrap();
    assert_eq!(r.selection.j().as_slice(), &[1]);
    assert_eq!(r.selection.l().as_slice(), &[2]);
}

#[test]
fn two_terms_prefer_lags_one_and_three() {
    let t = turbulence_target(200);
    let r = optimize(&t, 2, &small(0, 2)).unwrap();
    assert_eq!(r.selection.j().as_slice(), &[1, 3]);
    assert_eq!(r.selection.l().as_slice(), &[1, 3]);
}

#[test]
fn result_never_worse_than_baselines() {
    let t = turbulence_target(200);
    for n in 1..=5 {
        let r = optimize(&t, n, &small(0, 3)).unwrap();
        let floor = scheme_mse(&baseline_yw(n).unwrap()).min(scheme_mse(&baseline_krenk(n).unwrap()));
        assert!(r.mse <= floor, "N = {n}: {} > {floor}", r.mse);
        assert!(is_feasible(r.selection.j().as_slice(), r.selection.l().as_slice(), 0));
    }
}

#[test]
fn seeded_wider_band_dominates() {
    let t = turbulence_target(200);
    let narrow = optimize(&t, 3, &small(0, 4)).unwrap();
    let wide = optimize_observed(&t, 3, &small(10, 5), std::slice::from_ref(&narrow.selection), |_| {}).unwrap();
    assert!(wide.mse <= narrow.mse);
}

#[test]
fn runs_are_reproducible_and_logged() {
    let t = turbulence_target(200);
    let cfg = small(3, 42);
    let mut seen = 0;
    let a = optimize_observed(&t, 3, &cfg, &[], |c| {
        assert!(c.fitness.is_some());
        seen += 1;
    })
    .unwrap();
    let b = optimize(&t, 3, &cfg).unwrap();
    assert_eq!(a.selection, b.selection);
    assert_eq!(a.log, b.log);
    assert_eq!(seen, a.evaluations);
    assert_eq!(a.log.len(), cfg.generations);
    assert!(a.log.windows(2).all(|w| w[1].best_mse <= w[0].best_mse));
    assert_eq!(a.log.last().unwrap().best_mse, a.mse);
}

#[test]
fn invalid_configurations() {
    let t = turbulence_target(200);
    assert!(optimize(&t, 0, &GaConfig::default()).is_err());
    assert!(optimize(
        &t,
        3,
        &GaConfig {
            population_size: 0,
            ..GaConfig::default()
        }
    )
    .is_err());
    assert!(optimize(
        &t,
        3,
        &GaConfig {
            crossover_rate: 1.5,
            ..GaConfig::default()
        }
    )
    .is_err());
    assert!(optimize(
        &t,
        3,
        &GaConfig {
            elitism_count: 200,
            ..GaConfig::default()
        }
    )
    .is_err());
    assert!(optimize(&turbulence_target(50), 3, &GaConfig::default()).is_err());
}

#[test]
fn small_benchmark_table() {
    let t = turbulence_target(200);
    let cfg = GaConfig {
        population_size: 40,
        generations: 20,
        ..GaConfig::default()
    };
    let rows = benchmark(&t, 1..=4, &cfg, (0, 10), |_, _, _| {}).unwrap();
    assert_eq!(rows.len(), 16);
    for n in 1..=4 {
        let get = |a: &str| rows.iter().find(|r| r.n == n && r.approach == a).unwrap().mse;
        assert!(get("GA-0") <= get("Krenk"));
        assert!(get("GA-10") <= get("GA-0"));
    }
}

proptest! {
    #[test]
    fn repair_produces_feasible_schemes(
        raw in prop::collection::vec((0usize..100, 0usize..100), 1..8),
        delta in 0usize..12,
        max_lag in 8usize..70,
    ) {
        let (j, l): (Vec<usize>, Vec<usize>) = raw.into_iter().unzip();
        let (rj, rl) = repair(&j, &l, delta, max_lag);
        prop_assert!(is_feasible(&rj, &rl, delta));
        prop_assert!(*rj.last().unwrap() <= max_lag);
        let (again_j, again_l) = repair(&rj, &rl, delta, max_lag);
        prop_assert_eq!((again_j, again_l), (rj, rl));
    }
}
