use std::collections::HashMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ar::{fit_linear, mse, LagSelection, RestrictedArModel};
use crate::error::{Error, Result};
use crate::optimizer::chromosome::{is_feasible, repair, Chromosome};
use crate::optimizer::{baseline_krenk, baseline_yw};
use crate::scalar::Scalar;
use crate::target::TargetAutocovariance;

/// Genetic algorithm settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    /// Probability that a pair of parents is recombined.
    pub crossover_rate: f64,
    /// Per-gene probability of a jitter of ±1..3.
    pub mutation_rate: f64,
    pub elitism_count: usize,
    pub tournament_size: usize,
    pub rng_seed: u64,
    /// Half-width of the band `j_i − Δ ≤ l_i ≤ j_i + Δ`.
    pub delta: usize,
    /// Upper bound for `j_N` of generated schemes.
    pub max_lag: usize,
    /// Largest lag `M` in the MSE.
    pub mse_max_lag_m: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 200,
            generations: 300,
            crossover_rate: 0.8,
            mutation_rate: 0.1,
            elitism_count: 2,
            tournament_size: 3,
            rng_seed: 0,
            delta: 0,
            max_lag: 64,
            mse_max_lag_m: 41,
        }
    }
}

impl GaConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.population_size == 0 || self.generations == 0 {
            return bad("population size and generations must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("crossover and mutation rates must lie in [0, 1]".into());
        }
        if self.elitism_count >= self.population_size {
            return bad(format!(
                "elitism {} must be below the population size {}",
                self.elitism_count, self.population_size
            ));
        }
        if self.tournament_size == 0 {
            return bad("tournament size must be positive".into());
        }
        if n == 0 || self.max_lag < n {
            return bad(format!("max_lag {} cannot hold N = {n} lags", self.max_lag));
        }
        if self.mse_max_lag_m == 0 {
            return bad("M must be positive".into());
        }
        Ok(())
    }
}

/// Best scheme after one generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationLog {
    pub gen: usize,
    pub best_mse: f64,
    pub best_j: Vec<usize>,
    pub best_l: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct OptimizationResult<T> {
    pub selection: LagSelection,
    pub model: RestrictedArModel<T>,
    pub mse: T,
    pub log: Vec<GenerationLog>,
    /// Number of distinct schemes fitted.
    pub evaluations: usize,
}

/// Runs the search seeded with the Yule–Walker and Krenk schemes.
pub fn optimize<T: Scalar>(
    target: &TargetAutocovariance<T>,
    n: usize,
    config: &GaConfig,
) -> Result<OptimizationResult<T>> {
    optimize_observed(target, n, config, &[], |_| {})
}

/// Like [`optimize`], with additional initial schemes and a callback run on every
/// evaluated chromosome.
///
/// Seeds are used as given, even beyond `max_lag`; seeds violating the Δ-band or
/// of the wrong length are skipped. Offspring are always repaired into the
/// feasible region with `j_N ≤ max_lag`.
pub fn optimize_observed<T: Scalar>(
    target: &TargetAutocovariance<T>,
    n: usize,
    config: &GaConfig,
    extra_seeds: &[LagSelection],
    mut observer: impl FnMut(&Chromosome),
) -> Result<OptimizationResult<T>> {
    config.validate(n)?;
    let needed = (config.max_lag + config.delta).max(config.mse_max_lag_m);
    target.require(needed as isize)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut population: Vec<Chromosome> = Vec::with_capacity(config.population_size);
    let seeds = [baseline_yw(n)?, baseline_krenk(n)?];
    for sel in seeds.iter().chain(extra_seeds) {
        let c = Chromosome::from_selection(sel);
        let fits = c.j.len() == n && is_feasible(&c.j, &c.l, config.delta);
        if fits
            && sel.max_target_lag() <= target.max_lag()
            && !population.contains(&c)
            && population.len() < config.population_size
        {
            population.push(c);
        }
    }
    while population.len() < config.population_size {
        population.push(random_chromosome(&mut rng, n, config));
    }

    let mut cache: HashMap<(Vec<usize>, Vec<usize>), f64> = HashMap::new();
    let mut log = Vec::with_capacity(config.generations);
    let mut best: Option<Chromosome> = None;

    for gen in 0..config.generations {
        evaluate(target, config.mse_max_lag_m, &mut population, &mut cache, &mut observer);
        population.sort_by(|a, b| {
            let (fa, fb) = (a.fitness.unwrap_or(f64::INFINITY), b.fitness.unwrap_or(f64::INFINITY));
            fa.total_cmp(&fb).then_with(|| a.key().cmp(&b.key()))
        });
        let leader = &population[0];
        let improves = match &best {
            None => true,
            Some(b) => leader.fitness.unwrap_or(f64::INFINITY) < b.fitness.unwrap_or(f64::INFINITY),
        };
        if improves {
            best = Some(leader.clone());
        }
        let b = best.as_ref().expect("set above");
        log.push(GenerationLog {
            gen,
            best_mse: b.fitness.unwrap_or(f64::INFINITY),
            best_j: b.j.clone(),
            best_l: b.l.clone(),
        });
        if gen + 1 < config.generations {
            population = breed(&mut rng, &population, n, config);
        }
    }

    let best = best.expect("at least one generation");
    if !best.fitness.is_some_and(f64::is_finite) {
        return Err(Error::OptimizationFailed(
            "no scheme produced a valid stationary model".into(),
        ));
    }
    let selection = best.selection()?;
    let model = fit_linear(target, &selection)?;
    let mse = mse(&model, target, config.mse_max_lag_m)?;
    Ok(OptimizationResult {
        selection,
        model,
        mse,
        log,
        evaluations: cache.len(),
    })
}

fn random_chromosome(rng: &mut ChaCha8Rng, n: usize, config: &GaConfig) -> Chromosome {
    let mut j: Vec<usize> = sample(rng, config.max_lag, n).into_iter().map(|x| x + 1).collect();
    j.sort_unstable();
    let d = config.delta;
    let l: Vec<usize> = j
        .iter()
        .map(|&ji| (ji + rng.random_range(0..=2 * d)).saturating_sub(d).max(1))
        .collect();
    let (j, l) = repair(&j, &l, config.delta, config.max_lag);
    Chromosome::new(j, l)
}

/// MSE of the fitted scheme, or +∞ when the fit fails.
fn fitness<T: Scalar>(target: &TargetAutocovariance<T>, m: usize, j: &[usize], l: &[usize]) -> f64 {
    LagSelection::from_vecs(j.to_vec(), l.to_vec())
        .and_then(|sel| fit_linear(target, &sel))
        .and_then(|model| mse(&model, target, m))
        .map(|v| v.to_f64_lossy())
        .ok()
        .filter(|v| v.is_finite())
        .unwrap_or(f64::INFINITY)
}

fn evaluate<T: Scalar>(
    target: &TargetAutocovariance<T>,
    m: usize,
    population: &mut [Chromosome],
    cache: &mut HashMap<(Vec<usize>, Vec<usize>), f64>,
    observer: &mut impl FnMut(&Chromosome),
) {
    let mut pending: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for c in population.iter() {
        let key = c.key();
        if !cache.contains_key(&key) && !pending.contains(&key) {
            pending.push(key);
        }
    }
    let scores: Vec<f64> = pending.par_iter().map(|(j, l)| fitness(target, m, j, l)).collect();
    for ((j, l), score) in pending.into_iter().zip(scores) {
        observer(&Chromosome {
            j: j.clone(),
            l: l.clone(),
            fitness: Some(score),
        });
        cache.insert((j, l), score);
    }
    for c in population.iter_mut() {
        c.fitness = cache.get(&c.key()).copied();
    }
}

/// Next generation from a population sorted best first.
fn breed(rng: &mut ChaCha8Rng, sorted: &[Chromosome], n: usize, config: &GaConfig) -> Vec<Chromosome> {
    let size = config.population_size;
    let mut next: Vec<Chromosome> = sorted.iter().take(config.elitism_count).cloned().collect();
    let tournament = |rng: &mut ChaCha8Rng| {
        let winner = (0..config.tournament_size)
            .map(|_| rng.random_range(0..sorted.len()))
            .min()
            .expect("size ≥ 1");
        &sorted[winner]
    };
    while next.len() < size {
        let (p1, p2) = (tournament(rng), tournament(rng));
        let (mut c1, mut c2) = (p1.clone(), p2.clone());
        if rng.random::<f64>() < config.crossover_rate {
            for i in 0..n {
                if rng.random::<bool>() {
                    std::mem::swap(&mut c1.j[i], &mut c2.j[i]);
                    std::mem::swap(&mut c1.l[i], &mut c2.l[i]);
                }
            }
        }
        for c in [&mut c1, &mut c2] {
            mutate(rng, &mut c.j, config.mutation_rate);
            mutate(rng, &mut c.l, config.mutation_rate);
            let (j, l) = repair(&c.j, &c.l, config.delta, config.max_lag);
            c.j = j;
            c.l = l;
            c.fitness = None;
        }
        next.push(c1);
        if next.len() < size {
            next.push(c2);
        }
    }
    next
}

fn mutate(rng: &mut ChaCha8Rng, genes: &mut [usize], rate: f64) {
    for g in genes.iter_mut() {
        if rng.random::<f64>() < rate {
            let step = rng.random_range(1..=3usize);
            *g = if rng.random::<bool>() {
                *g + step
            } else {
                g.saturating_sub(step)
            };
        }
    }
}
