use std::path::{Path, PathBuf};

use covarfit::ar::{
    ar_spectrum, fit_linear, fit_nonlinear, mse, spectrum_autocovariance, theoretical_autocovariance, AutocovMethod,
    LagSelection, LagVector,
};
use covarfit::io::{self, AnyModel, ModelFile};
use covarfit::optimizer::{benchmark, GaConfig, GenerationLog};
use covarfit::spectrum::{cosine_series, grid, WavenumberConvention};
use covarfit::synthesis::{
    ar_realization, ensemble_covariance_from_samples, ensemble_from_samples, sample_autocovariance, sample_covariance,
    var_realization, SynthesisConfig,
};
use covarfit::turbulence::{make_target, make_two_point_target, target_spectrum, von_karman_spectrum};
use covarfit::var::{covariance_via_companion, covariance_via_vma, default_vma_order, fit_var_linear};
use covarfit::{ArModel, CovarianceFunction, Target, TurbulenceModel, VarModel};
use log::{debug, info};
use serde::Serialize;

use crate::args::*;
use crate::output::{open, usage, with_extension, with_suffix, CliError, CliResult, Outputs, RunManifest};

/// Environment variable that replaces `--seed`.
pub const SEED_ENV: &str = "COVARFIT_SEED";

/// Runs one command; `replaying` keeps the recorded seed instead of consulting the environment.
pub fn run(mut command: Command, replaying: bool) -> CliResult<()> {
    if !replaying {
        apply_seed_override(&mut command)?;
    }
    let (inputs, primary, outputs, seed) = match &command {
        Command::Target(a) => (a.from_csv.iter().cloned().collect(), a.out.clone(), target(a)?, None),
        Command::Fit(a) => (vec![a.target.clone()], a.out.clone(), fit(a)?, None),
        Command::Autocov(a) => (vec![a.model.clone()], a.out.clone(), autocov(a)?, None),
        Command::Spectrum(a) => (
            a.model.iter().chain(&a.target).cloned().collect(),
            a.out.clone(),
            spectrum(a)?,
            None,
        ),
        Command::Benchmark(a) => (vec![a.target.clone()], a.out.clone(), bench(a)?, Some(a.seed)),
        Command::Synth(a) => (vec![a.model.clone()], ensemble_path(a), synth(a)?, Some(a.seed)),
        Command::Replay(a) => {
            let manifest = RunManifest::read(&a.manifest)?;
            info!("replaying `{}` recorded {}", manifest.command, manifest.timestamp);
            if matches!(manifest.parameters, Command::Replay(_)) {
                return usage("a manifest cannot record a replay");
            }
            return run(manifest.parameters, true);
        }
    };
    let manifest = RunManifest::new(command, inputs, outputs.files, seed);
    Outputs::default().write(&with_suffix(&primary, ".manifest.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, &manifest)?;
        Ok(())
    })
}

fn apply_seed_override(command: &mut Command) -> CliResult<()> {
    let Ok(raw) = std::env::var(SEED_ENV) else {
        return Ok(());
    };
    let seed: u64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{SEED_ENV}={raw:?} is not an unsigned integer")))?;
    match command {
        Command::Benchmark(a) => a.seed = seed,
        Command::Synth(a) => a.seed = seed,
        _ => {}
    }
    Ok(())
}

fn gamma(text: &str) -> CliResult<TurbulenceModel> {
    let g = gamma_value(text).map_err(CliError::Usage)?;
    Ok(TurbulenceModel::with_exponent(g)?)
}

fn read_target(path: &Path, dr: f64) -> CliResult<Target> {
    Ok(io::read_target_csv(open(path)?, dr)?)
}

fn read_model(path: &Path) -> CliResult<AnyModel> {
    Ok(io::read_model_json(open(path)?)?)
}

fn target(a: &TargetArgs) -> CliResult<Outputs> {
    let mut out = Outputs::default();
    if let Some(src) = &a.from_csv {
        let t = read_target(src, a.dr)?;
        out.write(&a.out, |w| io::write_target_csv(w, &t))?;
        return Ok(out);
    }
    let model = gamma(&a.gamma)?;
    match a.dy {
        Some(dy) => {
            let cov = make_two_point_target(&model, a.dr, dy, a.lags)?;
            out.write(&a.out, |w| io::write_covariance_csv(w, &cov))?;
        }
        None => {
            let t = make_target(&model, a.dr, a.lags)?;
            out.write(&a.out, |w| io::write_target_csv(w, &t))?;
        }
    }
    Ok(out)
}

fn fit(a: &FitArgs) -> CliResult<Outputs> {
    let j = LagVector::new(a.j.clone())?;
    let l = if a.l.is_empty() {
        j.clone()
    } else {
        LagVector::new(a.l.clone())?
    };
    let report = a.report.clone().unwrap_or_else(|| with_extension(&a.out, "report.csv"));
    let mut out = Outputs::default();
    if a.var {
        let target = io::read_covariance_csv(open(&a.target)?)?;
        if let Some(k) = a.k.filter(|&k| k != target.k()) {
            return usage(format!("--k {k} given but the target has dimension {}", target.k()));
        }
        let model = fit_var_linear(&target, &LagSelection::new(j, l)?)?;
        let m = a.m.min(target.max_lag());
        let cov = covariance_via_companion(&model, m)?;
        out.write(&a.out, |w| io::write_model_json(w, &ModelFile::from(&model)))?;
        out.write(&report, |w| {
            io::write_covariance_report_csv(w, &target.mats()[..=m], cov.mats())
        })?;
        return Ok(out);
    }
    let target = read_target(&a.target, a.dr)?;
    let model: ArModel = if a.nonlinear {
        fit_nonlinear(&target, &j, &a.match_lags)?
    } else {
        fit_linear(&target, &LagSelection::new(j, l)?)?
    };
    let m = a.m.min(target.max_lag());
    let g = theoretical_autocovariance(&model, m, AutocovMethod::DirectSolve)?;
    if m == a.m {
        info!("MSE over lags 0..={m}: {:e}", mse(&model, &target, m)?);
    }
    out.write(&a.out, |w| io::write_model_json(w, &ModelFile::from(&model)))?;
    out.write(&report, |w| io::write_fit_report_csv(w, &target.values()[..=m], &g))?;
    Ok(out)
}

fn var_covariance(
    model: &VarModel,
    method: AutocovMethodArg,
    q: Option<usize>,
    n: usize,
) -> CliResult<CovarianceFunction> {
    match method {
        AutocovMethodArg::Companion => Ok(covariance_via_companion(model, n)?),
        AutocovMethodArg::Vma => {
            let q = q.unwrap_or_else(|| default_vma_order(model));
            debug!("VMA truncation q = {q}");
            Ok(covariance_via_vma(model, q, n)?)
        }
        _ => usage("VAR models support --method companion or vma"),
    }
}

fn autocov(a: &AutocovArgs) -> CliResult<Outputs> {
    let mut out = Outputs::default();
    match read_model(&a.model)? {
        AnyModel::Ar(model) => {
            let g = match a.method.unwrap_or(AutocovMethodArg::Direct) {
                AutocovMethodArg::Direct => theoretical_autocovariance(&model, a.n, AutocovMethod::DirectSolve)?,
                AutocovMethodArg::Recursive => theoretical_autocovariance(&model, a.n, AutocovMethod::Recursive)?,
                method => var_covariance(&VarModel::from_ar(&model), method, a.q, a.n)?.component(0, 0),
            };
            out.write(&a.out, |w| io::write_series_csv(w, &g))?;
        }
        AnyModel::Var(model) => {
            let cov = var_covariance(&model, a.method.unwrap_or(AutocovMethodArg::Companion), a.q, a.n)?;
            out.write(&a.out, |w| io::write_covariance_csv(w, &cov))?;
        }
    }
    Ok(out)
}

fn spectrum(a: &SpectrumArgs) -> CliResult<Outputs> {
    if a.points < 2 {
        return usage("--points must be at least 2");
    }
    let convention = match a.convention {
        ConventionArg::Angular => WavenumberConvention::Angular,
        ConventionArg::Cyclic => WavenumberConvention::Cyclic,
    };
    let k_max = convention.k_max(a.dr);
    let ks = grid(k_max, a.points);
    let values: Vec<f64> = if a.von_karman {
        let model = gamma(&a.gamma)?;
        // the analytic spectrum is premultiplied, which is the same number in either convention
        let to_angular: f64 = convention.to_angular();
        ks.iter()
            .map(|&k| von_karman_spectrum(k * to_angular, &model))
            .collect::<covarfit::Result<_>>()?
    } else {
        let plain: Vec<f64> = if let Some(path) = &a.target {
            let t = read_target(path, a.dr)?;
            ks.iter()
                .map(|&k| Ok(target_spectrum(&t, k, k_max)? / a.variance))
                .collect::<covarfit::Result<_>>()?
        } else {
            let path = a.model.as_ref().expect("argument group requires a source");
            let AnyModel::Ar(model) = read_model(path)? else {
                return usage("spectra are computed for AR models only");
            };
            if a.variance.is_nan() || a.variance <= 0.0 {
                return usage("--variance must be positive");
            }
            match a.form {
                SpectrumForm::Coefficient => ks
                    .iter()
                    .map(|&k| ar_spectrum(&model, k, k_max, a.variance))
                    .collect::<covarfit::Result<_>>()?,
                SpectrumForm::Cosine => {
                    let g = spectrum_autocovariance(&model)?;
                    ks.iter()
                        .map(|&k| Ok(cosine_series(&g, k, k_max)? / a.variance))
                        .collect::<covarfit::Result<_>>()?
                }
            }
        };
        if a.premultiplied {
            plain.iter().zip(&ks).map(|(s, k)| s * k).collect()
        } else {
            plain
        }
    };
    let points: Vec<(f64, f64)> = ks.into_iter().zip(values).collect();
    let mut out = Outputs::default();
    out.write(&a.out, |w| io::write_spectrum_csv(w, &points))?;
    Ok(out)
}

#[derive(Serialize)]
struct LogLine<'a> {
    n: usize,
    approach: &'a str,
    #[serde(flatten)]
    entry: &'a GenerationLog,
}

fn bench(a: &BenchmarkArgs) -> CliResult<Outputs> {
    let target = read_target(&a.target, 0.1245)?;
    let config = GaConfig {
        population_size: a.population,
        generations: a.generations,
        crossover_rate: a.crossover,
        mutation_rate: a.mutation,
        elitism_count: a.elitism,
        tournament_size: a.tournament,
        rng_seed: a.seed,
        delta: 0,
        max_lag: a.max_lag,
        mse_max_lag_m: a.m,
    };
    config
        .validate(a.n_max.max(1))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut lines = Vec::new();
    let rows = benchmark(
        &target,
        a.n_min..=a.n_max,
        &config,
        (a.delta0, a.delta1),
        |n, label, entry| {
            if entry.gen + 1 == config.generations {
                info!(
                    "N = {n} {label}: MSE {:e} with j = {:?}, l = {:?}",
                    entry.best_mse, entry.best_j, entry.best_l
                );
            }
            lines.push(
                serde_json::to_string(&LogLine {
                    n,
                    approach: label,
                    entry,
                })
                .expect("plain data serializes"),
            );
        },
    )?;
    let log_path = a.log.clone().unwrap_or_else(|| with_extension(&a.out, "log.jsonl"));
    let mut out = Outputs::default();
    out.write(&a.out, |w| io::write_benchmark_csv(w, &rows))?;
    out.write(&log_path, |w| {
        use std::io::Write;
        for line in &lines {
            writeln!(w, "{line}")?;
        }
        Ok(())
    })?;
    Ok(out)
}

fn ensemble_path(a: &SynthArgs) -> PathBuf {
    a.ensemble.clone().unwrap_or_else(|| a.out_dir.join("ensemble.csv"))
}

fn synth(a: &SynthArgs) -> CliResult<Outputs> {
    if a.length == 0 || a.realizations == 0 {
        return usage("--length and --realizations must be positive");
    }
    if a.max_lag >= a.length {
        return usage(format!("--max-lag {} must be below --length {}", a.max_lag, a.length));
    }
    let config = SynthesisConfig {
        length: a.length,
        n_realizations: a.realizations,
        burn_in: match a.burn_in {
            BurnIn::Auto => None,
            BurnIn::Samples(n) => Some(n),
        },
        rng_seed: a.seed,
    };
    let ext = match a.format {
        OutputFormat::Csv => "csv",
        OutputFormat::Bin => "bin",
    };
    let width = a.realizations.saturating_sub(1).to_string().len().max(4);
    let mut out = Outputs::default();
    let write_series = |out: &mut Outputs, r: usize, samples: &[Vec<f64>]| -> CliResult<()> {
        if a.no_series {
            return Ok(());
        }
        let path = a.out_dir.join(format!("realization_{r:0width$}.{ext}"));
        out.write(&path, |w| match a.format {
            OutputFormat::Csv => io::write_realization_csv(w, samples),
            OutputFormat::Bin => io::write_realization_bin(w, samples),
        })
    };
    let report = ensemble_path(a);
    match read_model(&a.model)? {
        AnyModel::Ar(model) => {
            let mut per = Vec::with_capacity(a.realizations);
            for r in 0..a.realizations {
                let z = ar_realization(&model, &config, r);
                per.push(sample_autocovariance(&z, a.max_lag)?);
                let rows: Vec<Vec<f64>> = z.into_iter().map(|v| vec![v]).collect();
                write_series(&mut out, r, &rows)?;
            }
            let est = ensemble_from_samples(per)?;
            let theory = theoretical_autocovariance(&model, a.max_lag, AutocovMethod::DirectSolve)?;
            out.write(&report, |w| io::write_ensemble_csv(w, &est.gamma_e, &theory))?;
        }
        AnyModel::Var(model) => {
            let mut per = Vec::with_capacity(a.realizations);
            for r in 0..a.realizations {
                let z = var_realization(&model, &config, r);
                per.push(sample_covariance(&z, a.max_lag)?);
                write_series(&mut out, r, &z)?;
            }
            let est = ensemble_covariance_from_samples(per)?;
            let theory = covariance_via_companion(&model, a.max_lag)?;
            out.write(&report, |w| {
                io::write_ensemble_covariance_csv(w, &est.gamma_e, theory.mats())
            })?;
        }
    }
    Ok(out)
}
