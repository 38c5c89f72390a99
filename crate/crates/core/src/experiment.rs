//! Batch experiment runner: JSON config in, deterministic CSV reports out.
//!
//! Runs `N_r` seeded runs per (algorithm, problem) pair with substreams
//! derived from `(master seed, pair index, run index)`, so output is
//! byte-identical across repeat invocations and across any parallelism
//! level (wall-clock columns excluded).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::algorithms::{run, Algorithm, RunSpec};
use crate::benchmarks::{problem_by_name, IslandFunctionParams, ProblemOptions};
use crate::error::{Error, Result};
use crate::measures::{
    evals_to_target, fixed_budget_stats, rank_algorithms, run_succeeded, SuccessCriterion,
    SuccessMode,
};
use crate::params::ParameterSet;
use crate::problem::{ConstraintPolicy, Problem};
use crate::record::RunRecord;
use crate::rng::RandomStream;
use crate::tuning::{ScheduleKind, ScheduleSpec, TunedParameter, TuningTask};

pub const DEFAULT_POPULATION: usize = 25;
pub const DEFAULT_BUDGET: u64 = 50_000;
pub const DEFAULT_RUNS: usize = 30;
pub const DEFAULT_DELTA: f64 = 1e-5;
pub const DEFAULT_SEED: u64 = 42;

/// One algorithm entry of the experiment: resolved name, validated
/// parameter overrides, and optional schedules.
#[derive(Debug, Clone)]
pub struct AlgorithmSetup {
    pub algorithm: Algorithm,
    pub params: ParameterSet,
    pub schedules: Vec<(String, ScheduleSpec)>,
}

/// A fully validated experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithms: Vec<AlgorithmSetup>,
    pub problems: Vec<Problem>,
    pub population: usize,
    pub budget: u64,
    pub runs: usize,
    pub seed: u64,
    pub delta: f64,
    pub out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawAlgorithm {
    Name(String),
    Full(RawAlgorithmFull),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgorithmFull {
    name: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default)]
    schedules: BTreeMap<String, RawSchedule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchedule {
    kind: String,
    start: f64,
    end: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    name: String,
    #[serde(default)]
    dimension: Option<usize>,
    /// Island grid half-extent override.
    #[serde(default)]
    n: Option<i64>,
    /// Island sharpness override.
    #[serde(default)]
    a: Option<f64>,
    #[serde(default)]
    policy: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    algorithms: Vec<RawAlgorithm>,
    problems: Vec<RawProblem>,
    #[serde(default)]
    population: Option<usize>,
    #[serde(default)]
    budget: Option<u64>,
    #[serde(default)]
    runs: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    delta: Option<f64>,
    #[serde(default)]
    out: Option<String>,
}

fn algorithm_setup(raw: RawAlgorithm) -> Result<AlgorithmSetup> {
    let (name, params_raw, schedules_raw) = match raw {
        RawAlgorithm::Name(name) => (name, BTreeMap::new(), BTreeMap::new()),
        RawAlgorithm::Full(full) => (full.name, full.params, full.schedules),
    };
    let algorithm = Algorithm::from_name(&name)?;
    let params: ParameterSet = params_raw.into_iter().collect();
    algorithm.descriptor().validate(&params)?;
    let mut schedules = Vec::new();
    for (param, sched) in schedules_raw {
        if algorithm.descriptor().parameter(&param).is_none() {
            return Err(Error::UnknownParameter {
                name: param,
                algorithm: name.clone(),
            });
        }
        schedules.push((
            param,
            ScheduleSpec {
                kind: ScheduleKind::from_name(&sched.kind)?,
                start: sched.start,
                end: sched.end,
            },
        ));
    }
    Ok(AlgorithmSetup {
        algorithm,
        params,
        schedules,
    })
}

fn problem_setup(raw: &RawProblem) -> Result<Problem> {
    let mut options = ProblemOptions::default();
    if let Some(d) = raw.dimension {
        options.dimension = d;
    }
    if raw.name == "island" {
        let n = raw.n.unwrap_or(options.island.n);
        let a = raw.a.unwrap_or(options.island.a);
        options.island = IslandFunctionParams::new(n, a)?;
    } else if raw.n.is_some() || raw.a.is_some() {
        return Err(Error::Config(format!(
            "island parameters n/a are only valid for the island problem, not '{}'",
            raw.name
        )));
    }
    if let Some(policy) = &raw.policy {
        options.policy = ConstraintPolicy::from_name(policy)?;
    }
    problem_by_name(&raw.name, &options)
}

/// Parse and validate a UTF-8 JSON experiment config, filling defaults
/// (population 25, budget 50000, runs 30, delta 1e-5, seed 42).
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    if raw.algorithms.is_empty() {
        return Err(Error::Config("config lists no algorithms".into()));
    }
    if raw.problems.is_empty() {
        return Err(Error::Config("config lists no problems".into()));
    }
    let algorithms: Result<Vec<AlgorithmSetup>> =
        raw.algorithms.into_iter().map(algorithm_setup).collect();
    let problems: Result<Vec<Problem>> = raw.problems.iter().map(problem_setup).collect();
    let config = ExperimentConfig {
        algorithms: algorithms?,
        problems: problems?,
        population: raw.population.unwrap_or(DEFAULT_POPULATION),
        budget: raw.budget.unwrap_or(DEFAULT_BUDGET),
        runs: raw.runs.unwrap_or(DEFAULT_RUNS),
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
        delta: raw.delta.unwrap_or(DEFAULT_DELTA),
        out: raw.out.map(PathBuf::from),
    };
    if config.runs < 1 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    if config.budget < config.population as u64 {
        return Err(Error::Config(format!(
            "budget {} cannot cover the initial population of {}",
            config.budget, config.population
        )));
    }
    for setup in &config.algorithms {
        if config.population < setup.algorithm.min_population() {
            return Err(Error::Config(format!(
                "population {} is below the minimum {} for '{}'",
                config.population,
                setup.algorithm.min_population(),
                setup.algorithm.name()
            )));
        }
    }
    Ok(config)
}

/// Everything an experiment produced: the raw records in deterministic
/// order plus both rendered CSV documents.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub records: Vec<RunRecord>,
    pub runs_csv: String,
    pub report_csv: String,
}

pub const RUNS_CSV_HEADER: &str =
    "run_id,algorithm,problem,dimension,seed,evals_used,best_f,success_obj,success_pos,wall_ms";
pub const REPORT_CSV_HEADER: &str = "algorithm,problem,runs,best,worst,mean,std,median,\
success_rate_obj,success_rate_pos,mean_evals_to_target,mean_rank";

/// Execute all `algorithms x problems x runs` jobs. `parallel` > 1 runs
/// jobs on that many threads; results are identical to sequential
/// execution because every run owns a pre-derived substream and rows are
/// ordered by (algorithm, problem, run index).
pub fn run_experiment(config: &ExperimentConfig, parallel: usize) -> Result<ExperimentOutput> {
    struct Job<'c> {
        setup: &'c AlgorithmSetup,
        problem: &'c Problem,
        pair_index: u64,
        run_index: u64,
    }

    let mut jobs = Vec::new();
    let mut pair_index = 0u64;
    for setup in &config.algorithms {
        for problem in &config.problems {
            for run_index in 0..config.runs as u64 {
                jobs.push(Job {
                    setup,
                    problem,
                    pair_index,
                    run_index,
                });
            }
            pair_index += 1;
        }
    }

    let execute = |job: &Job| -> Result<RunRecord> {
        let stream_id = RandomStream::compose_id(&[job.pair_index, job.run_index]);
        let mut stream = RandomStream::new(config.seed, stream_id);
        let spec = RunSpec {
            algorithm: job.setup.algorithm,
            params: job.setup.params.clone(),
            schedules: job.setup.schedules.clone(),
            population_size: config.population,
            budget: config.budget,
        };
        run(&spec, job.problem, &mut stream)
    };

    let records: Result<Vec<RunRecord>> = if parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallel)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| jobs.par_iter().map(execute).collect())
    } else {
        jobs.iter().map(execute).collect()
    };
    let records = records?;

    let runs_csv = render_runs_csv(config, &records)?;
    let report_csv = render_report_csv(config, &records)?;
    Ok(ExperimentOutput {
        records,
        runs_csv,
        report_csv,
    })
}

fn render_runs_csv(config: &ExperimentConfig, records: &[RunRecord]) -> Result<String> {
    let obj = SuccessCriterion::new(SuccessMode::Objective, config.delta)?;
    let pos = SuccessCriterion::new(SuccessMode::Position, config.delta)?;
    let mut out = String::from(RUNS_CSV_HEADER);
    out.push('\n');
    let mut idx = 0usize;
    for setup in &config.algorithms {
        for problem in &config.problems {
            for run_index in 0..config.runs {
                let record = &records[idx];
                idx += 1;
                let (s_obj, s_pos) = if problem.known_optimum().is_some() {
                    (
                        run_succeeded(record, &obj, problem)? as u8,
                        run_succeeded(record, &pos, problem)? as u8,
                    )
                } else {
                    (0, 0)
                };
                writeln!(
                    out,
                    "{run_index},{},{},{},{},{},{},{s_obj},{s_pos},{:.3}",
                    setup.algorithm.name(),
                    problem.name(),
                    record.dimension,
                    record.stream_id,
                    record.evals_used,
                    record.best_fitness,
                    record.wall_ms,
                )
                .expect("string write");
            }
        }
    }
    Ok(out)
}

fn render_report_csv(config: &ExperimentConfig, records: &[RunRecord]) -> Result<String> {
    let obj = SuccessCriterion::new(SuccessMode::Objective, config.delta)?;
    let pos = SuccessCriterion::new(SuccessMode::Position, config.delta)?;

    // Mean final fitness per (algorithm, problem) feeds the ranking.
    let mut cells = BTreeMap::new();
    let mut idx = 0usize;
    let mut groups = Vec::new();
    for setup in &config.algorithms {
        for problem in &config.problems {
            let slice = &records[idx..idx + config.runs];
            idx += config.runs;
            let stats = fixed_budget_stats(slice)?;
            cells.insert(
                (setup.algorithm.name().to_string(), problem.name().to_string()),
                stats.mean,
            );
            groups.push((setup, problem, slice, stats));
        }
    }
    let ranking = if config.algorithms.len() >= 2 {
        Some(rank_algorithms(&cells)?)
    } else {
        None
    };

    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for (setup, problem, slice, stats) in groups {
        let name = setup.algorithm.name();
        let (rate_obj, rate_pos, target) = match problem.known_optimum() {
            Some((_, f_min)) => (
                crate::measures::success_rate(slice, &obj, problem)?.to_string(),
                crate::measures::success_rate(slice, &pos, problem)?.to_string(),
                Some(f_min + config.delta),
            ),
            None => (String::new(), String::new(), None),
        };
        let mean_evals = target
            .map(|t| {
                let reached: Vec<u64> =
                    slice.iter().filter_map(|r| evals_to_target(r, t)).collect();
                if reached.is_empty() {
                    String::new()
                } else {
                    (reached.iter().sum::<u64>() as f64 / reached.len() as f64).to_string()
                }
            })
            .unwrap_or_default();
        let mean_rank = ranking
            .as_ref()
            .and_then(|r| r.mean_rank(name))
            .map(|r| r.to_string())
            .unwrap_or_else(|| "1".to_string());
        writeln!(
            out,
            "{name},{},{},{},{},{},{},{},{rate_obj},{rate_pos},{mean_evals},{mean_rank}",
            problem.name(),
            slice.len(),
            stats.best,
            stats.worst,
            stats.mean,
            stats.sample_std,
            stats.median,
        )
        .expect("string write");
    }
    Ok(out)
}

/// Write both CSV files under `dir` (created if needed). Returns the two
/// paths (runs, report).
pub fn write_outputs(output: &ExperimentOutput, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let runs_path = dir.join("runs.csv");
    let report_path = dir.join("report.csv");
    std::fs::write(&runs_path, &output.runs_csv)?;
    std::fs::write(&report_path, &output.report_csv)?;
    Ok((runs_path, report_path))
}

/// Tuning-run configuration (the `tune` subcommand).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTuneConfig {
    algorithm: String,
    /// Parameter name -> [lo, hi].
    tune: BTreeMap<String, (f64, f64)>,
    problems: Vec<RawProblem>,
    #[serde(default)]
    inner_budget: Option<u64>,
    #[serde(default)]
    population: Option<usize>,
    #[serde(default)]
    repetitions: Option<usize>,
    #[serde(default)]
    meta_budget: Option<u64>,
    #[serde(default)]
    w: Option<f64>,
    #[serde(default)]
    delta: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    out: Option<String>,
}

/// A parsed tuning config: the task plus the output directory and the
/// meta-level seed.
#[derive(Debug, Clone)]
pub struct TuneConfig {
    pub task: TuningTask,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

pub fn parse_tune_config(text: &str) -> Result<TuneConfig> {
    let raw: RawTuneConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    let algorithm = Algorithm::from_name(&raw.algorithm)?;
    let tuned: Vec<TunedParameter> = raw
        .tune
        .into_iter()
        .map(|(name, (lo, hi))| TunedParameter { name, lo, hi })
        .collect();
    let problems: Result<Vec<Problem>> = raw.problems.iter().map(problem_setup).collect();
    let seed = raw.seed.unwrap_or(DEFAULT_SEED);
    let task = TuningTask {
        algorithm,
        tuned,
        problems: problems?,
        inner_budget: raw.inner_budget.unwrap_or(5_000),
        inner_population: raw.population.unwrap_or(DEFAULT_POPULATION),
        repetitions: raw.repetitions.unwrap_or(3),
        meta_budget: raw.meta_budget.unwrap_or(50),
        weight: raw.w.unwrap_or(0.5),
        target_delta: raw.delta.unwrap_or(DEFAULT_DELTA),
        crn_seed: seed.wrapping_add(1),
    };
    task.validate()?;
    Ok(TuneConfig {
        task,
        seed,
        out: raw.out.map(PathBuf::from),
    })
}

/// Render the tuning-trial CSV: `trial,<param names...>,meta_objective`.
pub fn render_tuning_csv(names: &[String], trials: &[crate::tuning::TrialRecord]) -> String {
    let mut out = String::from("trial");
    for name in names {
        out.push(',');
        out.push_str(name);
    }
    out.push_str(",meta_objective\n");
    for trial in trials {
        let mut row = trial.index.to_string();
        for v in &trial.values {
            row.push(',');
            let _ = write!(row, "{v}");
        }
        let _ = write!(row, ",{}", trial.objective);
        out.push_str(&row);
        out.push('\n');
    }
    out
}
