//! Parameter tuning: deterministic schedules and a self-tuning meta-loop
//! in which an algorithm searches its own parameter space.

use std::sync::Mutex;

use crate::algorithms::{run, Algorithm, RunSpec};
use crate::error::{contract_error, Error, Result};
use crate::measures::evals_to_target;
use crate::params::ParameterSet;
use crate::position::PositionVector;
use crate::problem::Problem;
use crate::rng::RandomStream;

/// Shape of a parameter schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Constant,
    Linear,
    Geometric,
}

impl ScheduleKind {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "constant" => Ok(ScheduleKind::Constant),
            "linear" => Ok(ScheduleKind::Linear),
            "geometric" => Ok(ScheduleKind::Geometric),
            other => Err(Error::Config(format!(
                "unknown schedule kind '{other}' (expected constant, linear, or geometric)"
            ))),
        }
    }
}

/// A parameter trajectory from `start` at `t = 0` to `end` at `t = t_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleSpec {
    pub kind: ScheduleKind,
    pub start: f64,
    pub end: f64,
}

/// Evaluate a schedule at iteration `t` of `t_max`.
///
/// Geometric schedules require same-sign nonzero endpoints.
pub fn parameter_schedule(spec: &ScheduleSpec, t: u64, t_max: u64) -> Result<f64> {
    if t > t_max {
        return Err(contract_error(format!("schedule time {t} exceeds horizon {t_max}")));
    }
    let fraction = if t_max == 0 { 0.0 } else { t as f64 / t_max as f64 };
    match spec.kind {
        ScheduleKind::Constant => Ok(spec.start),
        ScheduleKind::Linear => Ok(spec.start + (spec.end - spec.start) * fraction),
        ScheduleKind::Geometric => {
            if spec.start == 0.0 || spec.end == 0.0 || (spec.start < 0.0) != (spec.end < 0.0) {
                return Err(contract_error(
                    "geometric schedule requires same-sign nonzero endpoints",
                ));
            }
            Ok(spec.start * (spec.end / spec.start).powf(fraction))
        }
    }
}

/// One tunable parameter and its search interval.
#[derive(Debug, Clone)]
pub struct TunedParameter {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

/// A complete tuning task: which algorithm, which of its parameters over
/// which boxes, the inner-run protocol, and the meta budget.
#[derive(Debug, Clone)]
pub struct TuningTask {
    pub algorithm: Algorithm,
    pub tuned: Vec<TunedParameter>,
    pub problems: Vec<Problem>,
    /// Objective evaluations per inner run.
    pub inner_budget: u64,
    pub inner_population: usize,
    /// Inner runs per (parameter set, problem) pair.
    pub repetitions: usize,
    /// Parameter-set trials the meta-search may spend.
    pub meta_budget: u64,
    /// Scalarization weight: 1 = pure solution quality, 0 = pure cost.
    pub weight: f64,
    /// Tolerance defining the evals-to-target cost objective.
    pub target_delta: f64,
    /// Seed of the shared inner-run streams (common random numbers:
    /// every parameter trial replays the same seed list).
    pub crn_seed: u64,
}

impl TuningTask {
    pub fn validate(&self) -> Result<()> {
        if self.tuned.is_empty() {
            return Err(contract_error("tuning task declares no parameters to tune"));
        }
        if self.problems.is_empty() {
            return Err(contract_error("tuning task declares no problems"));
        }
        if self.meta_budget < 1 || self.repetitions < 1 {
            return Err(contract_error("meta budget and repetitions must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.weight) {
            return Err(contract_error(format!("weight must lie in [0, 1], got {}", self.weight)));
        }
        if !(self.target_delta > 0.0) {
            return Err(contract_error("target delta must be positive"));
        }
        let descriptor = self.algorithm.descriptor();
        for p in &self.tuned {
            let spec = descriptor
                .parameter(&p.name)
                .ok_or_else(|| Error::UnknownParameter {
                    name: p.name.clone(),
                    algorithm: descriptor.name.to_string(),
                })?;
            if !(p.lo < p.hi) {
                return Err(contract_error(format!(
                    "tuning bounds for '{}' must satisfy lo < hi",
                    p.name
                )));
            }
            spec.check(p.lo)?;
            spec.check(p.hi)?;
        }
        let min_pop = self.algorithm.min_population().max(1);
        if self.inner_population < min_pop {
            return Err(contract_error(format!(
                "inner population {} below the algorithm minimum {min_pop}",
                self.inner_population
            )));
        }
        if self.inner_budget < self.inner_population as u64 {
            return Err(contract_error("inner budget cannot cover initialization"));
        }
        Ok(())
    }

    fn params_from_values(&self, values: &[f64]) -> ParameterSet {
        self.tuned
            .iter()
            .zip(values.iter())
            .map(|(p, v)| (p.name.clone(), *v))
            .collect()
    }
}

/// Scalarized bi-objective quality/cost score of one parameter set; lower
/// is better.
///
/// Runs the algorithm `repetitions` times per problem under common random
/// numbers. Quality is the final best fitness normalized by the
/// initialization-population mean fitness; cost is evaluations-to-target
/// normalized by the inner budget, counting runs that never reach the
/// target as 1.
pub fn meta_objective(params: &ParameterSet, task: &TuningTask) -> Result<f64> {
    task.validate()?;
    let mut quality_sum = 0.0;
    let mut cost_sum = 0.0;
    let mut runs = 0usize;
    for (pi, problem) in task.problems.iter().enumerate() {
        let target = problem
            .known_optimum()
            .map(|(_, f_min)| f_min + task.target_delta);
        for rep in 0..task.repetitions {
            let mut stream = RandomStream::new(
                task.crn_seed,
                RandomStream::compose_id(&[pi as u64, rep as u64]),
            );
            let spec = RunSpec {
                algorithm: task.algorithm,
                params: params.clone(),
                schedules: Vec::new(),
                population_size: task.inner_population,
                budget: task.inner_budget,
            };
            let record = run(&spec, problem, &mut stream)?;
            let denom = record.init_mean_fitness;
            quality_sum += if denom.abs() > 1e-300 {
                record.best_fitness / denom
            } else {
                record.best_fitness
            };
            cost_sum += match target.and_then(|t| evals_to_target(&record, t)) {
                Some(evals) => evals as f64 / task.inner_budget as f64,
                None => 1.0,
            };
            runs += 1;
        }
    }
    let quality = quality_sum / runs as f64;
    let cost = cost_sum / runs as f64;
    Ok(task.weight * quality + (1.0 - task.weight) * cost)
}

/// One evaluated parameter set of the meta-search.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub index: usize,
    pub values: Vec<f64>,
    pub objective: f64,
}

/// Outcome of a tuning run: the best parameter set found, its
/// meta-objective, and the full trial trace in evaluation order.
#[derive(Debug, Clone)]
pub struct TuningResult {
    pub best: ParameterSet,
    pub best_objective: f64,
    pub trials: Vec<TrialRecord>,
    /// True when the meta budget was too small for a population and the
    /// search degenerated to uniform random sampling.
    pub degenerate_sampling: bool,
}

/// Default population of the meta-optimizer.
const META_POPULATION: usize = 25;

/// Minimize an arbitrary scalar objective over a parameter box using an
/// algorithm with its default parameters.
///
/// When `meta_budget` cannot cover the meta-optimizer's population, the
/// search degenerates to uniform random sampling of `meta_budget` points
/// (reported via [`TuningResult::degenerate_sampling`]).
pub fn tune_with_objective(
    objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    names: &[String],
    bounds: &[(f64, f64)],
    algorithm: Algorithm,
    meta_budget: u64,
    stream: &mut RandomStream,
) -> Result<TuningResult> {
    let m = bounds.len();
    if m == 0 || names.len() != m {
        return Err(contract_error("tuning bounds and names must be non-empty and aligned"));
    }
    for (lo, hi) in bounds {
        if !(lo < hi) {
            return Err(contract_error("tuning bounds must satisfy lo < hi"));
        }
    }

    let trials = std::sync::Arc::new(Mutex::new(Vec::<TrialRecord>::new()));
    let recording = {
        let trials = std::sync::Arc::clone(&trials);
        move |values: &[f64]| -> f64 {
            let objective_value = objective(values);
            let mut guard = trials.lock().expect("trial log poisoned");
            let index = guard.len();
            guard.push(TrialRecord {
                index,
                values: values.to_vec(),
                objective: objective_value,
            });
            objective_value
        }
    };

    let meta_population = match algorithm {
        Algorithm::GradientDescent | Algorithm::SimulatedAnnealing => 1,
        _ => META_POPULATION.max(algorithm.min_population()),
    };
    let degenerate = (meta_budget as usize) < meta_population;

    if degenerate {
        // Too few trials for a population: sample uniformly instead.
        for _ in 0..meta_budget {
            let values: Result<Vec<f64>> = bounds
                .iter()
                .map(|(lo, hi)| stream.uniform(*lo, *hi))
                .collect();
            recording(&values?);
        }
        drop(recording);
    } else {
        let lower = PositionVector::new(bounds.iter().map(|(lo, _)| *lo).collect())?;
        let upper = PositionVector::new(bounds.iter().map(|(_, hi)| *hi).collect())?;
        let meta_problem = Problem::new("meta-objective", move |v| recording(v), lower, upper)?;
        let spec = RunSpec {
            algorithm,
            params: ParameterSet::new(),
            schedules: Vec::new(),
            population_size: meta_population,
            budget: meta_budget,
        };
        run(&spec, &meta_problem, stream)?;
    }

    let trials = std::sync::Arc::try_unwrap(trials)
        .expect("meta problem dropped, no outstanding trial-log handles")
        .into_inner()
        .expect("trial log poisoned");
    let best_trial = trials
        .iter()
        .min_by(|a, b| a.objective.total_cmp(&b.objective).then(a.index.cmp(&b.index)))
        .ok_or_else(|| contract_error("meta search evaluated no trials"))?
        .clone();
    let best: ParameterSet = names
        .iter()
        .cloned()
        .zip(best_trial.values.iter().copied())
        .collect();
    Ok(TuningResult {
        best,
        best_objective: best_trial.objective,
        trials,
        degenerate_sampling: degenerate,
    })
}

/// Self-tuning: the task's own algorithm, configured with schema defaults,
/// searches its parameter box minimizing [`meta_objective`], spending
/// exactly `meta_budget` parameter-set trials.
pub fn self_tune(task: &TuningTask, stream: &mut RandomStream) -> Result<TuningResult> {
    task.validate()?;
    let names: Vec<String> = task.tuned.iter().map(|p| p.name.clone()).collect();
    let bounds: Vec<(f64, f64)> = task.tuned.iter().map(|p| (p.lo, p.hi)).collect();
    let owned = task.clone();
    let objective = move |values: &[f64]| -> f64 {
        let params = owned.params_from_values(values);
        // The task is pre-validated, so failures here are systemic
        // (e.g. infeasible initialization); poison the trial instead of
        // aborting the whole search.
        meta_objective(&params, &owned).unwrap_or(f64::MAX)
    };
    tune_with_objective(objective, &names, &bounds, task.algorithm, task.meta_budget, stream)
}
