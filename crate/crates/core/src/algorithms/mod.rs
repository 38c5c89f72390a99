//! The optimizers: one step operation per algorithm, a mechanism registry,
//! and the budgeted run loop shared by all of them.
//!
//! Every step consumes draws from an explicit [`RandomStream`] and spends
//! objective evaluations through a [`RunCtx`], so evaluation accounting is
//! exact and runs replay deterministically.

mod ba;
mod cs;
mod de;
mod fa;
mod fpa;
mod ga;
mod gradient;
mod pso;
mod sa;

pub use ba::{ba_step, BaParams};
pub use cs::{cs_step, CsParams};
pub use de::{de_step, DeParams};
pub use fa::{fa_step, FaParams};
pub use fpa::{fpa_step, FpaParams};
pub use ga::{ga_step, single_point_crossover, GaParams};
pub use gradient::{gradient_step, GdParams};
pub use pso::{pso_step, PsoParams};
pub use sa::{metropolis_accept, sa_step, SaParams};

use std::time::Instant;

use crate::error::{contract_error, Error, Result};
use crate::params::ParameterSet;
use crate::population::{Individual, Population};
use crate::position::PositionVector;
use crate::problem::{clamp_to_bounds, evaluate, ConstraintPolicy, EvalCounter, Problem};
use crate::record::RunRecord;
use crate::rng::RandomStream;
use crate::tuning::{parameter_schedule, ScheduleSpec};

/// Solution-modification mechanisms: gradient-guided move, random
/// permutation, direction-based perturbation, isotropic random walk, and
/// long-tailed (scale-free) random walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mechanism {
    Ggm,
    Rp,
    Dbp,
    Irw,
    Ltrw,
}

/// Bounds, default, and openness of a single algorithm parameter.
#[derive(Debug, Clone, Copy)]
pub struct ParameterSpec {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
    pub default: f64,
}

impl ParameterSpec {
    const fn closed(name: &'static str, lo: f64, hi: f64, default: f64) -> Self {
        ParameterSpec { name, lo, hi, lo_open: false, hi_open: false, default }
    }

    const fn open(name: &'static str, lo: f64, hi: f64, default: f64) -> Self {
        ParameterSpec { name, lo, hi, lo_open: true, hi_open: true, default }
    }

    const fn lo_open(name: &'static str, lo: f64, hi: f64, default: f64) -> Self {
        ParameterSpec { name, lo, hi, lo_open: true, hi_open: false, default }
    }

    pub fn range_text(&self) -> String {
        format!(
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' },
        )
    }

    pub fn check(&self, value: f64) -> Result<()> {
        let lo_ok = if self.lo_open { value > self.lo } else { value >= self.lo };
        let hi_ok = if self.hi_open { value < self.hi } else { value <= self.hi };
        if !value.is_finite() || !lo_ok || !hi_ok {
            return Err(Error::ParameterOutOfRange {
                name: self.name.to_string(),
                value,
                range: self.range_text(),
            });
        }
        Ok(())
    }
}

/// Static description of an algorithm: its parameter schema and the
/// mechanism taxonomy of its position/velocity increments.
#[derive(Debug, Clone, Copy)]
pub struct AlgorithmDescriptor {
    pub name: &'static str,
    pub parameters: &'static [ParameterSpec],
    pub position_mechanisms: &'static [Mechanism],
    pub velocity_mechanisms: &'static [Mechanism],
    pub uses_velocity: bool,
}

impl AlgorithmDescriptor {
    pub fn parameter(&self, name: &str) -> Option<&ParameterSpec> {
        self.parameters.iter().find(|p| p.name == name)
    }

    /// Reject unknown names and out-of-range values.
    pub fn validate(&self, params: &ParameterSet) -> Result<()> {
        for (name, value) in params.iter() {
            let spec = self.parameter(name).ok_or_else(|| Error::UnknownParameter {
                name: name.to_string(),
                algorithm: self.name.to_string(),
            })?;
            spec.check(value)?;
        }
        Ok(())
    }

    /// Validated parameter set with schema defaults filled in.
    pub fn resolve(&self, params: &ParameterSet) -> Result<ParameterSet> {
        self.validate(params)?;
        Ok(self
            .parameters
            .iter()
            .map(|spec| {
                (
                    spec.name.to_string(),
                    params.get(spec.name).unwrap_or(spec.default),
                )
            })
            .collect())
    }

    pub fn defaults(&self) -> ParameterSet {
        self.parameters
            .iter()
            .map(|spec| (spec.name.to_string(), spec.default))
            .collect()
    }
}

use Mechanism::{Dbp, Ggm, Irw, Ltrw, Rp};

static GD_DESCRIPTOR: AlgorithmDescriptor = AlgorithmDescriptor {
    name: "gd",
    parameters: &[ParameterSpec::lo_open("eta", 0.0, f64::INFINITY, 0.1)],
    position_mechanisms: &[Ggm],
    velocity_mechanisms: &[],
    uses_velocity: false,
};

static DE_DESCRIPTOR: AlgorithmDescriptor = AlgorithmDescriptor {
    name: "de",
    parameters: &[ParameterSpec::open("F", 0.0, 2.0, 0.7)],
    position_mechanisms: &[Rp, Dbp],
    velocity_mechanisms: &[],
    uses_velocity: false,
};

static PSO_DESCRIPTOR: AlgorithmDescriptor = AlgorithmDescriptor {
    name: "pso",
    parameters: &[
        ParameterSpec::closed("alpha", 0.0, 10.0, 2.0),
        ParameterSpec::closed("beta", 0.0, 10.0, 2.0),
        ParameterSpec::closed("omega", 0.0, 1.0, 0.7),
    ],
    position_mechanisms: &[Dbp],
    velocity_mechanisms: &[Dbp],
    uses_velocity: true,
};

static FA_DESCRIPTOR: AlgorithmDescriptor = AlgorithmDescriptor {
    name: "fa",
    parameters: &[
        ParameterSpec::lo_open("beta0", 0.0, f64::INFINITY, 1.0),
        ParameterSpec::lo_open("gamma", 0.0, f64::INFINITY, 1.0),
        ParameterSpec::closed("alpha", 0.0, f64::INFINITY, 0.2),
        ParameterSpec::lo_open("alpha_decay", 0.0, 1.0, 0.97),
    ],
    position_mechanisms: &[Dbp, Irw],
    velocity_mechanisms: &[],
    uses_velocity: false,
};

static BA_DESCRIPTOR: AlgorithmDescriptor = AlgorithmDescriptor {
    name: "ba",
    parameters: &[
        ParameterSpec::closed("f_min", -1e3, 1e3, 0.0),
        ParameterSpec::closed("f_max", -1e3, 1e3, 2.0),
        ParameterSpec::closed("theta", 0.0, 1.0, 0.6),
    ],
    position_mechanisms: &[Rp, Dbp],
    velocity_mechanisms: &[Rp, Dbp],
    uses_velocity: true,
};

static CS_DESCRIPTOR: AlgorithmDescriptor = AlgorithmDescriptor {
    name: "cs",
    parameters: &[
        ParameterSpec::closed("p_a", 0.0, 1.0, 0.25),
        ParameterSpec::lo_open("alpha", 0.0, f64::INFINITY, 1.0),
        ParameterSpec::closed("lambda", 0.3, 1.99, 1.5),
    ],
    position_mechanisms: &[Rp, Dbp, Ltrw],
    velocity_mechanisms: &[],
    uses_velocity: false,
};

static FPA_DESCRIPTOR: AlgorithmDescriptor = AlgorithmDescriptor {
    name: "fpa",
    parameters: &[
        ParameterSpec::closed("p", 0.0, 1.0, 0.8),
        ParameterSpec::lo_open("gamma", 0.0, f64::INFINITY, 0.1),
        ParameterSpec::closed("lambda", 0.3, 1.99, 1.5),
    ],
    position_mechanisms: &[Dbp, Ltrw],
    velocity_mechanisms: &[],
    uses_velocity: false,
};

static GA_DESCRIPTOR: AlgorithmDescriptor = AlgorithmDescriptor {
    name: "ga",
    parameters: &[
        ParameterSpec::closed("crossover_rate", 0.0, 1.0, 0.9),
        ParameterSpec::closed("mutation_rate", 0.0, 1.0, 0.2),
        ParameterSpec::lo_open("mutation_scale", 0.0, f64::INFINITY, 0.02),
        ParameterSpec::closed("elite_count", 0.0, 1e6, 2.0),
    ],
    position_mechanisms: &[],
    velocity_mechanisms: &[],
    uses_velocity: false,
};

static SA_DESCRIPTOR: AlgorithmDescriptor = AlgorithmDescriptor {
    name: "sa",
    parameters: &[
        ParameterSpec::lo_open("initial_temperature", 0.0, f64::INFINITY, 1.0),
        ParameterSpec::open("cooling_factor", 0.0, 1.0, 0.99),
        ParameterSpec::lo_open("step_scale", 0.0, f64::INFINITY, 0.05),
    ],
    position_mechanisms: &[Irw],
    velocity_mechanisms: &[],
    uses_velocity: false,
};

/// The algorithms the toolkit ships.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    GradientDescent,
    DifferentialEvolution,
    ParticleSwarm,
    Firefly,
    Bat,
    CuckooSearch,
    FlowerPollination,
    Genetic,
    SimulatedAnnealing,
}

impl Algorithm {
    pub fn all() -> [Algorithm; 9] {
        [
            Algorithm::GradientDescent,
            Algorithm::DifferentialEvolution,
            Algorithm::ParticleSwarm,
            Algorithm::Firefly,
            Algorithm::Bat,
            Algorithm::CuckooSearch,
            Algorithm::FlowerPollination,
            Algorithm::Genetic,
            Algorithm::SimulatedAnnealing,
        ]
    }

    pub fn from_name(name: &str) -> Result<Algorithm> {
        Algorithm::all()
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::UnknownAlgorithm(name.to_string()))
    }

    pub fn name(&self) -> &'static str {
        self.descriptor().name
    }

    pub fn descriptor(&self) -> &'static AlgorithmDescriptor {
        match self {
            Algorithm::GradientDescent => &GD_DESCRIPTOR,
            Algorithm::DifferentialEvolution => &DE_DESCRIPTOR,
            Algorithm::ParticleSwarm => &PSO_DESCRIPTOR,
            Algorithm::Firefly => &FA_DESCRIPTOR,
            Algorithm::Bat => &BA_DESCRIPTOR,
            Algorithm::CuckooSearch => &CS_DESCRIPTOR,
            Algorithm::FlowerPollination => &FPA_DESCRIPTOR,
            Algorithm::Genetic => &GA_DESCRIPTOR,
            Algorithm::SimulatedAnnealing => &SA_DESCRIPTOR,
        }
    }

    /// Smallest population the step operation is defined for.
    pub fn min_population(&self) -> usize {
        match self {
            Algorithm::DifferentialEvolution => 4,
            Algorithm::CuckooSearch | Algorithm::FlowerPollination => 3,
            Algorithm::Firefly | Algorithm::Genetic => 2,
            _ => 1,
        }
    }

    /// Single-state methods ignore the configured population size.
    fn effective_population(&self, requested: usize) -> usize {
        match self {
            Algorithm::GradientDescent | Algorithm::SimulatedAnnealing => 1,
            _ => requested,
        }
    }

    /// Objective calls one iteration is expected to spend; used to size
    /// parameter schedules.
    fn evals_per_iteration(&self, n: usize, dimension: usize) -> u64 {
        match self {
            Algorithm::GradientDescent => 2 * dimension as u64 + 1,
            Algorithm::SimulatedAnnealing => 1,
            _ => n as u64,
        }
    }
}

/// Per-run evaluation context: budget gate, exact call counting, and the
/// best-so-far trace.
pub struct RunCtx<'a> {
    problem: &'a Problem,
    budget: u64,
    counter: EvalCounter,
    trace: Vec<(u64, f64)>,
    best: Option<(PositionVector, f64)>,
}

impl<'a> RunCtx<'a> {
    pub fn new(problem: &'a Problem, budget: u64) -> Self {
        RunCtx {
            problem,
            budget,
            counter: EvalCounter::new(),
            trace: Vec::new(),
            best: None,
        }
    }

    pub fn problem(&self) -> &Problem {
        self.problem
    }

    pub fn evals_used(&self) -> u64 {
        self.counter.used()
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.counter.used()
    }

    /// Budget-gated objective evaluation. Exactly one counted call per
    /// `Ok`; `Err(BudgetExhausted)` once the budget is spent.
    pub fn evaluate(&mut self, position: &PositionVector) -> Result<f64> {
        if self.counter.used() >= self.budget {
            return Err(Error::BudgetExhausted);
        }
        let value = evaluate(self.problem, position, &mut self.counter)?;
        let improved = self.best.as_ref().map_or(true, |(_, bf)| value < *bf);
        if improved {
            self.best = Some((position.clone(), value));
            self.trace.push((self.counter.used(), value));
        }
        Ok(value)
    }

    /// Run a candidate through the problem's constraint policy and
    /// evaluate it. `Ok(None)` means the move was discarded by the reject
    /// policy (no evaluation spent).
    pub fn try_candidate(
        &mut self,
        candidate: PositionVector,
    ) -> Result<Option<(PositionVector, f64)>> {
        let candidate = match self.problem.policy() {
            Some(ConstraintPolicy::Repair) => {
                let repaired = self
                    .problem
                    .project(&candidate)
                    .expect("repair policy requires a projector");
                clamp_to_bounds(&repaired, self.problem)
            }
            Some(ConstraintPolicy::Reject) => {
                if !self.problem.is_feasible(&candidate) {
                    return Ok(None);
                }
                candidate
            }
            None => candidate,
        };
        let fitness = self.evaluate(&candidate)?;
        Ok(Some((candidate, fitness)))
    }
}

/// Draw a position uniformly within the bounds, honoring the constraint
/// policy: reject-mode problems are rejection-sampled to a feasible point
/// (no evaluations spent), repair-mode problems are projected.
fn draw_position(problem: &Problem, stream: &mut RandomStream) -> Result<PositionVector> {
    let draw = |stream: &mut RandomStream| -> Result<PositionVector> {
        let coords: Result<Vec<f64>> = problem
            .lower()
            .iter()
            .zip(problem.upper().iter())
            .map(|(lo, hi)| stream.uniform(*lo, *hi))
            .collect();
        PositionVector::new(coords?)
    };
    match problem.policy() {
        Some(ConstraintPolicy::Reject) => {
            for _ in 0..100_000 {
                let pos = draw(stream)?;
                if problem.is_feasible(&pos) {
                    return Ok(pos);
                }
            }
            Err(contract_error(
                "could not sample a feasible initial position in 100000 attempts",
            ))
        }
        Some(ConstraintPolicy::Repair) => {
            let pos = draw(stream)?;
            let repaired = problem.project(&pos).expect("repair policy requires a projector");
            Ok(clamp_to_bounds(&repaired, problem))
        }
        None => draw(stream),
    }
}

fn init_population(
    algorithm: Algorithm,
    n: usize,
    stream: &mut RandomStream,
    ctx: &mut RunCtx,
) -> Result<Population> {
    let with_velocity = algorithm.descriptor().uses_velocity;
    let with_personal_best = algorithm == Algorithm::ParticleSwarm;
    let mut members = Vec::with_capacity(n);
    for _ in 0..n {
        let position = draw_position(ctx.problem, stream)?;
        let fitness = ctx.evaluate(&position)?;
        let mut individual = Individual::new(position, fitness);
        if with_velocity {
            individual.velocity = Some(PositionVector::zeros(ctx.problem.dimension()));
        }
        if with_personal_best {
            individual.update_personal_best();
        }
        members.push(individual);
    }
    Population::from_members(members)
}

/// Full specification of a single optimization run.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    /// Parameter overrides; schema defaults fill the rest.
    pub params: ParameterSet,
    /// Optional deterministic schedules, by parameter name. A scheduled
    /// parameter moves from its spec over the run's estimated iterations.
    pub schedules: Vec<(String, ScheduleSpec)>,
    pub population_size: usize,
    /// Maximum number of objective evaluations.
    pub budget: u64,
}

impl RunSpec {
    pub fn new(algorithm: Algorithm, population_size: usize, budget: u64) -> Self {
        RunSpec {
            algorithm,
            params: ParameterSet::new(),
            schedules: Vec::new(),
            population_size,
            budget,
        }
    }
}

/// Execute one budgeted run: initialize the population uniformly within
/// bounds, iterate the algorithm's step operation until the evaluation
/// budget is spent, and return the full record.
pub fn run(spec: &RunSpec, problem: &Problem, stream: &mut RandomStream) -> Result<RunRecord> {
    let started = Instant::now();
    let descriptor = spec.algorithm.descriptor();
    let resolved = descriptor.resolve(&spec.params)?;
    for (name, _) in &spec.schedules {
        if descriptor.parameter(name).is_none() {
            return Err(Error::UnknownParameter {
                name: name.clone(),
                algorithm: descriptor.name.to_string(),
            });
        }
    }

    let n = spec.algorithm.effective_population(spec.population_size);
    if n < spec.algorithm.min_population() {
        return Err(contract_error(format!(
            "{} requires a population of at least {}, got {n}",
            descriptor.name,
            spec.algorithm.min_population()
        )));
    }
    if spec.budget < n as u64 {
        return Err(contract_error(format!(
            "budget {} cannot cover the initial population of {n}",
            spec.budget
        )));
    }

    let mut ctx = RunCtx::new(problem, spec.budget);
    let mut population = init_population(spec.algorithm, n, stream, &mut ctx)?;
    let init_mean_fitness = population.mean_fitness();

    let per_iter = spec.algorithm.evals_per_iteration(n, problem.dimension());
    let t_max = ((spec.budget - n as u64) / per_iter.max(1)).max(1);
    // Algorithms can legally spend zero evaluations in an iteration
    // (closed Heaviside gates, rejected candidates), so a separate cap
    // keeps zero-progress runs finite.
    let iteration_cap = 4 * spec.budget + 1000;

    let mut sa_temperature = resolved.get("initial_temperature").unwrap_or(1.0);
    let mut fa_alpha_factor = 1.0;

    let mut t: u64 = 0;
    while ctx.remaining() > 0 && t < iteration_cap {
        let mut params_t = resolved.clone();
        for (name, schedule) in &spec.schedules {
            let value = parameter_schedule(schedule, t.min(t_max), t_max)?;
            descriptor
                .parameter(name)
                .expect("schedule names validated above")
                .check(value)?;
            params_t.set(name.clone(), value);
        }

        let outcome = match spec.algorithm {
            Algorithm::GradientDescent => {
                let params = GdParams::resolve(&params_t)?;
                gradient::gd_iteration(&mut population, &params, &mut ctx)
            }
            Algorithm::DifferentialEvolution => {
                let params = DeParams::resolve(&params_t)?;
                de_step(&mut population, &params, stream, &mut ctx)
            }
            Algorithm::ParticleSwarm => {
                let params = PsoParams::resolve(&params_t)?;
                pso_step(&mut population, &params, stream, &mut ctx)
            }
            Algorithm::Firefly => {
                let mut params = FaParams::resolve(&params_t)?;
                params.alpha *= fa_alpha_factor;
                fa_alpha_factor *= params.alpha_decay;
                fa_step(&mut population, &params, stream, &mut ctx)
            }
            Algorithm::Bat => {
                let params = BaParams::resolve(&params_t)?;
                ba_step(&mut population, &params, stream, &mut ctx)
            }
            Algorithm::CuckooSearch => {
                let params = CsParams::resolve(&params_t)?;
                cs_step(&mut population, &params, stream, &mut ctx)
            }
            Algorithm::FlowerPollination => {
                let params = FpaParams::resolve(&params_t)?;
                fpa_step(&mut population, &params, stream, &mut ctx)
            }
            Algorithm::Genetic => {
                let params = GaParams::resolve(&params_t, n)?;
                ga_step(&mut population, &params, stream, &mut ctx)
            }
            Algorithm::SimulatedAnnealing => {
                let params = SaParams::resolve(&params_t)?;
                sa_step(&mut population, &mut sa_temperature, &params, stream, &mut ctx)
            }
        };
        match outcome {
            Ok(()) => {}
            Err(Error::BudgetExhausted) => break,
            Err(other) => return Err(other),
        }
        t += 1;
    }

    population.refresh_best()?;
    let (best_position, best_fitness) = ctx
        .best
        .clone()
        .expect("initialization evaluated at least one position");
    Ok(RunRecord {
        algorithm: descriptor.name.to_string(),
        problem: problem.name().to_string(),
        master_seed: stream.master_seed(),
        stream_id: stream.stream_id(),
        dimension: problem.dimension(),
        population_size: n,
        budget: spec.budget,
        evals_used: ctx.evals_used(),
        trace: ctx.trace,
        best_position,
        best_fitness,
        init_mean_fitness,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
pub(crate) fn init_population_for_tests(
    algorithm: Algorithm,
    n: usize,
    stream: &mut RandomStream,
    ctx: &mut RunCtx,
) -> Population {
    init_population(algorithm, n, stream, ctx).expect("test initialization")
}
