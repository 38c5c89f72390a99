//! Nature-inspired optimization toolkit.
//!
//! A population-metaheuristics library built around one idea: every
//! algorithm modifies candidate solutions through an explicit increment
//! (`x <- x + dx`, optionally via a velocity increment), with all
//! stochasticity flowing through seedable [`rng::RandomStream`]s so runs
//! replay bit-exactly.
//!
//! The crate bundles:
//!
//! - seven equation-based optimizers (differential evolution, particle
//!   swarm, firefly, bat, cuckoo search, flower pollination, simulated
//!   annealing) plus a real-coded genetic algorithm and a finite-difference
//!   gradient baseline ([`algorithms`]);
//! - heavy-tailed step distributions, Mantegna's Lévy sampler, and
//!   random-walk diffusion diagnostics ([`stochastic`]);
//! - smooth benchmark functions and a constrained multi-island landscape
//!   ([`benchmarks`]);
//! - linear-system stability machinery and Markov convergence rates
//!   ([`analysis`]);
//! - a self-tuning meta-optimizer and parameter schedules ([`tuning`]);
//! - fixed-budget / fixed-target performance measures and zero-sum
//!   rankings ([`measures`]);
//! - a batch experiment runner with deterministic CSV output
//!   ([`experiment`], exposed by the `natopt` binary).

pub mod algorithms;
pub mod analysis;
pub mod benchmarks;
pub mod error;
pub mod experiment;
pub mod measures;
pub mod params;
pub mod population;
pub mod position;
pub mod problem;
pub mod record;
pub mod rng;
pub mod stochastic;
pub mod tuning;

pub use error::{Error, Result};
pub use params::ParameterSet;
pub use population::{Individual, Population};
pub use position::PositionVector;
pub use problem::{ConstraintPolicy, Problem};
pub use record::RunRecord;
pub use rng::RandomStream;
