//! Bat algorithm: frequency-tuned velocities toward the population best
//! with greedy position replacement.
//!
//! The velocity pulls toward the best solution, `dv = f * (x_best - x_i)`,
//! and retains `theta * v` from the previous iteration. The damping factor
//! comes from the extended bat system studied for stability: `theta = 1`
//! with no damping never contracts, and the textbook sign `(x_i - x_best)`
//! pushes members away from the best, which on a convex landscape can
//! never produce an improving candidate, so the greedy gate would freeze
//! the whole population at initialization.

use super::RunCtx;
use crate::error::{contract_error, Error, Result};
use crate::params::ParameterSet;
use crate::population::Population;
use crate::problem::apply_increment;
use crate::position::PositionVector;
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaParams {
    pub f_min: f64,
    pub f_max: f64,
    /// Velocity damping, in [0, 1]; 1 keeps the full previous velocity.
    pub theta: f64,
}

impl BaParams {
    pub fn resolve(params: &ParameterSet) -> Result<Self> {
        let out = BaParams {
            f_min: params.get("f_min").unwrap_or(0.0),
            f_max: params.get("f_max").unwrap_or(2.0),
            theta: params.get("theta").unwrap_or(0.9),
        };
        if out.f_min > out.f_max {
            return Err(Error::ParameterOutOfRange {
                name: "f_min".into(),
                value: out.f_min,
                range: format!("[-inf, f_max = {}]", out.f_max),
            });
        }
        Ok(out)
    }
}

/// Frequency tuning: `f = f_min + beta * (f_max - f_min)` for a uniform
/// draw `beta` in [0, 1].
pub fn frequency(f_min: f64, f_max: f64, beta: f64) -> f64 {
    f_min + beta * (f_max - f_min)
}

/// One sweep: per member, a fresh frequency scales the pull toward the
/// population best, `v <- theta*v + f*(x_best - x_i)`; the candidate
/// `clamp(x + v)` replaces the stored position iff strictly better.
pub fn ba_step(
    population: &mut Population,
    params: &BaParams,
    stream: &mut RandomStream,
    ctx: &mut RunCtx,
) -> Result<()> {
    let n = population.len();
    if population.members().iter().any(|m| m.velocity.is_none()) {
        return Err(contract_error("ba_step requires velocity state on every member"));
    }
    let best = population.best().position.clone();

    for i in 0..n {
        let beta = stream.next_f64();
        let f = frequency(params.f_min, params.f_max, beta);
        let member = population.member(i);
        let velocity = member.velocity.as_ref().expect("checked above");
        let new_velocity: Vec<f64> = velocity
            .iter()
            .zip(member.position.iter().zip(best.iter()))
            .map(|(v, (x, b))| params.theta * v + f * (b - x))
            .collect();
        let candidate = apply_increment(&member.position, &new_velocity, ctx.problem())?;

        let stationary = candidate == member.position;
        let evaluated = if stationary {
            None // zero move; no evaluation to spend
        } else {
            ctx.try_candidate(candidate)?
        };
        let member = population.member_mut(i);
        member.velocity = Some(PositionVector::new(new_velocity)?);
        if let Some((pos, fitness)) = evaluated {
            if fitness < member.fitness {
                member.position = pos;
                member.fitness = fitness;
            }
        }
    }
    population.refresh_best()
}
