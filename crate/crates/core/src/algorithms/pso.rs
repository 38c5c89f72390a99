//! Particle swarm optimization.
//!
//! The velocity increment follows the two-attractor form
//! `dv = alpha*eps1*(g* - x) + beta*eps2*(x* - x)` with one `(eps1, eps2)`
//! pair per member per iteration applied across all coordinates. The
//! retained velocity is damped by an inertia weight `omega`; `omega = 1`
//! recovers the undamped update `v <- v + dv`, which never contracts (the
//! per-coordinate system matrix has unit determinant), so the default is
//! below one.

use super::RunCtx;
use crate::error::{contract_error, Result};
use crate::params::ParameterSet;
use crate::population::Population;
use crate::problem::apply_increment;
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoParams {
    /// Attraction to the population best.
    pub alpha: f64,
    /// Attraction to the member's personal best.
    pub beta: f64,
    /// Inertia weight on the retained velocity.
    pub omega: f64,
}

impl PsoParams {
    pub fn resolve(params: &ParameterSet) -> Result<Self> {
        Ok(PsoParams {
            alpha: params.get("alpha").unwrap_or(2.0),
            beta: params.get("beta").unwrap_or(2.0),
            omega: params.get("omega").unwrap_or(0.7),
        })
    }
}

/// The velocity increment of one member: per coordinate
/// `alpha*eps1*(g_d - x_d) + beta*eps2*(p_d - x_d)`.
pub fn velocity_increment(
    params: &PsoParams,
    eps1: f64,
    eps2: f64,
    x: &[f64],
    global_best: &[f64],
    personal_best: &[f64],
) -> Vec<f64> {
    x.iter()
        .zip(global_best.iter().zip(personal_best.iter()))
        .map(|(xd, (gd, pd))| params.alpha * eps1 * (gd - xd) + params.beta * eps2 * (pd - xd))
        .collect()
}

/// One synchronous sweep: fresh `(eps1, eps2)` per member, velocity
/// `v <- omega*v + dv`, position `clamp(x + v)`, fitness and bests
/// refreshed. Requires velocity and personal-best state on every member.
pub fn pso_step(
    population: &mut Population,
    params: &PsoParams,
    stream: &mut RandomStream,
    ctx: &mut RunCtx,
) -> Result<()> {
    let n = population.len();
    for i in 0..n {
        let m = population.member(i);
        if m.velocity.is_none() || m.personal_best_position.is_none() {
            return Err(contract_error(
                "pso_step requires velocity and personal-best state on every member",
            ));
        }
    }
    let global_best = population.best().position.clone();

    for i in 0..n {
        let eps1 = stream.next_f64();
        let eps2 = stream.next_f64();
        let member = population.member(i);
        let velocity = member.velocity.as_ref().expect("checked above");
        let pbest = member.personal_best_position.as_ref().expect("checked above");
        let dv = velocity_increment(
            params,
            eps1,
            eps2,
            member.position.as_slice(),
            global_best.as_slice(),
            pbest.as_slice(),
        );
        let new_velocity: Vec<f64> = velocity
            .iter()
            .zip(dv.iter())
            .map(|(v, d)| params.omega * v + d)
            .collect();
        let candidate = apply_increment(&member.position, &new_velocity, ctx.problem())?;

        let moved = ctx.try_candidate(candidate)?;
        let member = population.member_mut(i);
        member.velocity = Some(crate::position::PositionVector::new(new_velocity)?);
        if let Some((pos, fitness)) = moved {
            member.position = pos;
            member.fitness = fitness;
            member.update_personal_best();
        }
    }
    population.refresh_best()
}
