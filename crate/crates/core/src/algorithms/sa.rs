//! Simulated annealing: isotropic Gaussian moves with Metropolis
//! acceptance and geometric cooling.

use super::RunCtx;
use crate::error::{contract_error, Result};
use crate::params::ParameterSet;
use crate::population::Population;
use crate::problem::apply_increment;
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaParams {
    pub initial_temperature: f64,
    /// Geometric cooling ratio, in (0, 1).
    pub cooling_factor: f64,
    /// Standard deviation of the isotropic move, per coordinate.
    pub step_scale: f64,
}

impl SaParams {
    pub fn resolve(params: &ParameterSet) -> Result<Self> {
        Ok(SaParams {
            initial_temperature: params.get("initial_temperature").unwrap_or(1.0),
            cooling_factor: params.get("cooling_factor").unwrap_or(0.99),
            step_scale: params.get("step_scale").unwrap_or(0.05),
        })
    }
}

/// Metropolis rule: improvements always pass; a worsening of `df` passes
/// iff `u < exp(-df / temperature)`.
pub fn metropolis_accept(f_new: f64, f_old: f64, temperature: f64, u: f64) -> bool {
    f_new < f_old || u < (-(f_new - f_old) / temperature).exp()
}

/// One annealing move on the single tracked state: an isotropic Gaussian
/// candidate, Metropolis acceptance against the current temperature, then
/// geometric cooling. The uniform acceptance draw is consumed only when
/// the candidate is worse.
pub fn sa_step(
    population: &mut Population,
    temperature: &mut f64,
    params: &SaParams,
    stream: &mut RandomStream,
    ctx: &mut RunCtx,
) -> Result<()> {
    if !(*temperature > 0.0) {
        return Err(contract_error(format!(
            "sa_step requires temperature > 0, got {temperature}"
        )));
    }
    let dim = ctx.problem().dimension();
    let delta: Vec<f64> = (0..dim).map(|_| params.step_scale * stream.gaussian()).collect();
    let candidate = apply_increment(&population.member(0).position, &delta, ctx.problem())?;

    if let Some((pos, f_new)) = ctx.try_candidate(candidate)? {
        let member = population.member_mut(0);
        let accept = if f_new < member.fitness {
            true
        } else {
            metropolis_accept(f_new, member.fitness, *temperature, stream.next_f64())
        };
        if accept {
            member.position = pos;
            member.fitness = f_new;
        }
    }
    *temperature *= params.cooling_factor;
    population.refresh_best()
}
