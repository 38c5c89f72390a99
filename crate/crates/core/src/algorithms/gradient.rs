//! Gradient-guided baseline: steepest descent with central finite
//! differences.

use super::RunCtx;
use crate::error::{contract_error, Error, Result};
use crate::params::ParameterSet;
use crate::population::Population;
use crate::position::PositionVector;
use crate::problem::apply_increment;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdParams {
    pub eta: f64,
}

impl GdParams {
    pub fn resolve(params: &ParameterSet) -> Result<Self> {
        Ok(GdParams {
            eta: params.get("eta").unwrap_or(0.1),
        })
    }
}

/// One descent move `x - eta * grad f(x)` with the gradient from central
/// finite differences (`h = 1e-6 * max(1, |x_d|)` per coordinate).
///
/// Spends exactly `2 D` evaluations on the probe points, which may sit
/// slightly outside the box at the boundary; the returned position is
/// clamped.
pub fn gradient_step(
    position: &PositionVector,
    eta: f64,
    ctx: &mut RunCtx,
) -> Result<PositionVector> {
    if !(eta > 0.0) {
        return Err(contract_error(format!("learning rate must be > 0, got {eta}")));
    }
    let d = position.len();
    let mut gradient = vec![0.0; d];
    for k in 0..d {
        let h = 1e-6 * position[k].abs().max(1.0);
        let mut plus = position.as_slice().to_vec();
        let mut minus = plus.clone();
        plus[k] += h;
        minus[k] -= h;
        let f_plus = ctx.evaluate(&PositionVector::new(plus)?)?;
        let f_minus = ctx.evaluate(&PositionVector::new(minus)?)?;
        gradient[k] = (f_plus - f_minus) / (2.0 * h);
        if !gradient[k].is_finite() {
            return Err(Error::NonFinite(format!("gradient component {k}")));
        }
    }
    let delta: Vec<f64> = gradient.iter().map(|g| -eta * g).collect();
    apply_increment(position, &delta, ctx.problem())
}

/// Run-loop wrapper: descend from the single tracked state and evaluate
/// the new position.
pub(crate) fn gd_iteration(
    population: &mut Population,
    params: &GdParams,
    ctx: &mut RunCtx,
) -> Result<()> {
    let current = population.member(0).position.clone();
    let next = gradient_step(&current, params.eta, ctx)?;
    if let Some((pos, fitness)) = ctx.try_candidate(next)? {
        let member = population.member_mut(0);
        member.position = pos;
        member.fitness = fitness;
    }
    population.refresh_best()
}
