//! Firefly algorithm: pairwise attraction with distance-dependent
//! brightness plus Gaussian randomization.
//!
//! The randomization strength `alpha` decays geometrically by
//! `alpha_decay` per iteration (handled by the run loop); `alpha_decay = 1`
//! keeps it constant, but a constant `alpha` puts a permanent noise floor
//! under the swarm, so the default decays.

use super::RunCtx;
use crate::error::{contract_error, Result};
use crate::params::ParameterSet;
use crate::population::Population;
use crate::problem::clamp_to_bounds;
use crate::position::PositionVector;
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaParams {
    /// Attractiveness at zero distance.
    pub beta0: f64,
    /// Light absorption; controls visibility range.
    pub gamma: f64,
    /// Randomization strength.
    pub alpha: f64,
    /// Per-iteration geometric decay of `alpha`.
    pub alpha_decay: f64,
}

impl FaParams {
    pub fn resolve(params: &ParameterSet) -> Result<Self> {
        Ok(FaParams {
            beta0: params.get("beta0").unwrap_or(1.0),
            gamma: params.get("gamma").unwrap_or(1.0),
            alpha: params.get("alpha").unwrap_or(0.2),
            alpha_decay: params.get("alpha_decay").unwrap_or(0.97),
        })
    }
}

/// Attractiveness at squared distance `r2`: `beta0 * exp(-gamma * r2)`.
pub fn attraction_factor(beta0: f64, gamma: f64, r_squared: f64) -> f64 {
    beta0 * (-gamma * r_squared).exp()
}

/// One full sweep: member `i` moves toward every brighter member `j`
/// (strictly lower fitness) by
/// `beta0*exp(-gamma*r_ij^2)*(x_j - x_i) + alpha*eps` with a fresh
/// Gaussian vector `eps` per move. Moves apply sequentially in index
/// order; the member's fitness is refreshed once after its sweep.
///
/// `gamma` is scale-dependent: the squared distance is measured in units
/// of the squared box diagonal, so `gamma = 1` keeps the whole domain
/// visible regardless of the problem's absolute scale.
pub fn fa_step(
    population: &mut Population,
    params: &FaParams,
    stream: &mut RandomStream,
    ctx: &mut RunCtx,
) -> Result<()> {
    let n = population.len();
    if n < 2 {
        return Err(contract_error(format!("fa_step requires n >= 2, got {n}")));
    }
    let diag_sq: f64 = ctx
        .problem()
        .lower()
        .iter()
        .zip(ctx.problem().upper().iter())
        .map(|(lo, hi)| (hi - lo) * (hi - lo))
        .sum();
    for i in 0..n {
        let original = population.member(i).position.clone();
        let brightness_i = population.member(i).fitness;
        let mut current = original.clone();
        for j in 0..n {
            if j == i || population.member(j).fitness >= brightness_i {
                continue;
            }
            let other = &population.member(j).position;
            let r2 = {
                let d = current.distance(other);
                d * d / diag_sq
            };
            let pull = attraction_factor(params.beta0, params.gamma, r2);
            let delta: Vec<f64> = current
                .as_slice()
                .iter()
                .zip(other.as_slice().iter())
                .map(|(xi, xj)| pull * (xj - xi) + params.alpha * stream.gaussian())
                .collect();
            let moved: Vec<f64> = current
                .as_slice()
                .iter()
                .zip(delta.iter())
                .map(|(x, d)| x + d)
                .collect();
            current = clamp_to_bounds(&PositionVector::new(moved)?, ctx.problem());
        }
        if current != original {
            match ctx.try_candidate(current)? {
                Some((pos, fitness)) => {
                    let member = population.member_mut(i);
                    member.position = pos;
                    member.fitness = fitness;
                }
                None => {} // rejected by constraint policy; keep the old state
            }
        }
    }
    population.refresh_best()
}
