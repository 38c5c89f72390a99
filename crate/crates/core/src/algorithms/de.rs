//! Differential evolution: mutation-only difference vectors with greedy
//! selection.

use super::RunCtx;
use crate::error::{contract_error, Result};
use crate::params::ParameterSet;
use crate::population::Population;
use crate::problem::apply_increment;
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeParams {
    /// Mutation strength, in (0, 2).
    pub f: f64,
}

impl DeParams {
    pub fn resolve(params: &ParameterSet) -> Result<Self> {
        Ok(DeParams {
            f: params.get("F").unwrap_or(0.7),
        })
    }
}

/// The difference-vector mutation `F * (x_j - x_k)`.
pub fn mutation_increment(xj: &[f64], xk: &[f64], f: f64) -> Vec<f64> {
    xj.iter().zip(xk.iter()).map(|(a, b)| f * (a - b)).collect()
}

/// One generation: for every member, two distinct donors `j, k != i` come
/// from a fresh random permutation, the trial `x_i + F (x_j - x_k)` is
/// clamped, and it replaces the member iff strictly better.
pub fn de_step(
    population: &mut Population,
    params: &DeParams,
    stream: &mut RandomStream,
    ctx: &mut RunCtx,
) -> Result<()> {
    let n = population.len();
    if n < 4 {
        return Err(contract_error(format!("de_step requires n >= 4, got {n}")));
    }
    for i in 0..n {
        let perm = stream.permutation(n);
        let mut donors = perm.into_iter().filter(|&m| m != i);
        let j = donors.next().expect("n >= 4 leaves donors");
        let k = donors.next().expect("n >= 4 leaves donors");
        let delta = mutation_increment(
            population.member(j).position.as_slice(),
            population.member(k).position.as_slice(),
            params.f,
        );
        let trial = apply_increment(&population.member(i).position, &delta, ctx.problem())?;
        if let Some((pos, fitness)) = ctx.try_candidate(trial)? {
            let member = population.member_mut(i);
            if fitness < member.fitness {
                member.position = pos;
                member.fitness = fitness;
            }
        }
    }
    population.refresh_best()
}
