//! Flower pollination: Lévy-scaled global moves toward the best solution,
//! switched against local difference-vector moves.

use super::RunCtx;
use crate::error::{contract_error, Result};
use crate::params::ParameterSet;
use crate::population::Population;
use crate::problem::apply_increment;
use crate::rng::RandomStream;
use crate::stochastic::sample_levy_mantegna;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FpaParams {
    /// Probability of the global (biotic) branch.
    pub p: f64,
    /// Scale of the global move.
    pub gamma: f64,
    /// Lévy exponent of the global step lengths.
    pub lambda: f64,
}

impl FpaParams {
    pub fn resolve(params: &ParameterSet) -> Result<Self> {
        Ok(FpaParams {
            p: params.get("p").unwrap_or(0.8),
            gamma: params.get("gamma").unwrap_or(0.1),
            lambda: params.get("lambda").unwrap_or(1.5),
        })
    }
}

/// Global-branch increment: per coordinate `gamma * L_d * (g_d - x_d)`
/// with one Lévy draw per coordinate.
pub fn global_increment(gamma: f64, levy: &[f64], best: &[f64], x: &[f64]) -> Vec<f64> {
    levy.iter()
        .zip(best.iter().zip(x.iter()))
        .map(|(l, (g, xd))| gamma * l * (g - xd))
        .collect()
}

/// Local-branch increment: `eps * (x_j - x_k)`.
pub fn local_increment(eps: f64, xj: &[f64], xk: &[f64]) -> Vec<f64> {
    xj.iter().zip(xk.iter()).map(|(a, b)| eps * (a - b)).collect()
}

/// One generation: per member a switch draw picks the global Lévy move
/// toward the best, or the local move along a permuted difference pair.
/// Exactly-zero increments spend no evaluation; candidates replace the
/// member iff strictly better.
pub fn fpa_step(
    population: &mut Population,
    params: &FpaParams,
    stream: &mut RandomStream,
    ctx: &mut RunCtx,
) -> Result<()> {
    let n = population.len();
    if n < 3 {
        return Err(contract_error(format!("fpa_step requires n >= 3, got {n}")));
    }
    let best = population.best().position.clone();
    let dim = ctx.problem().dimension();

    for i in 0..n {
        let r = stream.next_f64();
        let delta = if r < params.p {
            let levy: Result<Vec<f64>> = (0..dim)
                .map(|_| sample_levy_mantegna(stream, params.lambda))
                .collect();
            global_increment(
                params.gamma,
                &levy?,
                best.as_slice(),
                population.member(i).position.as_slice(),
            )
        } else {
            let perm = stream.permutation(n);
            let eps = stream.next_f64();
            local_increment(
                eps,
                population.member(perm[0]).position.as_slice(),
                population.member(perm[1]).position.as_slice(),
            )
        };
        if delta.iter().all(|d| *d == 0.0) {
            continue;
        }
        let candidate = apply_increment(&population.member(i).position, &delta, ctx.problem())?;
        if let Some((pos, fitness)) = ctx.try_candidate(candidate)? {
            let member = population.member_mut(i);
            if fitness < member.fitness {
                member.position = pos;
                member.fitness = fitness;
            }
        }
    }
    population.refresh_best()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_branch_zero_difference() {
        assert_eq!(local_increment(0.7, &[2.0, 1.0], &[2.0, 1.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn global_branch_at_the_attractor() {
        let delta = global_increment(0.5, &[1.2, -3.0], &[1.0, 2.0], &[1.0, 2.0]);
        assert_eq!(delta, vec![0.0, 0.0]);
    }

    #[test]
    fn global_branch_arithmetic() {
        // gamma = 0.5, L = 1.2, g - x = [2].
        let delta = global_increment(0.5, &[1.2], &[3.0], &[1.0]);
        assert!((delta[0] - 1.2).abs() < 1e-15);
    }
}
