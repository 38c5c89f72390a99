//! Cuckoo search: Lévy-scaled difference vectors gated by the abandonment
//! probability, with greedy replacement.

use super::RunCtx;
use crate::error::{contract_error, Result};
use crate::params::ParameterSet;
use crate::population::Population;
use crate::problem::apply_increment;
use crate::rng::RandomStream;
use crate::stochastic::sample_levy_mantegna;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsParams {
    /// Discovery/abandonment probability.
    pub p_a: f64,
    /// Step-size scale.
    pub alpha: f64,
    /// Lévy exponent of the step-length distribution.
    pub lambda: f64,
}

impl CsParams {
    pub fn resolve(params: &ParameterSet) -> Result<Self> {
        Ok(CsParams {
            p_a: params.get("p_a").unwrap_or(0.25),
            alpha: params.get("alpha").unwrap_or(1.0),
            lambda: params.get("lambda").unwrap_or(1.5),
        })
    }
}

/// Heaviside gate: 1 for strictly positive arguments, 0 otherwise
/// (`H(0) = 0` keeps the measure-zero tie deterministic).
pub fn heaviside(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// The gated increment `alpha * s * H(p_a - eps) * (x_j - x_k)`.
pub fn gated_increment(alpha: f64, s: f64, p_a: f64, eps: f64, xj: &[f64], xk: &[f64]) -> Vec<f64> {
    let gate = alpha * s * heaviside(p_a - eps);
    xj.iter().zip(xk.iter()).map(|(a, b)| gate * (a - b)).collect()
}

/// One generation: per member, a permutation supplies the difference pair,
/// a uniform draw feeds the Heaviside gate, and a Mantegna draw supplies
/// the Lévy step length. Gated-off members stay put without spending an
/// evaluation; fired moves replace the member iff strictly better.
pub fn cs_step(
    population: &mut Population,
    params: &CsParams,
    stream: &mut RandomStream,
    ctx: &mut RunCtx,
) -> Result<()> {
    let n = population.len();
    if n < 3 {
        return Err(contract_error(format!("cs_step requires n >= 3, got {n}")));
    }
    for i in 0..n {
        let perm = stream.permutation(n);
        let (j, k) = (perm[0], perm[1]);
        let eps = stream.next_f64();
        let s = sample_levy_mantegna(stream, params.lambda)?;
        let delta = gated_increment(
            params.alpha,
            s,
            params.p_a,
            eps,
            population.member(j).position.as_slice(),
            population.member(k).position.as_slice(),
        );
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
    fn closed_gate_means_no_move() {
        // eps = 0.5 against p_a = 0.25: H(-0.25) = 0.
        let delta = gated_increment(1.0, 2.3, 0.25, 0.5, &[4.0], &[1.0]);
        assert_eq!(delta, vec![0.0]);
    }

    #[test]
    fn open_gate_arithmetic() {
        // eps = 0.1 < p_a = 0.25, alpha = 1, s = 0.8, x_j - x_k = [2].
        let delta = gated_increment(1.0, 0.8, 0.25, 0.1, &[3.0], &[1.0]);
        assert!((delta[0] - 1.6).abs() < 1e-15);
    }

    #[test]
    fn zero_abandonment_never_fires() {
        for eps in [0.0, 0.3, 0.9999] {
            let delta = gated_increment(1.0, 5.0, 0.0, eps, &[9.0], &[0.0]);
            assert_eq!(delta, vec![0.0]);
        }
    }

    #[test]
    fn heaviside_is_strict() {
        assert_eq!(heaviside(0.0), 0.0);
        assert_eq!(heaviside(-1e-300), 0.0);
        assert_eq!(heaviside(1e-300), 1.0);
    }
}
