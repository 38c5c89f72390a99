//! Real-coded genetic algorithm: rank-proportional selection, single-point
//! crossover, per-coordinate Gaussian mutation, and elitism.

use super::RunCtx;
use crate::error::{contract_error, Error, Result};
use crate::params::ParameterSet;
use crate::population::{Individual, Population};
use crate::problem::clamp_to_bounds;
use crate::position::PositionVector;
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaParams {
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    /// Mutation standard deviation as a fraction of the per-coordinate
    /// bound width.
    pub mutation_scale: f64,
    pub elite_count: usize,
}

impl GaParams {
    pub fn resolve(params: &ParameterSet, population_size: usize) -> Result<Self> {
        let elite_raw = params.get("elite_count").unwrap_or(2.0);
        if elite_raw.fract() != 0.0 || elite_raw < 0.0 {
            return Err(Error::ParameterOutOfRange {
                name: "elite_count".into(),
                value: elite_raw,
                range: "non-negative integers".into(),
            });
        }
        let elite_count = elite_raw as usize;
        if elite_count >= population_size {
            return Err(Error::ParameterOutOfRange {
                name: "elite_count".into(),
                value: elite_raw,
                range: format!("[0, {})", population_size),
            });
        }
        Ok(GaParams {
            crossover_rate: params.get("crossover_rate").unwrap_or(0.9),
            mutation_rate: params.get("mutation_rate").unwrap_or(0.2),
            mutation_scale: params.get("mutation_scale").unwrap_or(0.02),
            elite_count,
        })
    }
}

/// Splice `parent1[..cut]` with `parent2[cut..]`. `cut` must lie in
/// `1..len` so both sides contribute.
pub fn single_point_crossover(parent1: &[f64], parent2: &[f64], cut: usize) -> Vec<f64> {
    debug_assert!(cut >= 1 && cut < parent1.len());
    parent1[..cut]
        .iter()
        .chain(parent2[cut..].iter())
        .copied()
        .collect()
}

/// Draw a parent index with probability proportional to `n - rank`
/// (best rank gets weight `n`, worst gets 1).
fn rank_select(order: &[usize], stream: &mut RandomStream) -> usize {
    let n = order.len();
    let total = (n * (n + 1) / 2) as f64;
    let mut target = stream.next_f64() * total;
    for (rank, &idx) in order.iter().enumerate() {
        let weight = (n - rank) as f64;
        if target < weight {
            return idx;
        }
        target -= weight;
    }
    order[n - 1]
}

/// One generation: the `elite_count` best members survive unchanged; the
/// remaining slots are filled by rank-proportional parent selection,
/// single-point crossover with probability `crossover_rate` (parent copy
/// otherwise), and per-coordinate Gaussian mutation with probability
/// `mutation_rate` and scale `mutation_scale * (upper - lower)`.
pub fn ga_step(
    population: &mut Population,
    params: &GaParams,
    stream: &mut RandomStream,
    ctx: &mut RunCtx,
) -> Result<()> {
    let n = population.len();
    if n < 2 {
        return Err(contract_error(format!("ga_step requires n >= 2, got {n}")));
    }
    let dim = ctx.problem().dimension();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        population
            .member(a)
            .fitness
            .total_cmp(&population.member(b).fitness)
            .then(a.cmp(&b))
    });

    let mut next = Vec::with_capacity(n);
    for &idx in order.iter().take(params.elite_count) {
        next.push(population.member(idx).clone());
    }

    while next.len() < n {
        let p1 = rank_select(&order, stream);
        let p2 = rank_select(&order, stream);
        let parent1 = &population.member(p1).position;
        let parent2 = &population.member(p2).position;

        let mut child: Vec<f64> = if stream.next_f64() < params.crossover_rate && dim >= 2 {
            let cut = 1 + stream.index(dim - 1);
            single_point_crossover(parent1.as_slice(), parent2.as_slice(), cut)
        } else {
            parent1.as_slice().to_vec()
        };

        for d in 0..dim {
            if stream.next_f64() < params.mutation_rate {
                let width = ctx.problem().upper()[d] - ctx.problem().lower()[d];
                child[d] += stream.gaussian() * params.mutation_scale * width;
            }
        }

        let candidate = clamp_to_bounds(&PositionVector::new(child)?, ctx.problem());
        match ctx.try_candidate(candidate)? {
            Some((pos, fitness)) => next.push(Individual::new(pos, fitness)),
            // Rejected by the constraint policy: the first parent survives.
            None => next.push(population.member(p1).clone()),
        }
    }

    *population = Population::from_members(next)?;
    Ok(())
}
