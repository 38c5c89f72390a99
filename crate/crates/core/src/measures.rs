//! Performance measures over multi-run records: success rates,
//! fixed-budget statistics, fixed-target evaluation counts, and zero-sum
//! rankings.

use std::collections::BTreeMap;

use crate::error::{contract_error, Error, Result};
use crate::problem::Problem;
use crate::record::RunRecord;

/// What counts as a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuccessMode {
    /// `|f(x) - f_min| <= delta`.
    Objective,
    /// `|x_d - x*_d| <= delta` for every coordinate.
    Position,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessCriterion {
    pub mode: SuccessMode,
    pub delta: f64,
}

impl SuccessCriterion {
    pub fn new(mode: SuccessMode, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(contract_error(format!("success delta must be > 0, got {delta}")));
        }
        Ok(SuccessCriterion { mode, delta })
    }
}

/// Whether a single record meets the criterion against the problem's
/// known optimum.
pub fn run_succeeded(
    record: &RunRecord,
    criterion: &SuccessCriterion,
    problem: &Problem,
) -> Result<bool> {
    let (x_star, f_min) = problem
        .known_optimum()
        .ok_or_else(|| contract_error("success rate requires a known optimum"))?;
    Ok(match criterion.mode {
        SuccessMode::Objective => (record.best_fitness - f_min).abs() <= criterion.delta,
        SuccessMode::Position => record
            .best_position
            .iter()
            .zip(x_star.iter())
            .all(|(x, s)| (x - s).abs() <= criterion.delta),
    })
}

/// The ratio `N_s / N_r` of runs meeting the criterion. All records must
/// come from the given problem, which must carry a known optimum.
pub fn success_rate(
    records: &[RunRecord],
    criterion: &SuccessCriterion,
    problem: &Problem,
) -> Result<f64> {
    if records.is_empty() {
        return Err(contract_error("success_rate requires at least one run"));
    }
    if records.iter().any(|r| r.problem != problem.name()) {
        return Err(contract_error("success_rate records must all share the given problem"));
    }
    let mut successes = 0usize;
    for record in records {
        if run_succeeded(record, criterion, problem)? {
            successes += 1;
        }
    }
    Ok(successes as f64 / records.len() as f64)
}

/// Final-fitness statistics at a fixed evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedBudgetStats {
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    /// Sample standard deviation (divisor `N_r - 1`; zero for a single run).
    pub sample_std: f64,
    pub median: f64,
}

/// Statistics of the final best fitnesses. Mixing runs with different
/// budgets is a contract violation: equal budgets are what make the
/// comparison fair.
pub fn fixed_budget_stats(records: &[RunRecord]) -> Result<FixedBudgetStats> {
    if records.is_empty() {
        return Err(contract_error("fixed_budget_stats requires at least one run"));
    }
    let budget = records[0].budget;
    if records.iter().any(|r| r.budget != budget) {
        return Err(contract_error(
            "fixed_budget_stats requires equal evaluation budgets across runs",
        ));
    }
    let mut finals: Vec<f64> = records.iter().map(|r| r.best_fitness).collect();
    finals.sort_unstable_by(|a, b| a.total_cmp(b));
    let n = finals.len();
    let mean = finals.iter().sum::<f64>() / n as f64;
    let sample_std = if n == 1 {
        0.0
    } else {
        (finals.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    let median = if n % 2 == 1 {
        finals[n / 2]
    } else {
        0.5 * (finals[n / 2 - 1] + finals[n / 2])
    };
    Ok(FixedBudgetStats {
        best: finals[0],
        worst: finals[n - 1],
        mean,
        sample_std,
        median,
    })
}

/// Smallest evaluation count at which the best-so-far fitness reached the
/// target; `None` if the run never got there within its budget.
pub fn evals_to_target(record: &RunRecord, target: f64) -> Option<u64> {
    record
        .trace
        .iter()
        .find(|(_, f)| *f <= target)
        .map(|(evals, _)| *evals)
}

/// Per-problem ranks of algorithms by mean final fitness, with tied values
/// sharing the mean of their positions. Every column of `m` algorithms
/// sums to `m(m+1)/2` — the zero-sum property of relative ranking.
#[derive(Debug, Clone)]
pub struct RankingTable {
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    /// `ranks[p][a]`: rank of `algorithms[a]` on `problems[p]`.
    pub ranks: Vec<Vec<f64>>,
    /// Per-algorithm mean rank across problems.
    pub mean_ranks: Vec<f64>,
}

impl RankingTable {
    pub fn rank(&self, algorithm: &str, problem: &str) -> Option<f64> {
        let a = self.algorithms.iter().position(|x| x == algorithm)?;
        let p = self.problems.iter().position(|x| x == problem)?;
        Some(self.ranks[p][a])
    }

    pub fn mean_rank(&self, algorithm: &str) -> Option<f64> {
        let a = self.algorithms.iter().position(|x| x == algorithm)?;
        Some(self.mean_ranks[a])
    }
}

/// Averaged ranks (1 = smallest value) of one column of values.
fn averaged_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) share the mean rank.
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

/// Rank `m >= 2` algorithms per problem from their mean final fitness.
/// Every `(algorithm, problem)` cell must be present.
pub fn rank_algorithms(cells: &BTreeMap<(String, String), f64>) -> Result<RankingTable> {
    let mut algorithms: Vec<String> = cells.keys().map(|(a, _)| a.clone()).collect();
    algorithms.dedup();
    algorithms.sort();
    algorithms.dedup();
    let mut problems: Vec<String> = cells.keys().map(|(_, p)| p.clone()).collect();
    problems.sort();
    problems.dedup();

    if algorithms.len() < 2 {
        return Err(contract_error("ranking requires at least two algorithms"));
    }
    let mut ranks = Vec::with_capacity(problems.len());
    for problem in &problems {
        let column: Result<Vec<f64>> = algorithms
            .iter()
            .map(|algorithm| {
                cells
                    .get(&(algorithm.clone(), problem.clone()))
                    .copied()
                    .ok_or_else(|| {
                        Error::Contract(format!("missing cell ({algorithm}, {problem})"))
                    })
            })
            .collect();
        ranks.push(averaged_ranks(&column?));
    }
    let mean_ranks: Vec<f64> = (0..algorithms.len())
        .map(|a| ranks.iter().map(|col| col[a]).sum::<f64>() / problems.len() as f64)
        .collect();
    Ok(RankingTable {
        algorithms,
        problems,
        ranks,
        mean_ranks,
    })
}
