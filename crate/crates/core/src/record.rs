//! Per-run results.

use crate::position::PositionVector;

/// Everything one optimization run produced: identity (algorithm, problem,
/// seed), exact evaluation accounting, the best-so-far trace indexed by
/// evaluation count, and the final best.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub algorithm: String,
    pub problem: String,
    pub master_seed: u64,
    pub stream_id: u64,
    pub dimension: usize,
    pub population_size: usize,
    /// Evaluation budget the run was configured with.
    pub budget: u64,
    /// Objective calls actually spent (`<= budget`).
    pub evals_used: u64,
    /// `(evaluation count, best fitness so far)` — one entry per strict
    /// improvement, starting at the first evaluation. Non-increasing in
    /// fitness by construction.
    pub trace: Vec<(u64, f64)>,
    pub best_position: PositionVector,
    pub best_fitness: f64,
    /// Mean fitness of the initial population; used by the tuning
    /// meta-objective for normalization.
    pub init_mean_fitness: f64,
    /// Wall-clock time. Excluded from determinism guarantees.
    pub wall_ms: f64,
}

impl RunRecord {
    /// Best-so-far fitness after `evals` evaluations, if any evaluation
    /// happened by then.
    pub fn best_at(&self, evals: u64) -> Option<f64> {
        self.trace
            .iter()
            .take_while(|(e, _)| *e <= evals)
            .last()
            .map(|(_, f)| *f)
    }
}
