//! Problem definition, bounds handling, and evaluation accounting.

use std::fmt;
use std::sync::Arc;

use crate::error::{contract_error, Error, Result};
use crate::position::PositionVector;

type Objective = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type Predicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;
type Projection = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// How a constrained problem treats infeasible candidates.
///
/// `Reject` discards the move (no evaluation spent); `Repair` snaps the
/// candidate to the nearest feasible point using the problem's projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintPolicy {
    Reject,
    Repair,
}

impl ConstraintPolicy {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "reject" => Ok(ConstraintPolicy::Reject),
            "repair" => Ok(ConstraintPolicy::Repair),
            other => Err(Error::Config(format!(
                "unknown constraint policy '{other}' (expected 'reject' or 'repair')"
            ))),
        }
    }
}

/// A minimization problem: deterministic objective over a box, with an
/// optional feasibility predicate for constrained domains and an optional
/// known optimum for success-rate measurement.
///
/// Maximization problems are negated at construction; everything downstream
/// assumes minimization.
#[derive(Clone)]
pub struct Problem {
    name: String,
    dimension: usize,
    objective: Objective,
    lower: PositionVector,
    upper: PositionVector,
    feasibility: Option<Predicate>,
    projector: Option<Projection>,
    policy: Option<ConstraintPolicy>,
    known_optimum: Option<(PositionVector, f64)>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("policy", &self.policy)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        lower: PositionVector,
        upper: PositionVector,
    ) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(contract_error("bounds must be non-empty and of equal length"));
        }
        for (lo, hi) in lower.iter().zip(upper.iter()) {
            if !(lo < hi) {
                return Err(contract_error(format!(
                    "bounds require lower < upper componentwise, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Problem {
            name: name.into(),
            dimension: lower.len(),
            objective: Arc::new(objective),
            lower,
            upper,
            feasibility: None,
            projector: None,
            policy: None,
            known_optimum: None,
        })
    }

    pub fn with_feasibility(
        mut self,
        feasibility: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.feasibility = Some(Arc::new(feasibility));
        self
    }

    /// Attach a projection onto the feasible set, enabling the `Repair`
    /// constraint policy.
    pub fn with_projector(
        mut self,
        projector: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.projector = Some(Arc::new(projector));
        self
    }

    pub fn with_known_optimum(mut self, position: PositionVector, value: f64) -> Result<Self> {
        if position.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: position.len(),
            });
        }
        self.known_optimum = Some((position, value));
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn lower(&self) -> &PositionVector {
        &self.lower
    }

    pub fn upper(&self) -> &PositionVector {
        &self.upper
    }

    pub fn known_optimum(&self) -> Option<(&PositionVector, f64)> {
        self.known_optimum.as_ref().map(|(p, v)| (p, *v))
    }

    pub fn has_feasibility(&self) -> bool {
        self.feasibility.is_some()
    }

    pub fn policy(&self) -> Option<ConstraintPolicy> {
        self.policy
    }

    /// Check the feasibility predicate; unconstrained problems are
    /// feasible everywhere.
    pub fn is_feasible(&self, position: &PositionVector) -> bool {
        match &self.feasibility {
            Some(pred) => pred(position.as_slice()),
            None => true,
        }
    }

    /// Project a point onto the feasible set, if the problem carries a
    /// projector.
    pub fn project(&self, position: &PositionVector) -> Option<PositionVector> {
        self.projector.as_ref().map(|p| {
            PositionVector::new(p(position.as_slice()))
                .expect("projector produced non-finite point")
        })
    }

    /// Raw objective call without accounting. Prefer [`evaluate`].
    pub(crate) fn objective_value(&self, position: &PositionVector) -> f64 {
        (self.objective)(position.as_slice())
    }
}

/// Activate a constraint policy on a problem with a feasibility predicate.
///
/// Feasible candidates pass through unchanged under either policy. `Repair`
/// requires the problem to carry a projector.
pub fn wrap_constrained(base: Problem, policy: ConstraintPolicy) -> Result<Problem> {
    if base.feasibility.is_none() {
        return Err(contract_error(
            "wrap_constrained requires a feasibility predicate on the base problem",
        ));
    }
    if policy == ConstraintPolicy::Repair && base.projector.is_none() {
        return Err(contract_error(
            "repair policy requires a feasible-set projector on the base problem",
        ));
    }
    Ok(Problem {
        policy: Some(policy),
        ..base
    })
}

/// Counts objective calls. One counter per run; every evaluation goes
/// through it so the count is exact.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalCounter {
    used: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        EvalCounter::default()
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

/// Evaluate the objective at a position, incrementing the counter by
/// exactly one. Errors on dimension mismatch and on non-finite objective
/// output.
pub fn evaluate(
    problem: &Problem,
    position: &PositionVector,
    counter: &mut EvalCounter,
) -> Result<f64> {
    if position.len() != problem.dimension {
        return Err(Error::DimensionMismatch {
            expected: problem.dimension,
            actual: position.len(),
        });
    }
    let value = problem.objective_value(position);
    counter.used += 1;
    if !value.is_finite() {
        return Err(Error::InvalidEvaluation {
            value,
            context: format!("problem '{}'", problem.name),
        });
    }
    Ok(value)
}

/// Project each coordinate into `[lower_d, upper_d]`; in-bounds inputs are
/// returned unchanged.
pub fn clamp_to_bounds(position: &PositionVector, problem: &Problem) -> PositionVector {
    let coords = position
        .iter()
        .zip(problem.lower.iter().zip(problem.upper.iter()))
        .map(|(x, (lo, hi))| x.clamp(*lo, *hi))
        .collect();
    PositionVector::new(coords).expect("clamped coordinates are finite")
}

/// The generic increment update: `clamp(position + delta)` with a unit time
/// step. Errors on non-finite delta components.
pub fn apply_increment(
    position: &PositionVector,
    delta: &[f64],
    problem: &Problem,
) -> Result<PositionVector> {
    if position.len() != delta.len() {
        return Err(Error::DimensionMismatch {
            expected: position.len(),
            actual: delta.len(),
        });
    }
    if let Some(bad) = delta.iter().find(|d| !d.is_finite()) {
        return Err(Error::NonFinite(format!("increment component {bad}")));
    }
    let moved: Vec<f64> = position.iter().zip(delta.iter()).map(|(x, d)| x + d).collect();
    Ok(clamp_to_bounds(&PositionVector::new(moved)?, problem))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sphere(dim: usize, half_width: f64) -> Problem {
        Problem::new(
            "sphere",
            |x| x.iter().map(|v| v * v).sum(),
            PositionVector::new(vec![-half_width; dim]).unwrap(),
            PositionVector::new(vec![half_width; dim]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_counts_and_values() {
        let p = sphere(2, 5.0);
        let mut counter = EvalCounter::new();
        let zero = PositionVector::zeros(2);
        assert_eq!(evaluate(&p, &zero, &mut counter).unwrap(), 0.0);
        let x = PositionVector::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(evaluate(&p, &x, &mut counter).unwrap(), 5.0);
        assert_eq!(counter.used(), 2);
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let p = sphere(2, 5.0);
        let mut counter = EvalCounter::new();
        let x = PositionVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            evaluate(&p, &x, &mut counter),
            Err(Error::DimensionMismatch { expected: 2, actual: 3 })
        ));
        assert_eq!(counter.used(), 0);
    }

    #[test]
    fn evaluate_flags_non_finite_objective() {
        let p = Problem::new(
            "bad",
            |_| f64::NAN,
            PositionVector::new(vec![0.0]).unwrap(),
            PositionVector::new(vec![1.0]).unwrap(),
        )
        .unwrap();
        let mut counter = EvalCounter::new();
        let x = PositionVector::new(vec![0.5]).unwrap();
        assert!(matches!(
            evaluate(&p, &x, &mut counter),
            Err(Error::InvalidEvaluation { .. })
        ));
    }

    #[test]
    fn clamp_projects_and_preserves() {
        let p1 = Problem::new(
            "unit",
            |_| 0.0,
            PositionVector::new(vec![0.0]).unwrap(),
            PositionVector::new(vec![1.0]).unwrap(),
        )
        .unwrap();
        let clamped = clamp_to_bounds(&PositionVector::new(vec![1.5]).unwrap(), &p1);
        assert_eq!(clamped.as_slice(), &[1.0]);
        let inside = clamp_to_bounds(&PositionVector::new(vec![0.5]).unwrap(), &p1);
        assert_eq!(inside.as_slice(), &[0.5]);

        let p2 = Problem::new(
            "box",
            |_| 0.0,
            PositionVector::new(vec![0.0, 0.0]).unwrap(),
            PositionVector::new(vec![5.0, 5.0]).unwrap(),
        )
        .unwrap();
        let both = clamp_to_bounds(&PositionVector::new(vec![-3.0, 7.0]).unwrap(), &p2);
        assert_eq!(both.as_slice(), &[0.0, 5.0]);
    }

    #[test]
    fn apply_increment_cases() {
        let p = sphere(2, 5.0);
        let x = PositionVector::new(vec![1.0, 1.0]).unwrap();
        let same = apply_increment(&x, &[0.0, 0.0], &p).unwrap();
        assert_eq!(same.as_slice(), &[1.0, 1.0]);

        let moved = apply_increment(&PositionVector::zeros(2), &[1.0, 2.0], &p).unwrap();
        assert_eq!(moved.as_slice(), &[1.0, 2.0]);

        let unit = Problem::new(
            "unit",
            |_| 0.0,
            PositionVector::new(vec![0.0]).unwrap(),
            PositionVector::new(vec![1.0]).unwrap(),
        )
        .unwrap();
        let clamped = apply_increment(
            &PositionVector::new(vec![1.0]).unwrap(),
            &[0.5],
            &unit,
        )
        .unwrap();
        assert_eq!(clamped.as_slice(), &[1.0]);

        assert!(apply_increment(&x, &[f64::NAN, 0.0], &p).is_err());
    }

    #[test]
    fn bounds_must_be_ordered() {
        assert!(Problem::new(
            "bad",
            |_| 0.0,
            PositionVector::new(vec![1.0]).unwrap(),
            PositionVector::new(vec![1.0]).unwrap(),
        )
        .is_err());
    }
}
