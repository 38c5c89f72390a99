//! Convergence and stability analysis: contraction estimation, linear
//! 2x2 system stability, the extended bat-algorithm recurrence with its
//! analytic stability region, and Markov-chain convergence rates.

use nalgebra::DMatrix;

use crate::error::{contract_error, Error, Result};
use crate::position::PositionVector;
use crate::rng::RandomStream;

/// Eigenvalue tolerance for classifying boundary cases deterministically.
pub const STABILITY_EIGEN_TOL: f64 = 1e-12;

/// Dense real 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2x2 {
    pub c11: f64,
    pub c12: f64,
    pub c21: f64,
    pub c22: f64,
}

impl Matrix2x2 {
    pub fn new(c11: f64, c12: f64, c21: f64, c22: f64) -> Self {
        Matrix2x2 { c11, c12, c21, c22 }
    }

    pub fn trace(&self) -> f64 {
        self.c11 + self.c22
    }

    pub fn det(&self) -> f64 {
        self.c11 * self.c22 - self.c12 * self.c21
    }

    pub fn apply(&self, x: f64, v: f64) -> (f64, f64) {
        (self.c11 * x + self.c12 * v, self.c21 * x + self.c22 * v)
    }
}

/// Parameters of the extended bat-algorithm recurrence
/// `Y_{k+1} = C Y_k + M g` with state `Y = (x, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaSystemParams {
    pub theta: f64,
    pub zeta: f64,
    /// Best-solution constant `g`.
    pub g: f64,
}

/// The system matrix `C = [[1-zeta, theta], [-zeta, theta]]` and input
/// vector `M = (zeta, zeta)` of the extended bat recurrence.
pub fn ba_system_matrix(theta: f64, zeta: f64) -> (Matrix2x2, (f64, f64)) {
    (
        Matrix2x2::new(1.0 - zeta, theta, -zeta, theta),
        (zeta, zeta),
    )
}

/// Maximum eigenvalue modulus of a 2x2 matrix. Complex pairs have modulus
/// `sqrt(det)` (the discriminant is negative only when `det > 0`).
pub fn spectral_radius(c: &Matrix2x2) -> f64 {
    let (tr, det) = (c.trace(), c.det());
    let disc = tr * tr - 4.0 * det;
    if disc < 0.0 {
        det.sqrt()
    } else {
        let root = disc.sqrt();
        let l1 = 0.5 * (tr + root);
        let l2 = 0.5 * (tr - root);
        l1.abs().max(l2.abs())
    }
}

/// Lyapunov classification of the linear system `Y_{k+1} = C Y_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityVerdict {
    AsymptoticallyStable,
    MarginallyStable,
    Unstable,
}

/// Threshold the spectral radius against 1 with [`STABILITY_EIGEN_TOL`].
pub fn lyapunov_verdict(c: &Matrix2x2) -> StabilityVerdict {
    let rho = spectral_radius(c);
    if rho < 1.0 - STABILITY_EIGEN_TOL {
        StabilityVerdict::AsymptoticallyStable
    } else if (rho - 1.0).abs() <= STABILITY_EIGEN_TOL {
        StabilityVerdict::MarginallyStable
    } else {
        StabilityVerdict::Unstable
    }
}

/// The analytic stability region of the extended bat system:
/// `-1 <= theta <= 1`, `zeta >= 0`, `2*theta - zeta + 2 >= 0`.
///
/// These three inequalities are exactly the Jury criteria for the
/// characteristic polynomial `l^2 - (1 + theta - zeta) l + theta`, so the
/// region coincides with `spectral_radius(C) <= 1`.
pub fn ba_stability_region(theta: f64, zeta: f64) -> bool {
    (-1.0..=1.0).contains(&theta) && zeta >= 0.0 && 2.0 * theta - zeta + 2.0 >= 0.0
}

/// Iterate the extended bat recurrence for `steps` steps, returning all
/// `steps + 1` states `(x_k, v_k)` including the start.
pub fn simulate_ba_system(
    params: &BaSystemParams,
    x0: f64,
    v0: f64,
    steps: usize,
) -> Vec<(f64, f64)> {
    let (c, m) = ba_system_matrix(params.theta, params.zeta);
    let mut states = Vec::with_capacity(steps + 1);
    let (mut x, mut v) = (x0, v0);
    states.push((x, v));
    for _ in 0..steps {
        let (cx, cv) = c.apply(x, v);
        x = cx + m.0 * params.g;
        v = cv + m.1 * params.g;
        states.push((x, v));
    }
    states
}

/// Empirical lower bound on the Lipschitz constant of a position map: the
/// maximum over sampled pairs of `rho(A(x), A(y)) / rho(x, y)`, with pairs
/// drawn uniformly from the box `[lo, hi]^dim`. Pairs closer than 1e-12
/// under `rho` are skipped.
pub fn contraction_factor(
    map: impl Fn(&PositionVector) -> PositionVector,
    metric: impl Fn(&PositionVector, &PositionVector) -> f64,
    samples: usize,
    lo: f64,
    hi: f64,
    dim: usize,
    stream: &mut RandomStream,
) -> Result<f64> {
    if samples == 0 {
        return Err(contract_error("contraction_factor needs at least one pair"));
    }
    let draw_point = |stream: &mut RandomStream| -> Result<PositionVector> {
        let coords: Result<Vec<f64>> = (0..dim).map(|_| stream.uniform(lo, hi)).collect();
        PositionVector::new(coords?)
    };
    let mut best: Option<f64> = None;
    for _ in 0..samples {
        let x = draw_point(stream)?;
        let y = draw_point(stream)?;
        let d = metric(&x, &y);
        if d < 1e-12 {
            continue;
        }
        let ratio = metric(&map(&x), &map(&y)) / d;
        best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
    }
    best.ok_or_else(|| contract_error("no sample pair was separated by more than 1e-12"))
}

/// A row-stochastic transition matrix.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    matrix: DMatrix<f64>,
}

impl TransitionMatrix {
    /// Validate squareness (size >= 2), entry range, and row sums within
    /// 1e-12 of one.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        if m < 2 {
            return Err(contract_error("transition matrix needs size >= 2"));
        }
        for row in &rows {
            if row.len() != m {
                return Err(contract_error("transition matrix must be square"));
            }
            if row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(contract_error("transition probabilities must lie in [0, 1]"));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(contract_error(format!("row sums to {sum}, expected 1")));
            }
        }
        let matrix = DMatrix::from_fn(m, m, |i, j| rows[i][j]);
        Ok(TransitionMatrix { matrix })
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// One step of the distribution: `pi' = pi P`.
    fn step_distribution(&self, pi: &[f64]) -> Vec<f64> {
        let m = self.size();
        (0..m)
            .map(|j| (0..m).map(|i| pi[i] * self.matrix[(i, j)]).sum())
            .collect()
    }

    /// Stationary distribution: solve `pi P = pi`, `sum pi = 1`.
    pub fn stationary(&self) -> Result<Vec<f64>> {
        let m = self.size();
        // (P^T - I) pi = 0 with the last equation replaced by sum = 1.
        let mut a = self.matrix.transpose() - DMatrix::<f64>::identity(m, m);
        for j in 0..m {
            a[(m - 1, j)] = 1.0;
        }
        let mut b = DMatrix::zeros(m, 1);
        b[(m - 1, 0)] = 1.0;
        let solution = a
            .lu()
            .solve(&b)
            .ok_or(Error::NonConvergentChain)?;
        Ok(solution.column(0).iter().copied().collect())
    }
}

/// Second-largest eigenvalue modulus of a row-stochastic matrix: the full
/// spectrum is computed and the single eigenvalue closest to 1 (the known
/// `lambda_1 = 1`) is removed.
pub fn markov_second_eigenvalue(p: &TransitionMatrix) -> f64 {
    let eigen = p.matrix.complex_eigenvalues();
    let mut moduli: Vec<f64> = eigen.iter().map(|l| l.norm()).collect();
    // Drop the eigenvalue closest to 1.
    let closest = moduli
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| (*a - 1.0).abs().total_cmp(&(*b - 1.0).abs()))
        .map(|(i, _)| i)
        .expect("matrix has at least two eigenvalues");
    moduli.swap_remove(closest);
    moduli.into_iter().fold(0.0, f64::max)
}

/// Outcome of the empirical convergence-rate fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceRate {
    /// Fitted geometric decay ratio of the total-variation distance.
    Geometric(f64),
    /// The start was already the stationary distribution: distance 0 at
    /// k = 0, no rate to fit.
    DegenerateStart,
}

/// Iterate a distribution under the chain, record the total-variation
/// distance to the stationary distribution at each step, and fit the
/// geometric decay ratio over the tail half of the horizon.
///
/// Chains without a unique stationary distribution (second eigenvalue
/// modulus 1) are reported as non-convergent.
pub fn empirical_convergence_rate(
    p: &TransitionMatrix,
    initial: &[f64],
    k_max: usize,
) -> Result<ConvergenceRate> {
    if initial.len() != p.size() {
        return Err(Error::DimensionMismatch {
            expected: p.size(),
            actual: initial.len(),
        });
    }
    if initial.iter().any(|x| *x < 0.0) || (initial.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(contract_error("initial distribution must be non-negative and sum to 1"));
    }
    if k_max < 4 {
        return Err(contract_error("k_max must be at least 4 to fit a rate"));
    }
    if markov_second_eigenvalue(p) >= 1.0 - STABILITY_EIGEN_TOL {
        return Err(Error::NonConvergentChain);
    }

    let stationary = p.stationary()?;
    let tv = |pi: &[f64]| -> f64 {
        0.5 * pi
            .iter()
            .zip(stationary.iter())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    };

    let mut distances = Vec::with_capacity(k_max + 1);
    let mut pi = initial.to_vec();
    distances.push(tv(&pi));
    for _ in 0..k_max {
        pi = p.step_distribution(&pi);
        distances.push(tv(&pi));
    }

    if distances[0] < 1e-14 {
        return Ok(ConvergenceRate::DegenerateStart);
    }

    // Geometric-mean ratio of successive distances over the tail half.
    // Distances under 1e-12 sit at double-precision noise around the
    // stationary point and would corrupt the fit.
    let tail = k_max / 2..k_max;
    let mut log_sum = 0.0;
    let mut count = 0usize;
    for k in tail {
        if distances[k] > 1e-12 && distances[k + 1] > 1e-12 {
            log_sum += (distances[k + 1] / distances[k]).ln();
            count += 1;
        }
    }
    if count == 0 {
        // Distances hit zero before the tail: the chain converged
        // immediately (rank-one behaviour).
        return Ok(ConvergenceRate::Geometric(0.0));
    }
    Ok(ConvergenceRate::Geometric((log_sum / count as f64).exp()))
}
