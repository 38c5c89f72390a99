//! Test problems: a standard smooth suite and a grid of Gaussian islands
//! with constrained, isolated feasible regions.

use std::f64::consts::{E, PI};

use crate::error::{contract_error, Error, Result};
use crate::position::PositionVector;
use crate::problem::{wrap_constrained, ConstraintPolicy, Problem};

/// Parameters of the multi-island function: Gaussian peaks of weight
/// `|i| + |j|` on every integer grid point of `[-N, N]^2`, with the feasible
/// domain restricted to disjoint L1 diamonds of radius `b = 1/a` around the
/// grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IslandFunctionParams {
    /// Grid half-extent `N`.
    pub n: i64,
    /// Peak sharpness `a`.
    pub a: f64,
    /// Island L1 radius, always exactly `1/a`.
    pub b: f64,
}

impl IslandFunctionParams {
    pub fn new(n: i64, a: f64) -> Result<Self> {
        if n <= 0 {
            return Err(contract_error(format!("island grid extent must be positive, got {n}")));
        }
        if !(a > 0.0) {
            return Err(contract_error(format!("island sharpness must be positive, got {a}")));
        }
        Ok(IslandFunctionParams { n, a, b: 1.0 / a })
    }
}

impl Default for IslandFunctionParams {
    fn default() -> Self {
        IslandFunctionParams::new(100, 10.0).expect("default island parameters are valid")
    }
}

/// Exponent below which `exp` underflows to zero in f64; terms whose
/// exponent argument falls under it contribute exactly nothing to the sum.
const EXP_UNDERFLOW: f64 = -745.0;

/// Value of the island function
/// `sum_{i,j in [-N,N]} (|i|+|j|) * exp(-a(x-i)^2 - a(y-j)^2)`.
///
/// Grid points with `a(x-i)^2 > 745` alone are skipped: their terms
/// underflow to exactly zero in double precision, so the truncated sum is
/// bit-identical to the full one at ~1e4 times the speed.
pub fn multi_island_value(x: f64, y: f64, params: &IslandFunctionParams) -> f64 {
    let n = params.n;
    let reach = (-EXP_UNDERFLOW / params.a).sqrt();
    let i_lo = ((x - reach).ceil() as i64).max(-n);
    let i_hi = ((x + reach).floor() as i64).min(n);
    let j_lo = ((y - reach).ceil() as i64).max(-n);
    let j_hi = ((y + reach).floor() as i64).min(n);
    let mut sum = 0.0;
    for i in i_lo..=i_hi {
        let dx = x - i as f64;
        let ex = params.a * dx * dx;
        for j in j_lo..=j_hi {
            let dy = y - j as f64;
            let arg = -ex - params.a * dy * dy;
            if arg >= EXP_UNDERFLOW {
                sum += (i.abs() + j.abs()) as f64 * arg.exp();
            }
        }
    }
    sum
}

fn nearest_grid(coord: f64, n: i64) -> i64 {
    (coord.round_ties_even() as i64).clamp(-n, n)
}

/// True iff `(x, y)` lies inside some island diamond
/// `|x-i| + |y-j| <= b` with `i, j` in `[-N, N]`.
///
/// Per-axis rounding minimizes the L1 distance over the grid, so checking
/// the nearest grid point is exact.
pub fn multi_island_feasible(x: f64, y: f64, params: &IslandFunctionParams) -> bool {
    let i = nearest_grid(x, params.n);
    let j = nearest_grid(y, params.n);
    (x - i as f64).abs() + (y - j as f64).abs() <= params.b
}

/// Exact function value at grid point `(i, j)`: the local peak height of
/// island `(i, j)`.
pub fn island_peak_oracle(i: i64, j: i64, params: &IslandFunctionParams) -> Result<f64> {
    if i.abs() > params.n || j.abs() > params.n {
        return Err(contract_error(format!(
            "island index ({i}, {j}) outside grid [-{n}, {n}]^2",
            n = params.n
        )));
    }
    Ok(multi_island_value(i as f64, j as f64, params))
}

/// Snap a point to the nearest feasible point of the closest island:
/// identity inside a diamond, otherwise the L1 projection onto the
/// diamond boundary.
pub fn island_repair(x: f64, y: f64, params: &IslandFunctionParams) -> (f64, f64) {
    let i = nearest_grid(x, params.n) as f64;
    let j = nearest_grid(y, params.n) as f64;
    let (dx, dy) = (x - i, y - j);
    let (p, q) = (dx.abs(), dy.abs());
    if p + q <= params.b {
        return (x, y);
    }
    let t = (p + q - params.b) / 2.0;
    let (mut u, mut v) = (p - t, q - t);
    if u < 0.0 {
        (u, v) = (0.0, params.b);
    } else if v < 0.0 {
        (u, v) = (params.b, 0.0);
    }
    // Rounding in `grid + offset` can leave the result an ulp outside the
    // diamond; shrink the offsets until the round-trip lands inside.
    for _ in 0..100 {
        let (fx, fy) = (i + u.copysign(dx), j + v.copysign(dy));
        if (fx - i).abs() + (fy - j).abs() <= params.b {
            return (fx, fy);
        }
        u *= 1.0 - 1e-12;
        v *= 1.0 - 1e-12;
    }
    (i, j)
}

/// The island landscape as a minimization problem (peaks negated), with
/// feasibility predicate, repair projector, and the requested constraint
/// policy attached. Box bounds extend `b` past the outermost grid points.
pub fn island_problem(params: IslandFunctionParams, policy: ConstraintPolicy) -> Result<Problem> {
    let half = params.n as f64 + params.b;
    let corner = island_peak_oracle(params.n, params.n, &params)?;
    let base = Problem::new(
        "island",
        move |p| -multi_island_value(p[0], p[1], &params),
        PositionVector::new(vec![-half; 2])?,
        PositionVector::new(vec![half; 2])?,
    )?
    .with_feasibility(move |p| multi_island_feasible(p[0], p[1], &params))
    .with_projector(move |p| {
        let (x, y) = island_repair(p[0], p[1], &params);
        vec![x, y]
    })
    .with_known_optimum(
        PositionVector::new(vec![params.n as f64, params.n as f64])?,
        -corner,
    )?;
    wrap_constrained(base, policy)
}

/// The smooth benchmark suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardFunction {
    Sphere,
    Rastrigin,
    Ackley,
    Rosenbrock,
}

impl StandardFunction {
    pub fn name(&self) -> &'static str {
        match self {
            StandardFunction::Sphere => "sphere",
            StandardFunction::Rastrigin => "rastrigin",
            StandardFunction::Ackley => "ackley",
            StandardFunction::Rosenbrock => "rosenbrock",
        }
    }

    /// Instantiate at a given dimension with the conventional box bounds
    /// and the known optimum attached.
    pub fn problem(&self, dimension: usize) -> Result<Problem> {
        if dimension == 0 {
            return Err(contract_error("problem dimension must be positive"));
        }
        let (half_lo, half_hi) = match self {
            StandardFunction::Sphere | StandardFunction::Rastrigin => (-5.12, 5.12),
            StandardFunction::Ackley => (-32.768, 32.768),
            StandardFunction::Rosenbrock => (-5.0, 10.0),
        };
        let lower = PositionVector::new(vec![half_lo; dimension])?;
        let upper = PositionVector::new(vec![half_hi; dimension])?;
        let (optimum, f_min) = match self {
            StandardFunction::Rosenbrock => (PositionVector::new(vec![1.0; dimension])?, 0.0),
            _ => (PositionVector::zeros(dimension), 0.0),
        };
        let problem = match self {
            StandardFunction::Sphere => Problem::new(
                self.name(),
                |x| x.iter().map(|v| v * v).sum(),
                lower,
                upper,
            )?,
            StandardFunction::Rastrigin => Problem::new(
                self.name(),
                |x| {
                    10.0 * x.len() as f64
                        + x.iter()
                            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
                            .sum::<f64>()
                },
                lower,
                upper,
            )?,
            StandardFunction::Ackley => Problem::new(
                self.name(),
                |x| {
                    let d = x.len() as f64;
                    let rms = (x.iter().map(|v| v * v).sum::<f64>() / d).sqrt();
                    let cos_mean = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
                    -20.0 * (-0.2 * rms).exp() - cos_mean.exp() + 20.0 + E
                },
                lower,
                upper,
            )?,
            StandardFunction::Rosenbrock => Problem::new(
                self.name(),
                |x| {
                    x.windows(2)
                        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                        .sum()
                },
                lower,
                upper,
            )?,
        };
        problem.with_known_optimum(optimum, f_min)
    }

    pub fn all() -> [StandardFunction; 4] {
        [
            StandardFunction::Sphere,
            StandardFunction::Rastrigin,
            StandardFunction::Ackley,
            StandardFunction::Rosenbrock,
        ]
    }
}

/// Options for [`problem_by_name`].
#[derive(Debug, Clone, Copy)]
pub struct ProblemOptions {
    pub dimension: usize,
    pub island: IslandFunctionParams,
    pub policy: ConstraintPolicy,
}

impl Default for ProblemOptions {
    fn default() -> Self {
        ProblemOptions {
            dimension: 2,
            island: IslandFunctionParams::default(),
            policy: ConstraintPolicy::Repair,
        }
    }
}

/// Resolve a CLI problem name to a concrete problem.
pub fn problem_by_name(name: &str, options: &ProblemOptions) -> Result<Problem> {
    match name {
        "sphere" => StandardFunction::Sphere.problem(options.dimension),
        "rastrigin" => StandardFunction::Rastrigin.problem(options.dimension),
        "ackley" => StandardFunction::Ackley.problem(options.dimension),
        "rosenbrock" => StandardFunction::Rosenbrock.problem(options.dimension),
        "island" => {
            if options.dimension != 2 {
                return Err(Error::Config(format!(
                    "island is two-dimensional; got dimension {}",
                    options.dimension
                )));
            }
            island_problem(options.island, options.policy)
        }
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}
