//! Probability distributions and random-walk machinery.
//!
//! Heavy-tailed step generators (Cauchy, Lévy via Mantegna's algorithm),
//! scalar random walks with pluggable step samplers, and the diffusion-law
//! estimator that separates Brownian from super-diffusive behaviour.

use statrs::function::gamma::gamma;

use crate::error::{contract_error, Error, Result};
use crate::rng::RandomStream;

/// Location/scale parameters of the Cauchy distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyParams {
    pub mu: f64,
    pub gamma: f64,
}

impl CauchyParams {
    pub fn new(mu: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(contract_error(format!("Cauchy scale must be > 0, got {gamma}")));
        }
        Ok(CauchyParams { mu, gamma })
    }
}

/// Exponent and scale of the Lévy distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    pub beta: f64,
    pub alpha: f64,
}

impl LevyParams {
    pub fn new(beta: f64, alpha: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 2.0) {
            return Err(contract_error(format!(
                "Levy exponent must lie in (0, 2], got {beta}"
            )));
        }
        if !(alpha > 0.0) {
            return Err(contract_error(format!("Levy scale must be > 0, got {alpha}")));
        }
        Ok(LevyParams { beta, alpha })
    }
}

/// Cauchy density `(1/(pi*gamma)) * gamma^2 / ((x-mu)^2 + gamma^2)`.
pub fn cauchy_pdf(x: f64, params: &CauchyParams) -> f64 {
    let g = params.gamma;
    let d = x - params.mu;
    (1.0 / (std::f64::consts::PI * g)) * (g * g / (d * d + g * g))
}

/// Inverse CDF of the Cauchy distribution: `mu + gamma * tan(pi*(u - 1/2))`.
pub fn cauchy_inverse_cdf(u: f64, params: &CauchyParams) -> f64 {
    params.mu + params.gamma * (std::f64::consts::PI * (u - 0.5)).tan()
}

/// Draw from the Cauchy distribution via the inverse CDF.
pub fn sample_cauchy(stream: &mut RandomStream, params: &CauchyParams) -> f64 {
    cauchy_inverse_cdf(stream.next_f64(), params)
}

/// Large-step tail approximation of the Lévy density:
/// `alpha * beta * Gamma(beta) * sin(pi*beta/2) / (pi * |s|^(1+beta))`.
///
/// Valid for `|s| >> 0`; `s = 0` is a contract violation.
pub fn levy_tail_density(s: f64, params: &LevyParams) -> Result<f64> {
    if s == 0.0 {
        return Err(contract_error(
            "levy_tail_density is a large-step approximation; s must be nonzero",
        ));
    }
    let b = params.beta;
    let num = params.alpha * b * gamma(b) * (std::f64::consts::PI * b / 2.0).sin();
    Ok(num / (std::f64::consts::PI * s.abs().powf(1.0 + b)))
}

/// Validity range of Mantegna's method.
pub const MANTEGNA_BETA_MIN: f64 = 0.3;
pub const MANTEGNA_BETA_MAX: f64 = 1.99;

fn check_mantegna_beta(beta: f64) -> Result<()> {
    if !(MANTEGNA_BETA_MIN..=MANTEGNA_BETA_MAX).contains(&beta) {
        return Err(contract_error(format!(
            "Mantegna exponent must lie in [{MANTEGNA_BETA_MIN}, {MANTEGNA_BETA_MAX}], got {beta}"
        )));
    }
    Ok(())
}

/// The Gaussian scale of Mantegna's numerator:
/// `sigma_u = [Gamma(1+b) sin(pi b/2) / (Gamma((1+b)/2) * b * 2^((b-1)/2))]^(1/b)`.
pub fn mantegna_sigma_u(beta: f64) -> Result<f64> {
    check_mantegna_beta(beta)?;
    let num = gamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
    let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    Ok((num / den).powf(1.0 / beta))
}

/// Combine the two Gaussian draws of Mantegna's method: `s = u / |v|^(1/beta)`.
pub fn mantegna_combine(u: f64, v: f64, beta: f64) -> f64 {
    // |v| can be exactly zero with probability ~2^-53 per draw; floor it
    // to keep the sample finite (it stays an extreme tail event).
    u / v.abs().max(f64::MIN_POSITIVE).powf(1.0 / beta)
}

/// Approximate Lévy-stable draw by Mantegna's algorithm. Consumes exactly
/// two Gaussian draws: `u ~ N(0, sigma_u^2)`, `v ~ N(0, 1)`.
pub fn sample_levy_mantegna(stream: &mut RandomStream, beta: f64) -> Result<f64> {
    let sigma_u = mantegna_sigma_u(beta)?;
    let u = sigma_u * stream.gaussian();
    let v = stream.gaussian();
    Ok(mantegna_combine(u, v, beta))
}

/// A scalar random-walk trajectory `S_0..S_N` from origin 0.
#[derive(Debug, Clone)]
pub struct WalkTrace {
    states: Vec<f64>,
}

impl WalkTrace {
    pub fn states(&self) -> &[f64] {
        &self.states
    }

    /// Number of steps `N` (one less than the number of states).
    pub fn step_count(&self) -> usize {
        self.states.len() - 1
    }

    pub fn last(&self) -> f64 {
        *self.states.last().expect("trace holds at least the origin")
    }

    /// CSV export with header `step,state`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,state\n");
        for (i, s) in self.states.iter().enumerate() {
            out.push_str(&format!("{i},{s}\n"));
        }
        out
    }
}

/// Walk `N` steps from origin 0, each state the previous plus a drawn step.
pub fn random_walk(
    stream: &mut RandomStream,
    steps: usize,
    mut step_source: impl FnMut(&mut RandomStream) -> f64,
) -> WalkTrace {
    let mut states = Vec::with_capacity(steps + 1);
    let mut s = 0.0;
    states.push(s);
    for _ in 0..steps {
        s += step_source(stream);
        states.push(s);
    }
    WalkTrace { states }
}

/// Fitted exponent `p` of `median |S_N| ~ N^p` over an ensemble of walks.
///
/// The median (not the mean) is used so heavy-tailed ensembles with
/// divergent moments still converge. Least-squares fit of
/// `log median |S_N|` against `log N` at logarithmically spaced checkpoints.
///
/// Requires at least 100 traces of equal length with at least 1000 steps.
pub fn diffusion_exponent(ensemble: &[WalkTrace]) -> Result<f64> {
    if ensemble.len() < 100 {
        return Err(contract_error(format!(
            "diffusion_exponent needs >= 100 traces, got {}",
            ensemble.len()
        )));
    }
    let steps = ensemble[0].step_count();
    if steps < 1000 {
        return Err(contract_error(format!(
            "diffusion_exponent needs walks of >= 1000 steps, got {steps}"
        )));
    }
    if ensemble.iter().any(|t| t.step_count() != steps) {
        return Err(contract_error("diffusion_exponent needs equal-length traces"));
    }

    let checkpoints = log_spaced_checkpoints(10, steps, 16);
    let mut points = Vec::with_capacity(checkpoints.len());
    let mut abs_at = vec![0.0; ensemble.len()];
    for &n in &checkpoints {
        for (i, trace) in ensemble.iter().enumerate() {
            abs_at[i] = trace.states()[n].abs();
        }
        let med = median_in_place(&mut abs_at);
        if med > 0.0 {
            points.push(((n as f64).ln(), med.ln()));
        }
    }
    if points.len() < 2 {
        return Err(Error::NonFinite(
            "median walk distance was zero at nearly all checkpoints".into(),
        ));
    }
    Ok(least_squares_slope(&points))
}

fn log_spaced_checkpoints(min: usize, max: usize, count: usize) -> Vec<usize> {
    let (lo, hi) = ((min as f64).ln(), (max as f64).ln());
    let mut out: Vec<usize> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            (lo + t * (hi - lo)).exp().round() as usize
        })
        .collect();
    out.dedup();
    out
}

fn median_in_place(xs: &mut [f64]) -> f64 {
    let mid = xs.len() / 2;
    let (_, m, _) = xs.select_nth_unstable_by(mid, |a, b| a.total_cmp(b));
    let hi = *m;
    if xs.len() % 2 == 1 {
        hi
    } else {
        let lo = xs[..mid]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|(x, _)| x).sum();
    let sy: f64 = points.iter().map(|(_, y)| y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Hill estimate of the density tail exponent `1 + alpha` from the top
/// `tail_fraction` order statistics of `|samples|`.
///
/// For a density decaying as `|s|^-(1+beta)` the estimate converges to
/// `1 + beta`.
pub fn hill_tail_exponent(samples: &[f64], tail_fraction: f64) -> Result<f64> {
    if !(0.0 < tail_fraction && tail_fraction < 1.0) {
        return Err(contract_error("tail_fraction must lie in (0, 1)"));
    }
    let mut abs: Vec<f64> = samples.iter().map(|s| s.abs()).filter(|s| *s > 0.0).collect();
    let k = ((abs.len() as f64) * tail_fraction).ceil() as usize;
    if k < 2 || k + 1 > abs.len() {
        return Err(contract_error(format!(
            "too few samples ({}) for tail fraction {tail_fraction}",
            abs.len()
        )));
    }
    abs.sort_unstable_by(|a, b| b.total_cmp(a));
    let threshold = abs[k];
    let mean_log: f64 = abs[..k].iter().map(|x| (x / threshold).ln()).sum::<f64>() / k as f64;
    Ok(1.0 + 1.0 / mean_log)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Spouge's approximation; independent of the statrs gamma used by the
    // implementation.
    fn gamma_oracle(x: f64) -> f64 {
        const A: usize = 12;
        let x = x - 1.0;
        let mut acc = (2.0 * std::f64::consts::PI).sqrt();
        for k in 1..A {
            let kf = k as f64;
            let c = ((A as f64 - kf).powf(kf - 0.5) * (A as f64 - kf).exp())
                / (factorial(k - 1) * if k % 2 == 0 { -1.0 } else { 1.0 });
            acc += c / (x + kf);
        }
        acc * (x + A as f64).powf(x + 0.5) * (-(x + A as f64)).exp()
    }

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|i| i as f64).product::<f64>().max(1.0)
    }

    #[test]
    fn gamma_oracle_sanity() {
        assert!((gamma_oracle(1.0) - 1.0).abs() < 1e-10);
        assert!((gamma_oracle(2.0) - 1.0).abs() < 1e-10);
        assert!((gamma_oracle(5.0) - 24.0).abs() < 1e-8);
        assert!((gamma_oracle(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn cauchy_pdf_peak_and_half_width() {
        let p = CauchyParams::new(0.7, 1.0).unwrap();
        assert!((cauchy_pdf(0.7, &p) - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        let q = CauchyParams::new(-2.0, 0.5).unwrap();
        let expected = 1.0 / (2.0 * std::f64::consts::PI * q.gamma);
        assert!((cauchy_pdf(q.mu + q.gamma, &q) - expected).abs() < 1e-15);
    }

    // Adaptive Simpson quadrature, independent of the pdf implementation
    // details it integrates.
    fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        fn recurse(
            f: &impl Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                    + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
            }
        }
        recurse(f, a, b, fa, fm, fb, whole, tol, depth)
    }

    #[test]
    fn cauchy_pdf_integrates_to_one() {
        // The tail mass outside [-1e6, 1e6] is ~2/(pi*1e6), inside the
        // 1e-4 tolerance.
        let p = CauchyParams::new(0.0, 1.0).unwrap();
        let integral = adaptive_simpson(&|x| cauchy_pdf(x, &p), -1e6, 1e6, 1e-8, 60);
        assert!((integral - 1.0).abs() < 1e-4, "integral = {integral}");
    }

    #[test]
    fn cauchy_pdf_symmetric_about_mu() {
        let p = CauchyParams::new(1.3, 2.2).unwrap();
        for d in [0.1, 1.0, 7.5, 123.0] {
            assert!((cauchy_pdf(p.mu + d, &p) - cauchy_pdf(p.mu - d, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn cauchy_inverse_cdf_pinned() {
        let p = CauchyParams::new(3.0, 2.0).unwrap();
        assert!((cauchy_inverse_cdf(0.5, &p) - 3.0).abs() < 1e-12);
        assert!((cauchy_inverse_cdf(0.75, &p) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn cauchy_sample_median() {
        let p = CauchyParams::new(2.0, 1.5).unwrap();
        let mut s = RandomStream::new(11, 0);
        let mut draws: Vec<f64> = (0..100_000).map(|_| sample_cauchy(&mut s, &p)).collect();
        let med = median_in_place(&mut draws);
        assert!((med - p.mu).abs() < 0.02 * p.gamma, "median = {med}");
    }

    #[test]
    fn levy_tail_pinned_values() {
        let p = LevyParams::new(1.0, 1.0).unwrap();
        let v = levy_tail_density(10.0, &p).unwrap();
        assert!((v - 1.0 / (std::f64::consts::PI * 100.0)).abs() < 1e-12);

        // beta = 1 matches the Cauchy tail gamma/(pi s^2) with alpha <-> gamma.
        let c = CauchyParams::new(0.0, 1.0).unwrap();
        for s in [50.0, 200.0, 1e4] {
            let tail = levy_tail_density(s, &p).unwrap();
            let cauchy_tail = c.gamma / (std::f64::consts::PI * s * s);
            assert!((tail / cauchy_tail - 1.0).abs() < 1e-3);
        }

        // Evaluate the closed form against the independent gamma oracle.
        let p15 = LevyParams::new(1.5, 1.0).unwrap();
        let got = levy_tail_density(100.0, &p15).unwrap();
        let want = 1.5 * gamma_oracle(1.5) * (0.75 * std::f64::consts::PI).sin()
            / (std::f64::consts::PI * 100f64.powf(2.5));
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "got {got}, want {want}");
        assert!((got - 2.99e-6).abs() < 0.01e-6);
    }

    #[test]
    fn levy_tail_scaling_exact() {
        let p = LevyParams::new(1.5, 2.0).unwrap();
        for s in [0.5, 3.0, 40.0] {
            let ratio = levy_tail_density(2.0 * s, &p).unwrap() / levy_tail_density(s, &p).unwrap();
            assert!((ratio - 2f64.powf(-2.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn levy_tail_rejects_zero() {
        let p = LevyParams::new(1.5, 1.0).unwrap();
        assert!(levy_tail_density(0.0, &p).is_err());
    }

    #[test]
    fn mantegna_sigma_u_against_oracle() {
        let beta = 1.5;
        let got = mantegna_sigma_u(beta).unwrap();
        let num = gamma_oracle(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
        let den = gamma_oracle((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
        let want = (num / den).powf(1.0 / beta);
        assert!((got - want).abs() < 1e-9, "got {got}, want {want}");
        assert!((got - 0.6966).abs() < 5e-4);
    }

    #[test]
    fn mantegna_combine_pinned() {
        assert!((mantegna_combine(0.6966, 1.0, 1.5) - 0.6966).abs() < 1e-15);
    }

    #[test]
    fn mantegna_beta_range_enforced() {
        let mut s = RandomStream::new(1, 0);
        assert!(sample_levy_mantegna(&mut s, 0.2).is_err());
        assert!(sample_levy_mantegna(&mut s, 2.0).is_err());
        assert!(sample_levy_mantegna(&mut s, 1.5).is_ok());
    }

    #[test]
    fn mantegna_sign_symmetric() {
        let mut s = RandomStream::new(21, 0);
        let n = 100_000;
        let positive = (0..n)
            .filter(|_| sample_levy_mantegna(&mut s, 1.5).unwrap() > 0.0)
            .count() as f64
            / n as f64;
        assert!((positive - 0.5).abs() < 0.01, "positive fraction = {positive}");
    }

    #[test]
    fn mantegna_hill_tail_index() {
        let mut s = RandomStream::new(22, 0);
        let samples: Vec<f64> = (0..100_000)
            .map(|_| sample_levy_mantegna(&mut s, 1.5).unwrap())
            .collect();
        let exponent = hill_tail_exponent(&samples, 0.01).unwrap();
        assert!((exponent - 2.5).abs() < 0.15, "tail exponent = {exponent}");
    }

    #[test]
    fn walk_zero_steps() {
        let mut s = RandomStream::new(1, 0);
        let t = random_walk(&mut s, 0, |r| r.gaussian());
        assert_eq!(t.states(), &[0.0]);
        assert_eq!(t.step_count(), 0);
    }

    #[test]
    fn walk_is_cumulative_sum() {
        let steps = [1.0, -1.0, 1.0];
        let mut i = 0;
        let mut s = RandomStream::new(1, 0);
        let t = random_walk(&mut s, 3, |_| {
            let v = steps[i];
            i += 1;
            v
        });
        assert_eq!(t.states(), &[0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn walk_last_state_equals_step_sum() {
        let mut s = RandomStream::new(33, 0);
        let mut drawn = Vec::new();
        let t = random_walk(&mut s, 500, |r| {
            let v = r.gaussian();
            drawn.push(v);
            v
        });
        assert_eq!(t.last(), drawn.iter().sum::<f64>());
    }

    #[test]
    fn gaussian_walk_endpoint_mean_near_zero() {
        let mut s = RandomStream::new(17, 0);
        let walks = 10_000;
        let mean: f64 = (0..walks)
            .map(|_| random_walk(&mut s, 100, |r| r.gaussian()).last())
            .sum::<f64>()
            / walks as f64;
        assert!(mean.abs() < 0.3, "mean endpoint = {mean}");
    }

    #[test]
    fn diffusion_exponent_deterministic_walk() {
        let mut s = RandomStream::new(1, 0);
        let ensemble: Vec<WalkTrace> =
            (0..100).map(|_| random_walk(&mut s, 1000, |_| 1.0)).collect();
        let slope = diffusion_exponent(&ensemble).unwrap();
        assert!((slope - 1.0).abs() < 1e-12, "slope = {slope}");
    }

    #[test]
    fn diffusion_exponent_brownian_vs_levy() {
        let mut s = RandomStream::new(5, 0);
        let brownian: Vec<WalkTrace> = (0..300)
            .map(|_| random_walk(&mut s, 2000, |r| r.gaussian()))
            .collect();
        let levy: Vec<WalkTrace> = (0..300)
            .map(|_| random_walk(&mut s, 2000, |r| sample_levy_mantegna(r, 1.5).unwrap()))
            .collect();
        let slope_b = diffusion_exponent(&brownian).unwrap();
        let slope_l = diffusion_exponent(&levy).unwrap();
        assert!((0.45..=0.55).contains(&slope_b), "Brownian slope = {slope_b}");
        assert!(slope_l > 0.6, "Levy slope = {slope_l}");
        assert!(slope_l > slope_b);
    }

    #[test]
    fn diffusion_exponent_preconditions() {
        let mut s = RandomStream::new(1, 0);
        let few: Vec<WalkTrace> = (0..10).map(|_| random_walk(&mut s, 1000, |r| r.gaussian())).collect();
        assert!(diffusion_exponent(&few).is_err());
        let short: Vec<WalkTrace> = (0..100).map(|_| random_walk(&mut s, 50, |r| r.gaussian())).collect();
        assert!(diffusion_exponent(&short).is_err());
    }

    #[test]
    fn walk_csv_shape() {
        let mut s = RandomStream::new(1, 0);
        let t = random_walk(&mut s, 2, |_| 1.5);
        assert_eq!(t.to_csv(), "step,state\n0,0\n1,1.5\n2,3\n");
    }
}
