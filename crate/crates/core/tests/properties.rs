//! Property tests for the library's stated invariants.

use proptest::prelude::*;

use natopt::analysis::{ba_stability_region, ba_system_matrix, markov_second_eigenvalue, spectral_radius, TransitionMatrix};
use natopt::benchmarks::{island_repair, multi_island_feasible, multi_island_value, IslandFunctionParams};
use natopt::measures::evals_to_target;
use natopt::position::PositionVector;
use natopt::problem::{apply_increment, clamp_to_bounds, Problem};
use natopt::record::RunRecord;
use natopt::stochastic::{cauchy_pdf, levy_tail_density, CauchyParams, LevyParams};
use natopt::tuning::{parameter_schedule, ScheduleKind, ScheduleSpec};

fn box_problem(dim: usize, half: f64) -> Problem {
    Problem::new(
        "box",
        |x| x.iter().map(|v| v * v).sum(),
        PositionVector::new(vec![-half; dim]).unwrap(),
        PositionVector::new(vec![half; dim]).unwrap(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn increment_closure_in_bounds(
        xs in proptest::collection::vec(-4.0f64..4.0, 3),
        ds in proptest::collection::vec(-50.0f64..50.0, 3),
    ) {
        let problem = box_problem(3, 4.0);
        let pos = PositionVector::new(xs).unwrap();
        let moved = apply_increment(&pos, &ds, &problem).unwrap();
        for c in moved.iter() {
            prop_assert!((-4.0..=4.0).contains(c));
        }
    }

    #[test]
    fn clamp_is_idempotent(xs in proptest::collection::vec(-100.0f64..100.0, 4)) {
        let problem = box_problem(4, 2.5);
        let once = clamp_to_bounds(&PositionVector::new(xs).unwrap(), &problem);
        let twice = clamp_to_bounds(&once, &problem);
        prop_assert_eq!(once.as_slice(), twice.as_slice());
    }

    #[test]
    fn cauchy_symmetry(mu in -10.0f64..10.0, gamma in 0.01f64..10.0, d in 0.0f64..100.0) {
        let params = CauchyParams::new(mu, gamma).unwrap();
        let hi = cauchy_pdf(mu + d, &params);
        let lo = cauchy_pdf(mu - d, &params);
        prop_assert!((hi - lo).abs() <= 1e-12);
    }

    #[test]
    fn levy_tail_halving(beta in 0.31f64..1.99, alpha in 0.1f64..5.0, s in 0.01f64..1e3) {
        let params = LevyParams::new(beta, alpha).unwrap();
        let ratio = levy_tail_density(2.0 * s, &params).unwrap()
            / levy_tail_density(s, &params).unwrap();
        prop_assert!((ratio - 2f64.powf(-(1.0 + beta))).abs() < 1e-12);
    }

    #[test]
    fn island_repair_feasible_and_identity(
        x in -20.3f64..20.3,
        y in -20.3f64..20.3,
    ) {
        let params = IslandFunctionParams::new(20, 10.0).unwrap();
        let (fx, fy) = island_repair(x, y, &params);
        prop_assert!(multi_island_feasible(fx, fy, &params));
        if multi_island_feasible(x, y, &params) {
            prop_assert_eq!((fx, fy), (x, y));
        }
    }

    #[test]
    fn island_value_symmetry(x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let params = IslandFunctionParams::new(8, 10.0).unwrap();
        let v = multi_island_value(x, y, &params);
        prop_assert!((v - multi_island_value(y, x, &params)).abs() <= 1e-12);
        prop_assert!((v - multi_island_value(-x, -y, &params)).abs() <= 1e-12);
    }

    #[test]
    fn stability_region_matches_spectrum(theta in -2.0f64..2.0, zeta in -0.5f64..4.0) {
        let (c, _) = ba_system_matrix(theta, zeta);
        prop_assert_eq!(
            ba_stability_region(theta, zeta),
            spectral_radius(&c) <= 1.0 + 1e-9
        );
    }

    #[test]
    fn second_eigenvalue_bounded_by_one(
        raw in proptest::collection::vec(0.01f64..1.0, 9),
    ) {
        // Normalize rows into a 3x3 stochastic matrix.
        let rows: Vec<Vec<f64>> = raw
            .chunks(3)
            .map(|row| {
                let sum: f64 = row.iter().sum();
                let mut normalized: Vec<f64> = row.iter().map(|p| p / sum).collect();
                let drift: f64 = 1.0 - normalized.iter().sum::<f64>();
                normalized[2] += drift;
                normalized
            })
            .collect();
        let p = TransitionMatrix::new(rows).unwrap();
        prop_assert!(markov_second_eigenvalue(&p) <= 1.0 + 1e-12);
    }

    #[test]
    fn schedule_endpoints(
        kind_pick in 0usize..3,
        start in 0.1f64..10.0,
        end in 0.1f64..10.0,
        t_max in 1u64..1000,
    ) {
        let kind = [ScheduleKind::Constant, ScheduleKind::Linear, ScheduleKind::Geometric][kind_pick];
        let spec = ScheduleSpec { kind, start, end };
        let at_start = parameter_schedule(&spec, 0, t_max).unwrap();
        prop_assert!((at_start - start).abs() <= 1e-12);
        let at_end = parameter_schedule(&spec, t_max, t_max).unwrap();
        let expected = if kind == ScheduleKind::Constant { start } else { end };
        prop_assert!((at_end - expected).abs() <= 1e-12 * expected.abs().max(1.0));
    }

    #[test]
    fn evals_to_target_monotone_in_target(
        fitnesses in proptest::collection::vec(0.0f64..100.0, 1..20),
        loose in 0.0f64..100.0,
        tighten in 0.0f64..50.0,
    ) {
        // Build a non-increasing trace.
        let mut best = f64::INFINITY;
        let mut trace = Vec::new();
        for (i, f) in fitnesses.iter().enumerate() {
            if *f < best {
                best = *f;
                trace.push(((i + 1) as u64, best));
            }
        }
        prop_assume!(!trace.is_empty());
        let record = RunRecord {
            algorithm: "de".into(),
            problem: "sphere".into(),
            master_seed: 0,
            stream_id: 0,
            dimension: 1,
            population_size: 1,
            budget: 100,
            evals_used: trace.len() as u64,
            best_position: PositionVector::zeros(1),
            best_fitness: trace.last().unwrap().1,
            init_mean_fitness: 1.0,
            wall_ms: 0.0,
            trace,
        };
        let tight_target = loose - tighten;
        let at_loose = evals_to_target(&record, loose);
        let at_tight = evals_to_target(&record, tight_target);
        // Loosening the target can only find an earlier (or equal) crossing.
        match (at_tight, at_loose) {
            (Some(t), Some(l)) => prop_assert!(l <= t),
            (Some(_), None) => prop_assert!(false, "tight reached but loose not"),
            _ => {}
        }
    }
}
