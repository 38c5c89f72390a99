//! End-to-end tests of the `natopt` binary: flag handling, exit codes,
//! and the CSV contracts of each subcommand.

use std::process::{Command, Output};

fn natopt(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_natopt"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn natopt")
}

fn column_counts_constant(csv: &str) -> bool {
    let mut lines = csv.lines();
    let header = lines.next().expect("header").split(',').count();
    lines.all(|l| l.split(',').count() == header)
}

#[test]
fn walk_gaussian_exponent_in_brownian_band() {
    let dir = tempfile::tempdir().unwrap();
    let out = natopt(
        &["walk", "--dist", "gaussian", "--steps", "10000", "--walks", "1000", "--seed", "1"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let exponent: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("diffusion_exponent "))
        .expect("exponent line")
        .parse()
        .expect("numeric exponent");
    assert!((0.45..=0.55).contains(&exponent), "exponent = {exponent}");

    let trace = std::fs::read_to_string(dir.path().join("walk.csv")).unwrap();
    assert!(trace.starts_with("step,state\n"));
    assert_eq!(trace.lines().count(), 10_002); // header + N+1 states
    assert!(column_counts_constant(&trace));
}

#[test]
fn walk_levy_exponent_above_brownian() {
    let dir = tempfile::tempdir().unwrap();
    let parse = |out: Output| -> f64 {
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .find_map(|l| l.strip_prefix("diffusion_exponent "))
            .expect("exponent line")
            .parse()
            .expect("numeric")
    };
    let levy = parse(natopt(
        &["walk", "--dist", "levy", "--beta", "1.5", "--steps", "2000", "--walks", "300", "--seed", "2"],
        dir.path(),
    ));
    let gaussian = parse(natopt(
        &["walk", "--dist", "gaussian", "--steps", "2000", "--walks", "300", "--seed", "2"],
        dir.path(),
    ));
    assert!(levy > 0.6, "levy exponent = {levy}");
    assert!(levy > gaussian);
}

#[test]
fn walk_rejects_bad_flags() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown distribution: clap usage error, exit code 2.
    let out = natopt(
        &["walk", "--dist", "pareto", "--steps", "10", "--walks", "1", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    // Levy exponent outside Mantegna's validity range.
    let out = natopt(
        &["walk", "--dist", "levy", "--beta", "2.5", "--steps", "10", "--walks", "1", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stability_grid_matches_region_contract() {
    let dir = tempfile::tempdir().unwrap();
    let out = natopt(
        &["stability", "--theta", "-2:2:0.1", "--zeta", "-0.5:4:0.1"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("stability.csv")).unwrap();
    assert!(csv.starts_with("theta,zeta,in_region,spectral_radius\n"));
    assert!(column_counts_constant(&csv));
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let in_region: u8 = fields[2].parse().unwrap();
        let rho: f64 = fields[3].parse().unwrap();
        assert_eq!(
            in_region == 1,
            rho <= 1.0 + 1e-9,
            "contract violated at theta={} zeta={} (rho={rho})",
            fields[0],
            fields[1],
        );
        rows += 1;
    }
    assert_eq!(rows, 41 * 46);
}

#[test]
fn tune_with_meta_budget_one_emits_single_trial() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("tune.json"),
        r#"{"algorithm":"de","tune":{"F":[0.1,1.9]},
            "problems":[{"name":"sphere","dimension":3}],
            "inner_budget":200,"population":8,"repetitions":1,"meta_budget":1,"w":1.0}"#,
    )
    .unwrap();
    let out = natopt(&["tune", "--config", "tune.json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("tuning.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "trial,F,meta_objective");
    assert_eq!(csv.lines().count(), 2);
    assert!(column_counts_constant(&csv));
}

#[test]
fn run_validation_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad_algo.json"),
        r#"{"algorithms":["xyz"],"problems":[{"name":"sphere"}]}"#,
    )
    .unwrap();
    let out = natopt(&["run", "--config", "bad_algo.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("xyz"));

    std::fs::write(
        dir.path().join("bad_param.json"),
        r#"{"algorithms":[{"name":"de","params":{"F":3.0}}],"problems":[{"name":"sphere"}]}"#,
    )
    .unwrap();
    let out = natopt(&["run", "--config", "bad_param.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0, 2)"));
}

#[test]
fn run_missing_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = natopt(&["run", "--config", "nope.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_seed_override_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("config.json"),
        r#"{"algorithms":["de"],"problems":[{"name":"sphere","dimension":2}],
            "population":8,"budget":200,"runs":2,"seed":1}"#,
    )
    .unwrap();
    let run_with = |out_dir: &str, seed: Option<&str>| -> String {
        let mut args = vec!["run", "--config", "config.json", "--out", out_dir];
        if let Some(s) = seed {
            args.extend(["--seed", s]);
        }
        let out = natopt(&args, dir.path());
        assert!(out.status.success());
        std::fs::read_to_string(dir.path().join(out_dir).join("report.csv")).unwrap()
    };
    let base = run_with("a", None);
    let same = run_with("b", Some("1"));
    let different = run_with("c", Some("99"));
    assert_eq!(base, same);
    assert_ne!(base, different);
}

#[test]
fn report_csv_contract() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("config.json"),
        r#"{"algorithms":["de","cs"],"problems":[{"name":"sphere","dimension":3},
            {"name":"island","n":5,"a":10.0,"policy":"repair"}],
            "population":10,"budget":500,"runs":3,"seed":5}"#,
    )
    .unwrap();
    let out = natopt(&["run", "--config", "config.json", "--out", "results"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.path().join("results/report.csv")).unwrap();
    let runs = std::fs::read_to_string(dir.path().join("results/runs.csv")).unwrap();
    assert_eq!(
        report.lines().next().unwrap(),
        "algorithm,problem,runs,best,worst,mean,std,median,success_rate_obj,success_rate_pos,mean_evals_to_target,mean_rank"
    );
    assert_eq!(
        runs.lines().next().unwrap(),
        "run_id,algorithm,problem,dimension,seed,evals_used,best_f,success_obj,success_pos,wall_ms"
    );
    assert!(column_counts_constant(&report));
    assert!(column_counts_constant(&runs));
    assert_eq!(report.lines().count(), 1 + 2 * 2);
    assert_eq!(runs.lines().count(), 1 + 2 * 2 * 3);

    // Rank column sums to m(m+1)/2 = 3 per problem.
    let mut sums = std::collections::BTreeMap::new();
    for line in report.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        *sums.entry(fields[1].to_string()).or_insert(0.0) +=
            fields.last().unwrap().parse::<f64>().unwrap();
    }
    for (problem, sum) in sums {
        assert_eq!(sum, 3.0, "rank sum for {problem}");
    }
}
