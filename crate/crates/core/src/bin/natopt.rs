//! Batch CLI: seeded experiments, random-walk diagnostics, stability
//! grids, and parameter tuning, all emitting deterministic CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use natopt::analysis::{ba_system_matrix, ba_stability_region, spectral_radius};
use natopt::error::{Error, Result};
use natopt::experiment::{
    parse_config, parse_tune_config, render_tuning_csv, run_experiment, write_outputs,
};
use natopt::rng::RandomStream;
use natopt::stochastic::{
    diffusion_exponent, random_walk, sample_cauchy, sample_levy_mantegna, CauchyParams, WalkTrace,
};
use natopt::tuning::self_tune;

#[derive(Parser)]
#[command(name = "natopt", version, about = "nature-inspired optimization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch experiment from a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's `out`; default `.`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 1 = sequential.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Master seed override.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sample a random-walk ensemble and fit the diffusion exponent.
    Walk {
        #[arg(long, value_enum)]
        dist: WalkDist,
        /// Levy exponent (levy distribution only).
        #[arg(long, default_value_t = 1.5)]
        beta: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        walks: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the (theta, zeta) stability grid of the extended bat system.
    Stability {
        /// Range as LO:HI:STEP.
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        /// Range as LO:HI:STEP.
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Self-tune algorithm parameters from a JSON tuning config.
    Tune {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WalkDist {
    Gaussian,
    Cauchy,
    Levy,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, parallel, seed } => cmd_run(config, out, parallel, seed),
        Command::Walk { dist, beta, steps, walks, seed, out } => {
            cmd_walk(dist, beta, steps, walks, seed, out)
        }
        Command::Stability { theta, zeta, out } => cmd_stability(&theta, &zeta, out),
        Command::Tune { config, out } => cmd_tune(config, out),
    }
}

fn cmd_run(
    config_path: PathBuf,
    out: Option<PathBuf>,
    parallel: usize,
    seed: Option<u64>,
) -> Result<()> {
    let text = std::fs::read_to_string(&config_path)?;
    let mut config = parse_config(&text)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let output = run_experiment(&config, parallel.max(1))?;
    let dir = out
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let (runs_path, report_path) = write_outputs(&output, &dir)?;
    println!("wrote {} and {}", runs_path.display(), report_path.display());
    Ok(())
}

fn cmd_walk(
    dist: WalkDist,
    beta: f64,
    steps: usize,
    walks: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<()> {
    if steps == 0 || walks == 0 {
        return Err(Error::Config("walk requires steps >= 1 and walks >= 1".into()));
    }
    if matches!(dist, WalkDist::Levy) {
        // Validate the exponent before sampling thousands of walks.
        let mut probe = RandomStream::new(seed, u64::MAX);
        sample_levy_mantegna(&mut probe, beta)?;
    }
    let cauchy = CauchyParams::new(0.0, 1.0)?;
    let step = |stream: &mut RandomStream| -> f64 {
        match dist {
            WalkDist::Gaussian => stream.gaussian(),
            WalkDist::Cauchy => sample_cauchy(stream, &cauchy),
            WalkDist::Levy => sample_levy_mantegna(stream, beta).expect("beta validated above"),
        }
    };
    // One substream per walk keeps the ensemble order-independent.
    let ensemble: Vec<WalkTrace> = (0..walks)
        .map(|w| {
            let mut stream = RandomStream::new(seed, w as u64);
            random_walk(&mut stream, steps, step)
        })
        .collect();

    let dir = out.unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let trace_path = dir.join("walk.csv");
    std::fs::write(&trace_path, ensemble[0].to_csv())?;
    println!("wrote {}", trace_path.display());

    match diffusion_exponent(&ensemble) {
        Ok(exponent) => println!("diffusion_exponent {exponent}"),
        Err(err) => eprintln!("diffusion exponent not fitted: {err}"),
    }
    Ok(())
}

/// Parse `LO:HI:STEP` into an inclusive grid. Values are generated by
/// integer-scaled stepping (scale 1e9) so decimal grids land exactly on
/// decimal boundaries.
fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("range '{text}' is not LO:HI:STEP")));
    }
    let parse = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::Config(format!("'{s}' is not a number")))
    };
    let (lo, hi, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if !(step > 0.0) || hi < lo {
        return Err(Error::Config(format!("range '{text}' must have step > 0 and hi >= lo")));
    }
    const SCALE: f64 = 1e9;
    let lo_i = (lo * SCALE).round() as i64;
    let hi_i = (hi * SCALE).round() as i64;
    let step_i = (step * SCALE).round() as i64;
    if step_i == 0 {
        return Err(Error::Config("step too small".into()));
    }
    let mut values = Vec::new();
    let mut v = lo_i;
    while v <= hi_i {
        values.push(v as f64 / SCALE);
        v += step_i;
    }
    Ok(values)
}

fn cmd_stability(theta: &str, zeta: &str, out: Option<PathBuf>) -> Result<()> {
    let thetas = parse_range(theta)?;
    let zetas = parse_range(zeta)?;
    let mut csv = String::from("theta,zeta,in_region,spectral_radius\n");
    for t in &thetas {
        for z in &zetas {
            let (c, _) = ba_system_matrix(*t, *z);
            let rho = spectral_radius(&c);
            let in_region = ba_stability_region(*t, *z) as u8;
            csv.push_str(&format!("{t},{z},{in_region},{rho}\n"));
        }
    }
    let dir = out.unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("stability.csv");
    std::fs::write(&path, csv)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_tune(config_path: PathBuf, out: Option<PathBuf>) -> Result<()> {
    let text = std::fs::read_to_string(&config_path)?;
    let config = parse_tune_config(&text)?;
    let mut stream = RandomStream::new(config.seed, 0);
    let result = self_tune(&config.task, &mut stream)?;
    let names: Vec<String> = config.task.tuned.iter().map(|p| p.name.clone()).collect();
    let csv = render_tuning_csv(&names, &result.trials);
    let dir = out
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("tuning.csv");
    std::fs::write(&path, csv)?;
    println!("wrote {}", path.display());
    let best: Vec<String> = result
        .best
        .iter()
        .map(|(name, value)| format!("{name}={value}"))
        .collect();
    println!("best {} meta_objective {}", best.join(" "), result.best_objective);
    Ok(())
}
