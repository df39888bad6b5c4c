use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use levyfp_cli::commands::{apply_seed, manifest_path, mc_compare_scenario};
use levyfp_cli::runner::Status;
use levyfp_cli::{execute, load_config, CliError, Invocation};
use levyfp_core::NaturalEdge;

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(
    name = "levyfp",
    version,
    about = "Nonlocal Fokker-Planck solver for SDEs with alpha-stable noise"
)]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads for independent scenarios and path ensembles.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every Monte-Carlo ensemble (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Edge {
    Free,
    Pinned,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario document, or re-run a manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Cauchy case against its closed form: densities and errors over time.
    CauchyVerify {
        #[arg(long, default_value_t = 0.001)]
        h: f64,
        #[arg(long, default_value_t = 50.0)]
        half_width: f64,
        #[arg(long, default_value_t = 0.5)]
        dt_factor: f64,
    },
    /// Point-error convergence at (x, t) = (0.1, 0.02).
    Table1 {
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 100.0)]
        half_width: f64,
        #[arg(long, default_value_t = 0.5)]
        dt_factor: f64,
    },
    /// As table1, with domain-size extrapolation over (L, 2L, 4L).
    Table2 {
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long, default_value_t = 100.0)]
        half_width: f64,
        #[arg(long, default_value_t = 0.5)]
        dt_factor: f64,
    },
    /// Total mass at t = 1 of the Cauchy run on growing domains.
    Masscheck {
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,40,80")]
        half_widths: Vec<f64>,
        #[arg(long, default_value_t = 0.005)]
        h: f64,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.5)]
        dt_factor: f64,
        #[arg(long, value_enum, default_value = "pinned")]
        edge: Edge,
    },
    /// Stable densities at t = 1 and their power-law tail slopes.
    Tails {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5")]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[arg(long, default_value_t = 110.0)]
        half_width: f64,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.5)]
        dt_factor: f64,
        #[arg(long, value_delimiter = ',', default_value = "20,80")]
        window: Vec<f64>,
    },
    /// Absorbing condition without drift.
    AbsorbingSuite {
        #[arg(long, default_value_t = 0.01)]
        h: f64,
    },
    /// Ornstein-Uhlenbeck drift under both conditions.
    OuSuite {
        #[arg(long, default_value_t = 0.01)]
        h: f64,
    },
    /// Double-well drift under the natural condition.
    DoublewellSuite {
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[arg(long, default_value_t = 3.0)]
        half_width: f64,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2,5")]
        times: Vec<f64>,
    },
    /// Euler-Maruyama ensemble against the solver for the Cauchy case.
    McCompare {
        #[arg(long, default_value_t = 0.005)]
        h: f64,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
    },
    /// Maximum-principle step threshold as a function of alpha.
    Threshold {
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
}

fn invocation(cli: &Cli) -> Result<Invocation, CliError> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let inv = match &cli.command {
        Command::Run { config } => {
            let mut inv = load_config(config)?;
            if let Some(s) = cli.seed {
                apply_seed(&mut inv, s);
            }
            inv
        }
        Command::CauchyVerify {
            h,
            half_width,
            dt_factor,
        } => Invocation::CauchyVerify {
            h: *h,
            half_width: *half_width,
            dt_factor: *dt_factor,
            density_times: vec![0.05, 0.1, 0.2],
            error_times: (1..=19)
                .map(|k| 0.01 + 0.01 * k as f64)
                .map(|t: f64| (t * 100.0).round() / 100.0)
                .collect(),
        },
        Command::Table1 {
            levels,
            half_width,
            dt_factor,
        } => Invocation::Table1 {
            levels: *levels,
            half_width: *half_width,
            dt_factor: *dt_factor,
        },
        Command::Table2 {
            levels,
            half_width,
            dt_factor,
        } => Invocation::Table2 {
            levels: *levels,
            half_width: *half_width,
            dt_factor: *dt_factor,
        },
        Command::Masscheck {
            half_widths,
            h,
            t_end,
            dt_factor,
            edge,
        } => Invocation::Masscheck {
            half_widths: half_widths.clone(),
            h: *h,
            t_end: *t_end,
            dt_factor: *dt_factor,
            edge: match edge {
                Edge::Free => NaturalEdge::Free,
                Edge::Pinned => NaturalEdge::Pinned,
            },
        },
        Command::Tails {
            alphas,
            h,
            half_width,
            t_end,
            dt_factor,
            window,
        } => {
            let [lo, hi] = window[..] else {
                return Err(CliError::Config("window: expected two values lo,hi".into()));
            };
            Invocation::Tails {
                alphas: alphas.clone(),
                h: *h,
                half_width: *half_width,
                t_end: *t_end,
                dt_factor: *dt_factor,
                window: [lo, hi],
            }
        }
        Command::AbsorbingSuite { h } => Invocation::AbsorbingSuite { h: *h },
        Command::OuSuite { h } => Invocation::OuSuite { h: *h },
        Command::DoublewellSuite {
            h,
            half_width,
            times,
        } => Invocation::DoublewellSuite {
            h: *h,
            half_width: *half_width,
            t_outputs: times.clone(),
        },
        Command::McCompare { h, paths, dt } => Invocation::McCompare {
            scenario: mc_compare_scenario(*h, *paths, *dt, seed),
        },
        Command::Threshold { eps, points } => Invocation::Threshold {
            eps: *eps,
            points: *points,
        },
    };
    Ok(inv)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match real_main(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("levyfp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn real_main(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads: must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let inv = invocation(cli)?;
    let manifest = execute(&inv, &cli.out)?;
    println!(
        "{}: {} file(s) in {}",
        inv.command(),
        manifest.files.len(),
        cli.out.display()
    );
    for (k, v) in &manifest.summary {
        println!("  {k} = {v}");
    }
    println!("manifest: {}", manifest_path(&cli.out, &inv).display());
    match manifest.status {
        Status::Ok => Ok(()),
        Status::Failed => Err(CliError::Runtime(manifest.error.unwrap_or_default())),
    }
}
