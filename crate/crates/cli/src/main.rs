use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use projline::DiffeoSpec64;
use projline_cli::random::RandomDiffeoConfig;
use projline_cli::verify::run_verify_batch;
use projline_cli::{export, load_spec, CliError};

/// Numerical chain for projective-line diffeomorphisms: Schwarzian
/// derivatives, Hill potentials, central curves, Legendrian lifts and
/// characteristic spherical curves, with seeded batch verification of the
/// four-zero statements.
#[derive(Parser)]
#[command(name = "projline", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Grid size (power of two, at least 64)
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the summary as JSON (default: human-readable lines)
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct InputArgs {
    /// Diffeomorphism description, e.g.
    /// {"type":"fourier","harmonics":[{"k":1,"a":0.1,"b":0.0}]}
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded verification batch over random diffeomorphisms
    Verify {
        /// Master seed of the batch
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of single-diffeomorphism cases
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// Number of potential-comparison pairs
        #[arg(long, default_value_t = 50)]
        pairs: u64,
        /// Highest harmonic of the random periodic part
        #[arg(long, default_value_t = 4)]
        max_harmonic: u32,
        /// Coefficient amplitude of the first harmonic
        #[arg(long, default_value_t = 0.15)]
        amplitude: f64,
        /// Geometric decay of higher-harmonic amplitudes
        #[arg(long, default_value_t = 2.0)]
        decay: f64,
        /// Grid size
        #[arg(long, default_value_t = 512)]
        n: usize,
        /// Write the full JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the full JSON report to stdout
        #[arg(long)]
        json: bool,
    },
    /// Schwarzian derivative, potential and projective points of one input
    Schwarzian {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Central plane curve and its Hill potential
    Curve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare two Hill potentials: crossing count and orthogonality
    SturmCompare {
        #[command(flatten)]
        input: InputArgs,
        /// Second input; defaults to the identity (unit potential)
        #[arg(long)]
        input2: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Legendrian lift in R^4 and its flattening determinant
    Legendrian {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The twisted non-Legendrian curve with constant determinant
    Counterexample {
        /// Amplitude of the third-harmonic twist (0 < epsilon <= 0.1)
        #[arg(long)]
        epsilon: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Characteristic curve on the sphere: inflections, area, meridians
    Sphere {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn print_summary(summary: &Value, json: bool) {
    if json {
        println!("{}", serde_json::to_string(summary).unwrap());
    } else if let Value::Object(map) = summary {
        for (k, v) in map {
            println!("{k}: {v}");
        }
    } else {
        println!("{summary}");
    }
}

fn run_report(run: impl FnOnce() -> Result<Value, CliError>, json: bool) -> Result<(), CliError> {
    let summary = run()?;
    print_summary(&summary, json);
    Ok(())
}

fn real_main() -> Result<ExitCode, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            seed,
            seeds,
            pairs,
            max_harmonic,
            amplitude,
            decay,
            n,
            out,
            json,
        } => {
            if seeds == 0 || !n.is_power_of_two() || n < 64 {
                eprintln!("invalid config: seeds must be >= 1 and n a power of two >= 64");
                return Ok(ExitCode::from(2));
            }
            let config = RandomDiffeoConfig {
                max_harmonic,
                amplitude,
                decay,
                ..RandomDiffeoConfig::default()
            };
            let report = run_verify_batch(&config, seed, seeds as usize, pairs as usize, n);
            let text = serde_json::to_string_pretty(&report).unwrap();
            if let Some(path) = out {
                std::fs::write(path, &text)?;
            }
            if json {
                println!("{text}");
            } else {
                for check in &report.checks {
                    println!(
                        "{}: {}/{} passed (worst {} = {})",
                        check.id, check.passes, check.cases, check.margin_kind, check.worst_margin
                    );
                }
                println!("failures: {}", report.failures.len());
            }
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Schwarzian { input, common } => {
            let spec = load_spec(&input.input)?;
            run_report(
                || export::run_schwarzian(&spec, common.n, common.out.as_deref()),
                common.json,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Curve { input, common } => {
            let spec = load_spec(&input.input)?;
            run_report(
                || export::run_curve(&spec, common.n, common.out.as_deref()),
                common.json,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SturmCompare {
            input,
            input2,
            common,
        } => {
            let spec1 = load_spec(&input.input)?;
            let spec2 = match input2 {
                Some(path) => load_spec(&path)?,
                None => DiffeoSpec64::identity(),
            };
            run_report(
                || export::run_sturm_compare(&spec1, &spec2, common.n, common.out.as_deref()),
                common.json,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Legendrian { input, common } => {
            let spec = load_spec(&input.input)?;
            run_report(
                || export::run_legendrian(&spec, common.n, common.out.as_deref()),
                common.json,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Counterexample { epsilon, common } => {
            run_report(
                || export::run_counterexample(epsilon, common.n, common.out.as_deref()),
                common.json,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sphere { input, common } => {
            let spec = load_spec(&input.input)?;
            run_report(
                || export::run_sphere(&spec, common.n, common.out.as_deref()),
                common.json,
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
