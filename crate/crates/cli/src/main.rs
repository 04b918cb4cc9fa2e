use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use liouville_cli::commands::{self, IntegrateOptions, SplitArg, VerifyOptions};
use liouville_cli::CliError;
use liouville_core::ZeroTest;

/// Verify and integrate volume-preserving vector fields through their
/// maximal-degree variational principle.
#[derive(Debug, Parser)]
#[command(name = "liouville", version)]
struct Cli {
    /// Seed of the sampling zero-test.
    #[arg(long, global = true, env = "LIOUVILLE_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the certificate chain and print a JSON report.
    Verify {
        file: PathBuf,
        /// Also check the Hodge-star form of dϑ (needs a metric).
        #[arg(long)]
        hodge: bool,
        /// Base/vertical split as `k:z,w`.
        #[arg(long)]
        base_split: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the homotopy potential γ with dγ = X⌟Ω.
    SolveGamma {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the characteristic field of dϑ.
    Characteristic {
        file: PathBuf,
        #[arg(long)]
        base_split: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate X with RK4 and report flow diagnostics.
    Integrate {
        file: PathBuf,
        /// Initial state, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long = "T", default_value_t = 1.0)]
        t: f64,
        /// Parameter values `name=value`.
        #[arg(long, num_args = 1..)]
        param: Vec<String>,
        /// Co-integrate the tangent map and report |det - 1|.
        #[arg(long)]
        tangent: bool,
        /// Sweep a critical section and report its residual.
        #[arg(long)]
        sweep: bool,
        /// Trajectory CSV destination.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        drift_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        volume_tol: f64,
        #[arg(long, default_value_t = 1e-4)]
        sweep_tol: f64,
    },
    /// Write the bundled example systems.
    Examples {
        #[arg(long)]
        emit: PathBuf,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e }),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data");
    text.push('\n');
    text
}

fn split(arg: Option<&str>) -> Result<Option<SplitArg>, CliError> {
    arg.map(str::parse).transpose()
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let zero_test = cli.seed.map_or_else(ZeroTest::default, ZeroTest::with_seed);
    match cli.command {
        Command::Verify { file, hodge, base_split, out } => {
            let opts = VerifyOptions { hodge, split: split(base_split.as_deref())?, zero_test };
            let report = commands::cmd_verify(&file, &opts)?;
            emit(&report.to_json(), out.as_deref())?;
            Ok(report.exit_code())
        }
        Command::SolveGamma { file, out } => {
            let output = commands::cmd_solve_gamma(&file)?;
            emit(&json(&output), out.as_deref())?;
            Ok(if output.residual.is_empty() { 0 } else { 1 })
        }
        Command::Characteristic { file, base_split, out } => {
            let output = commands::cmd_characteristic(&file, split(base_split.as_deref())?.as_ref(), &zero_test)?;
            emit(&json(&output), out.as_deref())?;
            Ok(0)
        }
        Command::Integrate { file, x0, h, t, param, tangent, sweep, csv, out, drift_tol, volume_tol, sweep_tol } => {
            let params = param.iter().map(|p| commands::parse_param(p)).collect::<Result<_, _>>()?;
            let opts = IntegrateOptions {
                x0: commands::parse_vector(&x0)?,
                h,
                t,
                params,
                tangent,
                sweep,
                drift_tol,
                volume_tol,
                sweep_tol,
                zero_test,
            };
            let output = commands::cmd_integrate(&file, &opts)?;
            if let Some(path) = csv {
                std::fs::write(&path, &output.csv).map_err(|e| CliError::Io { path, source: e })?;
            }
            emit(&output.report.to_json(), out.as_deref())?;
            Ok(output.report.exit_code())
        }
        Command::Examples { emit: dir } => {
            for path in commands::cmd_examples(&dir)? {
                println!("{}", path.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(std::env::args_os());
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
