use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hamburger_cli::commands::{self, read_json};
use hamburger_cli::files::{InstanceFile, MeasureFile};
use hamburger_cli::{exit_code, Failure};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "hamburger", version, about = "Balanced hyperplane cuts and rainbow partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance in general position.
    Gen {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Class sizes, comma separated; drawn at random when omitted.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a hamburger cut of an instance.
    Cut {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition an instance into pairwise disjoint rainbow simplices.
    Partition {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a cut or partition document against its instance.
    Verify {
        instance: PathBuf,
        result: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the continuous problem for a measure document.
    MeasureCut {
        measure: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo samples per color for the cross-check.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a planar instance as SVG, with an optional cut or partition.
    Render {
        instance: PathBuf,
        #[arg(long)]
        overlay: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(&text, out)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())).into())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { d, n, sizes, seed, out } => {
            emit_json(&commands::gen(d, n, sizes.as_deref(), seed)?, out.as_deref())
        }
        Command::Cut { instance, out } => {
            let file: InstanceFile = read_json(&instance, "instance")?;
            emit_json(&commands::cut(&file)?, out.as_deref())
        }
        Command::Partition { instance, out } => {
            let file: InstanceFile = read_json(&instance, "instance")?;
            emit_json(&commands::partition(&file)?, out.as_deref())
        }
        Command::Verify { instance, result, out } => {
            let file: InstanceFile = read_json(&instance, "instance")?;
            let report = commands::verify(&file, &read_text(&result)?)?;
            emit_json(&report, out.as_deref())?;
            if !report.passed {
                return Err(Failure::Verification(report.failures.join("; ")).into());
            }
            Ok(())
        }
        Command::MeasureCut { measure, tol, seed, samples, out } => {
            let file: MeasureFile = read_json(&measure, "measure")?;
            let sol = commands::measure_cut(&file, tol, seed, samples)?;
            emit_json(&sol, out.as_deref())?;
            if !sol.report.passed {
                return Err(Failure::Verification("measure cut failed verification".into()).into());
            }
            Ok(())
        }
        Command::Render { instance, overlay, out } => {
            let file: InstanceFile = read_json(&instance, "instance")?;
            let overlay = overlay.map(|p| read_text(&p)).transpose()?;
            emit(&commands::render(&file, overlay.as_deref())?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
