use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use wulff_lab::{run, RunConfig, Task};

/// Inverse anisotropic mean curvature flow and isoperimetric deficit runs.
#[derive(Debug, Parser)]
#[command(name = "wulff-lab", version)]
struct Cli {
    #[arg(value_enum)]
    task: Task,
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out` in the configuration; default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed (overrides `seed` in the configuration).
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(cli: &Cli) -> Result<u8> {
    let mut cfg = RunConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let report = run(&cfg, Some(cli.task))?;
    for path in report.write(&out)? {
        println!("wrote {}", path.display());
    }
    for c in report.failed_checks() {
        eprintln!(
            "check failed: {} = {:e} (want {} {:e})",
            c.name, c.value, c.relation, c.limit
        );
    }
    println!(
        "{}: {}",
        report.task.name(),
        if report.passed() {
            "all checks passed"
        } else {
            "checks failed"
        }
    );
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
