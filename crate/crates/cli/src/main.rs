use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use unimodal_cli::commands::run;
use unimodal_cli::config::{Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every requested check passed.
fn execute(cli: Cli) -> Result<bool> {
    let cfg = RunConfig::resolve(cli.opts)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let report = run(&cli.command, &cfg)?;
    let mut out: Box<dyn Write> = match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    report.table.write(cfg.format, &mut out)?;
    out.flush()?;
    for f in &report.failures {
        eprintln!("FAIL {f}");
    }
    Ok(report.failures.is_empty())
}
