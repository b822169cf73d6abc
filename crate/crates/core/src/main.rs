use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use critdamp::error::{Error, Result};
use critdamp::experiment::{parse_config, run_experiment, Mode};

/// Damped compressible Euler and Burgers experiments.
#[derive(Debug, Parser)]
#[command(name = "critdamp", version)]
struct Cli {
    /// burgers-lifespan, burgers-sim, euler-sim, functionals, criterion or sweep
    mode: String,
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides as `--key value` or `--key=value`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

fn run(cli: Cli) -> Result<()> {
    let mode: Mode = cli.mode.parse()?;
    let mut config = cli.config;
    let mut flags = Vec::with_capacity(cli.overrides.len());
    let mut args = cli.overrides.into_iter();
    while let Some(a) = args.next() {
        if a == "--config" {
            let path = args
                .next()
                .ok_or_else(|| Error::Config {
                    key: "config".into(),
                    msg: "missing path".into(),
                })?;
            config = Some(path.into());
        } else if let Some(path) = a.strip_prefix("--config=") {
            config = Some(path.into());
        } else {
            flags.push(a);
        }
    }
    let text = match &config {
        Some(p) => fs::read_to_string(p)?,
        None => String::new(),
    };
    let cfg = parse_config(&text, &flags, Some(mode))?;
    let summary = run_experiment(&cfg)?;
    if let Some(v) = summary.verdict {
        println!("verdict = {v}");
    }
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: {}: {msg}", e.category());
            ExitCode::FAILURE
        }
    }
}
