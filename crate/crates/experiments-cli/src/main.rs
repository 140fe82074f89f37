use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use experiments_cli::{emit, read_report, replay_row, run_with, ExperimentConfig, Format, RunOptions};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "szegolab", version, about = "Numerical checks of the n-dependent strong Szego theorem")]
struct Cli {
    /// Worker threads for Monte Carlo sampling and batch runs
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one config file, or every *.json config in a directory
    Run {
        path: PathBuf,
        /// Report format; defaults to the output_path extension
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Override mc.seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override output_path (single config only)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Record wall-clock runtime_ms (reports are then not byte-reproducible)
        #[arg(long)]
        timing: bool,
    },
    /// Parse and validate a config without running it
    Validate { path: PathBuf },
    /// Recompute one row of a JSON report and compare it with the stored row
    Replay {
        report: PathBuf,
        #[arg(long)]
        row: usize,
    },
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ExperimentConfig::from_json(&text).with_context(|| format!("in {}", path.display()))
}

fn config_files(path: &Path) -> Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)
        .with_context(|| format!("listing {}", path.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no *.json configs in {}", path.display());
    }
    Ok(files)
}

struct Outcome {
    config: PathBuf,
    result: Result<(usize, usize, PathBuf)>,
}

fn run_one(file: &Path, format: Option<Format>, seed: Option<u64>, output: Option<&Path>, opts: RunOptions) -> Result<(usize, usize, PathBuf)> {
    let mut cfg = load_config(file)?;
    if let Some(s) = seed {
        cfg.mc.seed = s;
    }
    // relative output paths are taken from the config's directory
    let out = match output {
        Some(p) => p.to_path_buf(),
        None => file.parent().unwrap_or(Path::new(".")).join(&cfg.output_path),
    };
    let report = run_with(&cfg, opts)?;
    let format = format.unwrap_or_else(|| Format::from_path(&out));
    emit(&report, format, &out)?;
    let failing = report.rows.iter().filter(|r| !r.holds).count() + report.fits.iter().filter(|f| !f.holds).count();
    Ok((report.rows.len(), failing, out))
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    let cli = Cli::parse();
    // parallelism comes from sampling; dense kernels stay sequential
    faer::set_global_parallelism(faer::Par::Seq);
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring thread pool")?;
    }
    match cli.command {
        Command::Validate { path } => {
            let mut ok = true;
            for f in config_files(&path)? {
                match load_config(&f) {
                    Ok(c) => println!("ok {}: {} over {} n values, hash {}", f.display(), c.experiment, c.n_values.len(), c.hash()),
                    Err(e) => {
                        ok = false;
                        println!("invalid {e:#}");
                    }
                }
            }
            Ok(ok)
        }
        Command::Run { path, format, seed, output, timing } => {
            let files = config_files(&path)?;
            if output.is_some() && files.len() > 1 {
                bail!("--output needs a single config, got a directory of {}", files.len());
            }
            let opts = RunOptions { timing };
            let outcomes: Vec<Outcome> = files
                .par_iter()
                .map(|f| Outcome { config: f.clone(), result: run_one(f, format, seed, output.as_deref(), opts) })
                .collect();
            let mut ok = true;
            for o in outcomes {
                match o.result {
                    Ok((rows, failing, out)) => {
                        ok &= failing == 0;
                        let status = if failing == 0 { "PASS" } else { "FAIL" };
                        println!("{status} {}: {rows} rows, {failing} failing, wrote {}", o.config.display(), out.display());
                    }
                    Err(e) => {
                        ok = false;
                        println!("ERROR {}: {e:#}", o.config.display());
                    }
                }
            }
            Ok(ok)
        }
        Command::Replay { report, row } => {
            let rep = read_report(&report)?;
            let (mut stored, mut fresh) = replay_row(&rep, row)?;
            stored.runtime_ms = 0.0;
            fresh.runtime_ms = 0.0;
            let a = serde_json::to_string(&stored)?;
            let b = serde_json::to_string(&fresh)?;
            println!("stored   {a}");
            println!("replayed {b}");
            println!("identical: {}", a == b);
            Ok(a == b)
        }
    }
}
