//! Command-line front end. Every subcommand is a thin shim over the library:
//! task files come from [`vqopt::circuits`], meta-training from
//! [`vqopt::l2o`], and suites/reports from [`vqopt::bench`].

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vqopt::bench::{self, OptimizerSpec, ReportKind, SuiteSpec, SummaryRow};
use vqopt::circuits::{load_task_spec, TaskSpec};
use vqopt::l2o::{self, MetaConfig, PrecondMode};
use vqopt::{Error, Result};

/// Variational-circuit optimization workbench.
#[derive(Parser)]
#[command(name = "vqopt", version, about)]
struct Cli {
    /// Worker threads for suite execution (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override the seed the subcommand would otherwise read from its input
    /// file (suite seed, meta-training seed, replicate derivation).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Meta-train a learned optimizer on a task file and write a checkpoint.
    MetaTrain {
        /// Task description JSON.
        #[arg(long)]
        task: PathBuf,
        /// Meta-training configuration JSON (library defaults when omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Checkpoint output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimize one task with one optimizer across replicate seeds.
    Run {
        /// Task description JSON.
        #[arg(long)]
        task: PathBuf,
        /// Baseline name (gd, momentum, adam, adagrad, rmsprop, qngd) or
        /// `l2o:<checkpoint>` for a trained update rule.
        #[arg(long)]
        optimizer: String,
        /// Learning-rate override for baselines.
        #[arg(long)]
        lr: Option<f64>,
        /// Preconditioning for the learned optimizer.
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        /// Updates per run.
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Number of replicate runs (each with its own derived seed).
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        /// Output directory for records and results.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Execute every (task × optimizer × replicate) cell of a suite file.
    Bench {
        /// Suite description JSON.
        #[arg(long)]
        suite: PathBuf,
        /// Output directory for records and results.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-render reports from a directory of run records.
    Report {
        /// Suite output directory (or its records/ subdirectory).
        #[arg(long = "in")]
        input: PathBuf,
        /// Output format: csv, json, svg_curves, or svg_bars.
        #[arg(long, default_value = "csv")]
        kind: String,
        /// Report output path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Blend the metric pseudo-inverse into each update.
    Full,
    /// Skip the metric entirely (ablation).
    Identity,
}

impl From<ModeArg> for PrecondMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Full => PrecondMode::Full,
            ModeArg::Identity => PrecondMode::IdentityPrecond,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        if let Err(err) = pool {
            eprintln!("error: could not size the thread pool: {err}");
            return ExitCode::FAILURE;
        }
    }
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::MetaTrain { task, config, out } => meta_train(&task, config.as_deref(), &out, cli.seed),
        Command::Run { task, optimizer, lr, mode, steps, seeds, out } => {
            run_one(&task, &optimizer, lr, mode, steps, seeds, &out, cli.seed)
        }
        Command::Bench { suite, out } => run_bench(&suite, &out, cli.seed),
        Command::Report { input, kind, out } => {
            let records = bench::load_records(&input)?;
            bench::report(&records, kind.parse()?, &out)?;
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn meta_train(task: &Path, config: Option<&Path>, out: &Path, seed: Option<u64>) -> Result<()> {
    let task = load_task_spec(task)?;
    let cfg: MetaConfig = match config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
            serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?
        }
        None => MetaConfig::default(),
    };
    let (weights, log) = l2o::meta_train(&task, &cfg, seed.unwrap_or(0))?;
    for (i, stage) in log.stages.iter().enumerate() {
        let val = mean(&stage.validation);
        println!(
            "stage {i}: unroll {} ({} diverged), validation@{} mean {val:.6}",
            stage.unroll_len, stage.skipped, stage.validation_len
        );
    }
    if log.stopped_early {
        println!("stopped early; kept stage {}", log.best_stage);
    }
    l2o::save_checkpoint(&weights, out, cfg.hash())?;
    println!("checkpoint -> {}", out.display());
    Ok(())
}

fn parse_optimizer(raw: &str, lr: Option<f64>, mode: ModeArg) -> Result<OptimizerSpec> {
    if let Some(ckpt) = raw.strip_prefix("l2o:") {
        if lr.is_some() {
            return Err(Error::Suite("--lr does not apply to the learned optimizer".into()));
        }
        // Resolve now: suite-relative paths make sense in suite files, not
        // on a command line.
        let checkpoint = std::path::absolute(ckpt)
            .map_err(|e| Error::io(ckpt.to_string(), e))?;
        Ok(OptimizerSpec::L2o { checkpoint, mode: mode.into(), id: None })
    } else if raw == "l2o" {
        Err(Error::Suite("the learned optimizer needs a checkpoint: use l2o:<path>".into()))
    } else {
        Ok(OptimizerSpec::Baseline { name: raw.to_string(), lr, id: None })
    }
}

#[allow(clippy::too_many_arguments)]
fn run_one(
    task: &Path,
    optimizer: &str,
    lr: Option<f64>,
    mode: ModeArg,
    steps: usize,
    seeds: usize,
    out: &Path,
    seed: Option<u64>,
) -> Result<()> {
    let text = fs::read_to_string(task).map_err(|e| Error::io(task.display().to_string(), e))?;
    let spec: TaskSpec =
        serde_json::from_str(&text).map_err(|e| Error::json(task.display().to_string(), e))?;
    let base = task.parent().unwrap_or(Path::new(".")).to_path_buf();
    let suite = SuiteSpec {
        seed: seed.unwrap_or(0),
        steps,
        replicates: seeds,
        tasks: vec![spec],
        optimizers: vec![parse_optimizer(optimizer, lr, mode)?],
    };
    finish_suite(&suite, &base, out)
}

fn run_bench(suite: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let mut spec = bench::load_suite(suite)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let base = suite.parent().unwrap_or(Path::new(".")).to_path_buf();
    finish_suite(&spec, &base, out)
}

fn finish_suite(spec: &SuiteSpec, base: &Path, out: &Path) -> Result<()> {
    let records = bench::run_suite(spec, base, out)?;
    bench::report(&records, ReportKind::Csv, &out.join("results.csv"))?;
    print_summary(&bench::summarize(&records));
    println!("records + results.csv -> {}", out.display());
    Ok(())
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        f64::NAN
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn print_summary(rows: &[SummaryRow]) {
    println!(
        "{:<30} {:<16} {:>3} {:>13} {:>11} {:>4}",
        "task", "optimizer", "n", "mean", "std", "div"
    );
    for row in rows {
        let stat = |v: Option<f64>| v.map_or_else(|| "-".into(), |x| format!("{x:.6}"));
        println!(
            "{:<30} {:<16} {:>3} {:>13} {:>11} {:>4}",
            row.task_id,
            row.optimizer_id,
            row.n,
            stat(row.mean),
            stat(row.std),
            row.diverged
        );
    }
}
