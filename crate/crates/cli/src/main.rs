use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ergolearn_cli::config::{load_config, parse_seed_list, ExperimentConfig, ExperimentKind};
use ergolearn_cli::output::write_atomic;
use ergolearn_cli::report::consolidate;
use ergolearn_cli::runner::{run_experiment, simulate, Summary};
use ergolearn_cli::HarnessError;

const DEFAULT_OUT: &str = "ergolearn-out";

#[derive(Parser)]
#[command(name = "ergolearn", version, about = "Weak-merging experiments for Bayesian predictions of stationary processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment config (JSON)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Same as --config
    #[arg(value_name = "CONFIG", conflicts_with = "config")]
    config_path: Option<PathBuf>,
    /// Output directory (overrides the config's `output`)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed list overriding the config, e.g. `1..20` or `1,4,9`
    #[arg(long, value_name = "LIST")]
    seeds: Option<String>,
    /// Print nothing on success
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Write sample paths of the config's component
    Simulate(ExperimentArgs),
    /// Run a `merge` or `dirac-witness` experiment
    MergeReport(ExperimentArgs),
    /// Run a `calibrate` experiment
    Calibrate(ExperimentArgs),
    /// Run a `freq` experiment
    Freq(ExperimentArgs),
    /// Run a `decide` experiment
    Decide(ExperimentArgs),
    /// Run any experiment kind
    Run(ExperimentArgs),
    /// Consolidate summary.json files into one CSV
    Report {
        #[arg(value_name = "SUMMARY")]
        summaries: Vec<PathBuf>,
        /// Write the CSV here instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
}

fn load(args: &ExperimentArgs) -> Result<(ExperimentConfig, PathBuf), HarnessError> {
    let path = args
        .config
        .as_ref()
        .or(args.config_path.as_ref())
        .ok_or_else(|| HarnessError::Usage("a config path is required (--config PATH)".into()))?;
    let mut config = load_config(path)?;
    if let Some(list) = &args.seeds {
        config = config.with_seeds(parse_seed_list(list)?)?;
    }
    let out = args
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    Ok((config, out))
}

fn expect_kind(config: &ExperimentConfig, allowed: &[ExperimentKind], command: &str) -> Result<(), HarnessError> {
    if allowed.contains(&config.kind) {
        Ok(())
    } else {
        Err(HarnessError::Usage(format!("{command} cannot run a {} config; use `ergolearn run`", config.kind)))
    }
}

fn describe(summary: &Summary) -> String {
    let config = &summary.metadata.config;
    let seeds = config.seeds.len();
    if let Some(m) = &summary.merge {
        return format!(
            "{}: {seeds} seeds, N={}, weak {}/{seeds}, strong {}/{seeds}, median final Cesaro mean {}",
            summary.kind, config.horizon, m.weak_count, m.strong_count, m.median_final_cesaro_mean
        );
    }
    if let Some(d) = &summary.decision {
        return format!("decide: V_belief={} V_oracle={} gap={}", d.V_belief, d.V_oracle, d.gap);
    }
    if let Some(f) = &summary.frequencies {
        let worst = f.iter().map(|r| r.max_gap).fold(0.0, f64::max);
        return format!("freq: {seeds} seeds, worst block gap {worst}");
    }
    format!("{}: {seeds} seeds, N={}", summary.kind, config.horizon)
}

fn experiment(args: &ExperimentArgs, allowed: &[ExperimentKind], command: &str) -> Result<(), HarnessError> {
    let (config, out) = load(args)?;
    expect_kind(&config, allowed, command)?;
    let outcome = run_experiment(&config, &out)?;
    if !args.quiet {
        println!("{}", describe(&outcome.summary));
        println!("wrote {} files to {}", outcome.files.len(), out.display());
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<(), HarnessError> {
    use ExperimentKind::*;
    match command {
        Command::Simulate(args) => {
            let (config, out) = load(&args)?;
            let files = simulate(&config, &out)?;
            if !args.quiet {
                println!("wrote {} files to {}", files.len(), out.display());
            }
            Ok(())
        }
        Command::MergeReport(args) => experiment(&args, &[Merge, DiracWitness], "merge-report"),
        Command::Calibrate(args) => experiment(&args, &[Calibrate], "calibrate"),
        Command::Freq(args) => experiment(&args, &[Freq], "freq"),
        Command::Decide(args) => experiment(&args, &[Decide], "decide"),
        Command::Run(args) => experiment(&args, &[Merge, Calibrate, Freq, Decide, DiracWitness], "run"),
        Command::Report { summaries, out, quiet } => {
            let csv = consolidate(&summaries)?;
            match out {
                Some(path) => {
                    write_atomic(&path, csv.as_str().as_bytes())?;
                    if !quiet {
                        println!("wrote {} rows to {}", summaries.len(), path.display());
                    }
                }
                None => print!("{}", csv.as_str()),
            }
            Ok(())
        }
    }
}

fn fail(err: &HarnessError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&HarnessError::Usage(e.to_string().trim_end().to_string())),
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
