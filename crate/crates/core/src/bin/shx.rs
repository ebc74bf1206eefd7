use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use shx::harness::{compare_report, parse_config, read_summary, run_experiment, summarize, RunOptions};

#[derive(Parser)]
#[command(name = "shx", about = "Run and compare SHX experiments")]
struct Cli {
    /// Override the base seed of the plan.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every cell of a plan and write traces plus summary.csv.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: `out` from the config, else ./results).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 0 uses every CPU.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Also write a gnuplot script for the traces.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Rebuild summary.csv from the trace files in a directory.
    Summarize {
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the baseline vs SHX comparison for a summary.csv.
    Report {
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> shx::Result<bool> {
    match cli.command {
        Command::Run {
            config,
            out,
            workers,
            gnuplot,
        } => {
            let mut plan = parse_config(&config)?.into_plan();
            if let Some(seed) = cli.seed {
                plan.base_seed = seed;
            }
            let out = out
                .or_else(|| plan.out.clone())
                .unwrap_or_else(|| PathBuf::from("results"));
            let outcome = run_experiment(&plan, &out, RunOptions { workers, gnuplot })?;
            for f in &outcome.failures {
                eprintln!(
                    "run failed: {} / {} seed {}: {}",
                    f.cell.function, f.cell.variant, f.seed, f.message
                );
            }
            println!(
                "{} traces and summary.csv written to {}",
                outcome.trace_files.len(),
                out.display()
            );
            print!("{}", compare_report(&outcome.summary));
            Ok(outcome.ok())
        }
        Command::Summarize { out } => {
            let rows = summarize(&out)?;
            println!("summary.csv rebuilt from traces: {} cells", rows.len());
            Ok(true)
        }
        Command::Report { out } => {
            let rows = read_summary(&out.join("summary.csv"))?;
            print!("{}", compare_report(&rows));
            Ok(true)
        }
    }
}
