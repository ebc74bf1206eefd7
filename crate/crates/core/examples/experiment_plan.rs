//! Runs a small experiment plan from config text, writes the CSV files and
//! prints the baseline vs SHX comparison.
//!
//! cargo run --release --example experiment_plan -- [output dir]

use std::path::{Path, PathBuf};

use shx::harness::{compare_report, parse_config_str, run_experiment, summarize, RunOptions};

const PLAN: &str = "\
# Two functions, every variant, three seeds, shortened run.
functions = sphere, rastrigin
runs = 3
generations = 40
archive_generations = 10
";

fn main() -> shx::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("shx_experiment_plan"));
    let plan = parse_config_str(PLAN, Path::new("<inline>"))?.into_plan();
    println!("{} cells x {} runs -> {}", plan.cells().len(), plan.runs, out.display());

    let outcome = run_experiment(&plan, &out, RunOptions::default())?;
    println!("{} trace files written", outcome.trace_files.len());
    print!("{}", compare_report(&outcome.summary));

    // summary.csv can always be rebuilt from the traces alone.
    let rebuilt = summarize(&out)?;
    assert_eq!(rebuilt.len(), outcome.summary.len());
    Ok(())
}
