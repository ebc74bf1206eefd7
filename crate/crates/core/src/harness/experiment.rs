//! Batch execution of an [`ExperimentPlan`] and the CSV files it produces.
//!
//! * `trace_<function>_<variant>_<seed>.csv`, one per run, with header
//!   `generation,best_fitness,mean_fitness,fe_count`;
//! * `summary.csv` with header `function,variant,mean,stddev,runs`, one row
//!   per cell, ordered by function then variant.
//!
//! Reals are written as `{:.16e}` (17 significant digits), which parses back
//! to the identical `f64`. Every file is written to a temporary name and then
//! renamed into place.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::benchmarks::FunctionName;
use crate::engine::{run, RunTrace};
use crate::error::{Error, Result};
use crate::harness::plan::{Cell, ExperimentPlan, Variant};

pub const TRACE_HEADER: &str = "generation,best_fitness,mean_fitness,fe_count";
pub const SUMMARY_HEADER: &str = "function,variant,mean,stddev,runs";
pub const SUMMARY_FILE: &str = "summary.csv";

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trace_file_name(function: FunctionName, variant: Variant, seed: u64) -> String {
    format!("trace_{function}_{variant}_{seed}.csv")
}

/// Inverse of [`trace_file_name`].
pub fn parse_trace_file_name(name: &str) -> Option<(FunctionName, Variant, u64)> {
    let stem = name.strip_prefix("trace_")?.strip_suffix(".csv")?;
    let (function, rest) = stem.split_once('_')?;
    let (variant, seed) = rest.rsplit_once('_')?;
    Some((function.parse().ok()?, variant.parse().ok()?, seed.parse().ok()?))
}

pub fn trace_csv(trace: &RunTrace) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in &trace.records {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.generation,
            format_real(r.best_fitness),
            format_real(r.mean_fitness),
            r.fe_count
        );
    }
    out
}

/// One parsed data row of a trace file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub fe_count: u64,
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == TRACE_HEADER => {}
        _ => return Err(bad(1, format!("expected header `{TRACE_HEADER}`"))),
    }
    lines
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(bad(i + 1, format!("expected 4 fields, got {}", f.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(i + 1, format!("bad number `{s}`")));
            let int = |s: &str| s.parse::<u64>().map_err(|_| bad(i + 1, format!("bad integer `{s}`")));
            Ok(TraceRow {
                generation: int(f[0])? as usize,
                best_fitness: num(f[1])?,
                mean_fitness: num(f[2])?,
                fe_count: int(f[3])?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub function: FunctionName,
    pub variant: Variant,
    pub mean: f64,
    /// Sample standard deviation (n − 1); NaN when fewer than two runs.
    pub stddev: f64,
    pub runs: usize,
}

impl SummaryRow {
    pub fn from_values(function: FunctionName, variant: Variant, values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let stddev = if n < 2 {
            f64::NAN
        } else {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Self {
            function,
            variant,
            mean,
            stddev,
            runs: n,
        }
    }
}

fn sort_rows(rows: &mut [SummaryRow]) {
    rows.sort_by_key(|r| (r.function, r.variant.ordinal()));
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.function,
            r.variant,
            format_real(r.mean),
            format_real(r.stddev),
            r.runs
        );
    }
    out
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == SUMMARY_HEADER => {}
        _ => return Err(bad(1, format!("expected header `{SUMMARY_HEADER}`"))),
    }
    lines
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(bad(i + 1, format!("expected 5 fields, got {}", f.len())));
            }
            let wrap = |e: Error| bad(i + 1, e.to_string());
            Ok(SummaryRow {
                function: f[0].parse().map_err(wrap)?,
                variant: f[1].parse().map_err(wrap)?,
                mean: f[2].parse().map_err(|_| bad(i + 1, format!("bad number `{}`", f[2])))?,
                stddev: f[3].parse().map_err(|_| bad(i + 1, format!("bad number `{}`", f[3])))?,
                runs: f[4].parse().map_err(|_| bad(i + 1, format!("bad integer `{}`", f[4])))?,
            })
        })
        .collect()
}

/// Writes `contents` next to `path` under a temporary name, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunFailure {
    pub cell: Cell,
    pub seed: u64,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub summary: Vec<SummaryRow>,
    pub trace_files: Vec<PathBuf>,
    pub failures: Vec<RunFailure>,
}

impl ExperimentOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; 0 means one per available CPU.
    pub workers: usize,
    /// Also emit `plot.gp`, a gnuplot script for the traces.
    pub gnuplot: bool,
}

struct Job {
    cell: Cell,
    run: usize,
}

/// Runs every (cell, run) pair of `plan`, writing traces and `summary.csv`
/// into `out`.
///
/// A failing run is recorded in [`ExperimentOutcome::failures`] and the
/// remaining runs continue; its cell is summarized over the runs that did
/// complete. Output is identical for any worker count.
pub fn run_experiment(plan: &ExperimentPlan, out: &Path, opts: RunOptions) -> Result<ExperimentOutcome> {
    plan.validate()?;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let jobs: Vec<Job> = plan
        .cells()
        .into_iter()
        .flat_map(|cell| (0..plan.runs).map(move |run| Job { cell, run }))
        .collect();
    let workers = match opts.workers {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    }
    .min(jobs.len().max(1));

    type JobResult = std::result::Result<(PathBuf, f64), String>;
    let results: Mutex<Vec<Option<JobResult>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let execute = |job: &Job| -> JobResult {
        let cfg = plan.config_for(job.cell, job.run);
        let trace = run(&cfg).map_err(|e| e.to_string())?;
        let path = out.join(trace_file_name(job.cell.function, job.cell.variant, cfg.seed));
        write_atomic(&path, &trace_csv(&trace)).map_err(|e| e.to_string())?;
        Ok((path, trace.final_fitness()))
    };
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let r = execute(job);
                results.lock().expect("result lock poisoned")[i] = Some(r);
            });
        }
    });
    let results = results.into_inner().expect("result lock poisoned");

    let mut finals: BTreeMap<(FunctionName, usize), (Cell, Vec<f64>)> = BTreeMap::new();
    let mut trace_files = Vec::new();
    let mut failures = Vec::new();
    for (job, res) in jobs.iter().zip(results) {
        let entry = finals
            .entry((job.cell.function, job.cell.variant.ordinal()))
            .or_insert_with(|| (job.cell, Vec::new()));
        match res.expect("every job runs") {
            Ok((path, fitness)) => {
                trace_files.push(path);
                entry.1.push(fitness);
            }
            Err(message) => failures.push(RunFailure {
                cell: job.cell,
                seed: plan.seed(job.run),
                message,
            }),
        }
    }
    let mut summary: Vec<SummaryRow> = finals
        .into_values()
        .filter(|(_, v)| !v.is_empty())
        .map(|(cell, v)| SummaryRow::from_values(cell.function, cell.variant, &v))
        .collect();
    sort_rows(&mut summary);
    write_atomic(&out.join(SUMMARY_FILE), &summary_csv(&summary))?;
    if opts.gnuplot {
        write_atomic(&out.join("plot.gp"), &gnuplot_script(plan))?;
    }

    Ok(ExperimentOutcome {
        summary,
        trace_files,
        failures,
    })
}

/// Final elite per seed, keyed by cell.
type CellFinals = BTreeMap<(FunctionName, usize), (Variant, Vec<(u64, f64)>)>;

/// Rebuilds `summary.csv` from the trace files found in `dir`.
pub fn summarize(dir: &Path) -> Result<Vec<SummaryRow>> {
    let mut groups = CellFinals::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        let Some((function, variant, seed)) = name.to_str().and_then(parse_trace_file_name) else {
            continue;
        };
        let rows = read_trace(&entry.path())?;
        let last = rows.last().ok_or_else(|| Error::Parse {
            path: entry.path(),
            line: 1,
            message: "trace has no data rows".into(),
        })?;
        groups
            .entry((function, variant.ordinal()))
            .or_insert_with(|| (variant, Vec::new()))
            .1
            .push((seed, last.best_fitness));
    }
    let mut rows: Vec<SummaryRow> = groups
        .into_iter()
        .map(|((function, _), (variant, mut v))| {
            // Directory order is arbitrary; sum in seed order for reproducible rounding.
            v.sort_by_key(|(seed, _)| *seed);
            let values: Vec<f64> = v.into_iter().map(|(_, f)| f).collect();
            SummaryRow::from_values(function, variant, &values)
        })
        .collect();
    sort_rows(&mut rows);
    write_atomic(&dir.join(SUMMARY_FILE), &summary_csv(&rows))?;
    Ok(rows)
}

fn gnuplot_script(plan: &ExperimentPlan) -> String {
    let mut s = String::from(
        "# best fitness per generation, first seed of each variant\n\
         set datafile separator ','\nset key autotitle columnhead\nset logscale y\n\
         set xlabel 'generation'\nset ylabel 'best fitness'\nset terminal pngcairo size 900,600\n",
    );
    let seed = plan.seed(0);
    for f in &plan.functions {
        let _ = writeln!(s, "set output '{f}.png'\nset title '{f}'");
        let series: Vec<String> = plan
            .variants
            .iter()
            .map(|v| {
                format!(
                    "'{}' using 1:2 with lines title '{v}'",
                    trace_file_name(*f, *v, seed)
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
    }
    s
}
