//! Experiment plans, batch execution, CSV output and result comparison.

pub mod config;
pub mod experiment;
pub mod plan;
pub mod report;

pub use config::{parse_config, parse_config_str, ConfigFile};
pub use experiment::{
    read_summary, read_trace, run_experiment, summarize, ExperimentOutcome, RunOptions, SummaryRow,
    TraceRow,
};
pub use plan::{Cell, ExperimentPlan, Variant};
pub use report::{compare_report, ComparisonReport};
