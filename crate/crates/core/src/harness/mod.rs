//! Run loop, batches, threshold sweeps and file outputs.

mod batch;
mod config;
mod output;
mod run;

pub use batch::{
    ablation_delta, format_mean_std, mean_std, run_batch, run_dir, summary_from_dir, write_ablation_csv,
    write_summary_csv, AblationReport, AblationRow, BatchReport, RunOutcome, RunSummary, SummaryRow,
};
pub use config::{Algorithm, RunConfig};
pub use output::{
    emit_outputs, format_real, hv_svg, read_metrics_csv, write_metrics_csv, OutputPaths, FRONT_FILE, LOG_FILE,
    METRICS_FILE, METRICS_HEADER, SVG_FILE,
};
pub use run::{run, run_observed, FinalMember, GenerationLog, RunReport, SeriesRow};

/// The threshold sweep set.
pub const ABLATION_DELTAS: [f64; 5] = [0.01, 0.05, 0.1, 0.5, 1.0];

/// Seeds `1..=10`.
pub fn default_seeds() -> Vec<u64> {
    (1..=10).collect()
}
