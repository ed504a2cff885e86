//! Seeded parallel sweeps, summaries and property audits.

pub mod audit;
pub mod instances;
pub mod summary;
pub mod sweep;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

pub use audit::{run_suite, AuditLine, InvariantObserver, Suite};
pub use instances::{named_instance, resolve_instance, NAMED_INSTANCES};
pub use summary::{annotate_regimes, mean_std, summarize, CellSummary, Regime, RegimeAnnotation, SweepSummary};
pub use sweep::{run_sweep, stream_id, RunRecord, SweepConfig, DEFAULT_EPSILONS, DESK_EPSILONS};

use crate::Result;

/// Writes `runs.csv`, `summary.csv` and `summary.json` into `dir`.
pub fn write_outputs(dir: &Path, config: &SweepConfig, records: &[RunRecord], summary: &SweepSummary) -> Result<()> {
    fs::create_dir_all(dir)?;
    summary::write_runs_csv(records, BufWriter::new(File::create(dir.join("runs.csv"))?))?;
    summary::write_summary_csv(summary, BufWriter::new(File::create(dir.join("summary.csv"))?))?;
    let doc = serde_json::json!({ "config": config, "summary": summary });
    serde_json::to_writer_pretty(BufWriter::new(File::create(dir.join("summary.json"))?), &doc)?;
    Ok(())
}

/// Runs, summarises and annotates a sweep, then writes it to `dir`.
pub fn sweep_to_dir(config: &SweepConfig, dir: &Path) -> Result<SweepSummary> {
    let records = run_sweep(config)?;
    let summary = annotate_regimes(summarize(&records)?, &config.instance()?)?;
    write_outputs(dir, config, &records, &summary)?;
    Ok(summary)
}
