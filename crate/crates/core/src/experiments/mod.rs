//! Closed-form gap arithmetic, the avoidance Monte Carlo check, and the
//! generate → reduce → solve pipeline.

mod gap;
mod lemma1;
mod pipeline;

pub use gap::{gap_report, GapReport};
pub use lemma1::{lemma1_check, Lemma1Report};
pub use pipeline::{pipeline, stream_seed, write_pipeline_csv, PipelineConfig, PipelineRow, PIPELINE_HEADER, ROW_KINDS};

/// Renders `key=value` pairs on one line.
pub fn kv_line<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> String {
    pairs.iter().map(|(k, v)| format!("{}={}", k.as_ref(), v.as_ref())).collect::<Vec<_>>().join(" ")
}
