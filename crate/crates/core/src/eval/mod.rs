//! Correlation statistics against listening-test scores and bitrate-ladder
//! reports.

mod dataset;
mod ladder;
mod stats;

pub use dataset::{
    correlate, evaluate_dataset, load_dataset, read_dataset, AnchorFilter, CorrelationReport,
    EvaluationRecord, CSV_HEADER,
};
pub use ladder::{ladder_report, LadderReport, LadderRung, LadderVerdict};
pub use stats::{average_ranks, outlier_ratio, pearson, spearman};
