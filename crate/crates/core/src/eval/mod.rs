//! Detection evaluation under any IoU criterion: JSON-lines ingestion,
//! greedy matching, COCO-style AP, criteria comparison tables and timing.

mod ap;
mod bench;
mod compare;
mod matching;
mod records;
mod report;
mod sample;

use thiserror::Error;

use crate::criteria::CriterionError;

pub use ap::{average_precision, RECALL_POINTS};
pub use bench::{bench, BenchReport, BenchRow, MIN_BENCH_PAIRS};
pub use compare::{compare_criteria, CompareTable};
pub use matching::{greedy_match, match_detections, MatchDecision};
pub use records::{
    load_annotations, load_annotations_in, load_detections, load_detections_in, load_pairs,
    parse_annotations, parse_annotations_in, parse_detections, parse_detections_in, parse_pairs,
    write_annotations, write_detections, AngleUnit, Annotations, DetectionRecord, Detections,
};
pub use report::{evaluate, ClassReport, EvalConfig, EvalReport, MatchLogEntry};
pub use sample::{random_pair, random_pairs, random_rect, FovRange};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {field} = {value} is out of range")]
    Range {
        line: usize,
        field: &'static str,
        value: f64,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Criterion(#[from] CriterionError),
    #[error("invalid evaluation config: {0}")]
    InvalidConfig(String),
    #[error("AP is undefined without ground truth")]
    UndefinedAp,
    #[error("{0} must not be empty")]
    EmptyInput(&'static str),
    #[error("benchmark needs at least {MIN_BENCH_PAIRS} pairs, got {0}")]
    TooFewPairs(usize),
}
