use thiserror::Error;

use crate::proofcheck::CaseReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("delta is undefined on equal vertices ({0})")]
    Distinctness(String),

    #[error("ordering violated: {0}")]
    Order(String),

    #[error("pattern {0:?} is not realizable by any increasing vertex list")]
    Realizability(Vec<u8>),

    #[error("resource guard: {0}")]
    Resource(String),

    #[error("size requirement not met: {0}")]
    Size(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("malformed delta pattern: {0}")]
    Pattern(String),

    #[error("delta value {value} outside base ground set of size {ground_size}")]
    BaseRange { value: u32, ground_size: u32 },

    #[error("search exhausted after {attempts} attempts ({note})")]
    SearchExhausted { attempts: u64, note: String },

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("pipeline invariant broken: {0}")]
    Pipeline(String),

    #[error("claim violated: {} red edges in case {}", .0.red_count, .0.case_label)]
    ClaimViolation(Box<CaseReport>),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
