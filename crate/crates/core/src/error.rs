use thiserror::Error;

use crate::report::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier must have at least one element")]
    EmptyCarrier,

    #[error("table row {row} has {len} entries, expected {n}")]
    NonSquareTable { row: usize, len: usize, n: usize },

    #[error("table entry [{x}][{y}] = {value} is outside 0..{n}")]
    EntryOutOfRange { x: usize, y: usize, value: usize, n: usize },

    #[error("element index {index} is outside 0..{n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("declared size {declared} does not match table with {rows} rows")]
    SizeMismatch { declared: usize, rows: usize },

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("not a semilattice: {0}")]
    NotASemilattice(String),

    #[error("malformed structure: {0}")]
    MalformedStructure(String),

    #[error("not a semilattice of groups: {0}")]
    NotAnSlg(String),

    #[error("map {from} -> {to} is not a group homomorphism (fails at {x}, {y})")]
    NonHomomorphism { from: usize, to: usize, x: usize, y: usize },

    #[error("linking maps are incoherent at classes {0}, {1}, {2}")]
    IncoherentHoms(usize, usize, usize),

    #[error("invalid linking map {from} -> {to}: {reason}")]
    InvalidHom { from: usize, to: usize, reason: String },

    #[error("invalid decoration: {0}")]
    InvalidDecoration(String),

    #[error("membership violation ({kind}): {check} fails{}", fmt_witness(.witness))]
    MembershipViolation {
        kind: String,
        check: String,
        witness: Option<Witness>,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("post-condition {check} failed{}", fmt_witness(.witness))]
    PostConditionFailed { check: String, witness: Option<Witness> },

    #[error("{what} size {got} exceeds the limit {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("size must be positive")]
    ZeroSize,

    #[error(transparent)]
    Parse(#[from] crate::identity::ParseError),

    #[error(transparent)]
    Eval(#[from] crate::identity::EvalError),

    #[error("invalid JSON: {0}")]
    Json(String),

    #[error("unknown identity: {0}")]
    UnknownIdentity(String),
}

fn fmt_witness(w: &Option<Witness>) -> String {
    match w {
        Some(w) => format!(" at {w}"),
        None => String::new(),
    }
}
