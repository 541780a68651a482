use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group parameters: {0}")]
    InvalidParameter(String),

    #[error("table is not a group table: {0}")]
    Table(TableViolation),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("subsets belong to groups of different order ({0} vs {1})")]
    MismatchedParent(usize, usize),

    #[error("subset must be nonempty")]
    EmptySubset,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} exceeds the configured cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("search budget of {budget} exhausted after {examined} subsets")]
    BudgetExceeded { budget: u64, examined: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// First violation found while validating a Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableViolation {
    NotSquare {
        row: usize,
        len: usize,
    },
    Empty,
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },
    RowNotPermutation(usize),
    ColumnNotPermutation(usize),
    NoIdentity,
    NoInverse(usize),
    NotAssociative {
        x: usize,
        y: usize,
        z: usize,
    },
}

impl std::fmt::Display for TableViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TableViolation::NotSquare { row, len } => {
                write!(f, "row {row} has length {len}, table is not square")
            }
            TableViolation::Empty => write!(f, "table is empty"),
            TableViolation::OutOfRange { row, col, value } => {
                write!(f, "entry ({row}, {col}) = {value} is out of range")
            }
            TableViolation::RowNotPermutation(r) => write!(f, "row {r} is not a permutation"),
            TableViolation::ColumnNotPermutation(c) => {
                write!(f, "column {c} is not a permutation")
            }
            TableViolation::NoIdentity => write!(f, "no two-sided identity"),
            TableViolation::NoInverse(x) => write!(f, "element {x} has no inverse"),
            TableViolation::NotAssociative { x, y, z } => {
                write!(f, "({x}*{y})*{z} != {x}*({y}*{z})")
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
