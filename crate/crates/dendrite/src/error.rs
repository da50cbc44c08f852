//! Crate-wide error type.
//!
//! Errors are split by the stage that produces them: construction and
//! parsing problems (bad input), semantic analysis refusals (preconditions
//! of an operation not met), and internal-consistency violations that a
//! valid system should never trigger.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("map {index} is not a contraction")]
    NotAContraction { index: usize },

    #[error("condition {0} does not hold for this system")]
    ConditionViolated(&'static str),

    #[error("cell cap exceeded: {cells} cells requested, cap is {cap}")]
    DepthCapExceeded { cells: u128, cap: u128 },

    #[error("point is not a vertex of any depth-1 cell")]
    NotACellVertex,

    #[error("group element {element} does not fix the base polygon")]
    GroupDoesNotFixPolygon { element: usize },

    #[error("operation requires a regular base polygon")]
    RegularityRequired,

    #[error("operation requires a declared symmetry group containing the rotation group of the polygon")]
    SymmetryRequired,

    #[error("incidence graph at depth {depth} is not a tree: {detail}")]
    NotATree { depth: usize, detail: String },

    #[error("zipper chain broken at map {index}: {detail}")]
    ChainBroken { index: usize, detail: String },

    #[error("no chain of subpolygons found: {0}")]
    ChainNotFound(String),

    #[error("invalid selection: {0}")]
    InvalidSelection(String),

    #[error("selected segments do not chain the requested endpoints: {0}")]
    PolylineBroken(String),

    #[error("selected segments form a self-intersecting chain: {0}")]
    NotSimple(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
