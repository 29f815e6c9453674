use thiserror::Error;

/// Everything that can go wrong across the library.
///
/// The two last variants deserve a note: `InternalInvariant` fires when a
/// structural fact the witness construction relies on fails to hold (which
/// would mean the construction itself is unsound), while
/// `ConjectureViolation` fires when an exhaustive frequency scan finds no
/// abundant element where one was guaranteed to exist. Neither is ever
/// swallowed or downgraded — a reproducible instance of either would be far
/// more interesting than a passing run.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: a member set needs at least one element")]
    EmptySetLine { line: usize },

    #[error("line {line}: `{token}` is not a positive integer element label")]
    MalformedToken { line: usize, token: String },

    #[error("input uses {count} distinct element labels; at most 64 are supported")]
    TooManyElements { count: usize },

    #[error("input contains no member sets")]
    EmptyFamily,

    #[error("no generator sets given")]
    NoGenerators,

    #[error("generator {index} is empty")]
    EmptyGenerator { index: usize },

    #[error("family is not union-closed: the union of {a} and {b} is {union}, which is missing")]
    NotUnionClosed { a: String, b: String, union: String },

    #[error("member index {index} out of range for a family of {len} sets")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("decomposition does not describe this family")]
    DecompositionMismatch,

    #[error("sets {a} and {b} lie in different peel layers")]
    DifferentLayers { a: String, b: String },

    #[error("intersection number needs two distinct apexes")]
    SameApex,

    #[error("sets in the first peel layer have no layer below them")]
    NoLayerBelow,

    #[error("{op} requires {expected}")]
    Precondition { op: &'static str, expected: String },

    #[error("{what} must be between {min} and {max}, got {got}")]
    ParameterOutOfRange {
        what: &'static str,
        got: u64,
        min: u64,
        max: u64,
    },

    #[error("internal invariant violated in {op}: {detail}")]
    InternalInvariant { op: &'static str, detail: String },

    #[error("no abundant element found by {op}: {detail}")]
    ConjectureViolation { op: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
