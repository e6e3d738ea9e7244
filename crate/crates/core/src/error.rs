use thiserror::Error;

use crate::tuple::IndexTuple;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tuples have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),

    #[error("invalid tuple {entries:?}: {reason}")]
    InvalidTuple { entries: Vec<i64>, reason: &'static str },

    #[error("entry {entry} lies outside [1, {modulus}]")]
    OutOfRange { entry: i64, modulus: i64 },

    #[error("entries of {entries:?} collide modulo {modulus}")]
    CyclicCollision { entries: Vec<i64>, modulus: i64 },

    #[error("{tuple} is not in the label set {set}")]
    NotInLabelSet { tuple: IndexTuple, set: String },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{tuple} is not an object of {model}")]
    NotAnObject { tuple: IndexTuple, model: String },

    #[error("there is no non-zero morphism {from} -> {to}")]
    NoMorphism { from: IndexTuple, to: IndexTuple },

    #[error("morphisms are not composable: {0} != {1}")]
    NotComposable(IndexTuple, IndexTuple),

    #[error("matrix shapes do not match: {0}")]
    ShapeMismatch(String),

    #[error("no extension of {b} by {a}")]
    NoExtension { b: IndexTuple, a: IndexTuple },

    #[error("operation needs a {expected} model, got {got}")]
    WrongModelKind { expected: &'static str, got: String },

    #[error("{0} is not a summand of the rigid set")]
    NotASummand(IndexTuple),

    #[error("mutation at {at} is ambiguous: candidates {candidates:?}")]
    AmbiguousMutation { at: IndexTuple, candidates: Vec<IndexTuple> },

    #[error("integer overflow during rank computation")]
    Overflow,

    #[error("unsupported emit request: {0}")]
    InvalidEmit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
