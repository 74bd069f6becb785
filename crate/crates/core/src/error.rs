//! Crate-wide error type.

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed algebra data (table length, value range, duplicate names).
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    /// Text-format parse failure; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A configured resource limit would be exceeded.
    #[error("capacity exceeded: {what} needs {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    /// No operation with this name exists.
    #[error("unknown operation `{0}`")]
    UnknownOp(String),

    /// The operation requires an algebra of uncountable type, but every
    /// basic operation is a bijection or a constant.
    #[error("algebra is of countable type: every basic operation is a bijection or a constant")]
    NotUncountable,

    /// The digraph is connected but has no bottom strong component.
    #[error("no bottom component: the component has more than one minimal strong component")]
    NoBottom,

    /// The operation requires a connected digraph.
    #[error("digraph is not connected")]
    NotConnected,

    /// Two algebras cannot be compared: their operation-name sets differ.
    #[error("operation names differ: {left:?} vs {right:?}")]
    OpSignatureMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },

    /// The subpower has no elements.
    #[error("subpower is empty")]
    EmptySubpower,

    /// A tuple set that was expected to be closed under the basic
    /// operations is not.
    #[error("tuple set is not closed under `{op}`")]
    NotClosed { op: String },

    /// The modulus does not divide the index-set size.
    #[error("{modulus} does not divide the index-set size {n_positions}")]
    NotDivisible { modulus: usize, n_positions: usize },

    /// A block offset outside `0..=max`.
    #[error("offset {offset} is out of range 0..={max}")]
    OffsetOutOfRange { offset: usize, max: usize },

    /// Two tuples that must have equal length do not.
    #[error("tuple lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// An input sequence that must be non-empty is empty.
    #[error("input is empty")]
    EmptyInput,

    /// The profile is defined only for the three-element chain algebra.
    #[error("not the chain algebra: expected carrier 3 with the single operation [0, 0, 1]")]
    NotChainAlgebra,

    /// Malformed tuple data (length or entry range).
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),

    /// Malformed or non-closed field of sets.
    #[error("invalid field of sets: {0}")]
    InvalidFieldOfSets(String),

    /// Invalid witness-construction parameters.
    #[error("invalid witness parameters: {0}")]
    InvalidWitness(String),

    /// Malformed partition data (overlap, gap, out-of-range member).
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// A serialized subpower that fails semantic validation (closure,
    /// generator reachability, base mismatch).
    #[error("invalid subpower: {0}")]
    InvalidSubpower(String),
}

pub type Result<T> = std::result::Result<T, Error>;
