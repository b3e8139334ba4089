use std::fmt;

use crate::board::{DiagonalId, Square};

/// Errors produced by board, walk, decoder and construction operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid board dimensions {m}x{n}")]
    InvalidBoard { m: usize, n: usize },

    #[error("square {square} is not on the {m}x{n} board")]
    OffBoard { square: Square, m: usize, n: usize },

    #[error("transpose is only defined on square boards, got {m}x{n}")]
    NotSquareBoard { m: usize, n: usize },

    #[error("index {index} is out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("operation is undefined on the corner diagonal")]
    CornerDiagonal,

    #[error("square {square} is not in diagonal {diagonal}")]
    NotInDiagonal { square: Square, diagonal: DiagonalId },

    #[error("negative exponent {0} in move sequence")]
    NegativeExponent(i64),

    #[error("walk is not a hamiltonian path")]
    NotHamiltonian,

    #[error("diagonal {0} has squares traveling both east and north")]
    MixedDiagonal(DiagonalId),

    #[error("invalid path spec: {0}")]
    InvalidSpec(String),

    #[error("enumerating {m}x{n} exceeds the cap ({detail})")]
    CapExceeded { m: usize, n: usize, detail: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("construction failed self-validation: {0}")]
    ConstructionInvalid(String),

    #[error("no hamiltonian path realizes {0}")]
    ConstructionImpossible(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidBoard { .. } => "invalid_board",
            Error::OffBoard { .. } => "off_board",
            Error::NotSquareBoard { .. } => "not_square_board",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::CornerDiagonal => "corner_diagonal",
            Error::NotInDiagonal { .. } => "not_in_diagonal",
            Error::NegativeExponent(_) => "negative_exponent",
            Error::NotHamiltonian => "not_hamiltonian",
            Error::MixedDiagonal(_) => "mixed_diagonal",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::HypothesisViolation(_) => "hypothesis_violation",
            Error::ConstructionInvalid(_) => "construction_invalid",
            Error::ConstructionImpossible(_) => "construction_impossible",
            Error::Precondition(_) => "precondition",
            Error::Parse(_) => "parse",
        }
    }

    pub(crate) fn hypothesis(msg: impl fmt::Display) -> Self {
        Error::HypothesisViolation(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
