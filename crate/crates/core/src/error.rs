use thiserror::Error;

use crate::matrix::Window;
use crate::poly::VarId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational literal {0:?}")]
    BadLiteral(String),
    #[error("zero denominator in literal {0:?}")]
    ZeroDenominator(String),
    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomial division by the zero polynomial")]
    DivisorZeroPoly,
    #[error("inexact polynomial division: {num} is not divisible by {den}")]
    InexactDivision { num: String, den: String },
    #[error("variable {0} is not bound")]
    UnboundVariable(VarId),
    #[error("malformed polynomial {0:?}")]
    BadPolynomial(String),

    #[error("matrix of size {0} has no interior (need n >= 3)")]
    NoInterior(usize),
    #[error("window {window} does not fit in a {n}x{n} matrix")]
    WindowOutOfBounds { window: Window, n: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NonSquare { rows: usize, cols: usize },
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("matrix parse error: {0}")]
    Format(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("cannot condense a {0}x{0} matrix")]
    CannotCondense(usize),
    #[error("zero divisor at ({row},{col}) of the {level}x{level} level")]
    DivisorZero {
        level: usize,
        row: usize,
        col: usize,
    },
    #[error("condensation level {0} is unavailable")]
    LevelUnavailable(usize),
    #[error("zero report at level {level} is inconsistent with an {n}x{n} matrix")]
    InconsistentLevel { level: usize, n: usize },

    #[error("repair rounds exhausted after {0} rounds")]
    RoundsExhausted(usize),
    #[error("strategy {strategy} is inapplicable: {reason}")]
    StrategyInapplicable { strategy: String, reason: String },
    #[error("entry ({row},{col}) cannot be replaced: {reason}")]
    EntryNotReplaceable {
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("matrix has symbolic entries")]
    SymbolicEntry,
    #[error("cofactor expansion is capped at n = {cap}, got {n}")]
    DimensionCap { n: usize, cap: usize },
    #[error("k = {k} out of range for an {n}x{n} matrix")]
    LevelOutOfRange { k: usize, n: usize },
}
