//! Crate-wide error types.

use thiserror::Error;

use crate::types::Type;

/// Errors produced while parsing a type expression.
///
/// All variants carry a character offset into the source string so callers
/// can render caret diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at column {pos}: {expected}")]
    Syntax { pos: usize, expected: String },
    #[error("unknown label `{label}` at column {pos}")]
    UnknownLabel { pos: usize, label: String },
    #[error("ambiguous expression at column {pos}: `->` is not associative, parenthesize one side")]
    AmbiguousArrow { pos: usize },
    #[error("the trivial type `I` cannot appear inside a word (column {pos})")]
    TrivialInWord { pos: usize },
}

impl ParseError {
    /// Character offset of the offending token.
    pub fn position(&self) -> usize {
        match *self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownLabel { pos, .. }
            | ParseError::AmbiguousArrow { pos }
            | ParseError::TrivialInWord { pos } => pos,
        }
    }

    /// Render the source line with a caret under the error position.
    pub fn caret_diagnostic(&self, src: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("error: {self}\n"));
        out.push_str(&format!("    {src}\n"));
        out.push_str("    ");
        for _ in 0..self.position() {
            out.push(' ');
        }
        out.push('^');
        out
    }
}

/// Errors for everything past the parser: registries, typed maps, products,
/// cones, and the map file format.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown system label `{0}`")]
    UnknownLabel(String),
    #[error("system `{0}` must have dimension >= 1")]
    ZeroDimension(String),
    #[error("`I` denotes the trivial type and cannot be registered as a system")]
    ReservedTrivialLabel,
    #[error("label `{0}` registered twice")]
    DuplicateLabel(String),
    #[error("invalid system label `{0}`")]
    InvalidLabel(String),

    #[error("type `{0}` is elementary and has no input/output decomposition")]
    NotAnArrow(Type),
    #[error("types `{0}` and `{1}` do not share a structure")]
    StructureMismatch(Type, Type),
    #[error("left-only padding failed to equalize structures of `{0}` and `{1}`")]
    PaddingFailure(Type, Type),

    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    TypeMismatch { expected: Type, found: Type },
    #[error("operands were built against different system registries")]
    RegistryMismatch,
    #[error("matrix shape {found_rows}x{found_cols} does not match the {rows}x{cols} contract of type `{ty}`")]
    MatrixShape { ty: Type, rows: usize, cols: usize, found_rows: usize, found_cols: usize },
    #[error("matrix entry at ({0}, {1}) is not finite")]
    NonFiniteEntry(usize, usize),
    #[error("coordinate vector of length {found} does not match dim {expected} of type `{ty}`")]
    VectorLength { ty: Type, expected: usize, found: usize },

    #[error("spanning failure: product basis of `{left}` x `{right}` is numerically singular (sigma_min = {sigma_min:.3e}, sigma_max = {sigma_max:.3e})")]
    SpanningFailure { left: Type, right: Type, sigma_min: f64, sigma_max: f64 },

    #[error("choi matrix must be {expected}x{expected} for type `{ty}`, got {rows}x{cols}")]
    ChoiShape { ty: Type, expected: usize, rows: usize, cols: usize },
    #[error("map is not Hermitian-preserving (tolerance {0:.1e}); Jordan decomposition undefined")]
    NotHermitianPreserving(f64),

    #[error("map file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
