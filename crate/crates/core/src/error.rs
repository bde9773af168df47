//! Error type shared by all modules of the crate.

use crate::grid::{Cell, Vertex};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate cell {0}")]
    DuplicateCell(Cell),
    #[error("cell set is not edge-connected")]
    Disconnected,
    #[error("cell set is not simply connected (Euler characteristic {chi} != 1)")]
    NotSimplyConnected { chi: i64 },
    #[error("invalid size for standard domain: {0}")]
    InvalidSize(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("boundary walk closes with height {closure} at the origin; domain is untileable")]
    InconsistentBoundary { closure: i64 },
    #[error("domain is untileable")]
    Untileable,
    #[error("constraints admit no tiling")]
    Infeasible,
    #[error("tiling is malformed: first offending edge {from} -> {to}")]
    InvalidTiling { from: Vertex, to: Vertex },
    #[error("height function is invalid: first offending edge {from} -> {to}")]
    InvalidHeight { from: Vertex, to: Vertex },
    #[error("no {dir} flip at vertex {vertex}")]
    NotFlippable { vertex: Vertex, dir: &'static str },
    #[error("tilings belong to different domains")]
    DomainMismatch,
    #[error("height difference at {vertex} is not a multiple of lambda")]
    NonIntegral { vertex: Vertex },
    #[error("word does not encode a tiling")]
    InvalidWord,
    #[error("word length {got} does not match the {expected} interior vertices")]
    IndexMismatch { expected: usize, got: usize },
    #[error("numbering is not a bijection on the interior vertices")]
    InvalidNumbering,
    #[error("interval bounds are not comparable (lo must be <= hi)")]
    NotComparable,
    #[error("word is not one produced by the enumeration")]
    UnknownWord,
    #[error("count does not fit the supported profile width (min dimension must be <= 12)")]
    Overflow,
    #[error("unsupported render format: {0}")]
    UnsupportedFormat(String),
}
