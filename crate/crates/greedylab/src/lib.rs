//! Randomized greedy independent sets and matchings on bounded-degree graphs.
//!
//! The library has three layers:
//!
//! * simulation: [`graph`] builds graphs and trees, [`weights`] draws i.i.d.
//!   continuous weights, [`greedy`] runs the max-weight greedy selection and
//!   Monte Carlo studies of it;
//! * locality: [`ibs`] computes influence blocking sets (the region of the
//!   graph that can affect a greedy decision) and [`bonus`] evaluates the
//!   bottom-up tree recursion that decides the root's fate in one pass;
//! * analysis: [`dist`] iterates the integer-valued distributional recursions
//!   that describe the greedy process on trees, and [`bounds`] evaluates the
//!   closed-form limits, finite-girth corrections, and variance bounds.

pub mod bonus;
pub mod bounds;
pub mod dist;
pub mod graph;
pub mod greedy;
pub mod ibs;
pub mod weights;

use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gave up after {attempts} attempts generating an {r}-regular graph on {n} nodes with girth >= {girth_min}")]
    AttemptsExhausted {
        n: usize,
        r: usize,
        girth_min: usize,
        attempts: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown graph name: {0:?}")]
    UnknownName(String),
    #[error("malformed edge list: {0}")]
    ParseGraph(String),
    #[error("weight assignment mismatch: expected {expected} {target} weights, got {got}")]
    MissingWeights {
        target: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("query set is empty")]
    EmptyQuery,
    #[error("not a rooted tree: {0}")]
    NotATree(String),
    #[error("truncation K={k} too small: tail mass {tail:e} exceeds {limit:e}")]
    TruncationTooSmall { k: usize, tail: f64, limit: f64 },
    #[error("quadrature failed to reach tolerance {tol:e} on [{a}, {b}]")]
    QuadratureFailure { tol: f64, a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
