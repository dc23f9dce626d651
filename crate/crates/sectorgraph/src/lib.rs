//! Random sector digraphs: generation, degree statistics, and the numerical
//! limits they converge to.
//!
//! A sector digraph on `n` random planar points draws an arc `i -> j` whenever
//! `j` falls inside the sector of amplitude `alpha`, radius `r`, and random
//! inclination attached to `i`. The crate provides:
//!
//! * exact geometric predicates and measures ([`geometry`]),
//! * point-process sampling and scalar probability kernels ([`pointprocess`]),
//! * grid-indexed digraph construction with a brute-force oracle ([`digraph`]),
//! * numerical evaluation of the limiting means, degree distribution, and
//!   variance/covariance structure ([`theory`]),
//! * seeded replicate experiments comparing simulation against those limits
//!   ([`montecarlo`]),
//! * a CLI front end ([`cli`]).
//!
//! With the default `parallel` feature, replicate loops and digraph
//! construction run on rayon; disabling it yields a sequential build with
//! identical numeric output.

pub mod cli;
pub mod digraph;
pub mod geometry;
pub mod montecarlo;
pub mod numeric;
pub mod par;
pub mod pointprocess;
pub mod theory;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported region: {0}")]
    UnsupportedRegion(&'static str),
    #[error("config error: {0}")]
    Config(String),
    #[error("report schema mismatch: found versions {0} and {1}")]
    SchemaMismatch(u32, u32),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
