// SPDX-License-Identifier: MIT OR Apache-2.0
//! Error type shared by every module of the toolkit.
//!
//! Errors are values: nothing in the library panics on bad input.  Variants
//! distinguish *domain* problems (the caller asked for something outside the
//! mathematical contract) from *scale* problems (the request is meaningful
//! but exceeds a configured brute-force budget).  Scale errors are never
//! papered over with approximations.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The puncture count is not an odd integer `>= 5`.
    #[error("invalid puncture count p = {0}: p must be odd and at least 5")]
    InvalidPunctureCount(usize),

    /// An index argument lies outside its documented range.
    #[error("index {index} out of range (expected {range})")]
    IndexOutOfRange { index: i64, range: String },

    /// Coordinates that do not describe an essential simple closed curve.
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    /// Two values belong to surfaces with different puncture counts.
    #[error("surface mismatch: p = {left} versus p = {right}")]
    SurfaceMismatch { left: usize, right: usize },

    /// A brute-force computation would exceed the configured budget.
    #[error("oracle scale exceeded: {what} needs {needed}, cap is {cap}")]
    OracleScaleExceeded { what: String, needed: u64, cap: u64 },

    /// No exact method applies to this pair of curves.
    #[error("unsupported pair: {0}")]
    UnsupportedPair(String),

    /// An annular projection was requested for a curve missing the axis.
    #[error("curve disjoint from axis: {0}")]
    DisjointFromAxis(String),

    /// A list of curves that should be pairwise disjoint is not.
    #[error("not a multicurve: {0}")]
    NotMulticurve(String),

    /// A schedule does not reach the index a computation needs.
    #[error("schedule too short: index {needed} requested, {available} entries available")]
    ScheduleTooShort { needed: usize, available: usize },

    /// Invalid schedule parameters.
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    /// A sequence was not built deep enough for the requested report.
    #[error("insufficient depth: {what} needs depth {required}, sequence has depth {available}")]
    InsufficientDepth { what: String, required: usize, available: usize },

    /// A family of test curves does not fill the surface.
    #[error("test family does not fill the surface: {0}")]
    NonFillingFamily(String),

    /// Some intersection numbers needed by a model are missing.
    #[error("intersection table incomplete: {0}")]
    IncompleteTable(String),

    /// Malformed serialized input.
    #[error("malformed input: {0}")]
    Format(String),

    /// The twist accelerator did not reach its linear regime within budget.
    #[error("twist acceleration did not stabilise within {0} slow steps")]
    TwistNotLinear(usize),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}
