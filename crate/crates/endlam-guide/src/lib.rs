// SPDX-License-Identifier: MIT OR Apache-2.0
//! The chapters of the guide in `book/src`, one module per chapter.
//!
//! mdbook cannot run listings that depend on external crates, so the
//! chapters are included here as documentation instead: `cargo test` runs
//! every ```` ```rust ```` listing of the guide as a doc-test against the
//! current library.  A failing doc-test names the module, and hence the
//! chapter, it came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/surface.md")]
pub mod surface {}

#[doc = include_str!("../../../book/src/sequences.md")]
pub mod sequences {}

#[doc = include_str!("../../../book/src/intersections.md")]
pub mod intersections {}

#[doc = include_str!("../../../book/src/annular.md")]
pub mod annular {}

#[doc = include_str!("../../../book/src/distance.md")]
pub mod distance {}

#[doc = include_str!("../../../book/src/ergodics.md")]
pub mod ergodics {}

#[doc = include_str!("../../../book/src/limit-trace.md")]
pub mod limit_trace {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
