// SPDX-License-Identifier: MIT OR Apache-2.0
//! Exact twist-and-rotate curve sequences on punctured spheres.
//!
//! The sphere with `p` punctures (`p` odd, `p >= 5`) is modelled as the
//! double of a regular `p`-gon.  Rotating by two vertices and twisting about
//! a fixed round curve produces sequences of curves `γ_k` whose intersection
//! numbers grow like products of the twisting exponents; the crate builds
//! these sequences exactly and checks their combinatorics.
//!
//! | module | contents |
//! |---|---|
//! | [`surface`] | the surface model, normal coordinates, chord oracle |
//! | [`mcg`] | mapping-class words and their action |
//! | [`intersect`] | intersection numbers, filling, pants completion |
//! | [`seqgen`] | schedules, sequences, condition `𝒫`, twist products |
//! | [`subproj`] | annular coefficients and distance certificates |
//! | [`ergodics`] | intersection asymptotics and convergence of proxies |
//! | [`lengthmodel`] | the length model tracing the limit set |
//! | [`io`] | JSON persistence of curves, words and sequences |
//!
//! All asserted quantities are exact big integers or rationals; only the
//! length model works in floating point.

pub mod ergodics;
pub mod error;
pub mod intersect;
pub mod io;
pub mod lengthmodel;
pub mod mcg;
pub mod seqgen;
pub mod subproj;
pub mod surface;

pub use error::{Error, Result};
pub use mcg::MCWord;
pub use surface::{Curve, SurfaceModel};
