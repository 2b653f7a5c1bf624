// SPDX-License-Identifier: MIT OR Apache-2.0
//! Curves in normal coordinates, with optional provenance words.
//!
//! A [`Curve`] is an isotopy class of an essential, non-peripheral simple
//! closed curve, stored as its normal coordinates on the model triangulation.
//! Curves produced by mapping classes remember *how* they were produced: an
//! [`Origin`] records a base [`RoundCurve`] and a word `W` with
//! `curve = W(base)`.  Intersection numbers between curves with origins are
//! computed by transporting one of them back to its base, where a closed
//! formula applies.
//!
//! Equality and hashing only look at `(p, coords)`: two curves are the same
//! isotopy class regardless of the word that produced them.

use super::{RoundCurve, SurfaceModel};
use crate::error::{Error, Result};
use crate::mcg::MCWord;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use std::hash::{Hash, Hasher};

/// Provenance of a curve: `curve = word(base)`.
#[derive(Clone, Debug)]
pub struct Origin {
    /// The round curve the word was applied to (`γ_0` for sequence curves).
    pub base: RoundCurve,
    /// Mapping class word, applied right to left.
    pub word: MCWord,
}

/// An essential simple closed curve on `S_{0,p}` in normal coordinates.
#[derive(Clone, Debug)]
pub struct Curve {
    p: usize,
    coords: Vec<BigUint>,
    origin: Option<Origin>,
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.coords == other.coords
    }
}

impl Eq for Curve {}

impl Hash for Curve {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.coords.hash(state);
    }
}

/// Default bound on the total side weight for which connectedness is checked
/// by explicit tracing.
pub const TRACE_LIMIT: u64 = 1 << 16;

impl Curve {
    /// Validate coordinates and build a curve without provenance.
    ///
    /// Checks the normal-coordinate conditions, absence of peripheral
    /// components and connectedness.  Connectedness is decided by explicit
    /// tracing, which is only attempted when the total side weight is at most
    /// [`TRACE_LIMIT`]; larger wordless curves are rejected with an
    /// oracle-scale error.
    pub fn from_coords(model: &SurfaceModel, coords: Vec<BigUint>) -> Result<Curve> {
        let weights: Vec<BigInt> = coords.iter().map(|c| BigInt::from(c.clone())).collect();
        check_essential(model, &weights)?;
        let side_total: BigUint = coords[..model.p()].iter().sum();
        let total = side_total.to_u64().unwrap_or(u64::MAX);
        if total > TRACE_LIMIT {
            return Err(Error::OracleScaleExceeded {
                what: "connectedness check of a wordless curve".into(),
                needed: total,
                cap: TRACE_LIMIT,
            });
        }
        let components = super::chord::trace_components(model, &weights)?;
        if components.len() != 1 {
            return Err(Error::InvalidCurve(format!(
                "coordinates describe {} components, not a single curve",
                components.len()
            )));
        }
        Ok(Curve { p: model.p(), coords, origin: None })
    }

    /// Validate coordinates and attach a provenance word.
    ///
    /// The word is trusted to reproduce the coordinates from its base; use
    /// [`crate::mcg::verify_origin`] to check it.
    pub fn with_origin(model: &SurfaceModel, coords: Vec<BigUint>, origin: Origin) -> Result<Curve> {
        let weights: Vec<BigInt> = coords.iter().map(|c| BigInt::from(c.clone())).collect();
        check_essential(model, &weights)?;
        if origin.word.p() != model.p() {
            return Err(Error::SurfaceMismatch { left: model.p(), right: origin.word.p() });
        }
        Ok(Curve { p: model.p(), coords, origin: Some(origin) })
    }

    /// The round curve `r` itself, with the empty word as provenance.
    pub fn round(model: &SurfaceModel, r: RoundCurve) -> Curve {
        let coords = model.round_coords(r).iter().map(to_unsigned).collect();
        Curve { p: model.p(), coords, origin: Some(Origin { base: r, word: MCWord::identity(model.p()) }) }
    }

    /// Build from weights already known to describe an essential curve.
    pub(crate) fn trusted(p: usize, weights: &[BigInt], origin: Option<Origin>) -> Curve {
        Curve { p, coords: weights.iter().map(to_unsigned).collect(), origin }
    }

    /// Number of punctures of the underlying surface.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Normal coordinates.
    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    /// Provenance, if the curve was produced by a mapping class word.
    pub fn origin(&self) -> Option<&Origin> {
        self.origin.as_ref()
    }

    /// The same curve with its provenance dropped.
    pub fn without_origin(&self) -> Curve {
        Curve { p: self.p, coords: self.coords.clone(), origin: None }
    }

    /// Coordinates as signed integers, the working type of the engines.
    pub(crate) fn weights(&self) -> Vec<BigInt> {
        self.coords.iter().map(|c| BigInt::from(c.clone())).collect()
    }

    /// Sum of the side coordinates (number of points on polygon sides).
    pub fn side_weight(&self) -> BigUint {
        self.coords[..self.p].iter().sum()
    }

    pub(crate) fn same_surface(&self, other: &Curve) -> Result<()> {
        if self.p != other.p {
            return Err(Error::SurfaceMismatch { left: self.p, right: other.p });
        }
        Ok(())
    }

    pub(crate) fn check_model(&self, model: &SurfaceModel) -> Result<()> {
        if self.p != model.p() {
            return Err(Error::SurfaceMismatch { left: self.p, right: model.p() });
        }
        Ok(())
    }
}

pub(crate) fn to_unsigned(x: &BigInt) -> BigUint {
    match x.sign() {
        Sign::Minus => panic!("negative normal coordinate {x}"),
        _ => x.magnitude().clone(),
    }
}

/// Structural validity: normal, non-empty, no peripheral components.
pub(crate) fn check_essential(model: &SurfaceModel, w: &[BigInt]) -> Result<()> {
    model.arcs(w)?;
    if w.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidCurve("empty curve".into()));
    }
    if !model.peripheral_free(w) {
        return Err(Error::InvalidCurve("peripheral component present".into()));
    }
    Ok(())
}
