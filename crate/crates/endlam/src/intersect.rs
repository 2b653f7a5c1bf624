// SPDX-License-Identifier: MIT OR Apache-2.0
//! Exact geometric intersection numbers, the minimal-position oracle,
//! filling certificates and pants completions.
//!
//! # Strategy
//!
//! Intersection numbers are mapping-class invariant, so a pair `(a, b)` with
//! provenance `a = W_a(r_a)`, `b = W_b(r_b)` is evaluated as
//! `i(r_a, W_a^{-1} W_b(r_b))`.  Words of sequence curves share prefixes, so
//! the composite word is short after cancellation, and the left operand is a
//! round curve, for which [`SurfaceModel::intersection_with_round`] is an
//! exact closed formula.  Pairs without any provenance fall back to the
//! chord oracle within its scale cap and are otherwise refused as
//! [`Error::UnsupportedPair`] — never approximated.
//!
//! # Filling
//!
//! [`is_filling`] draws the curves together, removes bigons pairwise and takes
//! a census of the complementary regions.  A union of curves fills exactly
//! when every region is a disk or a once-punctured disk.  The drawing is
//! checked against the exact pairwise intersection numbers before the census
//! is trusted.
//!
//! The census Euler characteristics are those of the open regions, so they
//! satisfy `Σ χ(R) − V = 2 − p` where `V` is the number of crossings (the
//! union of curves is a 4-valent graph with `χ = −V`).

use crate::error::{Error, Result};
use crate::mcg::{apply_to_weights, apply_word, round_intersection, MCWord};
use crate::surface::chord::{Arrangement, Region, RegionKind};
use crate::surface::curve::Origin;
use crate::surface::{ChordCurve, Curve, RoundCurve, SurfaceModel};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

/// Default cap on the number of side points of one chord representative.
pub const DEFAULT_ORACLE_CAP: u64 = 4096;

/// How an intersection number was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Word transport to a round curve and the closed formula.
    Transport,
    /// Explicit chord drawing with bigon removal.
    Oracle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Transport => "transport",
            Method::Oracle => "oracle",
        })
    }
}

/// `i(a, b)` with the default oracle cap.
pub fn intersection_number(model: &SurfaceModel, a: &Curve, b: &Curve) -> Result<BigUint> {
    intersection_with_method(model, a, b, DEFAULT_ORACLE_CAP).map(|(n, _)| n)
}

/// `i(a, b)` together with the method used.
pub fn intersection_with_method(
    model: &SurfaceModel,
    a: &Curve,
    b: &Curve,
    oracle_cap: u64,
) -> Result<(BigUint, Method)> {
    a.same_surface(b)?;
    a.check_model(model)?;
    if let Some((r, y)) = transport_pair(model, a, b)? {
        let n = round_intersection(model, &y, r)?;
        return Ok((n.magnitude().clone(), Method::Transport));
    }
    let ca = ChordCurve::from_coords(model, &a.weights(), oracle_cap);
    let cb = ChordCurve::from_coords(model, &b.weights(), oracle_cap);
    match (ca, cb) {
        (Ok(ca), Ok(cb)) => Ok((oracle_intersection(&ca, &cb)?, Method::Oracle)),
        (Err(Error::OracleScaleExceeded { .. }), _) | (_, Err(Error::OracleScaleExceeded { .. })) => Err(
            Error::UnsupportedPair("neither curve carries a defining word and the pair exceeds the oracle cap".into()),
        ),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

/// The round curve `r` and coordinates `y` with `i(a, b) = i(r, y)`, if some
/// operand has provenance or is round.
fn transport_pair(model: &SurfaceModel, a: &Curve, b: &Curve) -> Result<Option<(RoundCurve, Vec<BigInt>)>> {
    let origin = |c: &Curve| -> Option<Origin> {
        c.origin().cloned().or_else(|| {
            model.recognise_round(&c.weights()).map(|r| Origin { base: r, word: MCWord::identity(model.p()) })
        })
    };
    match (origin(a), origin(b)) {
        (Some(oa), Some(ob)) => {
            let word = oa.word.inverse().compose(&ob.word)?;
            let y = apply_to_weights(model, &word, model.round_coords(ob.base).to_vec())?;
            Ok(Some((oa.base, y)))
        }
        (Some(oa), None) => {
            let y = apply_to_weights(model, &oa.word.inverse(), b.weights())?;
            Ok(Some((oa.base, y)))
        }
        (None, Some(ob)) => {
            let y = apply_to_weights(model, &ob.word.inverse(), a.weights())?;
            Ok(Some((ob.base, y)))
        }
        (None, None) => Ok(None),
    }
}

/// Crossing count of two chord curves after joint bigon removal.
pub fn oracle_intersection(a: &ChordCurve, b: &ChordCurve) -> Result<BigUint> {
    let mut arr = Arrangement::new(vec![a.clone(), b.clone()])?;
    let budget = arr.crossings_between(0, 1) as u64 / 2 + 1;
    arr.reduce(budget)?;
    Ok(BigUint::from(arr.crossings_between(0, 1)))
}

/// Region census of a union of curves and the filling verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FillingCertificate {
    /// Complementary regions in a deterministic order.
    pub regions: Vec<Region>,
    /// Number of crossings of the drawn union.
    pub crossings: usize,
    /// `Σ χ(regions) − crossings`; always `2 − p`.
    pub euler_total: i64,
    /// True iff every region is a disk or a once-punctured disk.
    pub verdict: bool,
}

/// Decide whether the curves fill the surface.
pub fn is_filling(model: &SurfaceModel, curves: &[Curve], oracle_cap: u64) -> Result<FillingCertificate> {
    let first = curves.first().ok_or_else(|| Error::InvalidCurve("empty curve family".into()))?;
    for c in curves {
        c.same_surface(first)?;
        c.check_model(model)?;
    }
    let mut distinct: Vec<Curve> = Vec::new();
    for c in curves {
        if !distinct.contains(c) {
            distinct.push(c.clone());
        }
    }
    let drawn = smallest_transport(model, &distinct)?;
    let chords =
        drawn.iter().map(|c| ChordCurve::from_coords(model, &c.weights(), oracle_cap)).collect::<Result<Vec<_>>>()?;
    let mut arr = Arrangement::new(chords)?;
    let budget = (0..drawn.len())
        .flat_map(|x| (x + 1..drawn.len()).map(move |y| (x, y)))
        .map(|(x, y)| arr.crossings_between(x, y) as u64)
        .sum::<u64>()
        + 1;
    arr.reduce(budget)?;
    for x in 0..drawn.len() {
        for y in x + 1..drawn.len() {
            let exact = intersection_number(model, &drawn[x], &drawn[y])?;
            if BigUint::from(arr.crossings_between(x, y)) != exact {
                return Err(Error::UnsupportedPair(format!(
                    "drawing of curves {x} and {y} is not in minimal position"
                )));
            }
        }
    }
    let census = arr.census();
    let euler_total = census.regions.iter().map(|r| r.euler).sum::<i64>() - census.crossings as i64;
    debug_assert_eq!(euler_total, 2 - model.p() as i64);
    let verdict = census.regions.iter().all(|r| matches!(r.kind, RegionKind::Disk | RegionKind::PuncturedDisk));
    Ok(FillingCertificate { regions: census.regions, crossings: census.crossings, euler_total, verdict })
}

/// Apply the inverse of one of the curves' words to all of them, choosing
/// the word that makes the drawing smallest.
fn smallest_transport(model: &SurfaceModel, curves: &[Curve]) -> Result<Vec<Curve>> {
    let weight = |cs: &[Curve]| -> BigUint { cs.iter().map(Curve::side_weight).sum() };
    let mut best = curves.to_vec();
    let mut best_weight = weight(&best);
    let words: Vec<MCWord> = curves.iter().filter_map(|c| c.origin().map(|o| o.word.clone())).collect();
    for w in words {
        let inverse = w.inverse();
        let Ok(moved) = curves.iter().map(|c| apply_word(model, &inverse, c)).collect::<Result<Vec<_>>>() else {
            continue;
        };
        let total = weight(&moved);
        if total < best_weight {
            best = moved;
            best_weight = total;
        }
    }
    Ok(best)
}

/// A pants decomposition containing a given multicurve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PantsData {
    /// The given multicurve.
    pub sigma: Vec<Curve>,
    /// Curves added to complete it, `p − 3 − |sigma|` of them.
    pub completion: Vec<Curve>,
    /// Index of the sequence window, when built from a sequence.
    pub k: Option<usize>,
}

impl PantsData {
    /// All `p − 3` curves.
    pub fn curves(&self) -> Vec<Curve> {
        self.sigma.iter().chain(&self.completion).cloned().collect()
    }
}

/// Complete a multicurve to a pants decomposition.
///
/// Candidates are round curves after transport by one of the curves' own
/// words; the lexicographically least candidate (by coordinate vector)
/// disjoint from everything chosen so far is added until `p − 3` curves are
/// reached.
pub fn complete_to_pants(model: &SurfaceModel, sigma: &[Curve]) -> Result<PantsData> {
    let words: Vec<MCWord> = sigma
        .iter()
        .map(|c| c.origin().map(|o| o.word.clone()).unwrap_or_else(|| MCWord::identity(model.p())))
        .collect();
    let mut last = Err(Error::UnsupportedPair("no transport word makes the multicurve round".into()));
    for w in words.iter().chain(std::iter::once(&MCWord::identity(model.p()))) {
        last = complete_with(model, sigma, &[], w);
        if last.is_ok() {
            break;
        }
    }
    last
}

/// Complete `sigma` using round candidates assembled from `pool`, after
/// transporting everything by `transport^{-1}`.
///
/// A candidate is a side curve of the pool or a round curve surrounding a
/// run of punctures whose consecutive sides all carry pool curves (the
/// boundary of a regular neighbourhood of that sub-union).  With an empty
/// pool every round curve is a candidate.
pub fn complete_with(model: &SurfaceModel, sigma: &[Curve], pool: &[Curve], transport: &MCWord) -> Result<PantsData> {
    let p = model.p();
    if sigma.len() > p - 3 {
        return Err(Error::NotMulticurve(format!("{} curves exceed p − 3 = {}", sigma.len(), p - 3)));
    }
    for x in 0..sigma.len() {
        for y in x + 1..sigma.len() {
            if sigma[x] == sigma[y] || !intersection_number(model, &sigma[x], &sigma[y])?.is_zero() {
                return Err(Error::NotMulticurve(format!("curves {x} and {y} intersect or coincide")));
            }
        }
    }
    let inverse = transport.inverse();
    let to_round = |c: &Curve| -> Result<RoundCurve> {
        let moved = apply_to_weights(model, &inverse, c.weights())?;
        model.recognise_round(&moved).ok_or_else(|| Error::UnsupportedPair("curve is not round after transport".into()))
    };
    let base_sigma: Vec<RoundCurve> = sigma.iter().map(to_round).collect::<Result<_>>()?;
    let pool_sides: Vec<usize> = pool
        .iter()
        .map(to_round)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|r| r.len() == 2)
        .map(|r| r.start())
        .collect();
    let mut candidates: Vec<RoundCurve> = model
        .round_curves()
        .into_iter()
        .filter(|r| {
            if pool.is_empty() {
                return true;
            }
            let (a, len) = (r.start(), r.len());
            let run_ok = |start: usize, count: usize| (0..count).all(|i| pool_sides.contains(&((start + i) % p)));
            run_ok(a, len - 1) || run_ok(a + len, p - len - 1)
        })
        .collect();
    candidates.sort_by(|x, y| model.round_coords(*x).cmp(model.round_coords(*y)));
    let disjoint = |x: RoundCurve, y: RoundCurve| -> Result<bool> {
        Ok(x != y && round_intersection(model, model.round_coords(x), y)?.is_zero())
    };
    let mut chosen: Vec<RoundCurve> = Vec::new();
    for cand in candidates {
        if base_sigma.len() + chosen.len() == p - 3 {
            break;
        }
        let mut ok = true;
        for &other in base_sigma.iter().chain(&chosen) {
            if !disjoint(cand, other)? {
                ok = false;
                break;
            }
        }
        if ok {
            chosen.push(cand);
        }
    }
    if base_sigma.len() + chosen.len() != p - 3 {
        return Err(Error::UnsupportedPair(format!(
            "candidate pool completes only {} of {} curves",
            base_sigma.len() + chosen.len(),
            p - 3
        )));
    }
    let completion =
        chosen.into_iter().map(|r| apply_word(model, transport, &Curve::round(model, r))).collect::<Result<_>>()?;
    Ok(PantsData { sigma: sigma.to_vec(), completion, k: None })
}
