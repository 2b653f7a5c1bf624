// SPDX-License-Identifier: MIT OR Apache-2.0
//! Annular projection coefficients, the local-to-global twisting check,
//! curve-complex distance certificates and the Behrstock inequality.
//!
//! # Exact and estimated coefficients
//!
//! The annular coefficient `d_γ(a, b)` is computed exactly by lifting chord
//! representatives to the annular cover of `γ`
//! ([`crate::surface::chord::Arrangement::annular_distance`]); this is limited
//! by the oracle cap.  Beyond it the coefficient is estimated from the twist
//! profile `f(t) = i(a, D_γ^t(b))`.  By the twisting inequality
//! `|i(D_γ^e(x), y) − |e|·i(x,γ)·i(y,γ)| <= i(x,y)`, `f` is a convex,
//! piecewise linear function whose two tails have slopes `±s` with
//! `s = i(a,γ)·i(b,γ)`; the centre of the V formed by the tails is (up to a
//! bounded error) the relative twist of `a` and `b` about `γ`.  The estimator
//! evaluates `f` exactly on both tails, certifies the tail slopes, and returns
//! `|(f(−R) − f(R)) / 2s|` with an additive uncertainty `Δ` calibrated against
//! the exact method.
//!
//! The cheaper ratio `round(i(a,b) / s)` ([`estimate_from`]) is the value of
//! the same centre when `f` is linear all the way to `t = 0`.  That holds for
//! the triples `(γ_{k−m}, γ_k, γ_{k+m})`, but twisting about other curves of
//! the sequence inflates `i(a,b)` for longer gaps, where the ratio
//! overestimates badly.  It is therefore only used to seed the tail search.
//!
//! # Constants
//!
//! The verifier lemmas depend on a Behrstock constant `B_0` and a bounded
//! geodesic image constant `G_0`, known only to exist.  They are configurable
//! ([`VerifierConstants`]), and every report states the values used.

use crate::error::{Error, Result};
use crate::intersect::{intersection_number, DEFAULT_ORACLE_CAP};
use crate::mcg::{apply_word, dehn_twist};
use crate::seqgen::{CurveSequence, IntersectionTable, Status};
use crate::surface::chord::Arrangement;
use crate::surface::{ChordCurve, Curve, SurfaceModel};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// Default estimator half-width.
pub const DEFAULT_DELTA: u64 = 3;

/// The constants of the verifier lemmas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifierConstants {
    /// Behrstock constant.
    pub b0: u64,
    /// Bounded geodesic image constant.
    pub g0: u64,
    /// `B = max{3, B_0 + 1, G_0}`.
    pub b: u64,
    /// `E_0 = 3B + 4`.
    pub e0: u64,
}

impl VerifierConstants {
    /// Derive `B` and `E_0` from `B_0` and `G_0`.
    pub fn new(b0: u64, g0: u64) -> Result<VerifierConstants> {
        if b0 == 0 || g0 == 0 {
            return Err(Error::Format("B0 and G0 must be positive".into()));
        }
        let b = 3.max(b0 + 1).max(g0);
        Ok(VerifierConstants { b0, g0, b, e0: 3 * b + 4 })
    }

    /// `2 B_0 + 4`, the tolerance of the local-to-global lemma.
    pub fn twist_tolerance(&self) -> u64 {
        2 * self.b0 + 4
    }
}

impl Default for VerifierConstants {
    fn default() -> Self {
        VerifierConstants::new(10, 100).expect("positive defaults")
    }
}

/// How a coefficient was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffMethod {
    /// Lifting to the annular cover.
    Exact,
    /// The twist-profile estimator.
    Estimated,
}

/// An annular projection coefficient with its uncertainty.
///
/// The bracket is `[value − uncertainty, value + uncertainty]` clamped at
/// zero; exact coefficients have zero uncertainty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnularCoeff {
    /// Coefficient or estimate.
    pub value: BigUint,
    /// Additive half-width.
    pub uncertainty: u64,
    /// Method used.
    pub method: CoeffMethod,
}

impl AnnularCoeff {
    /// Smallest value compatible with the bracket.
    pub fn lower(&self) -> BigUint {
        let u = BigUint::from(self.uncertainty);
        if self.value > u {
            &self.value - u
        } else {
            BigUint::zero()
        }
    }

    /// Largest value compatible with the bracket.
    pub fn upper(&self) -> BigUint {
        &self.value + BigUint::from(self.uncertainty)
    }

    /// Whether `x` lies in the bracket.
    pub fn brackets(&self, x: &BigUint) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }
}

/// Which coefficient method to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffMode {
    /// Exact when within the oracle cap, estimated otherwise.
    Auto,
    /// Exact only; scale problems are errors.
    Exact,
    /// Always the estimator.
    Estimate,
}

/// Settings shared by the projection checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionSettings {
    /// Estimator half-width `Δ`.
    pub delta: u64,
    /// Cap on side points per chord representative.
    pub oracle_cap: u64,
    /// Method selection.
    pub mode: CoeffMode,
}

impl Default for ProjectionSettings {
    fn default() -> Self {
        ProjectionSettings { delta: DEFAULT_DELTA, oracle_cap: DEFAULT_ORACLE_CAP, mode: CoeffMode::Auto }
    }
}

fn require_crossing(model: &SurfaceModel, axis: &Curve, c: &Curve, name: &str) -> Result<BigUint> {
    let n = intersection_number(model, axis, c)?;
    if n.is_zero() {
        return Err(Error::DisjointFromAxis(format!("{name} misses the axis")));
    }
    Ok(n)
}

/// Exact `d_axis(a, b)` by lifting to the annular cover.
pub fn annular_coeff_exact(
    model: &SurfaceModel,
    axis: &Curve,
    a: &Curve,
    b: &Curve,
    oracle_cap: u64,
) -> Result<AnnularCoeff> {
    require_crossing(model, axis, a, "first curve")?;
    require_crossing(model, axis, b, "second curve")?;
    // Transport by the axis word: coefficients are mapping-class invariant.
    let moved: Vec<Curve> = match axis.origin() {
        Some(o) => {
            let inverse = o.word.inverse();
            [axis, a, b].iter().map(|c| apply_word(model, &inverse, c)).collect::<Result<_>>()?
        }
        None => vec![axis.clone(), a.clone(), b.clone()],
    };
    let chords =
        moved.iter().map(|c| ChordCurve::from_coords(model, &c.weights(), oracle_cap)).collect::<Result<Vec<_>>>()?;
    let mut arr = Arrangement::new(chords)?;
    let budget = [(0, 1), (0, 2), (1, 2)].iter().map(|&(x, y)| arr.crossings_between(x, y) as u64).sum::<u64>() + 1;
    arr.reduce(budget)?;
    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        let exact = intersection_number(model, &moved[x], &moved[y])?;
        if BigUint::from(arr.crossings_between(x, y)) != exact {
            return Err(Error::UnsupportedPair("annular drawing is not in minimal position".into()));
        }
    }
    let d = arr.annular_distance(0, 1, 2)?;
    Ok(AnnularCoeff { value: BigUint::from(d), uncertainty: 0, method: CoeffMethod::Exact })
}

/// Twist-profile estimate of `d_axis(a, b)` with uncertainty `delta`.
pub fn annular_coeff_estimate(
    model: &SurfaceModel,
    axis: &Curve,
    a: &Curve,
    b: &Curve,
    delta: u64,
) -> Result<AnnularCoeff> {
    let ia = require_crossing(model, axis, a, "first curve")?;
    let ib = require_crossing(model, axis, b, "second curve")?;
    let iab = intersection_number(model, a, b)?;
    let seed = estimate_from(&iab, &ia, &ib, delta).value;
    profile_estimate(model, axis, a, b, &(ia * ib), &seed, delta)
}

/// Rounds of tail doubling before the profile is declared unsupported.
const PROFILE_ROUNDS: u32 = 64;

fn profile_estimate(
    model: &SurfaceModel,
    axis: &Curve,
    a: &Curve,
    b: &Curve,
    slope: &BigUint,
    seed: &BigUint,
    delta: u64,
) -> Result<AnnularCoeff> {
    let f = |t: &BigInt| -> Result<BigInt> {
        Ok(BigInt::from(intersection_number(model, a, &dehn_twist(model, b, axis, t)?)?))
    };
    let s = BigInt::from(slope.clone());
    let mut r = BigInt::from(seed.clone()) + 8u32;
    for _ in 0..PROFILE_ROUNDS {
        let (right, right_next) = (f(&r)?, f(&(&r + 1u32))?);
        let (left, left_prev) = (f(&-&r)?, f(&(-&r - 1u32))?);
        // Both evaluation points lie on the tails exactly when the one-step
        // increments already have the asymptotic slopes.
        if &right_next - &right == s && &left_prev - &left == s {
            let two_s = &s * 2u32;
            let centre = (left - right).abs();
            // Round half up: floor((2n + d) / 2d).
            let value = (centre * 2u32 + &two_s).div_floor(&(&two_s * 2u32));
            return Ok(AnnularCoeff {
                value: value.to_biguint().expect("non-negative"),
                uncertainty: delta,
                method: CoeffMethod::Estimated,
            });
        }
        r = r * 2u32 + 8u32;
    }
    Err(Error::UnsupportedPair("twist profile did not reach its linear tails".into()))
}

/// The ratio estimate `round(i(a,b) / (i_a·i_b))` from precomputed
/// intersection numbers (`i_a, i_b > 0`); reliable only when the twist
/// profile is linear down to `t = 0`, see the module documentation.
pub fn estimate_from(iab: &BigUint, ia: &BigUint, ib: &BigUint, delta: u64) -> AnnularCoeff {
    let den = ia * ib;
    // Round half up: floor((2n + d) / 2d).
    let value = (iab * 2u32 + &den).div_floor(&(den * 2u32));
    AnnularCoeff { value, uncertainty: delta, method: CoeffMethod::Estimated }
}

/// Coefficient `d_{γ_axis}(γ_a, γ_b)` within a sequence, honouring the mode.
pub fn sequence_coeff(
    model: &SurfaceModel,
    seq: &CurveSequence,
    table: &IntersectionTable,
    axis: usize,
    a: usize,
    b: usize,
    settings: &ProjectionSettings,
) -> Result<AnnularCoeff> {
    let ia = table.get(a, axis);
    let ib = table.get(b, axis);
    if ia.is_zero() || ib.is_zero() {
        return Err(Error::DisjointFromAxis(format!("γ_{a} or γ_{b} misses γ_{axis}")));
    }
    let estimate = || {
        let seed = estimate_from(table.get(a, b), ia, ib, settings.delta).value;
        profile_estimate(model, seq.gamma(axis)?, seq.gamma(a)?, seq.gamma(b)?, &(ia * ib), &seed, settings.delta)
    };
    let exact = || annular_coeff_exact(model, seq.gamma(axis)?, seq.gamma(a)?, seq.gamma(b)?, settings.oracle_cap);
    match settings.mode {
        CoeffMode::Estimate => estimate(),
        CoeffMode::Exact => exact(),
        CoeffMode::Auto => {
            // Cheap scale test before drawing: side weights after transport
            // are bounded by the plain intersection numbers with the axis.
            let scale = ia.to_u64().unwrap_or(u64::MAX).max(ib.to_u64().unwrap_or(u64::MAX));
            if scale.saturating_mul(4) > settings.oracle_cap {
                return estimate();
            }
            match exact() {
                Err(Error::OracleScaleExceeded { .. }) => estimate(),
                other => other,
            }
        }
    }
}

/// Is `n` in the monoid generated by `m` and `m + 1`?
pub fn in_monoid(n: usize, m: usize) -> bool {
    (0..=n / m).any(|i| (n - i * m) % (m + 1) == 0)
}

/// One row of the local-to-global report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistRow {
    /// Indices `i < k < j`.
    pub i: usize,
    /// Axis index.
    pub k: usize,
    /// Far index.
    pub j: usize,
    /// `d_{γ_k}(γ_i, γ_j)`.
    pub coeff: AnnularCoeff,
    /// `e_k`.
    pub e_k: BigInt,
    /// `e_i`, reported for the alternative reading of the estimate.
    pub e_i: BigInt,
    /// Verdict of `|d − e_k| <= 2B_0 + 4` (widened by the uncertainty).
    pub status: Status,
    /// Whether `|d − e_i| <= 2B_0 + 4` also holds (informational).
    pub holds_for_e_i: bool,
}

/// Local-to-global twisting report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistReport {
    /// Constants used.
    pub constants: VerifierConstants,
    /// Whether `e_0 >= E_0`; the lemma's hypothesis.
    pub hypothesis_met: bool,
    /// One row per sampled triple.
    pub rows: Vec<TwistRow>,
}

impl TwistReport {
    /// Whether all rows pass.
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.status == Status::Pass)
    }
}

fn within(coeff: &AnnularCoeff, target: &BigInt, tolerance: u64) -> bool {
    let t = BigInt::from(tolerance);
    let lo = BigInt::from(coeff.lower());
    let hi = BigInt::from(coeff.upper());
    // Some value in the bracket is within tolerance of the target.
    lo <= target + &t && target - &t <= hi
}

/// Check `|d_{γ_k}(γ_i, γ_j) − e_k| <= 2B_0 + 4` for all triples with
/// `k − i, j − k` in the monoid `⟨m, m+1⟩` and at most `max_gap`.
pub fn local_to_global_check(
    model: &SurfaceModel,
    seq: &CurveSequence,
    table: &IntersectionTable,
    consts: &VerifierConstants,
    settings: &ProjectionSettings,
    max_gap: usize,
) -> Result<TwistReport> {
    let m = seq.m();
    let d = seq.depth();
    let gaps: Vec<usize> = (m..=max_gap).filter(|&g| in_monoid(g, m)).collect();
    let mut triples = Vec::new();
    for k in m..=d {
        for &gi in &gaps {
            for &gj in &gaps {
                if gi <= k && k + gj <= d {
                    triples.push((k - gi, k, k + gj));
                }
            }
        }
    }
    let tol = consts.twist_tolerance();
    let rows = triples
        .par_iter()
        .map(|&(i, k, j)| -> Result<TwistRow> {
            let coeff = sequence_coeff(model, seq, table, k, i, j, settings)?;
            let e_k = seq.schedule().e(k).clone();
            let e_i = seq.schedule().e(i).clone();
            let status = if within(&coeff, &e_k, tol) { Status::Pass } else { Status::Fail };
            let holds_for_e_i = within(&coeff, &e_i, tol);
            Ok(TwistRow { i, k, j, coeff, e_k, e_i, status, holds_for_e_i })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TwistReport { constants: *consts, hypothesis_met: seq.schedule().meets_floor(), rows })
}

/// Certified bounds on the curve-complex distance `d(γ_i, γ_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceBounds {
    /// First index.
    pub i: usize,
    /// Second index.
    pub j: usize,
    /// Certified lower bound.
    pub lower: u64,
    /// Upper bound `j − i` (consecutive curves are disjoint).
    pub upper: u64,
    /// Marker indices and whether each was certified.
    pub markers: Vec<(usize, bool)>,
}

/// Marker spacing `K = C = 2m² + 2m − 1`.
pub fn marker_spacing(m: usize) -> usize {
    2 * m * m + 2 * m - 1
}

/// Bounds on `d(γ_i, γ_j)` from the 1-Lipschitz property and markers.
///
/// Markers are `δ_ℓ = γ_{i+ℓK}` for `1 <= ℓ <= q − 1` where `j − i = qK + r`.
/// A marker is certified when `d_{δ_ℓ}(γ_i, γ_j) >= B` (for estimates: when
/// the whole bracket is at least `B`); by bounded geodesic image every
/// geodesic from `γ_i` to `γ_j` then has a vertex disjoint from it, and
/// consecutive markers fill, so `c` certified markers give distance `>= c + 1`.
pub fn cc_distance_bounds(
    model: &SurfaceModel,
    seq: &CurveSequence,
    table: &IntersectionTable,
    i: usize,
    j: usize,
    consts: &VerifierConstants,
    settings: &ProjectionSettings,
) -> Result<DistanceBounds> {
    if i >= j || j > seq.depth() {
        return Err(Error::IndexOutOfRange { index: j as i64, range: format!("{}..={}", i + 1, seq.depth()) });
    }
    let k_spacing = marker_spacing(seq.m());
    let q = (j - i) / k_spacing;
    let mut markers = Vec::new();
    for l in 1..q {
        let idx = i + l * k_spacing;
        let certified = match sequence_coeff(model, seq, table, idx, i, j, settings) {
            Ok(c) => c.lower() >= BigUint::from(consts.b),
            Err(Error::DisjointFromAxis(_)) => false,
            Err(e) => return Err(e),
        };
        markers.push((idx, certified));
    }
    let certified = markers.iter().filter(|(_, c)| *c).count() as u64;
    let mut lower = if certified > 0 { certified + 1 } else { 0 };
    if seq.gamma(i)? != seq.gamma(j)? {
        lower = lower.max(1);
    }
    if !table.get(i, j).is_zero() {
        lower = lower.max(2);
    }
    Ok(DistanceBounds { i, j, lower, upper: (j - i) as u64, markers })
}

/// One sampled pair of the Behrstock check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BehrstockRow {
    /// First axis index.
    pub y: usize,
    /// Second axis index.
    pub z: usize,
    /// `d_{γ_y}(γ_z, μ)` (upper end of its bracket), if the axes overlap.
    pub side_y: Option<BigUint>,
    /// `d_{γ_z}(γ_y, μ)` (upper end of its bracket), if the axes overlap.
    pub side_z: Option<BigUint>,
    /// Verdict; skipped when the axes are disjoint.
    pub status: Status,
}

/// Behrstock report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BehrstockReport {
    /// Constants used.
    pub constants: VerifierConstants,
    /// Empirical maximum of the smaller side over all evaluated pairs.
    pub max_min_side: Option<BigUint>,
    /// One row per sample.
    pub rows: Vec<BehrstockRow>,
}

/// Projection of the base marking `μ = {γ_0, …, γ_{2m−1}}` to `γ_axis`
/// against `γ_other`: the largest coefficient over marking curves that meet
/// the axis.
fn marking_side(
    model: &SurfaceModel,
    seq: &CurveSequence,
    table: &IntersectionTable,
    axis: usize,
    other: usize,
    settings: &ProjectionSettings,
) -> Result<Option<BigUint>> {
    let mut best: Option<BigUint> = None;
    for c in 0..2 * seq.m() {
        if c == axis || c == other || table.get(c, axis).is_zero() {
            continue;
        }
        let coeff = sequence_coeff(model, seq, table, axis, other, c, settings)?;
        let up = coeff.upper();
        best = Some(best.map_or(up.clone(), |b| b.max(up)));
    }
    Ok(best)
}

/// Check `min{d_{γ_y}(γ_z, μ), d_{γ_z}(γ_y, μ)} <= B_0` on sampled pairs.
pub fn behrstock_check(
    model: &SurfaceModel,
    seq: &CurveSequence,
    table: &IntersectionTable,
    samples: &[(usize, usize)],
    consts: &VerifierConstants,
    settings: &ProjectionSettings,
) -> Result<BehrstockReport> {
    let rows = samples
        .par_iter()
        .map(|&(y, z)| -> Result<BehrstockRow> {
            if y > seq.depth() || z > seq.depth() {
                return Err(Error::IndexOutOfRange { index: y.max(z) as i64, range: format!("0..={}", seq.depth()) });
            }
            if table.get(y, z).is_zero() {
                return Ok(BehrstockRow { y, z, side_y: None, side_z: None, status: Status::Skipped });
            }
            let side_y = marking_side(model, seq, table, y, z, settings)?;
            let side_z = marking_side(model, seq, table, z, y, settings)?;
            let smaller = match (&side_y, &side_z) {
                (Some(a), Some(b)) => Some(a.min(b).clone()),
                (Some(a), None) | (None, Some(a)) => Some(a.clone()),
                (None, None) => None,
            };
            let status = match smaller {
                Some(s) if s > BigUint::from(consts.b0) => Status::Fail,
                Some(_) => Status::Pass,
                None => Status::Skipped,
            };
            Ok(BehrstockRow { y, z, side_y, side_z, status })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_min_side = rows
        .iter()
        .filter_map(|r| match (&r.side_y, &r.side_z) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            _ => None,
        })
        .max();
    Ok(BehrstockReport { constants: *consts, max_min_side, rows })
}
