// SPDX-License-Identifier: MIT OR Apache-2.0
//! Mapping-class words over the rotation `ρ` and Dehn twists, and their
//! action on curves.
//!
//! # Conventions
//!
//! A word `L_1 L_2 ⋯ L_n` acts on curves right to left, like composition of
//! functions: `w(c) = L_1(L_2(⋯ L_n(c)))`.  Consequently
//! `Φ_k = φ_1 φ_2 ⋯ φ_k` applied to `γ_0` first applies `φ_k`, and
//! [`MCWord::compose`]`(a, b)` is the word `a·b` that applies `b` first.
//!
//! `ρ` sends puncture `v_i` to `v_{i+2}` and has order `p`; its exponent is
//! kept in `0..p`.  A twist letter stores its axis as a full [`Curve`].
//!
//! # Twisting about an arbitrary axis
//!
//! Dehn twists are compiled only for round curves (see
//! [`SurfaceModel`]).  An axis `c = W(r)` carrying an [`Origin`] is handled
//! by conjugation, `D_c = W D_r W^{-1}`; axes without provenance are accepted
//! when they are recognised as round curves.
//!
//! # Large exponents
//!
//! `D_r^e` is evaluated in `O(log e)` coordinate operations.  Twisting a
//! curve `x` with `I = i(x, r) > 0` is eventually linear in normal
//! coordinates: once `x` is far enough into the twist, every further positive
//! twist adds exactly `v = I·r` to the coordinates.  The accelerator
//!
//! 1. detects an initial stretch on which each step *subtracts* `v` (when `x`
//!    was produced by twisting the other way) and jumps over it, locating its
//!    end by exponential and binary search on an exact per-step certificate;
//! 2. performs slow single steps until two consecutive increments equal `v`;
//! 3. adds the remaining multiple of `v` in one step.
//!
//! The slow phase is capped; exceeding it is an error, never an
//! approximation.

use crate::error::{Error, Result};
use crate::surface::curve::{to_unsigned, Origin};
use crate::surface::{Curve, RoundCurve, SurfaceModel};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Maximum number of single twist steps the accelerator may take.
pub const SLOW_STEP_LIMIT: usize = 256;

/// Exponents up to this size are applied step by step.
const NAIVE_LIMIT: u32 = 64;

/// A generator of the mapping class group as used in words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// The rotation `ρ` by `4π/p`.
    Rho,
    /// The positive (left) Dehn twist about the stored curve.
    Twist(Box<Curve>),
}

/// A generator raised to a non-zero integer power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    /// The generator.
    pub gen: Generator,
    /// Its exponent; never zero in a canonical word.
    pub exp: BigInt,
}

/// A mapping-class word in canonical form (adjacent equal generators merged,
/// zero exponents removed, `ρ` exponents reduced modulo `p`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCWord {
    p: usize,
    letters: Vec<Letter>,
}

impl MCWord {
    /// The empty word on `S_{0,p}`.
    pub fn identity(p: usize) -> MCWord {
        MCWord { p, letters: Vec::new() }
    }

    /// Build a word from letters, canonicalising as it goes.
    pub fn from_letters(p: usize, letters: impl IntoIterator<Item = Letter>) -> Result<MCWord> {
        let mut word = MCWord::identity(p);
        for letter in letters {
            if let Generator::Twist(axis) = &letter.gen {
                if axis.p() != p {
                    return Err(Error::SurfaceMismatch { left: p, right: axis.p() });
                }
            }
            word.push(letter);
        }
        Ok(word)
    }

    /// `ρ^n`.
    pub fn rho(p: usize, n: i64) -> MCWord {
        let mut word = MCWord::identity(p);
        word.push(Letter { gen: Generator::Rho, exp: BigInt::from(n) });
        word
    }

    /// `D_axis^e`.
    pub fn twist(axis: &Curve, e: BigInt) -> MCWord {
        let mut word = MCWord::identity(axis.p());
        word.push(Letter { gen: Generator::Twist(Box::new(axis.clone())), exp: e });
        word
    }

    /// Number of punctures of the surface the word acts on.
    pub fn p(&self) -> usize {
        self.p
    }

    /// The letters, leftmost first.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Whether the word has no letters.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Whether this is the identity word (words are kept freely reduced, so
    /// this is the same as being empty).
    pub fn is_identity(&self) -> bool {
        self.is_empty()
    }

    fn push(&mut self, mut letter: Letter) {
        if letter.gen == Generator::Rho {
            letter.exp = letter.exp.mod_floor_p(self.p);
        }
        if let Some(last) = self.letters.last_mut() {
            if last.gen == letter.gen {
                let mut exp = &last.exp + &letter.exp;
                if last.gen == Generator::Rho {
                    exp = exp.mod_floor_p(self.p);
                }
                if exp.is_zero() {
                    self.letters.pop();
                } else {
                    last.exp = exp;
                }
                return;
            }
        }
        if !letter.exp.is_zero() {
            self.letters.push(letter);
        }
    }

    /// The word `self · other` (apply `other` first).
    pub fn compose(&self, other: &MCWord) -> Result<MCWord> {
        if self.p != other.p {
            return Err(Error::SurfaceMismatch { left: self.p, right: other.p });
        }
        let mut word = self.clone();
        for letter in &other.letters {
            word.push(letter.clone());
        }
        Ok(word)
    }

    /// The inverse word.
    pub fn inverse(&self) -> MCWord {
        let mut word = MCWord::identity(self.p);
        for letter in self.letters.iter().rev() {
            word.push(Letter { gen: letter.gen.clone(), exp: -&letter.exp });
        }
        word
    }
}

trait ModP {
    fn mod_floor_p(&self, p: usize) -> BigInt;
}

impl ModP for BigInt {
    fn mod_floor_p(&self, p: usize) -> BigInt {
        let p = BigInt::from(p);
        ((self % &p) + &p) % &p
    }
}

/// Apply `ρ^n` to a curve.
pub fn rotate(model: &SurfaceModel, c: &Curve, n: i64) -> Result<Curve> {
    apply_word(model, &MCWord::rho(model.p(), n), c)
}

/// The base curve `γ_j = ρ^j(γ_0)` for `0 <= j <= 2m - 1`, where `γ_0` is the
/// round curve around side `s_0`.
pub fn base_curve(model: &SurfaceModel, j: usize) -> Result<Curve> {
    let m = model.m();
    if j > 2 * m - 1 {
        return Err(Error::IndexOutOfRange { index: j as i64, range: format!("0..={}", 2 * m - 1) });
    }
    let p = model.p();
    Ok(Curve::round(model, RoundCurve::side(p, (2 * j) % p)))
}

/// `D_axis^power(c)`.
pub fn dehn_twist(model: &SurfaceModel, c: &Curve, axis: &Curve, power: &BigInt) -> Result<Curve> {
    apply_word(model, &twist_word(model, axis, power)?, c)
}

/// The word of `D_axis^power`, conjugated down to a round axis when the axis
/// carries a defining word: `D_{W(r)} = W D_r W^{-1}`.  Composing the expanded
/// word with sequence words cancels their common prefixes, which keeps later
/// transports short.
pub(crate) fn twist_word(model: &SurfaceModel, axis: &Curve, power: &BigInt) -> Result<MCWord> {
    axis.check_model(model)?;
    match axis.origin() {
        Some(o) if !o.word.is_identity() && model.recognise_round(&axis.weights()).is_none() => {
            let round = Curve::round(model, o.base);
            o.word.compose(&MCWord::twist(&round, power.clone()))?.compose(&o.word.inverse())
        }
        _ => Ok(MCWord::twist(axis, power.clone())),
    }
}

/// Apply a word to a curve; provenance is extended when present.
pub fn apply_word(model: &SurfaceModel, w: &MCWord, c: &Curve) -> Result<Curve> {
    c.check_model(model)?;
    if w.p() != model.p() {
        return Err(Error::SurfaceMismatch { left: model.p(), right: w.p() });
    }
    let weights = apply_to_weights(model, w, c.weights())?;
    let origin = match c.origin() {
        Some(o) => Some(Origin { base: o.base, word: w.compose(&o.word)? }),
        None => model.recognise_round(&c.weights()).map(|r| Origin { base: r, word: w.clone() }),
    };
    Ok(Curve::trusted(model.p(), &weights, origin))
}

/// Apply a word to raw normal coordinates.
pub(crate) fn apply_to_weights(model: &SurfaceModel, w: &MCWord, mut x: Vec<BigInt>) -> Result<Vec<BigInt>> {
    for letter in w.letters().iter().rev() {
        x = match &letter.gen {
            Generator::Rho => {
                let n = letter.exp.to_i64().expect("reduced modulo p");
                model.rotate_coords(&x, n)?
            }
            Generator::Twist(axis) => twist_about(model, axis, &letter.exp, x)?,
        };
    }
    Ok(x)
}

/// `D_axis^e` on coordinates, by conjugation down to a round curve.
fn twist_about(model: &SurfaceModel, axis: &Curve, e: &BigInt, x: Vec<BigInt>) -> Result<Vec<BigInt>> {
    axis.check_model(model)?;
    let axis_weights = axis.weights();
    if let Some(r) = model.recognise_round(&axis_weights) {
        return twist_round(model, r, x, e);
    }
    let origin = axis
        .origin()
        .ok_or_else(|| Error::UnsupportedPair("twist axis is neither round nor carries a defining word".into()))?;
    let inner = apply_to_weights(model, &origin.word.inverse(), x)?;
    let twisted = twist_round(model, origin.base, inner, e)?;
    apply_to_weights(model, &origin.word, twisted)
}

/// `i(x, r)` for coordinates `x` and a round curve `r`.
pub(crate) fn round_intersection(model: &SurfaceModel, x: &[BigInt], r: RoundCurve) -> Result<BigInt> {
    Ok(model.intersection_with_round(&model.arcs(x)?, r))
}

/// `D_r^e(x)` for a round curve `r`, accelerated for large `|e|`.
pub(crate) fn twist_round(model: &SurfaceModel, r: RoundCurve, x: Vec<BigInt>, e: &BigInt) -> Result<Vec<BigInt>> {
    if e.is_zero() {
        return Ok(x);
    }
    let ops = model.twist_ops(r, e.is_positive());
    let step = |y: &[BigInt]| -> Vec<BigInt> {
        let mut z = y.to_vec();
        ops.apply(&mut z);
        z
    };
    let n = e.abs();
    if n <= BigInt::from(NAIVE_LIMIT) {
        let mut y = x;
        for _ in 0..n.to_u32().expect("small") {
            y = step(&y);
        }
        return Ok(y);
    }
    let crossing = round_intersection(model, &x, r)?;
    if crossing.is_zero() {
        return Ok(x);
    }
    let v: Vec<BigInt> = model.round_coords(r).iter().map(|c| c * &crossing).collect();
    let shifted = |y: &[BigInt], k: &BigInt| -> Vec<BigInt> { y.iter().zip(&v).map(|(a, b)| a + b * k).collect() };
    // Certificate that the k-th step (k >= 1) subtracts v.
    let descending = |k: &BigInt| -> bool {
        let u = shifted(&x, &-(k - 1u32));
        if u.iter().any(Signed::is_negative) || !model.is_multicurve(&u) {
            return false;
        }
        match round_intersection(model, &u, r) {
            Ok(i) if i == crossing => step(&u) == shifted(&u, &-BigInt::one()),
            _ => false,
        }
    };
    let mut done = BigInt::zero();
    if descending(&BigInt::one()) {
        let mut good = BigInt::one();
        while &good * 2u32 <= n && descending(&(&good * 2u32)) {
            good *= 2u32;
        }
        let mut bad = (&good * 2u32).min(&n + 1u32);
        while &bad - &good > BigInt::one() {
            let mid: BigInt = (&good + &bad) / 2u32;
            if descending(&mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        done = good;
    }
    let mut y = shifted(&x, &-&done);
    let mut remaining = &n - &done;
    let mut slow = 0usize;
    let mut linear_run = 0u8;
    while remaining.is_positive() {
        if slow >= SLOW_STEP_LIMIT {
            return Err(Error::TwistNotLinear(SLOW_STEP_LIMIT));
        }
        let z = step(&y);
        let increment_is_v = z == shifted(&y, &BigInt::one());
        y = z;
        remaining -= 1u32;
        slow += 1;
        linear_run = if increment_is_v { linear_run + 1 } else { 0 };
        if linear_run >= 2 {
            y = shifted(&y, &remaining);
            break;
        }
    }
    debug_assert!(y.iter().all(|c| !c.is_negative()));
    Ok(y)
}

/// Check that a curve's provenance word reproduces its coordinates.
pub fn verify_origin(model: &SurfaceModel, c: &Curve) -> Result<bool> {
    let Some(origin) = c.origin() else {
        return Ok(false);
    };
    let base = model.round_coords(origin.base).to_vec();
    let image = apply_to_weights(model, &origin.word, base)?;
    Ok(image.iter().map(to_unsigned).collect::<Vec<_>>() == c.coords())
}

/// The twist axis `α = γ_m = ρ^m(γ_0)` of the construction.
pub fn alpha(model: &SurfaceModel) -> Curve {
    let p = model.p();
    Curve::round(model, RoundCurve::side(p, (2 * model.m()) % p))
}

/// The words `(φ_k, Φ_k)` for a twist schedule, with
/// `φ_k = D_α^{e_{k+m-1}} ρ` and `Φ_k = φ_1 ⋯ φ_k` (`Φ_0` is the identity and
/// `φ_0` is reported as the identity too).
pub fn generator_words(
    model: &SurfaceModel,
    schedule: &crate::seqgen::TwistSchedule,
    k: usize,
) -> Result<(MCWord, MCWord)> {
    let p = model.p();
    let m = model.m();
    if k == 0 {
        return Ok((MCWord::identity(p), MCWord::identity(p)));
    }
    let needed = k + m - 1;
    if needed >= schedule.len() {
        return Err(Error::ScheduleTooShort { needed, available: schedule.len() });
    }
    let a = alpha(model);
    let phi =
        |j: usize| -> Result<MCWord> { MCWord::twist(&a, schedule.e(j + m - 1).clone()).compose(&MCWord::rho(p, 1)) };
    let mut big = MCWord::identity(p);
    for j in 1..=k {
        big = big.compose(&phi(j)?)?;
    }
    Ok((phi(k)?, big))
}
