// SPDX-License-Identifier: MIT OR Apache-2.0
//! JSON persistence of curves, words and sequences.
//!
//! Every number is written as a decimal string, so that arbitrarily large
//! coordinates and exponents survive round trips through tools that parse
//! JSON numbers as doubles.  The formats are
//!
//! ```text
//! Curve    = {"p": 5, "coords": ["0", "2", …], "word": [Letter, …], "base": {"start": 0, "len": 2}}
//! Letter   = {"gen": "rho", "exp": "1"}  |  {"gen": {"twist": Curve}, "exp": "-3"}
//! Sequence = {"p", "schedule": {"e": […], "a": "2", "floor": "304"},
//!             "curves": [Curve, …], "aux": [Curve, …], "words": [[Letter, …], …]}
//! ```
//!
//! `word` and `base` are present only for curves that carry an origin (the
//! curve equals the word applied to the round base curve).  Loading
//! validates everything: coordinates must describe an essential curve,
//! recorded origins must reproduce the coordinates, and a loaded sequence
//! must coincide with the sequence rebuilt from its schedule.

use crate::error::{Error, Result};
use crate::mcg::{verify_origin, Generator, Letter, MCWord};
use crate::seqgen::{build_sequence, CurveSequence, TwistSchedule};
use crate::surface::{Curve, Origin, RoundCurve, SurfaceModel};
use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

/// Serialized round curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseJson {
    /// First side.
    pub start: usize,
    /// Number of consecutive sides.
    pub len: usize,
}

/// Serialized generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GenJson {
    /// The string `"rho"`.
    Rho(String),
    /// `{"twist": Curve}`.
    Twist {
        /// Twist axis.
        twist: Box<CurveJson>,
    },
}

/// Serialized letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterJson {
    /// Generator.
    pub gen: GenJson,
    /// Exponent as a decimal string.
    pub exp: String,
}

/// Serialized curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    /// Puncture count.
    pub p: usize,
    /// Normal coordinates as decimal strings.
    pub coords: Vec<String>,
    /// Origin word, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<LetterJson>>,
    /// Origin base curve, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseJson>,
}

/// Serialized sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceJson {
    /// Puncture count.
    pub p: usize,
    /// Twist schedule.
    pub schedule: TwistSchedule,
    /// `γ_0, …, γ_d`.
    pub curves: Vec<CurveJson>,
    /// `γ'_{2m}, …, γ'_d`.
    pub aux: Vec<CurveJson>,
    /// `Φ_0, …, Φ_d`.
    pub words: Vec<Vec<LetterJson>>,
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| Error::Format(format!("{s:?}: {e}")))
}

/// Encode a word.
pub fn word_to_json(w: &MCWord) -> Vec<LetterJson> {
    w.letters()
        .iter()
        .map(|l| LetterJson {
            gen: match &l.gen {
                Generator::Rho => GenJson::Rho("rho".into()),
                Generator::Twist(axis) => GenJson::Twist { twist: Box::new(curve_to_json(axis)) },
            },
            exp: l.exp.to_string(),
        })
        .collect()
}

/// Decode and validate a word.
pub fn word_from_json(model: &SurfaceModel, letters: &[LetterJson]) -> Result<MCWord> {
    let decoded = letters
        .iter()
        .map(|l| -> Result<Letter> {
            let gen = match &l.gen {
                GenJson::Rho(s) if s == "rho" => Generator::Rho,
                GenJson::Rho(s) => return Err(Error::Format(format!("unknown generator {s:?}"))),
                GenJson::Twist { twist } => Generator::Twist(Box::new(curve_from_json(model, twist)?)),
            };
            Ok(Letter { gen, exp: parse::<BigInt>(&l.exp)? })
        })
        .collect::<Result<Vec<_>>>()?;
    MCWord::from_letters(model.p(), decoded)
}

/// Encode a curve.
pub fn curve_to_json(c: &Curve) -> CurveJson {
    CurveJson {
        p: c.p(),
        coords: c.coords().iter().map(ToString::to_string).collect(),
        word: c.origin().map(|o| word_to_json(&o.word)),
        base: c.origin().map(|o| BaseJson { start: o.base.start(), len: o.base.len() }),
    }
}

/// Decode and validate a curve; a recorded origin must reproduce the
/// coordinates.
pub fn curve_from_json(model: &SurfaceModel, j: &CurveJson) -> Result<Curve> {
    if j.p != model.p() {
        return Err(Error::SurfaceMismatch { left: model.p(), right: j.p });
    }
    let coords = j.coords.iter().map(|s| parse::<BigUint>(s)).collect::<Result<Vec<_>>>()?;
    match (&j.word, &j.base) {
        (None, None) => Curve::from_coords(model, coords),
        (Some(word), Some(base)) => {
            let origin =
                Origin { base: RoundCurve::new(model.p(), base.start, base.len)?, word: word_from_json(model, word)? };
            let c = Curve::with_origin(model, coords, origin)?;
            if !verify_origin(model, &c)? {
                return Err(Error::Format("recorded word does not reproduce the coordinates".into()));
            }
            Ok(c)
        }
        _ => Err(Error::Format("\"word\" and \"base\" must appear together".into())),
    }
}

/// Encode a sequence.
pub fn sequence_to_json(seq: &CurveSequence) -> SequenceJson {
    SequenceJson {
        p: seq.p(),
        schedule: seq.schedule().clone(),
        curves: seq.curves().iter().map(curve_to_json).collect(),
        aux: seq.aux_curves().iter().map(curve_to_json).collect(),
        words: seq.words().iter().map(word_to_json).collect(),
    }
}

/// Serialize a sequence as pretty-printed JSON (deterministic).
pub fn sequence_to_string(seq: &CurveSequence) -> Result<String> {
    Ok(serde_json::to_string_pretty(&sequence_to_json(seq))?)
}

/// Parse and validate a sequence: the stored data must coincide with the
/// sequence rebuilt from the stored schedule.
pub fn sequence_from_str(text: &str) -> Result<(SurfaceModel, CurveSequence)> {
    let j: SequenceJson = serde_json::from_str(text)?;
    let model = SurfaceModel::new(j.p)?;
    if j.curves.is_empty() {
        return Err(Error::Format("sequence has no curves".into()));
    }
    let depth = j.curves.len() - 1;
    let stored = CurveSequence::from_parts(
        j.p,
        j.schedule.clone(),
        j.curves.iter().map(|c| curve_from_json_unchecked(&model, c)).collect::<Result<_>>()?,
        j.aux.iter().map(|c| curve_from_json_unchecked(&model, c)).collect::<Result<_>>()?,
        j.words.iter().map(|w| word_from_json(&model, w)).collect::<Result<_>>()?,
    )?;
    let rebuilt = build_sequence(&model, &j.schedule, depth)?;
    if rebuilt != stored || sequence_to_json(&rebuilt) != j {
        return Err(Error::Format("stored sequence differs from the one its schedule generates".into()));
    }
    Ok((model, rebuilt))
}

/// Decode a curve without replaying its origin word (the caller validates
/// by other means).
fn curve_from_json_unchecked(model: &SurfaceModel, j: &CurveJson) -> Result<Curve> {
    if j.p != model.p() {
        return Err(Error::SurfaceMismatch { left: model.p(), right: j.p });
    }
    let coords = j.coords.iter().map(|s| parse::<BigUint>(s)).collect::<Result<Vec<_>>>()?;
    match (&j.word, &j.base) {
        (None, None) => Curve::from_coords(model, coords),
        (Some(word), Some(base)) => {
            let origin =
                Origin { base: RoundCurve::new(model.p(), base.start, base.len)?, word: word_from_json(model, word)? };
            Curve::with_origin(model, coords, origin)
        }
        _ => Err(Error::Format("\"word\" and \"base\" must appear together".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::{apply_word, base_curve};
    use crate::seqgen::make_schedule;
    use num_rational::BigRational;

    #[test]
    fn curve_round_trip_with_origin() {
        let model = SurfaceModel::new(7).unwrap();
        let axis = base_curve(&model, 3).unwrap();
        let w = MCWord::twist(&axis, BigInt::from(-5)).compose(&MCWord::rho(7, 2)).unwrap();
        let c = apply_word(&model, &w, &base_curve(&model, 0).unwrap()).unwrap();
        let j = curve_to_json(&c);
        let text = serde_json::to_string(&j).unwrap();
        let back = curve_from_json(&model, &serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(curve_to_json(&back), j);
    }

    #[test]
    fn tampered_coordinates_are_rejected() {
        let model = SurfaceModel::new(5).unwrap();
        let w = MCWord::rho(5, 1);
        let c = apply_word(&model, &w, &base_curve(&model, 0).unwrap()).unwrap();
        let mut j = curve_to_json(&c);
        j.word = Some(word_to_json(&MCWord::rho(5, 2)));
        assert!(curve_from_json(&model, &j).is_err());
    }

    #[test]
    fn sequence_round_trip() {
        let model = SurfaceModel::new(5).unwrap();
        let sched = make_schedule(&BigInt::from(16), &BigRational::from(BigInt::from(2)), 8).unwrap();
        let seq = build_sequence(&model, &sched, 7).unwrap();
        let text = sequence_to_string(&seq).unwrap();
        let (_, back) = sequence_from_str(&text).unwrap();
        assert_eq!(back, seq);
        assert_eq!(sequence_to_string(&back).unwrap(), text);
        let broken = text.replacen("\"16\"", "\"17\"", 1);
        assert!(sequence_from_str(&broken).is_err());
    }
}
