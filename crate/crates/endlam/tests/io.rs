// SPDX-License-Identifier: MIT OR Apache-2.0
//! JSON round trips and load-time validation.

use endlam::io::{curve_from_json, curve_to_json, sequence_from_str, sequence_to_json, sequence_to_string};
use endlam::mcg::base_curve;
use endlam::seqgen::{build_sequence, make_schedule, CurveSequence};
use endlam::{Error, SurfaceModel};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn sequence(p: usize, e0: i64, a: i64, depth: usize) -> (SurfaceModel, CurveSequence) {
    let model = SurfaceModel::new(p).unwrap();
    let sched = make_schedule(&BigInt::from(e0), &BigRational::from(BigInt::from(a)), depth + model.m()).unwrap();
    let seq = build_sequence(&model, &sched, depth).unwrap();
    (model, seq)
}

#[test]
fn sequences_round_trip_byte_for_byte() {
    let (_, seq) = sequence(7, 304, 2, 12);
    let text = sequence_to_string(&seq).unwrap();
    let (model, back) = sequence_from_str(&text).unwrap();
    assert_eq!(model.p(), 7);
    assert_eq!(back, seq);
    assert_eq!(sequence_to_string(&back).unwrap(), text);
}

#[test]
fn numbers_are_decimal_strings() {
    let (_, seq) = sequence(5, 304, 2, 30);
    let text = sequence_to_string(&seq).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let coords = value["curves"][30]["coords"].as_array().unwrap();
    assert!(coords.iter().all(|c| c.is_string()));
    // Coordinates this deep do not fit in a double without loss.
    assert!(coords.iter().any(|c| c.as_str().unwrap().len() > 20));
}

#[test]
fn edited_sequences_are_rejected() {
    let (_, seq) = sequence(5, 16, 2, 8);
    let mut j = sequence_to_json(&seq);
    j.curves[5].coords[0] = "7".into();
    let text = serde_json::to_string(&j).unwrap();
    assert!(sequence_from_str(&text).is_err());

    let mut j = sequence_to_json(&seq);
    j.curves.swap(3, 4);
    assert!(sequence_from_str(&serde_json::to_string(&j).unwrap()).is_err());

    let mut j = sequence_to_json(&seq);
    j.curves.clear();
    assert!(matches!(sequence_from_str(&serde_json::to_string(&j).unwrap()), Err(Error::Format(_))));
}

#[test]
fn malformed_documents_are_errors() {
    assert!(sequence_from_str("").is_err());
    assert!(sequence_from_str("{\"p\": 5}").is_err());
    let (_, seq) = sequence(5, 16, 2, 6);
    let text = sequence_to_string(&seq).unwrap().replacen("\"p\": 5", "\"p\": 6", 1);
    assert!(matches!(sequence_from_str(&text), Err(Error::InvalidPunctureCount(6))));
}

#[test]
fn curves_without_origin_round_trip() {
    let model = SurfaceModel::new(5).unwrap();
    let (_, seq) = sequence(5, 3, 2, 6);
    let c = seq.gamma(6).unwrap().without_origin();
    let j = curve_to_json(&c);
    assert!(j.word.is_none() && j.base.is_none());
    assert_eq!(curve_from_json(&model, &j).unwrap(), c);
    // Half an origin is an error.
    let mut half = curve_to_json(seq.gamma(6).unwrap());
    half.base = None;
    assert!(curve_from_json(&model, &half).is_err());
}

#[test]
fn curves_must_live_on_the_model() {
    let model = SurfaceModel::new(5).unwrap();
    let other = SurfaceModel::new(7).unwrap();
    let j = curve_to_json(&base_curve(&other, 0).unwrap());
    assert!(matches!(curve_from_json(&model, &j), Err(Error::SurfaceMismatch { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn round_trips_for_random_schedules(p in prop::sample::select(vec![5usize, 7]), e0 in 1i64..500, a in 1i64..5, depth in 3usize..12) {
        let (_, seq) = sequence(p, e0, a, depth);
        let text = sequence_to_string(&seq).unwrap();
        let (_, back) = sequence_from_str(&text).unwrap();
        prop_assert_eq!(back, seq);
    }
}
