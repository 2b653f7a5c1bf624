// SPDX-License-Identifier: MIT OR Apache-2.0
//! Surface model, base curves and rotation.

use endlam::intersect::intersection_number;
use endlam::mcg::{base_curve, rotate};
use endlam::surface::RoundCurve;
use endlam::{Curve, Error, SurfaceModel};
use num_bigint::BigUint;
use proptest::prelude::*;

#[test]
fn half_rank_of_the_model() {
    assert_eq!(SurfaceModel::new(5).unwrap().m(), 2);
    assert_eq!(SurfaceModel::new(7).unwrap().m(), 3);
    assert_eq!(SurfaceModel::new(9).unwrap().m(), 4);
}

#[test]
fn invalid_puncture_counts_are_domain_errors() {
    for p in [0, 1, 2, 3, 4, 6, 8] {
        assert!(matches!(SurfaceModel::new(p), Err(Error::InvalidPunctureCount(q)) if q == p));
    }
}

#[test]
fn triangulation_counts() {
    for p in [5, 7, 9, 11] {
        let model = SurfaceModel::new(p).unwrap();
        assert_eq!(model.coordinate_count(), 3 * p - 6);
        assert_eq!(model.triangle_count(), 2 * p - 4);
        assert_eq!(model.euler_characteristic(), 2 - p as i64);
    }
}

fn i(model: &SurfaceModel, a: &Curve, b: &Curve) -> u64 {
    u64::try_from(intersection_number(model, a, b).unwrap()).unwrap()
}

#[test]
fn consecutive_base_curves_are_disjoint() {
    let model = SurfaceModel::new(5).unwrap();
    assert_eq!(i(&model, &base_curve(&model, 0).unwrap(), &base_curve(&model, 1).unwrap()), 0);
}

#[test]
fn base_curves_m_apart_meet_twice() {
    let model = SurfaceModel::new(5).unwrap();
    assert_eq!(i(&model, &base_curve(&model, 0).unwrap(), &base_curve(&model, 2).unwrap()), 2);
    let model = SurfaceModel::new(7).unwrap();
    assert_eq!(i(&model, &base_curve(&model, 0).unwrap(), &base_curve(&model, 3).unwrap()), 2);
}

#[test]
fn base_curve_intersection_pattern() {
    // Base curves meet (twice) exactly when their indices differ by m or m+1.
    for p in [5, 7, 9] {
        let model = SurfaceModel::new(p).unwrap();
        let m = model.m();
        for a in 0..2 * m {
            for b in a + 1..2 * m {
                let expected = if b - a == m || b - a == m + 1 { 2 } else { 0 };
                let got = i(&model, &base_curve(&model, a).unwrap(), &base_curve(&model, b).unwrap());
                assert_eq!(got, expected, "p={p} ({a},{b})");
            }
        }
    }
}

#[test]
fn base_curve_index_is_bounded() {
    let model = SurfaceModel::new(5).unwrap();
    assert!(matches!(base_curve(&model, 4), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn rotation_has_order_p() {
    for p in [5, 7, 9] {
        let model = SurfaceModel::new(p).unwrap();
        let g0 = base_curve(&model, 0).unwrap();
        assert_eq!(rotate(&model, &g0, p as i64).unwrap(), g0);
        assert_ne!(rotate(&model, &g0, 1).unwrap(), g0);
    }
}

#[test]
fn rotation_steps_through_the_base_curves() {
    for p in [5, 7, 9] {
        let model = SurfaceModel::new(p).unwrap();
        for j in 0..2 * model.m() - 1 {
            let g = base_curve(&model, j).unwrap();
            assert_eq!(rotate(&model, &g, 1).unwrap(), base_curve(&model, j + 1).unwrap());
        }
    }
}

#[test]
fn round_curves_are_canonical() {
    let r = RoundCurve::new(7, 5, 5).unwrap();
    assert_eq!((r.start(), r.len()), (3, 2));
    assert!(RoundCurve::new(7, 0, 1).is_err());
    assert!(RoundCurve::new(7, 0, 6).is_err());
}

#[test]
fn non_curves_are_rejected() {
    let model = SurfaceModel::new(5).unwrap();
    let zeros = vec![BigUint::from(0u32); model.coordinate_count()];
    assert!(Curve::from_coords(&model, zeros).is_err());
    let good = base_curve(&model, 0).unwrap().coords().to_vec();
    let doubled: Vec<BigUint> = good.iter().map(|x| x * 2u32).collect();
    assert!(Curve::from_coords(&model, doubled).is_err(), "two parallel copies are not a curve");
    assert_eq!(Curve::from_coords(&model, good.clone()).unwrap(), base_curve(&model, 0).unwrap());
    assert!(Curve::from_coords(&model, good[1..].to_vec()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_preserves_intersection(p in prop::sample::select(vec![5usize, 7, 9]), a in 0usize..8, b in 0usize..8, n in -12i64..12) {
        let model = SurfaceModel::new(p).unwrap();
        let m = model.m();
        let (ca, cb) = (base_curve(&model, a % (2 * m)).unwrap(), base_curve(&model, b % (2 * m)).unwrap());
        let before = intersection_number(&model, &ca, &cb).unwrap();
        let ra = rotate(&model, &ca, n).unwrap();
        let rb = rotate(&model, &cb, n).unwrap();
        prop_assert_eq!(intersection_number(&model, &ra, &rb).unwrap(), before);
    }

    #[test]
    fn rotations_compose(p in prop::sample::select(vec![5usize, 7]), a in -9i64..9, b in -9i64..9) {
        let model = SurfaceModel::new(p).unwrap();
        let g = base_curve(&model, 1).unwrap();
        let two = rotate(&model, &rotate(&model, &g, a).unwrap(), b).unwrap();
        prop_assert_eq!(two, rotate(&model, &g, a + b).unwrap());
    }
}
