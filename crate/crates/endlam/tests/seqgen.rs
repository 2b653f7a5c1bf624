// SPDX-License-Identifier: MIT OR Apache-2.0
//! Schedules, sequence construction, condition 𝒫 and twist products.

use endlam::intersect::intersection_number;
use endlam::mcg::{alpha, apply_word, base_curve, dehn_twist, rotate};
use endlam::seqgen::{
    axis_matches, build_sequence, make_schedule, make_strict_schedule, twist_product, verify_condition_p,
    CurveSequence, IntersectionTable, Status, TwistSchedule,
};
use endlam::subproj::VerifierConstants;
use endlam::{Error, SurfaceModel};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

fn sequence(p: usize, e0: i64, a: BigRational, depth: usize) -> (SurfaceModel, CurveSequence) {
    let model = SurfaceModel::new(p).unwrap();
    let sched = make_schedule(&int(e0), &a, depth + model.m() - 1).unwrap();
    let seq = build_sequence(&model, &sched, depth).unwrap();
    (model, seq)
}

#[test]
fn geometric_schedule() {
    let s = make_schedule(&int(16), &ratio(2, 1), 4).unwrap();
    assert_eq!(s.entries(), [16, 32, 64, 128, 256].map(int));
}

#[test]
fn fractional_ratio_rounds_up_recursively() {
    let s = make_schedule(&int(5), &ratio(3, 2), 3).unwrap();
    assert_eq!(s.entries(), [5, 8, 12, 18].map(int));
}

#[test]
fn schedule_preconditions() {
    assert!(make_schedule(&int(0), &ratio(2, 1), 3).is_err());
    assert!(make_schedule(&int(4), &ratio(1, 2), 3).is_err());
    assert!(make_strict_schedule(&int(4), &ratio(1, 1), 3).is_err());
    assert!(make_strict_schedule(&int(4), &ratio(5, 4), 3).is_ok());
    assert!(TwistSchedule::new(vec![int(4), int(3)], ratio(1, 1), int(1)).is_err());
}

#[test]
fn floor_gate_uses_the_verifier_constants() {
    let consts = VerifierConstants::default();
    assert_eq!((consts.b, consts.e0), (100, 304));
    let low = make_schedule(&int(16), &ratio(2, 1), 4).unwrap();
    assert!(!low.meets_floor());
    let high = make_schedule(&int(304), &ratio(2, 1), 4).unwrap();
    assert!(high.meets_floor());
    let relaxed = low.with_floor(int(VerifierConstants::new(2, 3).unwrap().e0 as i64));
    assert!(relaxed.meets_floor());
}

#[test]
fn short_schedules_are_rejected() {
    let model = SurfaceModel::new(7).unwrap();
    let s = make_schedule(&int(2), &ratio(2, 1), 6).unwrap();
    assert!(matches!(build_sequence(&model, &s, 6), Err(Error::ScheduleTooShort { .. })));
    assert!(build_sequence(&model, &s, 4).is_ok());
}

#[test]
fn gamma_m_is_the_axis() {
    for p in [5, 7, 9] {
        let (model, seq) = sequence(p, 2, ratio(2, 1), 3 * (p - 1) / 2);
        assert!(axis_matches(&model, &seq).unwrap());
        assert_eq!(seq.gamma(model.m()).unwrap(), &alpha(&model));
    }
}

#[test]
fn first_window_is_the_base_window() {
    let (model, seq) = sequence(7, 3, ratio(2, 1), 9);
    for j in 0..6 {
        assert_eq!(seq.gamma(j).unwrap(), &base_curve(&model, j).unwrap());
    }
    assert!(seq.word(0).unwrap().is_identity());
}

#[test]
fn auxiliary_curves_are_transported_rotations() {
    // γ'_{k+m} = Φ_{k−m}(ρ^{2m} γ_0).
    for p in [5, 7] {
        let (model, seq) = sequence(p, 2, ratio(2, 1), 10);
        let m = model.m();
        let seed = rotate(&model, &base_curve(&model, 0).unwrap(), 2 * m as i64).unwrap();
        for k in m..=seq.depth() - m {
            let expected = apply_word(&model, seq.word(k - m).unwrap(), &seed).unwrap();
            assert_eq!(seq.aux(k + m).unwrap(), &expected);
            let twisted = dehn_twist(&model, &expected, seq.gamma(k).unwrap(), seq.schedule().e(k)).unwrap();
            assert_eq!(seq.gamma(k + m).unwrap(), &twisted);
        }
    }
}

#[test]
fn auxiliary_intersection_pattern() {
    // i(γ'_{k+m}, γ_{k−m+j}) = 2 iff j ∈ {m−1, m}, else 0, for 0 <= j <= 2m−1.
    for p in [5, 7, 9] {
        let (model, seq) = sequence(p, 2, ratio(2, 1), 4 * (p - 1) / 2);
        let m = model.m();
        for k in m..=seq.depth() - m {
            for j in 0..2 * m {
                let n = intersection_number(&model, seq.aux(k + m).unwrap(), seq.gamma(k - m + j).unwrap()).unwrap();
                let expected = if j == m - 1 || j == m { 2u32 } else { 0 };
                assert_eq!(n, BigUint::from(expected), "p={p} k={k} j={j}");
            }
        }
    }
}

#[test]
fn figure_two_configuration() {
    // p = 7: Φ_{k−3}^{-1} maps γ_{k−3}, …, γ_{k+2} to γ_0, …, γ_5 and
    // γ_{k+3} to the twist of ρ^6(γ_0) about γ_3.
    let (model, seq) = sequence(7, 2, ratio(2, 1), 9);
    for k in 3..=6 {
        let inv = seq.word(k - 3).unwrap().inverse();
        for j in 0..6 {
            assert_eq!(
                apply_word(&model, &inv, seq.gamma(k - 3 + j).unwrap()).unwrap(),
                base_curve(&model, j).unwrap()
            );
        }
        let seventh = apply_word(&model, &inv, seq.gamma(k + 3).unwrap()).unwrap();
        let seed = rotate(&model, &base_curve(&model, 0).unwrap(), 6).unwrap();
        let expected = dehn_twist(&model, &seed, &base_curve(&model, 3).unwrap(), seq.schedule().e(k)).unwrap();
        assert_eq!(seventh, expected);
    }
}

#[test]
fn condition_p_holds_with_b_equal_two() {
    for p in [5, 7, 9] {
        let (model, seq) = sequence(p, 16, ratio(2, 1), 3 * (p - 1) / 2);
        let report = verify_condition_p(&model, &seq, 4096).unwrap();
        assert_eq!(report.b, (2, 2));
        assert!(report.all_pass(), "p = {p}: {:?}", report.rows.iter().find(|r| r.status != Status::Pass));
        for clause in ["i", "ii", "iii", "iii-twist"] {
            assert!(report.rows.iter().any(|r| r.clause == clause), "clause {clause} present");
        }
    }
}

#[test]
fn corrupted_sequence_fails_clause_i() {
    let (model, seq) = sequence(5, 2, ratio(2, 1), 8);
    let g0 = seq.gamma(0).unwrap().clone();
    let bad = seq.with_curve(3, g0).unwrap();
    let report = verify_condition_p(&model, &bad, 4096).unwrap();
    assert!(!report.all_pass());
    assert!(report.rows.iter().any(|r| r.clause == "i" && r.status == Status::Fail));
}

#[test]
fn twist_products() {
    let (_, seq) = sequence(5, 3, ratio(2, 1), 10);
    let e = |k: usize| BigUint::try_from(seq.schedule().e(k).clone()).unwrap();
    for k in 2..=10 {
        assert_eq!(twist_product(&seq, k - 2, k).unwrap(), BigUint::from(1u32), "empty product");
    }
    assert_eq!(twist_product(&seq, 0, 4).unwrap(), e(2) * 2u32);
    assert_eq!(twist_product(&seq, 0, 6).unwrap(), (e(2) * 2u32) * (e(4) * 2u32));
    assert_eq!(twist_product(&seq, 1, 7).unwrap(), (e(3) * 2u32) * (e(5) * 2u32));
}

#[test]
fn intersection_table_matches_direct_computation() {
    let (model, seq) = sequence(7, 2, ratio(2, 1), 10);
    let table = IntersectionTable::build(&model, &seq).unwrap();
    assert_eq!(table.depth(), 10);
    for i in 0..=10 {
        for k in 0..=10 {
            let direct = intersection_number(&model, seq.gamma(i).unwrap(), seq.gamma(k).unwrap()).unwrap();
            assert_eq!(table.get(i, k), &direct);
        }
    }
}

#[test]
fn words_are_prefixes() {
    let (_, seq) = sequence(5, 2, ratio(3, 2), 8);
    for k in 1..=8 {
        let prev = seq.word(k - 1).unwrap();
        let this = seq.word(k).unwrap();
        assert_eq!(&this.letters()[..prev.len()], prev.letters());
        assert_eq!(this.len(), 2 * k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn consecutive_curves_meet_twice(p in prop::sample::select(vec![5usize, 7]), e0 in 1i64..40, num in 1i64..4, extra in 0i64..3) {
        let (model, seq) = sequence(p, e0, ratio(num + extra, num), 4 * (p - 1) / 2);
        let m = model.m();
        for k in 0..=seq.depth() - m {
            prop_assert_eq!(
                intersection_number(&model, seq.gamma(k).unwrap(), seq.gamma(k + m).unwrap()).unwrap(),
                BigUint::from(2u32)
            );
        }
    }

    #[test]
    fn schedules_grow_by_the_ratio(e0 in 1i64..1000, n in 1i64..9, d in 1i64..9) {
        let a = ratio(n + d, d);
        let s = make_schedule(&int(e0), &a, 10).unwrap();
        for w in s.entries().windows(2) {
            prop_assert!(BigRational::from(w[1].clone()) >= &a * BigRational::from(w[0].clone()));
            prop_assert!(BigRational::from(w[1].clone() - 1) < &a * BigRational::from(w[0].clone()));
        }
    }
}
