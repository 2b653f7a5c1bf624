// SPDX-License-Identifier: MIT OR Apache-2.0
//! Intersection asymptotics, convergence of the ergodic proxies and the
//! singularity statistics.

use endlam::ergodics::{
    convergence_report, default_family, format_rational, intersection_ratio_table, is_qualifying, kappa0_stabilization,
    singularity_ratios,
};
use endlam::seqgen::{build_sequence, make_schedule, twist_product, CurveSequence, IntersectionTable};
use endlam::SurfaceModel;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

fn sequence(p: usize, e0: i64, a: i64, depth: usize) -> (SurfaceModel, CurveSequence, IntersectionTable) {
    let model = SurfaceModel::new(p).unwrap();
    let sched = make_schedule(&BigInt::from(e0), &BigRational::from(BigInt::from(a)), depth + model.m()).unwrap();
    let seq = build_sequence(&model, &sched, depth).unwrap();
    let table = IntersectionTable::build(&model, &seq).unwrap();
    (model, seq, table)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn ratio_of_the_first_qualifying_pair() {
    // i(γ_0, γ_4) = 4e_2 and A(0, 4) = 2e_2, so the ratio is exactly 2.
    let (_, seq, table) = sequence(5, 16, 2, 8);
    let report = intersection_ratio_table(&seq, &table).unwrap();
    let row = report.rows.iter().find(|r| r.i == 0 && r.k == 4).unwrap();
    assert!(row.qualifying);
    assert_eq!(row.ratio, q(2, 1));
    assert_eq!(row.twist_product, twist_product(&seq, 0, 4).unwrap());
}

#[test]
fn kappa0_is_bounded_and_stabilises_at_p5() {
    for e0 in [16, 304] {
        let (_, seq, table) = sequence(5, e0, 2, 14);
        let report = intersection_ratio_table(&seq, &table).unwrap();
        assert!(report.all_pass(), "e0 = {e0}");
        assert!(report.kappa0 <= q(8, 1), "κ0 = {}", format_rational(&report.kappa0));
        assert!(report.ratio_lemma_checked > 0);
        let stab = kappa0_stabilization(&report, 2, 4);
        assert!(stab.is_stable());
        let bound = stab.certified_bound().unwrap();
        assert!(bound >= report.kappa0 && bound <= q(8, 1));
        // Frozen start of the profile.
        assert_eq!(stab.profile[0], (4, q(2, 1)));
        assert_eq!(stab.profile[1], (6, q(3, 1)));
    }
}

#[test]
fn profile_is_monotone_in_depth() {
    let (_, seq, table) = sequence(5, 16, 2, 14);
    let report = intersection_ratio_table(&seq, &table).unwrap();
    let profile = report.kappa0_profile(4);
    for w in profile.windows(2) {
        assert!(w[1].1 >= w[0].1);
    }
}

#[test]
fn ergodic_splitting_at_p5() {
    let (model, seq, table) = sequence(5, 304, 4, 14);
    let asym = intersection_ratio_table(&seq, &table).unwrap();
    let family = default_family(&model, &seq).unwrap();
    let conv = convergence_report(&model, &seq, &table, &family).unwrap();
    assert_eq!(conv.burn_in, 4);
    assert_eq!(conv.residues.len(), 2);
    assert!(conv.all_pass());
    for res in &conv.residues {
        assert!(res.asserted_steps() >= 2, "h = {}", res.h);
    }
    let distinct = conv.distinctness.clone().unwrap();
    assert!(distinct > BigRational::from(BigInt::from(4)));

    let sing = singularity_ratios(&seq, &table, 6, &asym.kappa0).unwrap();
    assert!(sing.band_holds());
    assert!(sing.cross_monotone_steps().unwrap() >= 3);
}

#[test]
fn singularity_ratios_need_depth() {
    let (_, seq, table) = sequence(5, 16, 2, 8);
    let asym = intersection_ratio_table(&seq, &table).unwrap();
    assert!(singularity_ratios(&seq, &table, 6, &asym.kappa0).is_err());
    assert!(singularity_ratios(&seq, &table, 1, &asym.kappa0).is_err());
}

#[test]
fn rational_formatting_keeps_the_denominator() {
    assert_eq!(format_rational(&q(6, 3)), "2/1");
    assert_eq!(format_rational(&q(-3, 4)), "-3/4");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qualifying_pairs_meet(i in 0usize..10, gap in 1usize..10) {
        // The two-sided estimate needs non-zero intersection on every
        // qualifying pair.
        let (_, _, table) = sequence(5, 16, 2, 19);
        let k = i + gap;
        if is_qualifying(i, k, 2) {
            prop_assert!(table.get(i, k) > &BigUint::from(0u32));
        }
    }
}
