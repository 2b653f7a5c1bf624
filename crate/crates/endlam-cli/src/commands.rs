// SPDX-License-Identifier: MIT OR Apache-2.0
//! Implementations of the subcommands.
//!
//! Each subcommand is a pure function from its arguments and the run context
//! to an [`Outcome`]: the bytes of every output file plus a pass/fail verdict.
//! Files are written by the caller only after the computation succeeded, so a
//! domain error never leaves a half-written report behind.  Rows are always
//! emitted in a fixed order (parallel work is collected by index), and checks
//! that could not run because of a scale cap appear as explicit `skipped`
//! rows instead of disappearing.

use crate::{
    AnnularArgs, BuildArgs, CliError, Command, Context, DistanceArgs, EpsArg, ErgodicArgs, ModeArg, Outcome, PairArgs,
    SeqArgs, TraceArgs,
};
use endlam::ergodics::{
    convergence_report, default_family, format_rational, intersection_ratio_table, kappa0_stabilization,
    singularity_ratios,
};
use endlam::intersect::intersection_with_method;
use endlam::io::{sequence_from_str, sequence_to_string};
use endlam::lengthmodel::{default_steps, limit_trace, EpsSchedule, LengthModelParams, DEFAULT_L0, DEFAULT_LAMBDA};
use endlam::seqgen::{build_sequence, make_schedule, verify_condition_p, CurveSequence, IntersectionTable, Status};
use endlam::subproj::{cc_distance_bounds, in_monoid, marker_spacing, sequence_coeff, CoeffMode, ProjectionSettings};
use endlam::{Error, SurfaceModel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

pub(crate) fn dispatch(cmd: &Command, ctx: &mut Context) -> Result<Outcome, CliError> {
    match cmd {
        Command::Build(a) => build(a, ctx),
        Command::VerifyP(a) => verify_p(a, ctx),
        Command::Intersections(a) => intersections(a, ctx),
        Command::Annular(a) => annular(a, ctx),
        Command::Distance(a) => distance(a, ctx),
        Command::Ergodic(a) => ergodic(a, ctx),
        Command::LimitTrace(a) => trace(a, ctx),
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skipped => "skipped",
    }
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

/// Floats carry 15 significant digits.
fn float(x: f64) -> String {
    format!("{x:.14e}")
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, CliError> {
    w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))
}

fn load(args: &SeqArgs, ctx: &mut Context) -> Result<(SurfaceModel, CurveSequence), CliError> {
    let bytes = ctx.read_input(&args.seq)?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{}: not UTF-8", args.seq.display())))?;
    Ok(sequence_from_str(&text)?)
}

fn settings(ctx: &Context, mode: ModeArg) -> ProjectionSettings {
    ProjectionSettings {
        delta: ctx.constants.delta,
        oracle_cap: ctx.oracle_cap,
        mode: match mode {
            ModeArg::Auto => CoeffMode::Auto,
            ModeArg::Exact => CoeffMode::Exact,
            ModeArg::Estimate => CoeffMode::Estimate,
        },
    }
}

fn check_index(seq: &CurveSequence, i: usize) -> Result<(), CliError> {
    if i > seq.depth() {
        return Err(Error::IndexOutOfRange { index: i as i64, range: format!("0..={}", seq.depth()) }.into());
    }
    Ok(())
}

/// Pairs from `--pairs` / `--all`; with neither flag, every pair.
fn pair_list(args: &PairArgs, seq: &CurveSequence, strict: bool) -> Result<Vec<(usize, usize)>, CliError> {
    if args.pairs.is_empty() {
        let d = seq.depth();
        let lo = usize::from(strict);
        return Ok((0..=d).flat_map(|i| (i + lo..=d).map(move |j| (i, j))).collect());
    }
    if args.pairs.len() % 2 != 0 {
        return Err(CliError::Usage("--pairs needs an even number of indices".into()));
    }
    let pairs: Vec<(usize, usize)> = args.pairs.chunks(2).map(|c| (c[0], c[1])).collect();
    for &(i, j) in &pairs {
        check_index(seq, i)?;
        check_index(seq, j)?;
        if strict && i >= j {
            return Err(CliError::Usage(format!("pair ({i}, {j}) must satisfy i < j")));
        }
    }
    Ok(pairs)
}

fn build(args: &BuildArgs, ctx: &mut Context) -> Result<Outcome, CliError> {
    let e0: BigInt = args.e0.parse().map_err(|_| CliError::Usage(format!("--e0: not an integer: {}", args.e0)))?;
    let a: BigRational =
        args.ratio.parse().map_err(|_| CliError::Usage(format!("--ratio: not a rational: {}", args.ratio)))?;
    let model = SurfaceModel::new(args.p)?;
    // The construction of γ_d reads the exponents up to e_{d+m−1}.
    let schedule =
        make_schedule(&e0, &a, args.depth + model.m() - 1)?.with_floor(BigInt::from(ctx.constants.verifier.e0));
    let seq = build_sequence(&model, &schedule, args.depth)?;
    let mut text = sequence_to_string(&seq)?;
    text.push('\n');
    let mut summary = vec![format!("built γ_0..γ_{} on S_0,{} (m = {})", args.depth, args.p, model.m())];
    if !schedule.meets_floor() {
        summary.push(format!("note: e_0 = {} is below the floor E_0 = {}", e0, schedule.floor()));
    }
    Ok(Outcome { files: vec![(ctx.out.clone(), text.into_bytes())], passed: true, summary })
}

fn verify_p(args: &SeqArgs, ctx: &mut Context) -> Result<Outcome, CliError> {
    let (model, seq) = load(args, ctx)?;
    let report = verify_condition_p(&model, &seq, ctx.oracle_cap)?;
    let mut w = csv_writer();
    w.write_record(["clause", "k", "status", "detail"])?;
    for r in &report.rows {
        w.write_record([r.clause.as_str(), &r.k.to_string(), status_str(r.status), r.detail.as_str()])?;
    }
    let passed = report.all_pass();
    let fails = report.rows.iter().filter(|r| r.status != Status::Pass).count();
    let summary = vec![format!(
        "condition P with b = {}, b' = {}: {} rows, {} not passing",
        report.b.0,
        report.b.1,
        report.rows.len(),
        fails
    )];
    Ok(Outcome { files: vec![(ctx.out.clone(), finish(w)?)], passed, summary })
}

fn intersections(args: &PairArgs, ctx: &mut Context) -> Result<Outcome, CliError> {
    let (model, seq) = load(&args.seq, ctx)?;
    let pairs = pair_list(args, &seq, false)?;
    let cap = ctx.oracle_cap;
    let values = pairs
        .par_iter()
        .map(|&(i, j)| match intersection_with_method(&model, seq.gamma(i)?, seq.gamma(j)?, cap) {
            Ok((n, method)) => Ok(Some((n, method))),
            Err(Error::OracleScaleExceeded { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<endlam::Result<Vec<_>>>()?;
    let mut w = csv_writer();
    w.write_record(["i", "j", "intersection", "method"])?;
    let mut skipped = 0;
    for (&(i, j), v) in pairs.iter().zip(&values) {
        match v {
            Some((n, method)) => w.write_record([i.to_string(), j.to_string(), n.to_string(), method.to_string()])?,
            None => {
                skipped += 1;
                w.write_record([i.to_string(), j.to_string(), String::new(), "skipped".into()])?
            }
        }
    }
    let summary = vec![format!("{} pairs, {} skipped at oracle cap {}", pairs.len(), skipped, cap)];
    Ok(Outcome { files: vec![(ctx.out.clone(), finish(w)?)], passed: true, summary })
}

#[derive(serde::Deserialize)]
struct TripleRow {
    i: usize,
    k: usize,
    j: usize,
}

fn annular(args: &AnnularArgs, ctx: &mut Context) -> Result<Outcome, CliError> {
    let (model, seq) = load(&args.seq, ctx)?;
    let m = seq.m();
    let d = seq.depth();
    let triples: Vec<(usize, usize, usize)> = match &args.triples {
        Some(path) => {
            let bytes = ctx.read_input(path)?;
            let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes.as_slice());
            let rows = rd.deserialize::<TripleRow>().collect::<Result<Vec<_>, _>>()?;
            rows.into_iter().map(|r| (r.i, r.k, r.j)).collect()
        }
        None => (m..=d.saturating_sub(m)).map(|k| (k - m, k, k + m)).collect(),
    };
    for &(i, k, j) in &triples {
        for x in [i, k, j] {
            check_index(&seq, x)?;
        }
        if !(i < k && k < j) {
            return Err(CliError::Usage(format!("triple ({i}, {k}, {j}) must satisfy i < k < j")));
        }
    }
    let table = IntersectionTable::build(&model, &seq)?;
    let settings = settings(ctx, args.mode);
    let coeffs = triples
        .par_iter()
        .map(|&(i, k, j)| match sequence_coeff(&model, &seq, &table, k, i, j, &settings) {
            Ok(c) => Ok(Ok(c)),
            Err(e @ (Error::OracleScaleExceeded { .. } | Error::DisjointFromAxis(_) | Error::UnsupportedPair(_))) => {
                Ok(Err(e.to_string()))
            }
            Err(e) => Err(e),
        })
        .collect::<endlam::Result<Vec<_>>>()?;
    let consts = ctx.constants.verifier;
    let mut w = csv_writer();
    w.write_record([
        "i",
        "k",
        "j",
        "value",
        "uncertainty",
        "method",
        "lower",
        "upper",
        "e_k",
        "tolerance",
        "status",
        "note",
    ])?;
    let (mut passed, mut counts) = (true, [0usize; 4]);
    for (&(i, k, j), c) in triples.iter().zip(&coeffs) {
        let e_k = seq.schedule().e(k).clone();
        // The tight bound |d − e_k| <= 4 holds for the triple (k−m, k, k+m);
        // other monoid triples get the local-to-global tolerance 2B_0 + 4.
        let tight = k - i == m && j - k == m;
        let asserted = in_monoid(k - i, m) && in_monoid(j - k, m);
        let tol = if tight { 4 } else { consts.twist_tolerance() };
        let head = [i.to_string(), k.to_string(), j.to_string()];
        match c {
            Ok(c) => {
                let (lo, hi) = (BigInt::from(c.lower()), BigInt::from(c.upper()));
                let t = BigInt::from(tol);
                let ok = lo <= &e_k + &t && &e_k - &t <= hi;
                let status = if !asserted {
                    counts[3] += 1;
                    "info"
                } else if ok {
                    counts[0] += 1;
                    "pass"
                } else {
                    counts[1] += 1;
                    passed = false;
                    "fail"
                };
                let method = serde_json::to_value(c.method).expect("serializes");
                w.write_record(head.iter().cloned().chain([
                    c.value.to_string(),
                    c.uncertainty.to_string(),
                    method.as_str().unwrap_or_default().to_string(),
                    c.lower().to_string(),
                    c.upper().to_string(),
                    e_k.to_string(),
                    tol.to_string(),
                    status.to_string(),
                    String::new(),
                ]))?;
            }
            Err(note) => {
                // A skipped check is never counted as a pass.
                counts[2] += 1;
                passed = false;
                w.write_record(
                    head.iter().cloned().chain(
                        ["", "", "", "", "", &e_k.to_string(), &tol.to_string(), "skipped", note.as_str()]
                            .map(String::from),
                    ),
                )?;
            }
        }
    }
    let summary = vec![format!(
        "{} triples: {} pass, {} fail, {} skipped, {} informational (B0 = {}, delta = {})",
        triples.len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        consts.b0,
        ctx.constants.delta
    )];
    Ok(Outcome { files: vec![(ctx.out.clone(), finish(w)?)], passed, summary })
}

fn distance(args: &DistanceArgs, ctx: &mut Context) -> Result<Outcome, CliError> {
    let (model, seq) = load(&args.pairs.seq, ctx)?;
    let pairs = pair_list(&args.pairs, &seq, true)?;
    let table = IntersectionTable::build(&model, &seq)?;
    let settings = settings(ctx, args.mode);
    let consts = ctx.constants.verifier;
    let bounds = pairs
        .par_iter()
        .map(|&(i, j)| cc_distance_bounds(&model, &seq, &table, i, j, &consts, &settings))
        .collect::<endlam::Result<Vec<_>>>()?;
    let spacing = marker_spacing(seq.m());
    let mut w = csv_writer();
    w.write_record(["i", "j", "lower", "upper", "K", "C", "linear_bound", "markers", "certified", "status"])?;
    let mut fails = 0;
    for b in &bounds {
        let gap = (b.j - b.i) as i64;
        let linear = BigRational::new(BigInt::from(gap - spacing as i64), BigInt::from(spacing));
        let ok =
            b.lower <= b.upper && b.upper == (b.j - b.i) as u64 && BigRational::from(BigInt::from(b.lower)) >= linear;
        fails += usize::from(!ok);
        w.write_record([
            b.i.to_string(),
            b.j.to_string(),
            b.lower.to_string(),
            b.upper.to_string(),
            spacing.to_string(),
            spacing.to_string(),
            format_rational(&linear),
            b.markers.len().to_string(),
            b.markers.iter().filter(|(_, c)| *c).count().to_string(),
            pass_fail(ok).to_string(),
        ])?;
    }
    let summary = vec![format!("{} pairs, K = C = {}, {} failing (B = {})", bounds.len(), spacing, fails, consts.b)];
    Ok(Outcome { files: vec![(ctx.out.clone(), finish(w)?)], passed: fails == 0, summary })
}

fn ergodic(args: &ErgodicArgs, ctx: &mut Context) -> Result<Outcome, CliError> {
    let (model, seq) = load(&args.seq, ctx)?;
    let m = seq.m();
    let d = seq.depth();
    let max_k = (d + 1).saturating_sub(m) / m;
    let proxy_depth = args.proxy_depth.unwrap_or(max_k);
    let table = IntersectionTable::build(&model, &seq)?;
    let asym = intersection_ratio_table(&seq, &table)?;
    let stab = kappa0_stabilization(&asym, m, 2 * m);
    let family = default_family(&model, &seq)?;
    let conv = convergence_report(&model, &seq, &table, &family)?;
    let sing = singularity_ratios(&seq, &table, proxy_depth, &asym.kappa0)?;

    let mut w = csv_writer();
    w.write_record(["section", "h", "i", "k", "value", "status", "note"])?;
    let row =
        |w: &mut csv::Writer<Vec<u8>>, s: &str, h: String, i: String, k: String, v: String, st: &str, n: String| {
            w.write_record([s.to_string(), h, i, k, v, st.to_string(), n])
        };
    let kappa = &asym.kappa0;
    let inv = kappa.recip();
    for r in &asym.rows {
        let (status, note) = if r.qualifying {
            (pass_fail(!r.ratio.is_zero() && r.ratio >= inv && &r.ratio <= kappa), "qualifying")
        } else {
            ("info", "")
        };
        row(
            &mut w,
            "ratio",
            String::new(),
            r.i.to_string(),
            r.k.to_string(),
            format_rational(&r.ratio),
            status,
            format!("{note};A={}", r.twist_product).trim_start_matches(';').to_string(),
        )?;
    }
    for (depth, k0) in &stab.profile {
        row(
            &mut w,
            "kappa0",
            String::new(),
            String::new(),
            depth.to_string(),
            format_rational(k0),
            "info",
            String::new(),
        )?;
    }
    let stable = stab.is_stable();
    let bound = stab.certified_bound();
    row(
        &mut w,
        "kappa0_limit",
        String::new(),
        String::new(),
        d.to_string(),
        bound.as_ref().map(format_rational).unwrap_or_default(),
        pass_fail(stable),
        format!("rate={}", stab.rate.as_ref().map(format_rational).unwrap_or_else(|| "none".into())),
    )?;
    row(
        &mut w,
        "ratio_lemma",
        String::new(),
        String::new(),
        d.to_string(),
        asym.ratio_lemma_checked.to_string(),
        pass_fail(asym.ratio_lemma_violations.is_empty()),
        format!("violations={}", asym.ratio_lemma_violations.len()),
    )?;
    for res in &conv.residues {
        for step in &res.residuals {
            let status = if step.asserted { pass_fail(step.ok) } else { "info" };
            row(
                &mut w,
                "residual",
                res.h.to_string(),
                step.index.to_string(),
                step.k.to_string(),
                format_rational(&step.residual),
                status,
                step.factor.as_ref().map(|f| format!("factor={}", format_rational(f))).unwrap_or_default(),
            )?;
        }
        row(
            &mut w,
            "envelope",
            res.h.to_string(),
            String::new(),
            String::new(),
            format_rational(&res.envelope),
            pass_fail(res.passes()),
            format!("fit={}", res.fitted_rate.as_ref().map(format_rational).unwrap_or_else(|| "none".into())),
        )?;
    }
    let hi = kappa * kappa;
    let lo = hi.recip();
    for r in &sing.same {
        let ok = r.value >= lo && r.value <= hi;
        row(
            &mut w,
            "same",
            r.h.to_string(),
            r.i.to_string(),
            r.h_prime.to_string(),
            format_rational(&r.value),
            pass_fail(ok),
            String::new(),
        )?;
    }
    let inv_a = seq.schedule().ratio().recip();
    for (n, r) in sing.cross.iter().enumerate() {
        let prev = n.checked_sub(1).map(|p| &sing.cross[p]).filter(|p| p.h == r.h && p.h_prime == r.h_prime);
        let (status, note) = match prev {
            Some(p) => {
                let factor = &r.value / &p.value;
                let geometric = factor <= inv_a;
                (pass_fail(r.value < p.value), format!("factor={};geometric={}", format_rational(&factor), geometric))
            }
            None => ("info", String::new()),
        };
        row(
            &mut w,
            "cross",
            r.h.to_string(),
            r.i.to_string(),
            r.h_prime.to_string(),
            format_rational(&r.value),
            status,
            note,
        )?;
    }
    let distinct = match &conv.distinctness {
        Some(c) => c >= seq.schedule().ratio() && c > &BigRational::one(),
        None => false,
    };
    row(
        &mut w,
        "distinctness",
        String::new(),
        String::new(),
        d.to_string(),
        conv.distinctness.as_ref().map(format_rational).unwrap_or_default(),
        if conv.distinctness.is_some() { pass_fail(distinct) } else { "skipped" },
        String::new(),
    )?;

    let checks = [
        ("qualifying ratios finite", asym.qualifying_zero.is_empty()),
        ("kappa0 stabilises", stable),
        ("ratio lemma", asym.ratio_lemma_violations.is_empty()),
        ("residual decay", conv.all_pass()),
        ("same-residue band", sing.band_holds()),
        ("cross-residue monotone", sing.cross_monotone()),
        ("distinct limits", distinct),
    ];
    for (name, ok) in &checks {
        row(
            &mut w,
            "summary",
            String::new(),
            String::new(),
            String::new(),
            name.to_string(),
            pass_fail(*ok),
            String::new(),
        )?;
    }
    let passed = checks.iter().all(|(_, ok)| *ok);
    let mut summary = vec![format!(
        "kappa0 = {} (~{:.4}), stabilised bound {}",
        format_rational(kappa),
        kappa.to_f64().unwrap_or(f64::NAN),
        bound.map(|b| format!("{:.4}", b.to_f64().unwrap_or(f64::NAN))).unwrap_or_else(|| "none".into())
    )];
    summary.push(format!("cross-residue statistic decreasing for {} steps", sing.cross_monotone_steps().unwrap_or(0)));
    if distinct {
        summary.push(format!("distinctness verified at depth {proxy_depth}"));
    }
    for (name, ok) in &checks {
        summary.push(format!("{}: {}", name, pass_fail(*ok)));
    }
    Ok(Outcome { files: vec![(ctx.out.clone(), finish(w)?)], passed, summary })
}

fn trace(args: &TraceArgs, ctx: &mut Context) -> Result<Outcome, CliError> {
    let (model, seq) = load(&args.seq, ctx)?;
    if args.p7 && seq.p() != 7 {
        return Err(CliError::Usage(format!("--p7 given but the sequence lives on S_0,{}", seq.p())));
    }
    let lambda = args.lambda.unwrap_or(DEFAULT_LAMBDA);
    let params = LengthModelParams {
        l0: args.l0.unwrap_or(DEFAULT_L0),
        eps: match args.eps {
            EpsArg::Edge => EpsSchedule::EdgeScaled { lambda },
            EpsArg::Exp => EpsSchedule::Exponential { lambda },
        },
        samples: args.samples,
        delta: ctx.constants.delta,
        ..LengthModelParams::default()
    };
    let table = IntersectionTable::build(&model, &seq)?;
    let family = default_family(&model, &seq)?;
    let tr = limit_trace(&model, &seq, &table, &family, &params, default_steps(&seq))?;

    let mut w = csv_writer();
    let mut header = vec!["k".to_string(), "u".into(), "regime".into(), "x_k".into(), "y_k".into()];
    header.extend(tr.labels.iter().cloned());
    header.push("residual".into());
    w.write_record(&header)?;
    for pt in &tr.points {
        let mut rec = vec![pt.k.to_string(), float(pt.u), pt.regime.to_string(), float(pt.xk), float(pt.yk)];
        rec.extend(pt.projective.iter().map(|&x| float(x)));
        rec.push(float(pt.residual));
        w.write_record(&rec)?;
    }
    let mut files = vec![(ctx.out.clone(), finish(w)?)];
    if let Some(path) = &args.emit_edges {
        let mut e = csv_writer();
        let mut header = vec!["kind".to_string(), "h".into(), "index".into()];
        header.extend(tr.labels.iter().cloned());
        e.write_record(&header)?;
        for (h, index, v) in &tr.vertices {
            let mut rec = vec!["vertex".to_string(), h.to_string(), index.to_string()];
            rec.extend(v.iter().map(|&x| float(x)));
            e.write_record(&rec)?;
        }
        for (h, v) in &tr.edge_midpoints {
            let mut rec = vec!["edge".to_string(), h.to_string(), String::new()];
            rec.extend(v.iter().map(|&x| float(x)));
            e.write_record(&rec)?;
        }
        files.push((path.clone(), finish(e)?));
    }

    let m = seq.m();
    let by_step = tr.residual_by_step();
    let decreasing = (0..m).all(|h| {
        let series: Vec<f64> = by_step.iter().filter(|(k, _)| k % m == h).map(|&(_, r)| r).collect();
        series.windows(2).all(|w| w[1] <= w[0])
    });
    let deepest = by_step.last().map_or(f64::INFINITY, |&(_, r)| r);
    let vertex = tr.vertex_distances(m).iter().map(|&(_, _, x)| x).fold(0.0f64, f64::max);
    let edge = tr.edge_distances().iter().map(|&(_, x)| x).fold(0.0f64, f64::max);
    let finite = tr.points.iter().all(|p| p.projective.iter().all(|x| x.is_finite()) && p.residual.is_finite());
    let checks = [
        ("finite samples", finite),
        ("residual decreasing per residue", decreasing),
        ("deepest residual below 1e-2", deepest < 1e-2),
        ("C1 points within 5e-2 of vertices", vertex < 5e-2),
        ("edge midpoints approached within 1e-1", edge < 1e-1),
    ];
    // Without --p7 only the structural check is asserted; the simplex
    // tolerances are calibrated for the seven-punctured sphere.
    let passed = if args.p7 { checks.iter().all(|(_, ok)| *ok) } else { finite };
    let mut summary = vec![format!(
        "{} samples over steps {:?}; deepest residual {:.3e}, vertex distance {:.3e}, edge distance {:.3e}",
        tr.points.len(),
        default_steps(&seq),
        deepest,
        vertex,
        edge
    )];
    for (name, ok) in &checks {
        summary.push(format!("{}: {}", name, pass_fail(*ok)));
    }
    Ok(Outcome { files, passed, summary })
}
