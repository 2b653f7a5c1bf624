// SPDX-License-Identifier: MIT OR Apache-2.0
//! Twist schedules, the twist-and-rotate sequences `Γ(𝓔)`, condition `𝒫`
//! and the twist products `A(i, k)`.
//!
//! # Construction
//!
//! With `α = γ_m = ρ^m(γ_0)` and `φ_k = D_α^{e_{k+m-1}} ρ`, the sequence is
//! `γ_k = Φ_k(γ_0)` where `Φ_k = φ_1 ⋯ φ_k`.  Every `γ_k` carries the word
//! `Φ_k` as provenance, which is what makes exact intersection numbers cheap:
//! `i(γ_i, γ_k) = i(γ_0, φ_{i+1} ⋯ φ_k(γ_0))` after the common prefix
//! cancels.  The auxiliary curves are `γ'_{k+m} = Φ_{k-m}(ρ^{2m}(γ_0))` for
//! `k >= m`, so a sequence of depth `d` carries `γ'_{2m}, …, γ'_d`.
//!
//! # Schedules
//!
//! A schedule is built by `e_0` and the recursion `e_{k+1} = ⌈a·e_k⌉`.  For an
//! integer ratio this is exactly `⌈e_0 a^k⌉`; for a fractional ratio the
//! closed form can violate the growth requirement `e_{k+1} >= a e_k`, which
//! the recursion guarantees by construction.

use crate::error::{Error, Result};
use crate::intersect::{intersection_number, is_filling, FillingCertificate};
use crate::mcg::{alpha, apply_word, base_curve, generator_words, MCWord};
use crate::subproj::VerifierConstants;
use crate::surface::curve::Origin;
use crate::surface::{Curve, RoundCurve, SurfaceModel};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// The exponents `e_0, e_1, …` with their growth ratio and verifier floor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "ScheduleRepr")]
pub struct TwistSchedule {
    e: Vec<BigInt>,
    ratio: BigRational,
    floor: BigInt,
}

impl TwistSchedule {
    /// Validate an explicit schedule.
    pub fn new(e: Vec<BigInt>, ratio: BigRational, floor: BigInt) -> Result<TwistSchedule> {
        if e.is_empty() {
            return Err(Error::InvalidSchedule("empty schedule".into()));
        }
        if e.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidSchedule("exponents must be positive".into()));
        }
        if ratio < BigRational::one() {
            return Err(Error::InvalidSchedule(format!("growth ratio {ratio} is below 1")));
        }
        for (k, pair) in e.windows(2).enumerate() {
            if BigRational::from(pair[1].clone()) < &ratio * BigRational::from(pair[0].clone()) {
                return Err(Error::InvalidSchedule(format!("e_{} < a·e_{k}", k + 1)));
            }
        }
        Ok(TwistSchedule { e, ratio, floor })
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.e.len()
    }

    /// Always false for a valid schedule.
    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    /// `e_k`.
    pub fn e(&self, k: usize) -> &BigInt {
        &self.e[k]
    }

    /// All exponents.
    pub fn entries(&self) -> &[BigInt] {
        &self.e
    }

    /// The growth ratio `a`.
    pub fn ratio(&self) -> &BigRational {
        &self.ratio
    }

    /// The verifier floor `E_0` the schedule is compared against.
    pub fn floor(&self) -> &BigInt {
        &self.floor
    }

    /// Whether `e_0 >= E_0` (the hypothesis of the verifier lemmas).
    pub fn meets_floor(&self) -> bool {
        self.e[0] >= self.floor
    }

    /// The same exponents compared against another floor.
    pub fn with_floor(mut self, floor: BigInt) -> TwistSchedule {
        self.floor = floor;
        self
    }
}

/// `e_0 = e0`, `e_{k+1} = ⌈a e_k⌉` for `k < depth`; the floor is the default
/// `E_0` of [`VerifierConstants`].
pub fn make_schedule(e0: &BigInt, a: &BigRational, depth: usize) -> Result<TwistSchedule> {
    if !e0.is_positive() {
        return Err(Error::InvalidSchedule("e0 must be at least 1".into()));
    }
    if a < &BigRational::one() {
        return Err(Error::InvalidSchedule(format!("growth ratio {a} is below 1")));
    }
    let mut e = vec![e0.clone()];
    for _ in 0..depth {
        let next = (a * BigRational::from(e.last().expect("non-empty").clone())).ceil().to_integer();
        e.push(next);
    }
    TwistSchedule::new(e, a.clone(), BigInt::from(VerifierConstants::default().e0))
}

/// As [`make_schedule`], but rejecting `a <= 1`.
pub fn make_strict_schedule(e0: &BigInt, a: &BigRational, depth: usize) -> Result<TwistSchedule> {
    if a <= &BigRational::one() {
        return Err(Error::InvalidSchedule(format!("strict growth needs a > 1, got {a}")));
    }
    make_schedule(e0, a, depth)
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    e: Vec<String>,
    a: String,
    floor: String,
}

impl From<TwistSchedule> for ScheduleRepr {
    fn from(s: TwistSchedule) -> Self {
        ScheduleRepr {
            e: s.e.iter().map(ToString::to_string).collect(),
            a: s.ratio.to_string(),
            floor: s.floor.to_string(),
        }
    }
}

impl TryFrom<ScheduleRepr> for TwistSchedule {
    type Error = Error;
    fn try_from(r: ScheduleRepr) -> Result<Self> {
        let int = |s: &str| s.parse::<BigInt>().map_err(|e| Error::Format(format!("{s}: {e}")));
        let e = r.e.iter().map(|s| int(s)).collect::<Result<Vec<_>>>()?;
        let a = r.a.parse::<BigRational>().map_err(|e| Error::Format(format!("{}: {e}", r.a)))?;
        TwistSchedule::new(e, a, int(&r.floor)?)
    }
}

/// A built sequence `γ_0, …, γ_d` with auxiliary curves and words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSequence {
    p: usize,
    m: usize,
    b: u32,
    b_prime: u32,
    schedule: TwistSchedule,
    gamma: Vec<Curve>,
    aux: Vec<Curve>,
    words: Vec<MCWord>,
}

impl CurveSequence {
    /// Assemble a sequence from parts (used by deserialisation and tests).
    pub fn from_parts(
        p: usize,
        schedule: TwistSchedule,
        gamma: Vec<Curve>,
        aux: Vec<Curve>,
        words: Vec<MCWord>,
    ) -> Result<CurveSequence> {
        let m = (p - 1) / 2;
        if gamma.is_empty() || words.len() != gamma.len() {
            return Err(Error::Format("curves and words must have equal, non-zero length".into()));
        }
        let depth = gamma.len() - 1;
        let expected_aux = (depth + 1).saturating_sub(2 * m);
        if aux.len() != expected_aux {
            return Err(Error::Format(format!("expected {expected_aux} auxiliary curves, found {}", aux.len())));
        }
        for c in gamma.iter().chain(&aux) {
            if c.p() != p {
                return Err(Error::SurfaceMismatch { left: p, right: c.p() });
            }
        }
        Ok(CurveSequence { p, m, b: 2, b_prime: 2, schedule, gamma, aux, words })
    }

    /// Number of punctures.
    pub fn p(&self) -> usize {
        self.p
    }

    /// `m = (p - 1) / 2`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// The constants `(b, b')` of condition `𝒫`.
    pub fn b(&self) -> (u32, u32) {
        (self.b, self.b_prime)
    }

    /// Largest index `d` with `γ_d` built.
    pub fn depth(&self) -> usize {
        self.gamma.len() - 1
    }

    /// The schedule used.
    pub fn schedule(&self) -> &TwistSchedule {
        &self.schedule
    }

    /// `γ_k`.
    pub fn gamma(&self, k: usize) -> Result<&Curve> {
        self.gamma.get(k).ok_or(Error::IndexOutOfRange { index: k as i64, range: format!("0..={}", self.depth()) })
    }

    /// All curves `γ_0, …, γ_d`.
    pub fn curves(&self) -> &[Curve] {
        &self.gamma
    }

    /// `γ'_j` for `2m <= j <= d`.
    pub fn aux(&self, j: usize) -> Result<&Curve> {
        j.checked_sub(2 * self.m)
            .and_then(|i| self.aux.get(i))
            .ok_or(Error::IndexOutOfRange { index: j as i64, range: format!("{}..={}", 2 * self.m, self.depth()) })
    }

    /// All auxiliary curves, `γ'_{2m}` first.
    pub fn aux_curves(&self) -> &[Curve] {
        &self.aux
    }

    /// `Φ_k`.
    pub fn word(&self, k: usize) -> Result<&MCWord> {
        self.words.get(k).ok_or(Error::IndexOutOfRange { index: k as i64, range: format!("0..={}", self.depth()) })
    }

    /// All words `Φ_0, …, Φ_d`.
    pub fn words(&self) -> &[MCWord] {
        &self.words
    }

    /// Replace `γ_k` (negative controls in tests and experiments).
    pub fn with_curve(mut self, k: usize, c: Curve) -> Result<CurveSequence> {
        self.gamma(k)?;
        c.same_surface(&self.gamma[0])?;
        self.gamma[k] = c;
        Ok(self)
    }
}

/// Build `γ_0, …, γ_depth`, `γ'_{2m}, …, γ'_depth` and `Φ_0, …, Φ_depth`.
pub fn build_sequence(model: &SurfaceModel, schedule: &TwistSchedule, depth: usize) -> Result<CurveSequence> {
    let p = model.p();
    let m = model.m();
    let needed = depth + m - 1;
    if schedule.len() <= needed {
        return Err(Error::ScheduleTooShort { needed, available: schedule.len() });
    }
    let (_, last) = generator_words(model, schedule, depth)?;
    // Φ_k is the prefix of Φ_depth consisting of its first 2k letters.
    let words: Vec<MCWord> =
        (0..=depth).map(|k| MCWord::from_letters(p, last.letters()[..2 * k].iter().cloned())).collect::<Result<_>>()?;
    let g0 = base_curve(model, 0)?;
    let gamma: Vec<Curve> = words.par_iter().map(|w| apply_word(model, w, &g0)).collect::<Result<_>>()?;
    let seed = Curve::round(model, RoundCurve::side(p, (4 * m) % p));
    let aux: Vec<Curve> =
        (2 * m..=depth).into_par_iter().map(|j| apply_word(model, &words[j - 2 * m], &seed)).collect::<Result<_>>()?;
    // Re-express provenance relative to γ_0 for the auxiliary curves.
    let aux = aux
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let word = words[i].compose(&MCWord::rho(p, 2 * m as i64))?;
            Curve::with_origin(model, c.coords().to_vec(), Origin { base: RoundCurve::side(p, 0), word })
        })
        .collect::<Result<_>>()?;
    CurveSequence::from_parts(p, schedule.clone(), gamma, aux, words)
}

/// `A(i, k) = ∏ b·e_j` over `i + m <= j < k` with `j ≡ k (mod m)`; the empty
/// product is 1.
pub fn twist_product(seq: &CurveSequence, i: usize, k: usize) -> Result<BigUint> {
    if i >= k {
        return Err(Error::IndexOutOfRange { index: i as i64, range: format!("0..{k}") });
    }
    let m = seq.m;
    let mut product = BigInt::one();
    let mut j = i + m;
    while j < k {
        if (k - j) % m == 0 {
            if j >= seq.schedule.len() {
                return Err(Error::ScheduleTooShort { needed: j, available: seq.schedule.len() });
            }
            product *= BigInt::from(seq.b) * seq.schedule.e(j);
        }
        j += 1;
    }
    Ok(product.magnitude().clone())
}

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The check ran and holds.
    Pass,
    /// The check ran and fails.
    Fail,
    /// The check could not run (scale cap); never counted as a pass.
    Skipped,
}

/// One row of a condition-`𝒫` report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseRow {
    /// `i`, `ii`, `iii` or `iii-twist`.
    pub clause: String,
    /// Window or index the row is about.
    pub k: usize,
    /// Verdict.
    pub status: Status,
    /// Human-readable evidence.
    pub detail: String,
}

/// Condition-`𝒫` report: one row per clause per index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    /// `(b, b')` checked.
    pub b: (u32, u32),
    /// Rows in clause-then-index order.
    pub rows: Vec<ClauseRow>,
}

impl ConditionReport {
    /// Whether every row passed (skipped rows count as not passed).
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.status == Status::Pass)
    }
}

/// Check clauses (i)–(iii) of condition `𝒫` with `b = b' = 2`.
///
/// Clause (ii) is certified by transport: if `Φ_s^{-1}` maps the window
/// `γ_s, …, γ_{s+2m-1}` exactly onto the base curves, the window fills
/// because the base window does, which is checked once by a region census.
pub fn verify_condition_p(model: &SurfaceModel, seq: &CurveSequence, oracle_cap: u64) -> Result<ConditionReport> {
    let m = seq.m;
    let d = seq.depth();
    let (b, b_prime) = seq.b();
    let pair = |x: usize, y: usize| intersection_number(model, &seq.gamma[x], &seq.gamma[y]);
    let mut rows = Vec::new();
    // (i)
    let clause_i: Vec<ClauseRow> = (0..=d.saturating_sub(m - 1))
        .into_par_iter()
        .map(|k| {
            let mut bad = Vec::new();
            for x in k..(k + m).min(d + 1) {
                for y in x + 1..(k + m).min(d + 1) {
                    match pair(x, y) {
                        Ok(n) if n.is_zero() => {}
                        Ok(n) => bad.push(format!("i(γ_{x},γ_{y})={n}")),
                        Err(e) => bad.push(format!("i(γ_{x},γ_{y}): {e}")),
                    }
                }
            }
            row("i", k, bad, format!("γ_{k}..γ_{} pairwise disjoint", k + m - 1))
        })
        .collect();
    rows.extend(clause_i);
    // (ii)
    let base: Vec<Curve> = (0..2 * m).map(|j| base_curve(model, j)).collect::<Result<_>>()?;
    let census = is_filling(model, &base, oracle_cap);
    let base_fills = matches!(&census, Ok(FillingCertificate { verdict: true, .. }));
    let clause_ii: Vec<ClauseRow> = (0..=d.saturating_sub(2 * m - 1))
        .into_par_iter()
        .map(|s| {
            if s + 2 * m - 1 > d {
                return row("ii", s, vec!["window beyond depth".into()], String::new());
            }
            let inverse = seq.words[s].inverse();
            let mut bad = Vec::new();
            for (j, target) in base.iter().enumerate() {
                match apply_word(model, &inverse, &seq.gamma[s + j]) {
                    Ok(c) if &c == target => {}
                    Ok(_) => bad.push(format!("Φ_{s}^-1(γ_{}) ≠ γ_{j}", s + j)),
                    Err(e) => bad.push(e.to_string()),
                }
            }
            if !base_fills {
                bad.push("base window census does not certify filling".into());
            }
            row("ii", s, bad, format!("Φ_{s}^-1 maps γ_{s}..γ_{} to the filling base window", s + 2 * m - 1))
        })
        .collect();
    rows.extend(clause_ii);
    // (iii)
    let clause_iii: Vec<Vec<ClauseRow>> = (m..=d.saturating_sub(m))
        .into_par_iter()
        .filter(|k| k + m <= d)
        .map(|k| -> Vec<ClauseRow> {
            let aux = &seq.aux[k + m - 2 * m];
            let mut bad = Vec::new();
            for j in k - m..k + m {
                match intersection_number(model, aux, &seq.gamma[j]) {
                    Ok(n) => {
                        let n = BigInt::from(n);
                        let ok = if j == k || j + 1 == k {
                            n == BigInt::from(b)
                        } else if j > k {
                            n.is_zero()
                        } else {
                            n <= BigInt::from(b_prime)
                        };
                        if !ok {
                            bad.push(format!("i(γ'_{},γ_{j})={n}", k + m));
                        }
                    }
                    Err(e) => bad.push(e.to_string()),
                }
            }
            let pattern = row("iii", k, bad, format!("intersection pattern of γ'_{}", k + m));
            let twisted = crate::mcg::dehn_twist(model, aux, &seq.gamma[k], seq.schedule.e(k));
            let twist_bad = match twisted {
                Ok(c) if c == seq.gamma[k + m] => vec![],
                Ok(_) => vec![format!("γ_{} ≠ D_γ_{k}^e_{k}(γ'_{})", k + m, k + m)],
                Err(e) => vec![e.to_string()],
            };
            let relation = row("iii-twist", k, twist_bad, format!("γ_{} = D_γ_{k}^e_{k}(γ'_{})", k + m, k + m));
            vec![pattern, relation]
        })
        .collect();
    rows.extend(clause_iii.into_iter().flatten());
    Ok(ConditionReport { b: (b, b_prime), rows })
}

fn row(clause: &str, k: usize, bad: Vec<String>, ok: String) -> ClauseRow {
    if bad.is_empty() {
        ClauseRow { clause: clause.into(), k, status: Status::Pass, detail: ok }
    } else {
        ClauseRow { clause: clause.into(), k, status: Status::Fail, detail: bad.join("; ") }
    }
}

/// Exact pairwise intersection numbers `i(γ_i, γ_k)` for all `i < k <= d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTable {
    depth: usize,
    values: Vec<Vec<BigUint>>,
}

impl IntersectionTable {
    /// Compute the full table (in parallel; the result is independent of
    /// scheduling).
    ///
    /// For fixed `k` the curves `y_i = φ_{i+1} ⋯ φ_k(γ_0)` satisfy
    /// `y_{i-1} = φ_i(y_i)` and `i(γ_i, γ_k) = i(γ_0, y_i)`, so one pass of `k`
    /// word letters yields a whole column.
    pub fn build(model: &SurfaceModel, seq: &CurveSequence) -> Result<IntersectionTable> {
        let d = seq.depth();
        let p = model.p();
        let g0 = RoundCurve::side(p, 0);
        let full = &seq.words[d];
        let columns: Vec<Vec<BigUint>> = (0..=d)
            .into_par_iter()
            .map(|k| -> Result<Vec<BigUint>> {
                let mut col = vec![BigUint::zero(); k];
                let mut y = model.round_coords(g0).to_vec();
                for i in (0..k).rev() {
                    let letters = &full.letters()[2 * i..2 * i + 2];
                    let phi = MCWord::from_letters(p, letters.iter().cloned())?;
                    y = crate::mcg::apply_to_weights(model, &phi, y)?;
                    col[i] = crate::mcg::round_intersection(model, &y, g0)?.magnitude().clone();
                }
                Ok(col)
            })
            .collect::<Result<_>>()?;
        Ok(IntersectionTable { depth: d, values: columns })
    }

    /// Depth of the sequence the table was built for.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `i(γ_i, γ_k)` (symmetric, zero on the diagonal).
    pub fn get(&self, i: usize, k: usize) -> &BigUint {
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        match i.cmp(&k) {
            std::cmp::Ordering::Less => &self.values[k][i],
            std::cmp::Ordering::Greater => &self.values[i][k],
            std::cmp::Ordering::Equal => ZERO.get_or_init(BigUint::zero),
        }
    }
}

/// `γ_m` of the sequence equals the twist axis `α`.
pub fn axis_matches(model: &SurfaceModel, seq: &CurveSequence) -> Result<bool> {
    Ok(seq.gamma(seq.m)? == &alpha(model))
}

/// Exact `a^n` for a rational ratio (used by the ratio checks).
pub(crate) fn ratio_power(a: &BigRational, n: i64) -> BigRational {
    if n >= 0 {
        num_traits::pow(a.clone(), n as usize)
    } else {
        num_traits::pow(a.recip(), (-n) as usize)
    }
}
