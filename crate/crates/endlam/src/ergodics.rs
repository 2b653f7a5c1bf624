// SPDX-License-Identifier: MIT OR Apache-2.0
//! Intersection asymptotics, Cauchy convergence of normalised intersection
//! vectors, and the mutual-singularity statistics that witness non-unique
//! ergodicity at finite depth.
//!
//! # The yardstick `A(i, k)`
//!
//! Intersection numbers along the sequence grow like the twist products
//! `A(i, k) = ∏ b·e_j` ([`crate::seqgen::twist_product`]).  The ratio table
//! records `i(γ_i, γ_k) / A(i, k)` as exact rationals; the measured `κ_0` is
//! the largest of `ratio` and `1/ratio` over the *qualifying* pairs, where the
//! two-sided estimate is expected, and the measured upper constant `κ` is the
//! largest ratio over all pairs.
//!
//! # Finite proxies for the ergodic measures
//!
//! The limits `ν̄^h = lim γ_{h+km} / A(0, h+km)` have no finite
//! representation.  They are replaced by the deepest affordable term of the
//! sequence, and every report states which index it used.  Convergence is
//! measured on a finite family of test curves that fills the surface.
//!
//! # Decay assertions
//!
//! The constants in the asymptotic statements are not explicit, so the
//! assertions compare the data with itself: the decay factor observed at the
//! end of a burn-in of `m²` proxy steps is the fitted rate, and every later
//! factor must be at most `max(fitted, 1/a)`.  All comparisons are
//! exact rational comparisons; floating point only appears in display
//! helpers.

use crate::error::{Error, Result};
use crate::intersect::{complete_to_pants, intersection_number};
use crate::seqgen::{ratio_power, twist_product, CurveSequence, IntersectionTable};
use crate::surface::{Curve, SurfaceModel};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

/// Format an exact rational as `"num/den"` (the denominator is always
/// printed, also when it is 1).
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn rational(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

/// Whether the two-sided estimate `i(γ_i, γ_k) ≍ A(i, k)` is asserted for the
/// pair: `k − i >= 2m` with `i ≡ k (mod m)`, or `i <= 2m − 1` with
/// `k − i >= m² + m − 1`.
pub fn is_qualifying(i: usize, k: usize, m: usize) -> bool {
    if i >= k {
        return false;
    }
    let gap = k - i;
    (gap >= 2 * m && gap % m == 0) || (i < 2 * m && gap >= m * m + m - 1)
}

/// One row of the ratio table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    /// Smaller index.
    pub i: usize,
    /// Larger index.
    pub k: usize,
    /// `i(γ_i, γ_k)`.
    pub intersection: BigUint,
    /// `A(i, k)`.
    pub twist_product: BigUint,
    /// `i(γ_i, γ_k) / A(i, k)`.
    pub ratio: BigRational,
    /// Whether the two-sided estimate applies.
    pub qualifying: bool,
}

/// A violation of the ratio lemma `A(i,k)/A(i,l) <= a^{1 − ⌊(l−i)/m⌋}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioLemmaViolation {
    /// Base index.
    pub i: usize,
    /// Middle index.
    pub k: usize,
    /// Outer index.
    pub l: usize,
    /// The offending quotient.
    pub quotient: BigRational,
    /// The bound it exceeds.
    pub bound: BigRational,
}

/// The ratio table with its measured constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticsReport {
    /// Puncture count.
    pub p: usize,
    /// Sequence depth.
    pub depth: usize,
    /// The growth ratio `a` of the schedule.
    pub a: BigRational,
    /// All pairs `0 <= i < k <= depth`, ordered by `(k, i)`.
    pub rows: Vec<RatioRow>,
    /// Measured `κ_0`: max of `ratio` and `1/ratio` over qualifying pairs.
    pub kappa0: BigRational,
    /// Measured upper constant `κ`: max ratio over all pairs.
    pub kappa_upper: BigRational,
    /// Qualifying pairs with zero intersection (the two-sided bound fails).
    pub qualifying_zero: Vec<(usize, usize)>,
    /// Number of triples `i < k < l` checked against the ratio lemma.
    pub ratio_lemma_checked: usize,
    /// Triples violating the ratio lemma.
    pub ratio_lemma_violations: Vec<RatioLemmaViolation>,
}

impl AsymptoticsReport {
    /// `κ_0` measured on the pairs with `k <= depth`.
    pub fn kappa0_at(&self, depth: usize) -> BigRational {
        kappa0_of(self.rows.iter().filter(|r| r.k <= depth))
    }

    /// The profile `d ↦ κ_0(d)` for `d = from..=depth`.
    pub fn kappa0_profile(&self, from: usize) -> Vec<(usize, BigRational)> {
        (from..=self.depth).map(|d| (d, self.kappa0_at(d))).collect()
    }

    /// Both the two-sided bound (finite `κ_0`) and the ratio lemma hold.
    pub fn all_pass(&self) -> bool {
        self.qualifying_zero.is_empty() && self.ratio_lemma_violations.is_empty()
    }
}

fn kappa0_of<'a>(rows: impl Iterator<Item = &'a RatioRow>) -> BigRational {
    let mut kappa = BigRational::one();
    for r in rows.filter(|r| r.qualifying && !r.ratio.is_zero()) {
        let v = if r.ratio >= BigRational::one() { r.ratio.clone() } else { r.ratio.recip() };
        if v > kappa {
            kappa = v;
        }
    }
    kappa
}

/// Build the ratio table of a sequence and check the ratio lemma on every
/// triple `i < k < l <= depth`.
pub fn intersection_ratio_table(seq: &CurveSequence, table: &IntersectionTable) -> Result<AsymptoticsReport> {
    let d = seq.depth();
    if table.depth() != d {
        return Err(Error::IncompleteTable(format!("table depth {} versus sequence depth {d}", table.depth())));
    }
    let m = seq.m();
    let pairs: Vec<(usize, usize)> = (1..=d).flat_map(|k| (0..k).map(move |i| (i, k))).collect();
    let rows: Vec<RatioRow> = pairs
        .par_iter()
        .map(|&(i, k)| -> Result<RatioRow> {
            let a_ik = twist_product(seq, i, k)?;
            let x = table.get(i, k).clone();
            Ok(RatioRow {
                i,
                k,
                ratio: rational(&x, &a_ik),
                intersection: x,
                twist_product: a_ik,
                qualifying: is_qualifying(i, k, m),
            })
        })
        .collect::<Result<_>>()?;
    let kappa0 = kappa0_of(rows.iter());
    let kappa_upper = rows.iter().map(|r| r.ratio.clone()).max().unwrap_or_else(BigRational::zero);
    let qualifying_zero = rows.iter().filter(|r| r.qualifying && r.ratio.is_zero()).map(|r| (r.i, r.k)).collect();

    let a = seq.schedule().ratio().clone();
    let lookup = |i: usize, k: usize| &rows[k * (k - 1) / 2 + i].twist_product;
    let mut checked = 0;
    let mut violations = Vec::new();
    for i in 0..d {
        for l in i + 2..=d {
            let bound = ratio_power(&a, 1 - ((l - i) / m) as i64);
            for k in i + 1..l {
                checked += 1;
                let quotient = rational(lookup(i, k), lookup(i, l));
                if quotient > bound {
                    violations.push(RatioLemmaViolation { i, k, l, quotient, bound: bound.clone() });
                }
            }
        }
    }
    Ok(AsymptoticsReport {
        p: seq.p(),
        depth: d,
        a,
        rows,
        kappa0,
        kappa_upper,
        qualifying_zero,
        ratio_lemma_checked: checked,
        ratio_lemma_violations: violations,
    })
}

/// How the measured `κ_0` behaves as the depth grows.
///
/// `κ_0(d)` is non-decreasing in `d` by construction (more pairs are
/// examined).  New extremal pairs appear once per residue cycle, so the
/// profile is sampled every `m` depths.  It *stabilises* when the non-zero
/// block increments shrink geometrically; the bound `κ_0(d_last) + δ·ρ/(1 − ρ)`,
/// with `δ` the last increment and `ρ` the largest ratio of consecutive
/// increments, is the limit of the geometric continuation of the profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaStabilization {
    /// `(depth, κ_0(depth))` for `depth = from, from + m, …`.
    pub profile: Vec<(usize, BigRational)>,
    /// Non-zero increments `(depth, κ_0(depth) − κ_0(depth − m))`.
    pub increments: Vec<(usize, BigRational)>,
    /// Largest ratio of consecutive non-zero increments, if at least two.
    pub rate: Option<BigRational>,
    /// Geometric extrapolation of the limit, when `rate < 1`.
    pub limit_bound: Option<BigRational>,
}

impl KappaStabilization {
    /// Increments shrink geometrically (`rate < 1`), or there is at most one
    /// increment.
    pub fn is_stable(&self) -> bool {
        match &self.rate {
            None => self.increments.len() <= 1,
            Some(r) => r < &BigRational::one(),
        }
    }

    /// The value the profile is certified to stay below: the limit bound, or
    /// the last measured value when no growth is left.
    pub fn certified_bound(&self) -> Option<BigRational> {
        if self.increments.is_empty() {
            return self.profile.last().map(|(_, k)| k.clone());
        }
        self.limit_bound.clone()
    }
}

/// Analyse the depth profile of `κ_0`, sampled every `m` depths ending at the
/// report depth and starting no earlier than `from`.
pub fn kappa0_stabilization(report: &AsymptoticsReport, m: usize, from: usize) -> KappaStabilization {
    let step = m.max(1);
    let mut depths: Vec<usize> = Vec::new();
    let mut d = report.depth;
    loop {
        depths.push(d);
        if d < from + step {
            break;
        }
        d -= step;
    }
    depths.reverse();
    let profile: Vec<(usize, BigRational)> = depths.into_iter().map(|d| (d, report.kappa0_at(d))).collect();
    let increments: Vec<(usize, BigRational)> =
        profile.windows(2).map(|w| (w[1].0, &w[1].1 - &w[0].1)).filter(|(_, inc)| !inc.is_zero()).collect();
    let rate = increments.windows(2).map(|w| &w[1].1 / &w[0].1).max();
    let limit_bound = match (&rate, increments.last(), profile.last()) {
        (Some(r), Some((_, last_inc)), Some((_, last))) if r < &BigRational::one() => {
            Some(last + last_inc * r / (BigRational::one() - r))
        }
        _ => None,
    };
    KappaStabilization { profile, increments, rate, limit_bound }
}

/// A labelled test curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestCurve {
    /// Human-readable label, used as a CSV column name.
    pub label: String,
    /// The curve.
    pub curve: Curve,
}

/// The default test family: `γ_0, …, γ_{2m−1}` followed by the `p − 3`
/// curves of a pants decomposition containing `γ_0` (duplicates dropped).
pub fn default_family(model: &SurfaceModel, seq: &CurveSequence) -> Result<Vec<TestCurve>> {
    let m = seq.m();
    if seq.depth() < 2 * m - 1 {
        return Err(Error::InsufficientDepth {
            what: "default test family".into(),
            required: 2 * m - 1,
            available: seq.depth(),
        });
    }
    let mut family: Vec<TestCurve> = (0..2 * m)
        .map(|j| Ok(TestCurve { label: format!("gamma{j}"), curve: seq.gamma(j)?.clone() }))
        .collect::<Result<_>>()?;
    let pants = complete_to_pants(model, std::slice::from_ref(seq.gamma(0)?))?;
    for (n, c) in pants.completion.into_iter().enumerate() {
        if !family.iter().any(|t| t.curve.coords() == c.coords()) {
            family.push(TestCurve { label: format!("pants{n}"), curve: c });
        }
    }
    Ok(family)
}

/// `i(δ, γ_j)` for every family curve and every `j <= depth`.
///
/// Family curves that are themselves sequence curves are read off the exact
/// table; the rest are transported.
pub fn family_intersections(
    model: &SurfaceModel,
    seq: &CurveSequence,
    table: &IntersectionTable,
    family: &[TestCurve],
) -> Result<Vec<Vec<BigUint>>> {
    family
        .par_iter()
        .map(|t| {
            if let Some(j) = seq.curves().iter().position(|g| g.coords() == t.curve.coords()) {
                return Ok((0..=seq.depth()).map(|k| table.get(j, k).clone()).collect());
            }
            seq.curves().iter().map(|g| intersection_number(model, &t.curve, g)).collect()
        })
        .collect()
}

/// Finite proxy for `ν̄^h`: the vector `i(δ, γ_n) / A(0, n)` at
/// `n = h + k·m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErgodicProxy {
    /// Residue class.
    pub h: usize,
    /// Proxy depth.
    pub k: usize,
    /// Sequence index `h + k·m`.
    pub index: usize,
    /// One entry per retained test curve.
    pub vector: Vec<BigRational>,
}

/// Sup-norm distance between consecutive proxies of one residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualStep {
    /// Proxy depth of the later proxy.
    pub k: usize,
    /// Sequence index of the later proxy.
    pub index: usize,
    /// `max_δ |v_k(δ) − v_{k−1}(δ)|`.
    pub residual: BigRational,
    /// `residual / previous residual`, when the previous one is non-zero.
    pub factor: Option<BigRational>,
    /// Whether this step lies after the burn-in and is asserted.
    pub asserted: bool,
    /// Whether the asserted decay holds (true for unasserted steps).
    pub ok: bool,
}

/// Convergence data of one residue class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueConvergence {
    /// Residue class.
    pub h: usize,
    /// Proxies in order of depth.
    pub proxies: Vec<ErgodicProxy>,
    /// Residuals between consecutive proxies.
    pub residuals: Vec<ResidualStep>,
    /// Fitted rate: the last decay factor inside the burn-in.
    pub fitted_rate: Option<BigRational>,
    /// Envelope constant `C = max residual·a^{k}`.
    pub envelope: BigRational,
}

impl ResidueConvergence {
    /// Every asserted step decays by at most `max(fitted, 1/a)`.
    pub fn passes(&self) -> bool {
        self.residuals.iter().all(|r| r.ok)
    }

    /// Number of asserted steps.
    pub fn asserted_steps(&self) -> usize {
        self.residuals.iter().filter(|r| r.asserted).count()
    }
}

/// Result of [`convergence_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    /// Labels of the retained test curves (the vector coordinates).
    pub labels: Vec<String>,
    /// Test curves excluded because they miss every proxy curve.
    pub excluded: Vec<String>,
    /// Growth ratio of the schedule.
    pub a: BigRational,
    /// Burn-in, in proxy steps (`m²`).
    pub burn_in: usize,
    /// One entry per residue class `h = 0..m`.
    pub residues: Vec<ResidueConvergence>,
    /// Largest cross-ratio `(v_0(δ) v_1(δ'))/(v_0(δ') v_1(δ))` between the
    /// deepest proxies of residues 0 and 1 (measures non-proportionality).
    pub distinctness: Option<BigRational>,
}

impl ConvergenceReport {
    /// Every residue passes its decay assertion.
    pub fn all_pass(&self) -> bool {
        self.residues.iter().all(ResidueConvergence::passes)
    }
}

/// Compute the proxy vectors `i(δ, γ_{h+km}) / A(0, h+km)` for every residue
/// and their Cauchy residuals.
pub fn convergence_report(
    model: &SurfaceModel,
    seq: &CurveSequence,
    table: &IntersectionTable,
    family: &[TestCurve],
) -> Result<ConvergenceReport> {
    let m = seq.m();
    let d = seq.depth();
    if d < 2 * m {
        return Err(Error::InsufficientDepth { what: "convergence report".into(), required: 2 * m, available: d });
    }
    let all = family_intersections(model, seq, table, family)?;
    let keep: Vec<usize> = (0..family.len()).filter(|&f| (1..=d).any(|n| !all[f][n].is_zero())).collect();
    let excluded = (0..family.len()).filter(|f| !keep.contains(f)).map(|f| family[f].label.clone()).collect();
    if keep.is_empty() {
        return Err(Error::NonFillingFamily("every test curve misses the whole sequence".into()));
    }
    let a = seq.schedule().ratio().clone();
    let inv_a = a.recip();
    let burn_in = m * m;
    let mut residues = Vec::with_capacity(m);
    for h in 0..m {
        let mut proxies = Vec::new();
        let mut k = usize::from(h == 0);
        while h + k * m <= d {
            let index = h + k * m;
            let norm = twist_product(seq, 0, index)?;
            let vector = keep.iter().map(|&f| rational(&all[f][index], &norm)).collect();
            proxies.push(ErgodicProxy { h, k, index, vector });
            k += 1;
        }
        let mut residuals: Vec<ResidualStep> = Vec::new();
        let mut fitted: Option<BigRational> = None;
        let mut envelope = BigRational::zero();
        for w in proxies.windows(2) {
            let residual = w[0]
                .vector
                .iter()
                .zip(&w[1].vector)
                .map(|(x, y)| (y - x).abs())
                .max()
                .unwrap_or_else(BigRational::zero);
            envelope = envelope.max(&residual * ratio_power(&a, w[1].k as i64));
            let factor = residuals.last().filter(|r| !r.residual.is_zero()).map(|r| &residual / &r.residual);
            let step = w[1].k;
            if step <= burn_in {
                // Inside the burn-in; the last factor observed here is the fit.
                if factor.is_some() {
                    fitted = factor.clone();
                }
                residuals.push(ResidualStep {
                    k: step,
                    index: w[1].index,
                    residual,
                    factor,
                    asserted: false,
                    ok: true,
                });
                continue;
            }
            let bound = fitted.clone().map_or(inv_a.clone(), |f| f.max(inv_a.clone()));
            let ok = match &factor {
                Some(f) => f <= &bound,
                None => residual.is_zero(),
            };
            residuals.push(ResidualStep { k: step, index: w[1].index, residual, factor, asserted: true, ok });
        }
        residues.push(ResidueConvergence { h, proxies, residuals, fitted_rate: fitted, envelope });
    }
    let distinctness = if m >= 2 {
        let v0 = &residues[0].proxies.last().expect("depth >= 2m").vector;
        let v1 = &residues[1].proxies.last().expect("depth >= 2m").vector;
        let mut best: Option<BigRational> = None;
        for x in 0..keep.len() {
            for y in 0..keep.len() {
                if [&v0[x], &v0[y], &v1[x], &v1[y]].iter().any(|q| q.is_zero()) {
                    continue;
                }
                let c = (&v0[x] * &v1[y]) / (&v0[y] * &v1[x]);
                if best.as_ref().map_or(true, |b| &c > b) {
                    best = Some(c);
                }
            }
        }
        best
    } else {
        None
    };
    Ok(ConvergenceReport {
        labels: keep.iter().map(|&f| family[f].label.clone()).collect(),
        excluded,
        a,
        burn_in,
        residues,
        distinctness,
    })
}

/// One value of a singularity statistic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityRow {
    /// Residue of the moving curve `γ_{h+im}`.
    pub h: usize,
    /// Residue of the proxy `ν̄^{h'}`.
    pub h_prime: usize,
    /// Step `i`.
    pub i: usize,
    /// `i(γ_0, γ_{h+(i+1)m}) · i(γ_{h+im}, γ_{h'+Km}) / A(0, h'+Km)`.
    pub value: BigRational,
}

/// Result of [`singularity_ratios`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport {
    /// Proxy depth `K`.
    pub proxy_depth: usize,
    /// Growth ratio of the schedule.
    pub a: BigRational,
    /// `κ_0` defining the same-residue band `[1/κ_0², κ_0²]`.
    pub kappa0: BigRational,
    /// Rows with `h = h'`.
    pub same: Vec<SingularityRow>,
    /// Rows with `h ≠ h'`.
    pub cross: Vec<SingularityRow>,
}

impl SingularityReport {
    /// Every same-residue value lies in `[1/κ_0², κ_0²]`.
    pub fn band_holds(&self) -> bool {
        let hi = &self.kappa0 * &self.kappa0;
        let lo = hi.recip();
        self.same.iter().all(|r| r.value >= lo && r.value <= hi)
    }

    fn cross_series(&self) -> Vec<Vec<&SingularityRow>> {
        let mut keys: Vec<(usize, usize)> = self.cross.iter().map(|r| (r.h, r.h_prime)).collect();
        keys.dedup();
        keys.into_iter().map(|(h, g)| self.cross.iter().filter(|r| r.h == h && r.h_prime == g).collect()).collect()
    }

    /// Fewest strictly decreasing steps over all cross series (`None` when
    /// there is no cross series).
    pub fn cross_monotone_steps(&self) -> Option<usize> {
        self.cross_series().iter().map(|s| s.windows(2).take_while(|w| w[1].value < w[0].value).count()).min()
    }

    /// Every cross series is strictly decreasing throughout.
    pub fn cross_monotone(&self) -> bool {
        self.cross_series().iter().all(|s| s.windows(2).all(|w| w[1].value < w[0].value))
    }

    /// Every step of every cross series shrinks by at least the factor `1/a`.
    pub fn cross_geometric(&self) -> bool {
        let inv_a = self.a.recip();
        self.cross_series().iter().all(|s| s.windows(2).all(|w| w[1].value <= &w[0].value * &inv_a))
    }
}

/// Compute the same- and cross-residue singularity statistics against the
/// proxies `ν̄^{h'} ≈ γ_{h'+Km} / A(0, h'+Km)`.
pub fn singularity_ratios(
    seq: &CurveSequence,
    table: &IntersectionTable,
    proxy_depth: usize,
    kappa0: &BigRational,
) -> Result<SingularityReport> {
    let m = seq.m();
    let required = (m - 1) + proxy_depth * m;
    if proxy_depth < 2 || seq.depth() < required {
        return Err(Error::InsufficientDepth {
            what: format!("singularity ratios with proxy depth {proxy_depth}"),
            required: required.max(m - 1 + 2 * m),
            available: seq.depth(),
        });
    }
    let mut same = Vec::new();
    let mut cross = Vec::new();
    for h in 0..m {
        for g in 0..m {
            let target = g + proxy_depth * m;
            let norm = twist_product(seq, 0, target)?;
            let mut i = 1;
            while h + i * m < target && h + (i + 1) * m <= seq.depth() {
                let anchor = table.get(0, h + (i + 1) * m);
                let value = rational(&(anchor * table.get(h + i * m, target)), &norm);
                let row = SingularityRow { h, h_prime: g, i, value };
                if h == g {
                    same.push(row);
                } else {
                    cross.push(row);
                }
                i += 1;
            }
        }
    }
    Ok(SingularityReport { proxy_depth, a: seq.schedule().ratio().clone(), kappa0: kappa0.clone(), same, cross })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqgen::{build_sequence, make_schedule};

    fn setup(p: usize, e0: i64, a: i64, depth: usize) -> (SurfaceModel, CurveSequence, IntersectionTable) {
        let model = SurfaceModel::new(p).unwrap();
        let sched = make_schedule(&BigInt::from(e0), &BigRational::from(BigInt::from(a)), depth + 2).unwrap();
        let seq = build_sequence(&model, &sched, depth).unwrap();
        let table = IntersectionTable::build(&model, &seq).unwrap();
        (model, seq, table)
    }

    #[test]
    fn qualifying_predicate() {
        // m = 2: same residue with gap >= 4, or early index with gap >= 5.
        assert!(is_qualifying(0, 4, 2));
        assert!(!is_qualifying(0, 3, 2));
        assert!(is_qualifying(3, 8, 2));
        assert!(!is_qualifying(4, 9, 2));
        assert!(!is_qualifying(1, 2, 2));
    }

    #[test]
    fn exact_rows() {
        let (_, seq, table) = setup(5, 16, 2, 8);
        let r = intersection_ratio_table(&seq, &table).unwrap();
        let row = |i: usize, k: usize| r.rows.iter().find(|x| x.i == i && x.k == k).unwrap().clone();
        let two = BigRational::from(BigInt::from(2));
        assert_eq!(row(0, 4).ratio, two);
        for k in 0..=6 {
            assert_eq!(row(k, k + 2).ratio, two);
        }
        assert!(row(3, 4).ratio.is_zero());
        assert!(r.all_pass());
    }

    #[test]
    fn rational_format_keeps_denominator() {
        assert_eq!(format_rational(&BigRational::from(BigInt::from(3))), "3/1");
    }

    #[test]
    fn singularity_needs_depth() {
        let (_, seq, table) = setup(5, 16, 2, 8);
        assert!(matches!(
            singularity_ratios(&seq, &table, 5, &BigRational::one()),
            Err(Error::InsufficientDepth { .. })
        ));
    }
}
