// SPDX-License-Identifier: MIT OR Apache-2.0
//! A length model for the short-curve regime along the ray, used to trace
//! the limit set in projectivised length coordinates.
//!
//! This module is a **model**.  It does not compute a Weil–Petersson ray;
//! it synthesises the qualitative behaviour that such a ray is known to have
//! (only sequence curves become short, the pants curves `P_k` around
//! `σ_k = {γ_k, …, γ_{k+m−1}}` stay bounded) and evaluates the collar
//! expansion of hyperbolic length
//!
//! ```text
//! ℓ_δ ≈ Σ_{β ∈ P_k} i(δ, β) · ( w(β) + tw_β(δ) · ℓ_β ),   w(β) = 2 log(1/ℓ_β).
//! ```
//!
//! The additive error of the expansion, `O(Σ i(δ, β))`, is reported
//! separately and never added to the modelled value.
//!
//! Twisting about `γ_k` is the same for every test curve: the twist of any
//! fixed curve about `γ_k` agrees with that of `γ_0` up to a bounded error
//! for large `k`, so the model uses `tw_{γ_k} = d̂_{γ_k}(γ_0, γ_{k+m})`, the
//! annular estimate against the tail.  Twisting about every other curve of
//! `P_k` (including `γ_{k+1}`) is modelled as 0.
//!
//! # Sampling
//!
//! For each step `k` an edge parameter `u ∈ [0, 1]` moves the sample from the
//! middle of the interval between two short-curve times (`u = 0`, regime C1,
//! every curve of `P_k` has length `L_0`) towards the time at which `γ_{k+1}`
//! becomes short (`u → 1`, regime C2, `ℓ_{γ_{k+1}} → 0`).  How fast `γ_{k+1}`
//! shrinks is the [`EpsSchedule`]; the interpolation between the regimes is
//! a modelling choice.  The plain exponential schedule `L_0 e^{−λu}` keeps the
//! collar width below `2λ`, which is tiny next to the twisting `≍ e_k` on
//! `γ_k`, so it never leaves a neighbourhood of the vertex `ν̄^h`.  The
//! default edge-scaled schedule instead stretches the collar width of
//! `γ_{k+1}` over several orders of magnitude around the value that balances
//! the two dominant terms, so a sweep crosses the whole edge.
//!
//! Lengths are kept as logarithms: collar widths of interest correspond to
//! lengths far below the smallest positive `f64`.

use crate::ergodics::{family_intersections, TestCurve};
use crate::error::{Error, Result};
use crate::intersect::{complete_with, intersection_number, is_filling, PantsData, DEFAULT_ORACLE_CAP};
use crate::seqgen::{twist_product, CurveSequence, IntersectionTable};
use crate::subproj::{sequence_coeff, CoeffMode, ProjectionSettings, DEFAULT_DELTA};
use crate::surface::{Curve, SurfaceModel};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

/// Default decay constant `λ`.
pub const DEFAULT_LAMBDA: f64 = 20.0;
/// Default bounded length `L_0` of the pants curves.
pub const DEFAULT_L0: f64 = 0.5;

/// How the length of `γ_{k+1}` shrinks along the edge parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EpsSchedule {
    /// `ℓ(u) = L_0 · exp(−λ u)`.
    Exponential {
        /// Decay constant.
        lambda: f64,
    },
    /// `log(L_0/ℓ(u)) = c_k · (e^{λu} − 1)/(e^{λ/2} − 1)`, with `c_k` chosen so
    /// that at `u = 1/2` the two dominant terms have equal sup-norm.
    EdgeScaled {
        /// Spread of the sweep: the collar width ranges over a factor
        /// `≈ e^{λ/2}` on either side of the balance point.
        lambda: f64,
    },
}

impl EpsSchedule {
    /// `log(L_0 / ℓ(u))` for the balance scale `c` (ignored by the
    /// exponential schedule).
    pub fn log_ratio(&self, u: f64, c: f64) -> f64 {
        match *self {
            EpsSchedule::Exponential { lambda } => lambda * u,
            EpsSchedule::EdgeScaled { lambda } => c * (lambda * u).exp_m1() / (lambda / 2.0).exp_m1(),
        }
    }
}

/// Which samples to emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Only `u = 0`.
    C1,
    /// Only `u = 1`.
    C2,
    /// `u = j / samples` for `j = 0..=samples`.
    Sweep,
}

/// Regime tag of one sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeTag {
    /// Every curve of `P_k` has length `L_0`.
    C1,
    /// `γ_{k+1}` is shorter than `L_0`.
    C2,
}

impl std::fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegimeTag::C1 => "C1",
            RegimeTag::C2 => "C2",
        })
    }
}

/// Parameters of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LengthModelParams {
    /// Bounded length of the pants curves, `0 < L_0`.
    pub l0: f64,
    /// Shrinking schedule of `γ_{k+1}`.
    pub eps: EpsSchedule,
    /// Which samples to emit.
    pub regime: Regime,
    /// Samples per edge (sweep resolution).
    pub samples: usize,
    /// Half-width of the twist estimator.
    pub delta: u64,
}

impl Default for LengthModelParams {
    fn default() -> Self {
        LengthModelParams {
            l0: DEFAULT_L0,
            eps: EpsSchedule::EdgeScaled { lambda: DEFAULT_LAMBDA },
            regime: Regime::Sweep,
            samples: 32,
            delta: DEFAULT_DELTA,
        }
    }
}

impl LengthModelParams {
    fn validate(&self) -> Result<()> {
        let lambda = match self.eps {
            EpsSchedule::Exponential { lambda } | EpsSchedule::EdgeScaled { lambda } => lambda,
        };
        if !(self.l0.is_finite() && self.l0 > 0.0) || !(lambda.is_finite() && lambda > 0.0) || self.samples == 0 {
            return Err(Error::Format("length model needs L0 > 0, λ > 0 and at least one sample".into()));
        }
        Ok(())
    }

    fn parameters(&self) -> Vec<f64> {
        match self.regime {
            Regime::C1 => vec![0.0],
            Regime::C2 => vec![1.0],
            Regime::Sweep => (0..=self.samples).map(|j| j as f64 / self.samples as f64).collect(),
        }
    }
}

/// The pants decomposition `P_k ⊇ σ_k` used at step `k`.
///
/// Candidates are round after transport by `Φ_{k−m}^{-1}`; the pool of
/// bounded-length curves is `γ_{k−m+2}, …, γ_{k+m−1}`.
pub fn sequence_pants(model: &SurfaceModel, seq: &CurveSequence, k: usize) -> Result<PantsData> {
    let m = seq.m();
    if k < m || k + m - 1 > seq.depth() {
        return Err(Error::InsufficientDepth {
            what: format!("pants decomposition P_{k}"),
            required: k + m - 1,
            available: seq.depth(),
        });
    }
    let sigma: Vec<Curve> = (k..k + m).map(|j| seq.gamma(j).cloned()).collect::<Result<_>>()?;
    let pool: Vec<Curve> = (k + 2 - m..k + m).map(|j| seq.gamma(j).cloned()).collect::<Result<_>>()?;
    let mut pants = complete_with(model, &sigma, &pool, seq.word(k - m)?)?;
    pants.k = Some(k);
    Ok(pants)
}

/// A curve of `P_k` with its modelled length.
#[derive(Clone, Debug, PartialEq)]
pub struct PantsCurve {
    /// Sequence index, for the curves of `σ_k`.
    pub index: Option<usize>,
    /// The curve.
    pub curve: Curve,
    /// `log ℓ_β`.
    pub log_length: f64,
}

impl PantsCurve {
    /// `ℓ_β` (may underflow to 0 for extremely short curves).
    pub fn length(&self) -> f64 {
        self.log_length.exp()
    }

    /// Collar width `w(β) = 2 log(1/ℓ_β)`.
    pub fn width(&self) -> f64 {
        -2.0 * self.log_length
    }
}

/// One model state: step `k`, edge parameter `u`, and the lengths of `P_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelState {
    /// Step.
    pub k: usize,
    /// Edge parameter.
    pub u: f64,
    /// Regime tag.
    pub regime: RegimeTag,
    /// The curves of `P_k`.
    pub pants: Vec<PantsCurve>,
    /// Tail curve `γ_{k+m}` against which the twisting about `γ_k` is
    /// measured.
    pub anchor: Curve,
    /// `i(γ_{k+m}, γ_k)`.
    pub anchor_intersection: BigUint,
    /// `tw_{γ_k} = d̂_{γ_k}(γ_0, γ_{k+m})`, the twisting used for every test
    /// curve.
    pub base_twist: BigUint,
    /// `x_k = w(γ_k) + tw_{γ_k}(γ_0) ℓ_{γ_k}`.
    pub xk: f64,
    /// `y_k = w(γ_{k+1})` in C2, `0` in C1 (the twist about `γ_{k+1}` is
    /// modelled as 0).
    pub yk: f64,
}

/// Intersection numbers of one test curve with the curves of `P_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct DeltaRow {
    pants: Vec<BigUint>,
}

/// A modelled length together with the scale of the neglected error term.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelLength {
    /// `Σ i(δ, β) (w(β) + tw_β(δ) ℓ_β)`.
    pub value: f64,
    /// `Σ i(δ, β)`: the error term of the expansion is `O` of this.
    pub error_scale: BigUint,
}

fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

fn eval_length(state: &ModelState, row: &DeltaRow) -> ModelLength {
    let mut value = 0.0;
    let mut error_scale = BigUint::zero();
    for (beta, i) in state.pants.iter().zip(&row.pants) {
        if i.is_zero() {
            continue;
        }
        error_scale += i;
        let twist = if beta.index == Some(state.k) { to_f64(&state.base_twist) } else { 0.0 };
        let len = beta.length();
        value += to_f64(i) * (beta.width() + if len > 0.0 { twist * len } else { 0.0 });
    }
    ModelLength { value, error_scale }
}

/// The modelled length of `δ` in a state.
pub fn model_length(model: &SurfaceModel, state: &ModelState, delta: &Curve) -> Result<ModelLength> {
    let pants = state.pants.iter().map(|b| intersection_number(model, delta, &b.curve)).collect::<Result<_>>()?;
    Ok(eval_length(state, &DeltaRow { pants }))
}

/// Default step range `2m ..= depth − m`.
pub fn default_steps(seq: &CurveSequence) -> std::ops::RangeInclusive<usize> {
    let m = seq.m();
    2 * m..=seq.depth().saturating_sub(m)
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}

/// Scale a vector to unit sup-norm (the zero vector is returned unchanged).
pub fn projectivize(v: &[f64]) -> Vec<f64> {
    let n = sup_norm(v);
    if n > 0.0 {
        v.iter().map(|x| x / n).collect()
    } else {
        v.to_vec()
    }
}

/// Sup-distance between two vectors.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
}

struct StepData {
    k: usize,
    pants: Vec<PantsCurve>,
    anchor: Curve,
    anchor_intersection: BigUint,
    base_twist: BigUint,
    rows: Vec<DeltaRow>,
    balance: f64,
    negligibility: BigRational,
}

fn step_data(
    model: &SurfaceModel,
    seq: &CurveSequence,
    table: &IntersectionTable,
    family: &[TestCurve],
    seq_rows: &[Vec<BigUint>],
    params: &LengthModelParams,
    k: usize,
) -> Result<StepData> {
    let m = seq.m();
    let pants = sequence_pants(model, seq, k)?;
    let indexed: Vec<(Option<usize>, Curve)> = pants
        .sigma
        .iter()
        .enumerate()
        .map(|(n, c)| (Some(k + n), c.clone()))
        .chain(pants.completion.iter().map(|c| (None, c.clone())))
        .collect();
    let anchor = seq.gamma(k + m)?.clone();
    let anchor_intersection = table.get(k, k + m).clone();
    let settings =
        ProjectionSettings { delta: params.delta, mode: CoeffMode::Estimate, ..ProjectionSettings::default() };
    let base_twist = sequence_coeff(model, seq, table, k, 0, k + m, &settings)?.value;
    let rows: Vec<DeltaRow> = family
        .iter()
        .zip(seq_rows)
        .map(|(t, sr)| -> Result<DeltaRow> {
            let pants = indexed
                .iter()
                .map(|(idx, c)| match idx {
                    Some(j) => Ok(sr[*j].clone()),
                    None => intersection_number(model, &t.curve, c),
                })
                .collect::<Result<_>>()?;
            Ok(DeltaRow { pants })
        })
        .collect::<Result<_>>()?;
    let a_norm = twist_product(seq, 0, k + m)?;
    let mut negligibility = BigRational::zero();
    for row in &rows {
        for (n, (idx, _)) in indexed.iter().enumerate() {
            if idx.is_none() {
                let q = BigRational::new(BigInt::from(row.pants[n].clone()), BigInt::from(a_norm.clone()));
                if q > negligibility {
                    negligibility = q;
                }
            }
        }
    }
    let xk = -2.0 * params.l0.ln() + to_f64(&base_twist) * params.l0;
    let col = |j: usize| seq_rows.iter().map(|r| to_f64(&r[j])).fold(0.0f64, f64::max);
    let (nk, nk1) = (col(k), col(k + 1));
    let balance = if nk1 > 0.0 { xk * nk / nk1 } else { 0.0 };
    let pants =
        indexed.into_iter().map(|(index, curve)| PantsCurve { index, curve, log_length: params.l0.ln() }).collect();
    Ok(StepData { k, pants, anchor, anchor_intersection, base_twist, rows, balance, negligibility })
}

/// One sample of the trace.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePoint {
    /// Step.
    pub k: usize,
    /// Edge parameter.
    pub u: f64,
    /// Regime tag.
    pub regime: RegimeTag,
    /// Modelled lengths, one per family curve.
    pub lengths: Vec<f64>,
    /// Error-term scales `Σ_β i(δ, β)`, one per family curve.
    pub error_scales: Vec<BigUint>,
    /// `lengths` scaled to unit sup-norm.
    pub projective: Vec<f64>,
    /// `x_k`.
    pub xk: f64,
    /// `y_k`.
    pub yk: f64,
    /// Projectivised `x_k i(·, γ_k) + y_k i(·, γ_{k+1})`.
    pub reduction: Vec<f64>,
    /// Sup-distance between `projective` and `reduction`.
    pub residual: f64,
}

/// The output of [`limit_trace`].
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    /// Labels of the family curves (vector coordinates).
    pub labels: Vec<String>,
    /// Samples ordered by `(k, u)`.
    pub points: Vec<TracePoint>,
    /// Projectivised proxies of `ν̄^h`: `(h, sequence index, vector)`.
    pub vertices: Vec<(usize, usize, Vec<f64>)>,
    /// Projectivised midpoints of the edges `[ν̄^h, ν̄^{h+1}]`.
    pub edge_midpoints: Vec<(usize, Vec<f64>)>,
    /// `max_{δ, β ∈ P_k^c} i(δ, β) / A(0, k+m)` for each step.
    pub negligibility: Vec<(usize, BigRational)>,
}

impl Trace {
    /// Largest residual at each step.
    pub fn residual_by_step(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::new();
        for pt in &self.points {
            match out.last_mut() {
                Some((k, r)) if *k == pt.k => *r = r.max(pt.residual),
                _ => out.push((pt.k, pt.residual)),
            }
        }
        out
    }

    /// For each residue `h`, the sup-distance between the deepest C1 sample
    /// with `k ≡ h (mod m)` and the proxy of `ν̄^h`.
    pub fn vertex_distances(&self, m: usize) -> Vec<(usize, usize, f64)> {
        self.vertices
            .iter()
            .filter_map(|(h, _, v)| {
                self.points
                    .iter()
                    .filter(|p| p.regime == RegimeTag::C1 && p.k % m == *h)
                    .max_by_key(|p| p.k)
                    .map(|p| (*h, p.k, sup_distance(&p.projective, v)))
            })
            .collect()
    }

    /// For each edge, the smallest sup-distance from any sample to its
    /// midpoint.
    pub fn edge_distances(&self) -> Vec<(usize, f64)> {
        self.edge_midpoints
            .iter()
            .map(|(h, mid)| {
                (*h, self.points.iter().map(|p| sup_distance(&p.projective, mid)).fold(f64::INFINITY, f64::min))
            })
            .collect()
    }
}

/// Sweep the steps `k` and edge parameters `u`, emitting projectivised model
/// length vectors over the family.
pub fn limit_trace(
    model: &SurfaceModel,
    seq: &CurveSequence,
    table: &IntersectionTable,
    family: &[TestCurve],
    params: &LengthModelParams,
    steps: std::ops::RangeInclusive<usize>,
) -> Result<Trace> {
    params.validate()?;
    let m = seq.m();
    if steps.is_empty() || *steps.start() < m || steps.end() + m > seq.depth() {
        return Err(Error::InsufficientDepth {
            what: format!("limit trace over steps {}..={}", steps.start(), steps.end()),
            required: (steps.end() + m).max(2 * m),
            available: seq.depth(),
        });
    }
    let curves: Vec<Curve> = family.iter().map(|t| t.curve.clone()).collect();
    if family.is_empty() || !is_filling(model, &curves, DEFAULT_ORACLE_CAP)?.verdict {
        return Err(Error::NonFillingFamily(format!("{} curves", family.len())));
    }
    let seq_rows = family_intersections(model, seq, table, family)?;
    let ks: Vec<usize> = steps.collect();
    let data: Vec<StepData> =
        ks.par_iter().map(|&k| step_data(model, seq, table, family, &seq_rows, params, k)).collect::<Result<_>>()?;

    let mut points = Vec::new();
    for sd in &data {
        let k = sd.k;
        let xk = -2.0 * params.l0.ln() + to_f64(&sd.base_twist) * params.l0;
        for u in params.parameters() {
            let regime = if u == 0.0 { RegimeTag::C1 } else { RegimeTag::C2 };
            let mut pants = sd.pants.clone();
            for b in pants.iter_mut().filter(|b| b.index == Some(k + 1)) {
                b.log_length = params.l0.ln() - params.eps.log_ratio(u, sd.balance / 2.0);
            }
            let yk = match regime {
                RegimeTag::C1 => 0.0,
                RegimeTag::C2 => pants.iter().find(|b| b.index == Some(k + 1)).map_or(0.0, PantsCurve::width),
            };
            let state = ModelState {
                k,
                u,
                regime,
                pants,
                anchor: sd.anchor.clone(),
                anchor_intersection: sd.anchor_intersection.clone(),
                base_twist: sd.base_twist.clone(),
                xk,
                yk,
            };
            let evaluated: Vec<ModelLength> = sd.rows.iter().map(|r| eval_length(&state, r)).collect();
            let lengths: Vec<f64> = evaluated.iter().map(|l| l.value).collect();
            let reduction_raw: Vec<f64> =
                seq_rows.iter().map(|r| xk * to_f64(&r[k]) + yk * to_f64(&r[k + 1])).collect();
            let projective = projectivize(&lengths);
            let reduction = projectivize(&reduction_raw);
            let residual = sup_distance(&projective, &reduction);
            points.push(TracePoint {
                k,
                u,
                regime,
                lengths,
                error_scales: evaluated.into_iter().map(|l| l.error_scale).collect(),
                projective,
                xk,
                yk,
                reduction,
                residual,
            });
        }
    }

    let d = seq.depth();
    let vertices: Vec<(usize, usize, Vec<f64>)> = (0..m)
        .map(|h| {
            let index = d - ((d + m - h) % m);
            let v: Vec<f64> = seq_rows.iter().map(|r| to_f64(&r[index])).collect();
            (h, index, projectivize(&v))
        })
        .collect();
    let edge_midpoints = (0..m)
        .map(|h| {
            let (a, b) = (&vertices[h].2, &vertices[(h + 1) % m].2);
            (h, projectivize(&a.iter().zip(b).map(|(x, y)| (x + y) / 2.0).collect::<Vec<_>>()))
        })
        .collect();
    Ok(Trace {
        labels: family.iter().map(|t| t.label.clone()).collect(),
        points,
        vertices,
        edge_midpoints,
        negligibility: data.iter().map(|sd| (sd.k, sd.negligibility.clone())).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projectivization_is_scale_invariant() {
        let v = [3.0, 1.5, 0.0];
        assert_eq!(projectivize(&v), projectivize(&v.map(|x| x * 7.25)));
        assert_eq!(projectivize(&v), vec![1.0, 0.5, 0.0]);
    }

    #[test]
    fn schedules_start_at_l0_and_decrease() {
        for eps in [EpsSchedule::Exponential { lambda: 20.0 }, EpsSchedule::EdgeScaled { lambda: 20.0 }] {
            assert_eq!(eps.log_ratio(0.0, 100.0), 0.0);
            let mut prev = 0.0;
            for j in 1..=10 {
                let r = eps.log_ratio(j as f64 / 10.0, 100.0);
                assert!(r > prev);
                prev = r;
            }
        }
        let s = EpsSchedule::EdgeScaled { lambda: 20.0 };
        assert!((s.log_ratio(0.5, 100.0) - 100.0).abs() < 1e-9);
    }

    #[test]
    fn collar_width() {
        let b = PantsCurve {
            index: None,
            curve: Curve::round(&SurfaceModel::new(5).unwrap(), crate::surface::RoundCurve::side(5, 0)),
            log_length: 0.0,
        };
        assert_eq!(b.width(), 0.0);
        assert_eq!(b.length(), 1.0);
    }
}
