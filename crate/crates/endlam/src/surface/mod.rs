// SPDX-License-Identifier: MIT OR Apache-2.0
//! The punctured sphere `S_{0,p}` as the double of a regular `p`-gon.
//!
//! # Cell structure
//!
//! Vertices `v_0, …, v_{p-1}` of the polygon are the punctures; side `s_i`
//! joins `v_i` to `v_{i+1}` (indices mod `p`).  The *front* face is the
//! polygon seen counterclockwise, the *back* face is its mirror copy glued
//! along every side.  The rotation `ρ` sends `v_i` to `v_{i+2}`; it acts on
//! both faces and therefore has order `p`.
//!
//! Both faces are triangulated by the fan of diagonals at `v_0`.  Normal
//! coordinates are ordered as
//!
//! * `w_0, …, w_{p-1}` — crossings with the sides (edge index `i`),
//! * `u_2, …, u_{p-2}` — crossings with the front diagonals `v_0 v_k`
//!   (edge index `p + k - 2`),
//! * `d_2, …, d_{p-2}` — crossings with the back diagonals `v_0 v_k`
//!   (edge index `2p - 3 + k - 2`),
//!
//! for `3p - 6` coordinates in total.
//!
//! # Arc types
//!
//! A normal curve meets each face in disjoint arcs joining two sides; the
//! number of arcs joining `s_i` and `s_j` in a face is its *arc type count*.
//! Arc types and normal coordinates determine each other
//! ([`SurfaceModel::arcs`] and [`SurfaceModel::coords_from_arcs`]), and the
//! rotation `ρ` simply shifts arc types by two sides.  Curves that surround
//! a run of consecutive punctures ([`RoundCurve`]) consist of a single arc
//! type in each face, which makes their intersection numbers with arbitrary
//! curves computable by a closed formula
//! ([`SurfaceModel::intersection_with_round`]).

pub mod chord;
pub mod curve;
pub(crate) mod triangulation;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use triangulation::{edge_index, half_twist, OpList, Triangulation};

pub use chord::ChordCurve;
pub use curve::{Curve, Origin};

/// A curve surrounding the consecutive punctures `v_start, …, v_{start+len-1}`.
///
/// Such a curve also surrounds the complementary run of `p - len` punctures;
/// the canonical representative always has `2 <= len <= m`.  The curve
/// around the two endpoints of side `s_c` is `RoundCurve::side(p, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoundCurve {
    start: usize,
    len: usize,
}

impl RoundCurve {
    /// Canonical round curve around `len` punctures starting at `v_start`.
    pub fn new(p: usize, start: usize, len: usize) -> Result<Self> {
        if len < 2 || len > p - 2 {
            return Err(Error::IndexOutOfRange { index: len as i64, range: format!("2..={}", p - 2) });
        }
        let start = start % p;
        if 2 * len < p {
            Ok(RoundCurve { start, len })
        } else {
            Ok(RoundCurve { start: (start + len) % p, len: p - len })
        }
    }

    /// The curve around side `s_c`, i.e. around punctures `v_c, v_{c+1}`.
    pub fn side(p: usize, c: usize) -> Self {
        RoundCurve { start: c % p, len: 2 }
    }

    /// First surrounded puncture.
    pub fn start(&self) -> usize {
        self.start
    }

    /// Number of surrounded punctures (at most `m`).
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false: a round curve surrounds at least two punctures.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sides lying inside the curve.
    fn inner_sides(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.start;
        (0..self.len - 1).map(move |i| (start + i) % p)
    }

    /// The two sides crossed by the curve: before and after the run.
    fn crossing_sides(&self, p: usize) -> (usize, usize) {
        ((self.start + p - 1) % p, (self.start + self.len - 1) % p)
    }

    /// Image under `ρ^n`.
    pub fn rotate(&self, p: usize, n: i64) -> Self {
        let shift = (2 * n).rem_euclid(p as i64) as usize;
        RoundCurve { start: (self.start + shift) % p, len: self.len }
    }
}

/// Arc type counts of a normal multicurve, one symmetric matrix per face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSystem {
    p: usize,
    front: Vec<Vec<BigInt>>,
    back: Vec<Vec<BigInt>>,
}

/// Which copy of the polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    Front,
    Back,
}

impl ArcSystem {
    fn empty(p: usize) -> Self {
        ArcSystem { p, front: vec![vec![BigInt::zero(); p]; p], back: vec![vec![BigInt::zero(); p]; p] }
    }

    fn face(&self, face: Face) -> &Vec<Vec<BigInt>> {
        match face {
            Face::Front => &self.front,
            Face::Back => &self.back,
        }
    }

    fn face_mut(&mut self, face: Face) -> &mut Vec<Vec<BigInt>> {
        match face {
            Face::Front => &mut self.front,
            Face::Back => &mut self.back,
        }
    }

    /// Number of arcs in `face` joining sides `i` and `j`.
    pub fn count(&self, face: Face, i: usize, j: usize) -> &BigInt {
        &self.face(face)[i % self.p][j % self.p]
    }

    fn add(&mut self, face: Face, i: usize, j: usize, n: &BigInt) {
        let p = self.p;
        let (i, j) = (i % p, j % p);
        let m = self.face_mut(face);
        m[i][j] += n;
        if i != j {
            m[j][i] += n;
        }
    }

    /// Arc types as `(i, j, count)` with `i < j` and positive count.
    pub fn arcs(&self, face: Face) -> Vec<(usize, usize, BigInt)> {
        let m = self.face(face);
        let mut out = Vec::new();
        for (i, row) in m.iter().enumerate().take(self.p) {
            for (j, count) in row.iter().enumerate().take(self.p).skip(i + 1) {
                if count.is_positive() {
                    out.push((i, j, count.clone()));
                }
            }
        }
        out
    }

    /// Image under `ρ^n`: every side index shifts by `2n`.
    pub fn rotate(&self, n: i64) -> ArcSystem {
        let p = self.p;
        let shift = (2 * n).rem_euclid(p as i64) as usize;
        let mut out = ArcSystem::empty(p);
        for face in [Face::Front, Face::Back] {
            for (i, j, c) in self.arcs(face) {
                out.add(face, i + shift, j + shift, &c);
            }
        }
        out
    }
}

/// The surface `S_{0,p}` with its fixed triangulation and compiled twists.
///
/// Construction is deterministic: the same `p` always yields identical
/// triangulation data and flip sequences.
#[derive(Debug)]
pub struct SurfaceModel {
    p: usize,
    m: usize,
    tri: Triangulation,
    /// Positive half twist about each side, as coordinate operations.
    half: Vec<OpList>,
    /// Positive and negative Dehn twists about every canonical round curve.
    twists: BTreeMap<RoundCurve, (OpList, OpList)>,
    /// Coordinates of every canonical round curve.
    round_coords: BTreeMap<RoundCurve, Vec<BigInt>>,
}

impl SurfaceModel {
    /// Build the model for `p` punctures (`p` odd, `p >= 5`).
    pub fn new(p: usize) -> Result<Self> {
        if p < 5 || p % 2 == 0 {
            return Err(Error::InvalidPunctureCount(p));
        }
        let tri = fan_triangulation(p);
        // The flip compiler yields the half twist of one handedness; its
        // inverse is the positive (left) half twist in our orientation
        // convention (front face counterclockwise).
        let half: Vec<OpList> = (0..p).map(|c| half_twist(&tri, c as i32).inverse()).collect();
        let mut model =
            SurfaceModel { p, m: (p - 1) / 2, tri, half, twists: BTreeMap::new(), round_coords: BTreeMap::new() };
        for len in 2..=model.m {
            for start in 0..p {
                let r = RoundCurve { start, len };
                let mut ops = OpList::default();
                for _ in 0..len {
                    for i in 0..len - 1 {
                        ops = ops.then(&model.half[(start + i) % p]);
                    }
                }
                let inv = ops.inverse();
                model.twists.insert(r, (ops, inv));
                let mut arcs = ArcSystem::empty(p);
                let (l, rr) = r.crossing_sides(p);
                let one = BigInt::from(1);
                arcs.add(Face::Front, l, rr, &one);
                arcs.add(Face::Back, l, rr, &one);
                let coords = model.coords_from_arcs(&arcs);
                model.round_coords.insert(r, coords);
            }
        }
        Ok(model)
    }

    /// Number of punctures.
    pub fn p(&self) -> usize {
        self.p
    }

    /// `m = (p - 1) / 2`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of normal coordinates, `3p - 6`.
    pub fn coordinate_count(&self) -> usize {
        3 * self.p - 6
    }

    /// Number of triangles, `2p - 4`.
    pub fn triangle_count(&self) -> usize {
        self.tri.triangles().len()
    }

    /// Euler characteristic of the punctured surface computed from the cell
    /// structure: faces minus edges (the vertices are punctures).
    pub fn euler_characteristic(&self) -> i64 {
        self.triangle_count() as i64 - self.coordinate_count() as i64
    }

    /// Number of vertex classes of the triangulation (must equal `p`).
    pub fn vertex_count(&self) -> usize {
        self.tri.vertices().len()
    }

    /// Triangles as triples of edge indices.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        self.tri.triangles().iter().map(|t| [edge_index(t[0]), edge_index(t[1]), edge_index(t[2])]).collect()
    }

    /// Flip count of the compiled positive half twist about side `c`.
    pub fn half_twist_flip_count(&self, c: usize) -> usize {
        self.half[c % self.p].flip_count()
    }

    pub(crate) fn twist_ops(&self, r: RoundCurve, positive: bool) -> &OpList {
        let (pos, neg) = &self.twists[&r];
        if positive {
            pos
        } else {
            neg
        }
    }

    /// All canonical round curves, ordered by `(start, len)`.
    pub fn round_curves(&self) -> Vec<RoundCurve> {
        self.round_coords.keys().copied().collect()
    }

    /// Normal coordinates of a round curve.
    pub fn round_coords(&self, r: RoundCurve) -> &[BigInt] {
        &self.round_coords[&r]
    }

    /// Identify coordinates as a round curve, if they are one.
    pub fn recognise_round(&self, coords: &[BigInt]) -> Option<RoundCurve> {
        self.round_coords.iter().find(|(_, c)| c.as_slice() == coords).map(|(r, _)| *r)
    }

    /// Arc type counts of a normal multicurve given by coordinates.
    ///
    /// Fails if the coordinates violate non-negativity or the parity and
    /// triangle conditions of normal coordinates.
    pub fn arcs(&self, w: &[BigInt]) -> Result<ArcSystem> {
        let p = self.p;
        if w.len() != self.coordinate_count() {
            return Err(Error::InvalidCurve(format!(
                "expected {} coordinates, found {}",
                self.coordinate_count(),
                w.len()
            )));
        }
        if w.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidCurve("negative coordinate".into()));
        }
        let sides = &w[..p];
        let mut arcs = ArcSystem::empty(p);
        for face in [Face::Front, Face::Back] {
            let offset = match face {
                Face::Front => p,
                Face::Back => 2 * p - 3,
            };
            let mut over = Vec::with_capacity(p + 1);
            over.push(BigInt::zero());
            over.push(w[0].clone());
            over.extend(w[offset..offset + p - 3].iter().cloned());
            over.push(w[p - 1].clone());
            over.push(BigInt::zero());
            let mut stack: Vec<(usize, BigInt)> = Vec::new();
            for j in 0..p {
                let twice_left: BigInt = &sides[j] + &over[j] - &over[j + 1];
                if twice_left.is_negative() || (&twice_left % 2u32) != BigInt::zero() {
                    return Err(Error::InvalidCurve(format!("matching condition fails at side {j}")));
                }
                let mut left: BigInt = twice_left / 2;
                let right: BigInt = &sides[j] - &left;
                if right.is_negative() {
                    return Err(Error::InvalidCurve(format!("matching condition fails at side {j}")));
                }
                while left.is_positive() {
                    let Some((side, avail)) = stack.last_mut() else {
                        return Err(Error::InvalidCurve("unmatched arc endpoints".into()));
                    };
                    let take = if *avail <= left { avail.clone() } else { left.clone() };
                    arcs.add(face, *side, j, &take);
                    left -= &take;
                    *avail -= &take;
                    if avail.is_zero() {
                        stack.pop();
                    }
                }
                if right.is_positive() {
                    stack.push((j, right));
                }
            }
            if !stack.is_empty() {
                return Err(Error::InvalidCurve("unmatched arc endpoints".into()));
            }
        }
        // Both faces must induce the same side weights (automatic from the
        // shared side coordinates) and the diagonals must be reproduced.
        let rebuilt = self.coords_from_arcs(&arcs);
        if rebuilt != w {
            return Err(Error::InvalidCurve("coordinates are not normal".into()));
        }
        Ok(arcs)
    }

    /// Normal coordinates of an arc system.
    pub fn coords_from_arcs(&self, arcs: &ArcSystem) -> Vec<BigInt> {
        let p = self.p;
        let mut w = vec![BigInt::zero(); self.coordinate_count()];
        for (i, j, c) in arcs.arcs(Face::Front) {
            w[i] += &c;
            w[j] += &c;
        }
        for face in [Face::Front, Face::Back] {
            let offset = match face {
                Face::Front => p,
                Face::Back => 2 * p - 3,
            };
            for (i, j, c) in arcs.arcs(face) {
                // Diagonal v_0 v_k separates sides < k from sides >= k.
                for k in (i + 1).max(2)..=j.min(p - 2) {
                    w[offset + k - 2] += &c;
                }
            }
        }
        w
    }

    /// Coordinates of `ρ^n` applied to the curve with coordinates `w`.
    pub fn rotate_coords(&self, w: &[BigInt], n: i64) -> Result<Vec<BigInt>> {
        let arcs = self.arcs(w)?;
        Ok(self.coords_from_arcs(&arcs.rotate(n)))
    }

    /// Exact geometric intersection number of a normal multicurve (given by
    /// its arc system) with a round curve.
    ///
    /// Let `N` be a disk around the run of punctures of `r`.  Arcs with
    /// exactly one endpoint on a side inside `N` cross `∂N`; the crossings
    /// cancel in pairs along inessential excursions outside `N`, which are of
    /// four kinds: around the first or last puncture of the run, or once
    /// under (resp. over) the whole run.  Their counts are read off the arc
    /// types adjacent to the two sides crossed by `r`.
    pub fn intersection_with_round(&self, arcs: &ArcSystem, r: RoundCurve) -> BigInt {
        let p = self.p;
        let inner: Vec<usize> = r.inner_sides(p).collect();
        let is_inner = |s: usize| inner.contains(&s);
        let mut crossings = BigInt::zero();
        for face in [Face::Front, Face::Back] {
            for (i, j, c) in arcs.arcs(face) {
                if is_inner(i) != is_inner(j) {
                    crossings += c;
                }
            }
        }
        let (left, right) = r.crossing_sides(p);
        let to_inner = |face: Face, s: usize| -> BigInt { inner.iter().map(|&t| arcs.count(face, s, t).clone()).sum() };
        let f_left = to_inner(Face::Front, left);
        let b_left = to_inner(Face::Back, left);
        let f_right = to_inner(Face::Front, right);
        let b_right = to_inner(Face::Back, right);
        let min2 = |a: &BigInt, b: &BigInt| if a <= b { a.clone() } else { b.clone() };
        let min3 = |a: BigInt, b: BigInt, c: BigInt| min2(&min2(&a, &b), &c);
        let pos = |x: BigInt| if x.is_positive() { x } else { BigInt::zero() };
        let mut excursions = min2(&f_left, &b_left) + min2(&f_right, &b_right);
        excursions += pos(min3(arcs.count(Face::Back, left, right).clone(), &f_left - &b_left, &f_right - &b_right));
        excursions += pos(min3(arcs.count(Face::Front, left, right).clone(), &b_left - &f_left, &b_right - &f_right));
        crossings - 2 * excursions
    }

    /// Whether the coordinates describe a normal multicurve without
    /// peripheral components (every puncture has an empty corner).
    pub fn is_multicurve(&self, w: &[BigInt]) -> bool {
        if self.arcs(w).is_err() {
            return false;
        }
        self.peripheral_free(w)
    }

    pub(crate) fn peripheral_free(&self, w: &[BigInt]) -> bool {
        for vertex in self.tri.vertices() {
            let mut all_positive = true;
            for &label in vertex {
                let [x, y, z] = self.tri.corner(label);
                let corner: BigInt = &w[edge_index(x)] + &w[edge_index(z)] - &w[edge_index(y)];
                if !corner.is_positive() {
                    all_positive = false;
                    break;
                }
            }
            if all_positive {
                return false;
            }
        }
        true
    }
}

/// Fan triangulation of both faces from `v_0` (see the module docs).
fn fan_triangulation(p: usize) -> Triangulation {
    let side = |k: usize| k as i32;
    let front = |k: usize| (p + k - 2) as i32;
    let back = |k: usize| (2 * p - 3 + k - 2) as i32;
    // Oriented edge from v_0 to v_k in either face.
    let from_origin = |k: usize, diag: &dyn Fn(usize) -> i32| -> i32 {
        if k == 1 {
            side(0)
        } else if k == p - 1 {
            !side(p - 1)
        } else {
            diag(k)
        }
    };
    let mut triangles = Vec::with_capacity(2 * p - 4);
    for k in 1..p - 1 {
        triangles.push([from_origin(k, &front), side(k), !from_origin(k + 1, &front)]);
        triangles.push([from_origin(k + 1, &back), !side(k), !from_origin(k, &back)]);
    }
    Triangulation::new(triangles)
}
