// SPDX-License-Identifier: MIT OR Apache-2.0
//! Explicit chord representatives: the brute-force oracle.
//!
//! A [`ChordCurve`] draws a normal curve literally: every crossing with a
//! polygon side becomes a point, ordered along the side from its initial
//! vertex, and every arc in a face becomes a straight chord between two such
//! points.  Nothing here is clever; it is the independent check against which
//! the scalable formulas are tested.
//!
//! Several chord curves are drawn together in an [`Arrangement`], which
//! fixes a total order of all points on each side.  Because the faces are
//! convex, two chords in the same face cross exactly when their endpoints
//! interleave, so crossings are read off the orders.  Minimal position is
//! reached by greedy bigon removal: an innermost bigon between curves `A`
//! and `B` shows up as a crossing from which both curves run in parallel
//! (through adjacent points on a chain of sides) to a second crossing;
//! pushing `A` across it swaps the order of the adjacent points and removes
//! both crossings.  Each removal lowers the crossing count by two, so the
//! process terminates, and the bigon criterion makes the result minimal.
//!
//! On top of a reduced arrangement the module computes
//! * complementary regions of a union of curves ([`Arrangement::census`]),
//! * annular projection distances by lifting to the annular cover
//!   ([`Arrangement::annular_distance`]).

use super::{Face, SurfaceModel};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::collections::{BTreeMap, HashMap};

/// A point on a polygon side: `(side, index from the side's initial vertex)`.
pub type SidePoint = (usize, usize);

/// One straight chord of a [`ChordCurve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chord {
    /// Face containing the chord.
    pub face: Face,
    /// Side and ordering index where the chord starts.
    pub entry: SidePoint,
    /// Side and ordering index where the chord ends.
    pub exit: SidePoint,
}

/// A curve drawn as a cyclic list of straight chords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChordCurve {
    p: usize,
    side_counts: Vec<usize>,
    /// Points visited in cyclic order; chord `t` joins `points[t]` and
    /// `points[t + 1]` and lies in the front face for even `t`.
    points: Vec<SidePoint>,
    reduced: bool,
}

impl ChordCurve {
    /// Draw a curve given by normal coordinates, refusing curves with more
    /// than `cap` side points.
    pub fn from_coords(model: &SurfaceModel, w: &[BigInt], cap: u64) -> Result<ChordCurve> {
        let total: BigInt = w[..model.p()].iter().sum();
        let needed = total.to_u64().unwrap_or(u64::MAX);
        if needed > cap {
            return Err(Error::OracleScaleExceeded { what: "chord representative".into(), needed, cap });
        }
        let mut comps = trace_components(model, w)?;
        if comps.len() != 1 {
            return Err(Error::InvalidCurve(format!("{} components where one curve was expected", comps.len())));
        }
        let points = comps.pop().expect("one component");
        let side_counts = w[..model.p()].iter().map(|x| x.to_usize().expect("capped")).collect();
        Ok(ChordCurve { p: model.p(), side_counts, points, reduced: true })
    }

    /// Number of punctures of the surface.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of chords.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false for a valid curve.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether the representative is known to be bigon-free with respect to
    /// the polygon sides (always true for curves drawn from normal
    /// coordinates).
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Points per side.
    pub fn side_counts(&self) -> &[usize] {
        &self.side_counts
    }

    /// The chords in cyclic order.
    pub fn chords(&self) -> Vec<Chord> {
        let n = self.points.len();
        (0..n).map(|t| Chord { face: face_of(t), entry: self.points[t], exit: self.points[(t + 1) % n] }).collect()
    }

    /// Recover normal coordinates (the inverse of [`ChordCurve::from_coords`]).
    pub fn to_coords(&self, model: &SurfaceModel) -> Vec<BigInt> {
        let mut arcs = super::ArcSystem::empty(self.p);
        let one = BigInt::from(1);
        for chord in self.chords() {
            arcs.add(chord.face, chord.entry.0, chord.exit.0, &one);
        }
        model.coords_from_arcs(&arcs)
    }
}

#[inline]
fn face_of(t: usize) -> Face {
    if t % 2 == 0 {
        Face::Front
    } else {
        Face::Back
    }
}

/// Explicit point matching of one face: `partner[side][index]`.
fn face_matching(p: usize, sides: &[usize], over: &[i64]) -> Result<Vec<Vec<SidePoint>>> {
    let mut partner: Vec<Vec<SidePoint>> = sides.iter().map(|&n| vec![(0, 0); n]).collect();
    let mut stack: Vec<SidePoint> = Vec::new();
    for j in 0..p {
        let twice_left = sides[j] as i64 + over[j] - over[j + 1];
        if twice_left < 0 || twice_left % 2 != 0 {
            return Err(Error::InvalidCurve(format!("matching fails at side {j}")));
        }
        let left = (twice_left / 2) as usize;
        if left > sides[j] {
            return Err(Error::InvalidCurve(format!("matching fails at side {j}")));
        }
        for pos in 0..left {
            let other = stack.pop().ok_or_else(|| Error::InvalidCurve("unmatched arc endpoint".into()))?;
            partner[j][pos] = other;
            partner[other.0][other.1] = (j, pos);
        }
        for pos in left..sides[j] {
            stack.push((j, pos));
        }
    }
    if !stack.is_empty() {
        return Err(Error::InvalidCurve("unmatched arc endpoint".into()));
    }
    Ok(partner)
}

/// Trace the components of a small normal multicurve.
pub(crate) fn trace_components(model: &SurfaceModel, w: &[BigInt]) -> Result<Vec<Vec<SidePoint>>> {
    let p = model.p();
    let small: Vec<i64> = w
        .iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::InvalidCurve("coordinate too large to trace".into())))
        .collect::<Result<_>>()?;
    let sides: Vec<usize> = small[..p].iter().map(|&x| x as usize).collect();
    let over = |offset: usize| -> Vec<i64> {
        let mut o = vec![0, small[0]];
        o.extend_from_slice(&small[offset..offset + p - 3]);
        o.push(small[p - 1]);
        o.push(0);
        o
    };
    let front = face_matching(p, &sides, &over(p))?;
    let back = face_matching(p, &sides, &over(2 * p - 3))?;
    let mut seen: Vec<Vec<bool>> = sides.iter().map(|&n| vec![false; n]).collect();
    let mut comps = Vec::new();
    for s in 0..p {
        for i in 0..sides[s] {
            if seen[s][i] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = (s, i);
            let mut in_front = true;
            loop {
                seen[cur.0][cur.1] = true;
                cycle.push(cur);
                cur = if in_front { front[cur.0][cur.1] } else { back[cur.0][cur.1] };
                in_front = !in_front;
                if cur == (s, i) && in_front {
                    break;
                }
            }
            comps.push(cycle);
        }
    }
    Ok(comps)
}

/// Type of a complementary region of a union of curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// An open disk.
    Disk,
    /// A disk containing one puncture.
    PuncturedDisk,
    /// Anything else (an essential curve hides inside).
    Other,
}

/// One complementary region.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Region {
    /// Topological type.
    pub kind: RegionKind,
    /// Number of punctures inside.
    pub punctures: usize,
    /// Euler characteristic of the open region.
    pub euler: i64,
}

/// Region census of a reduced arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    /// Regions in a deterministic order.
    pub regions: Vec<Region>,
    /// Number of crossings of the drawn union.
    pub crossings: usize,
}

/// Several chord curves drawn together.
#[derive(Clone, Debug)]
pub struct Arrangement {
    p: usize,
    curves: Vec<ChordCurve>,
    /// Per side, the points of all curves in order: `(curve, local index)`.
    order: Vec<Vec<(usize, usize)>>,
    /// `rank[curve][side][local]`: position in `order[side]`.
    rank: Vec<Vec<Vec<usize>>>,
    /// Offset making `(side, rank)` a single line coordinate.
    stride: usize,
}

impl Arrangement {
    /// Draw the curves together, interleaving points on each side by their
    /// relative position along the side.
    pub fn new(curves: Vec<ChordCurve>) -> Result<Arrangement> {
        let p = curves
            .first()
            .map(|c| c.p)
            .ok_or_else(|| Error::InvalidCurve("an arrangement needs at least one curve".into()))?;
        if let Some(bad) = curves.iter().find(|c| c.p != p) {
            return Err(Error::SurfaceMismatch { left: p, right: bad.p });
        }
        let mut order = Vec::with_capacity(p);
        for s in 0..p {
            let mut pts: Vec<(u128, u128, usize, usize)> = Vec::new();
            for (ci, c) in curves.iter().enumerate() {
                let n = c.side_counts[s] as u128;
                for k in 0..c.side_counts[s] {
                    pts.push((2 * k as u128 + 1, 2 * n, ci, k));
                }
            }
            // Sort by the fraction num/den, then by curve index.
            pts.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)).then(a.2.cmp(&b.2)));
            order.push(pts.into_iter().map(|(_, _, ci, k)| (ci, k)).collect());
        }
        let stride = order.iter().map(Vec::len).sum::<usize>() + 2;
        let rank = curves.iter().map(|c| c.side_counts.iter().map(|&n| vec![0; n]).collect()).collect();
        let mut arr = Arrangement { p, curves, order, rank, stride };
        arr.rerank();
        Ok(arr)
    }

    fn rerank(&mut self) {
        for (s, pts) in self.order.iter().enumerate() {
            for (r, &(ci, k)) in pts.iter().enumerate() {
                self.rank[ci][s][k] = r;
            }
        }
    }

    /// Number of drawn curves.
    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    /// Line coordinate of point `idx` of curve `c`.
    fn key(&self, c: usize, idx: usize) -> usize {
        let (s, k) = self.curves[c].points[idx];
        s * self.stride + self.rank[c][s][k] + 1
    }

    fn chord_keys(&self, c: usize, t: usize) -> (usize, usize) {
        let n = self.curves[c].points.len();
        let a = self.key(c, t);
        let b = self.key(c, (t + 1) % n);
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn chords_cross(&self, c1: usize, t1: usize, c2: usize, t2: usize) -> bool {
        if face_of(t1) != face_of(t2) {
            return false;
        }
        let (a, b) = self.chord_keys(c1, t1);
        let (c, d) = self.chord_keys(c2, t2);
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    }

    /// All crossing chord pairs between curves `c1` and `c2`.
    fn crossing_pairs(&self, c1: usize, c2: usize) -> Vec<(usize, usize)> {
        let keys = |c: usize| -> Vec<(usize, usize)> {
            (0..self.curves[c].points.len()).map(|t| self.chord_keys(c, t)).collect()
        };
        let (k1, k2) = (keys(c1), keys(c2));
        let mut out = Vec::new();
        for (t1, &(a, b)) in k1.iter().enumerate() {
            for t2 in (t1 % 2..k2.len()).step_by(2) {
                let (c, d) = k2[t2];
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    out.push((t1, t2));
                }
            }
        }
        out
    }

    /// Number of crossings between two drawn curves.
    pub fn crossings_between(&self, c1: usize, c2: usize) -> usize {
        self.crossing_pairs(c1, c2).len()
    }

    /// Are points of `a` and `b` on the same side with no other point of
    /// either curve between them?
    fn adjacent(&self, ca: usize, ia: usize, cb: usize, ib: usize) -> bool {
        let (sa, ka) = self.curves[ca].points[ia];
        let (sb, kb) = self.curves[cb].points[ib];
        if sa != sb {
            return false;
        }
        let ra = self.rank[ca][sa][ka];
        let rb = self.rank[cb][sb][kb];
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        !self.order[sa][lo + 1..hi].iter().any(|&(c, _)| c == ca || c == cb)
    }

    /// Look for a bigon with a corner at the crossing of chords `ta` of `ca`
    /// and `tb` of `cb`; returns the chain of point pairs along its sides.
    fn bigon_at(&self, ca: usize, cb: usize, ta: usize, tb: usize) -> Option<Vec<(usize, usize)>> {
        let na = self.curves[ca].points.len() as i64;
        let nb = self.curves[cb].points.len() as i64;
        for da in [1i64, -1] {
            for db in [1i64, -1] {
                let (mut xa, mut xb) = (ta as i64, tb as i64);
                let mut chain = Vec::new();
                for _ in 0..na.min(nb) {
                    let pa = if da > 0 { xa + 1 } else { xa }.rem_euclid(na) as usize;
                    let pb = if db > 0 { xb + 1 } else { xb }.rem_euclid(nb) as usize;
                    if !self.adjacent(ca, pa, cb, pb) {
                        break;
                    }
                    chain.push((pa, pb));
                    xa = (xa + da).rem_euclid(na);
                    xb = (xb + db).rem_euclid(nb);
                    if (xa as usize, xb as usize) == (ta, tb) {
                        break;
                    }
                    if self.chords_cross(ca, xa as usize, cb, xb as usize) {
                        return Some(chain);
                    }
                }
            }
        }
        None
    }

    /// Push curve `ca` across a bigon: each of its chain points moves to the
    /// far side of the partner point of `cb`.
    fn remove_bigon(&mut self, ca: usize, cb: usize, chain: &[(usize, usize)]) {
        for &(pa, pb) in chain {
            let (s, ka) = self.curves[ca].points[pa];
            let (_, kb) = self.curves[cb].points[pb];
            let ra = self.rank[ca][s][ka];
            let rb = self.rank[cb][s][kb];
            let entry = self.order[s].remove(ra);
            let rb_now = if ra < rb { rb - 1 } else { rb };
            let at = if ra < rb { rb_now + 1 } else { rb_now };
            self.order[s].insert(at, entry);
            for (r, &(ci, k)) in self.order[s].iter().enumerate() {
                self.rank[ci][s][k] = r;
            }
        }
    }

    /// Remove bigons between every pair of curves until none is left.
    ///
    /// Each pass snapshots the crossings of a pair and removes every bigon
    /// found at a crossing that still exists; passes repeat until one finds
    /// nothing.  `budget` bounds the number of removals; exceeding it is
    /// reported as an oracle-scale error.
    pub fn reduce(&mut self, budget: u64) -> Result<()> {
        let n = self.curves.len();
        let mut used = 0u64;
        loop {
            let mut changed = false;
            for a in 0..n {
                for b in a + 1..n {
                    loop {
                        let mut removed = false;
                        for (ta, tb) in self.crossing_pairs(a, b) {
                            if !self.chords_cross(a, ta, b, tb) {
                                continue;
                            }
                            if let Some(chain) = self.bigon_at(a, b, ta, tb) {
                                self.remove_bigon(a, b, &chain);
                                used += 1;
                                removed = true;
                                if used > budget {
                                    return Err(Error::OracleScaleExceeded {
                                        what: "bigon removal".into(),
                                        needed: used,
                                        cap: budget,
                                    });
                                }
                            }
                        }
                        if !removed {
                            break;
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    /// Complementary regions of the union of all drawn curves.
    ///
    /// Each face is cut by the chords into convex pieces.  Pieces touching
    /// the boundary are identified by the boundary gaps they contain (two
    /// gaps lie in the same piece iff no chord separates them); the remaining
    /// pieces are interior disks, counted via `1 + chords + crossings`.
    /// Regions are unions of pieces glued along side gaps, and the Euler
    /// characteristic of a region is `pieces - gaps`.
    pub fn census(&self) -> Census {
        let p = self.p;
        // Gap g on side s lies between points g-1 and g of that side.
        let gap_key = |s: usize, g: usize| -> usize { s * self.stride + g };
        let mut gaps: Vec<(usize, usize)> = Vec::new();
        for s in 0..p {
            for g in 0..=self.order[s].len() {
                gaps.push((s, g));
            }
        }
        let gap_index: HashMap<(usize, usize), usize> = gaps.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        // Piece id per (face, gap), plus piece counts.
        let mut piece_of_gap: [Vec<usize>; 2] = [vec![0; gaps.len()], vec![0; gaps.len()]];
        let mut pieces_per_face = [0usize; 2];
        let mut interior_per_face = [0usize; 2];
        let mut total_crossings = 0usize;
        for (fi, face) in [Face::Front, Face::Back].into_iter().enumerate() {
            let mut chords: Vec<(usize, usize)> = Vec::new();
            for c in 0..self.curves.len() {
                for t in 0..self.curves[c].points.len() {
                    if face_of(t) == face {
                        let (a, b) = self.chord_keys(c, t);
                        // Convert point keys to positions between gap keys:
                        // point with rank r on side s sits between gaps r and r+1.
                        chords.push((2 * a, 2 * b));
                    }
                }
            }
            let mut crossings = 0usize;
            for i in 0..chords.len() {
                for j in i + 1..chords.len() {
                    let (a, b) = chords[i];
                    let (c, d) = chords[j];
                    if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                        crossings += 1;
                    }
                }
            }
            total_crossings += crossings;
            let mut signatures: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
            for (gi, &(s, g)) in gaps.iter().enumerate() {
                // Gap g sits just before the point with rank g (key s*stride+g+1).
                let pos = 2 * gap_key(s, g) + 1;
                let sig: Vec<bool> = chords.iter().map(|&(a, b)| a < pos && pos < b).collect();
                let next = signatures.len();
                let id = *signatures.entry(sig).or_insert(next);
                piece_of_gap[fi][gi] = id;
            }
            let boundary = signatures.len();
            let total = 1 + chords.len() + crossings;
            pieces_per_face[fi] = boundary;
            interior_per_face[fi] = total - boundary;
        }
        // Union-find over boundary pieces of both faces.
        let offset = pieces_per_face[0];
        let mut parent: Vec<usize> = (0..offset + pieces_per_face[1]).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for (&lo, &hi) in piece_of_gap[0].iter().zip(&piece_of_gap[1]) {
            let a = find(&mut parent, lo);
            let b = find(&mut parent, offset + hi);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut pieces: BTreeMap<usize, i64> = BTreeMap::new();
        for x in 0..parent.len() {
            let r = find(&mut parent, x);
            *pieces.entry(r).or_insert(0) += 1;
        }
        let mut gap_count: BTreeMap<usize, i64> = BTreeMap::new();
        for &piece in piece_of_gap[0].iter() {
            let r = find(&mut parent, piece);
            *gap_count.entry(r).or_insert(0) += 1;
        }
        let mut punctures: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..p {
            // v_v is the initial vertex of side v: gap 0 of side v.
            let gi = gap_index[&(v, 0)];
            let r = find(&mut parent, piece_of_gap[0][gi]);
            *punctures.entry(r).or_insert(0) += 1;
        }
        let mut regions = Vec::new();
        for (&root, &count) in &pieces {
            let euler = count - gap_count.get(&root).copied().unwrap_or(0);
            let k = punctures.get(&root).copied().unwrap_or(0);
            let kind = match (euler, k) {
                (1, 0) => RegionKind::Disk,
                (0, 1) => RegionKind::PuncturedDisk,
                _ => RegionKind::Other,
            };
            regions.push(Region { kind, punctures: k, euler });
        }
        for _ in 0..interior_per_face[0] + interior_per_face[1] {
            regions.push(Region { kind: RegionKind::Disk, punctures: 0, euler: 1 });
        }
        Census { regions, crossings: total_crossings }
    }

    /// Annular projection distance `d_γ(a, b)` where `γ` is curve `axis` and
    /// `a`, `b` are curves `ca`, `cb` of a reduced arrangement.
    ///
    /// Every crossing `x` of `a` with `γ` determines a lift of `a` to the
    /// annular cover of `γ` that crosses the core.  The cover is assembled
    /// from polygon copies: the *core* copies are the faces crossed by the
    /// closed lift of `γ`, and every other side of a core copy opens a
    /// tree-like *branch*.  Two lifts can only meet in copies both visit;
    /// they share the core, and a branch only as long as they cross the same
    /// sides.  The distance between lifts is one plus their crossing count,
    /// and `d_γ(a, b)` is the maximum over all pairs of lifts (at least one,
    /// the diameter of a single projection).
    pub fn annular_distance(&self, axis: usize, ca: usize, cb: usize) -> Result<u64> {
        let lifts_a = self.lifts(axis, ca)?;
        let lifts_b = self.lifts(axis, cb)?;
        if lifts_a.is_empty() || lifts_b.is_empty() {
            return Err(Error::DisjointFromAxis("no crossing with the axis in the drawing".into()));
        }
        let mut best = 1u64;
        for la in &lifts_a {
            for lb in &lifts_b {
                let n = self.lift_crossings(ca, la, cb, lb);
                best = best.max(1 + n);
            }
        }
        Ok(best)
    }

    /// Lifts of curve `c` through each of its crossings with `axis`.
    fn lifts(&self, axis: usize, c: usize) -> Result<Vec<Lift>> {
        let g = &self.curves[axis];
        let n_axis = g.points.len();
        let n_c = self.curves[c].points.len() as i64;
        let mut out = Vec::new();
        for (tc, tg) in self.crossing_pairs(c, axis) {
            let mut core = vec![(tg, tc)];
            let mut tails = Vec::new();
            for dir in [1i64, -1] {
                let mut copy = tg;
                let mut chord = tc as i64;
                let mut steps = 0usize;
                loop {
                    steps += 1;
                    if steps > 4 * (n_axis + n_c as usize) * (n_axis + 1) {
                        return Err(Error::OracleScaleExceeded {
                            what: "lift along the annular core".into(),
                            needed: steps as u64,
                            cap: (4 * (n_axis + n_c as usize) * (n_axis + 1)) as u64,
                        });
                    }
                    let exit_pt = if dir > 0 { chord + 1 } else { chord }.rem_euclid(n_c) as usize;
                    let side = self.curves[c].points[exit_pt].0;
                    let core_next = g.points[(copy + 1) % n_axis].0;
                    let core_prev = g.points[copy].0;
                    chord = (chord + dir).rem_euclid(n_c);
                    if side == core_next {
                        copy = (copy + 1) % n_axis;
                    } else if side == core_prev {
                        copy = (copy + n_axis - 1) % n_axis;
                    } else {
                        tails.push(Tail { root: (copy, side), chord: chord as usize, dir });
                        break;
                    }
                    core.push((copy, chord as usize));
                }
            }
            out.push(Lift { core, tails });
        }
        Ok(out)
    }

    fn lift_crossings(&self, ca: usize, la: &Lift, cb: usize, lb: &Lift) -> u64 {
        let mut count = 0u64;
        let mut by_copy: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(copy, chord) in &lb.core {
            by_copy.entry(copy).or_default().push(chord);
        }
        for &(copy, chord) in &la.core {
            if let Some(list) = by_copy.get(&copy) {
                for &other in list {
                    if self.chords_cross(ca, chord, cb, other) {
                        count += 1;
                    }
                }
            }
        }
        let na = self.curves[ca].points.len() as i64;
        let nb = self.curves[cb].points.len() as i64;
        for ta in &la.tails {
            for tb in &lb.tails {
                if ta.root != tb.root {
                    continue;
                }
                let (mut xa, mut xb) = (ta.chord as i64, tb.chord as i64);
                let mut seen = std::collections::HashSet::new();
                loop {
                    if !seen.insert((xa, xb)) {
                        break;
                    }
                    if self.chords_cross(ca, xa as usize, cb, xb as usize) {
                        count += 1;
                    }
                    let ea = if ta.dir > 0 { xa + 1 } else { xa }.rem_euclid(na) as usize;
                    let eb = if tb.dir > 0 { xb + 1 } else { xb }.rem_euclid(nb) as usize;
                    if self.curves[ca].points[ea].0 != self.curves[cb].points[eb].0 {
                        break;
                    }
                    xa = (xa + ta.dir).rem_euclid(na);
                    xb = (xb + tb.dir).rem_euclid(nb);
                }
            }
        }
        count
    }
}

/// A lift of a curve to the annular cover, crossing the core once.
#[derive(Clone, Debug)]
struct Lift {
    /// `(core copy, chord)` pairs visited while inside the core.
    core: Vec<(usize, usize)>,
    /// Where the lift leaves the core, in each direction.
    tails: Vec<Tail>,
}

#[derive(Clone, Debug)]
struct Tail {
    /// `(core copy, side)` through which the lift enters its branch.
    root: (usize, usize),
    /// First chord inside the branch.
    chord: usize,
    /// Direction of travel along the curve.
    dir: i64,
}
