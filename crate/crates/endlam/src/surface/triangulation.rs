// SPDX-License-Identifier: MIT OR Apache-2.0
//! Ideal triangulations with oriented edge labels, flips and isometries.
//!
//! Edges carry non-negative indices `0..zeta`; an oriented edge is an `i32`
//! label where `i` and `!i` (that is `-i - 1`) are the two orientations of
//! edge `i`.  Triangles list their three oriented sides anticlockwise.
//!
//! The only consumer is the half-twist compiler below: a half twist about an
//! edge joining two punctures is realised by a sequence of flips which ends
//! in a triangulation combinatorially isomorphic to the start, followed by the
//! relabelling given by that isomorphism.  Recording the flips and the
//! relabelling once per edge yields an [`OpList`] that acts on normal
//! coordinates by pure integer arithmetic.

use num_bigint::BigInt;
use std::collections::{BTreeMap, HashMap};

/// Edge index underlying an oriented label.
#[inline]
pub(crate) fn edge_index(label: i32) -> usize {
    if label >= 0 {
        label as usize
    } else {
        (!label) as usize
    }
}

/// A triangulation of a punctured surface, stored by oriented edge labels.
#[derive(Clone, Debug)]
pub(crate) struct Triangulation {
    triangles: Vec<[i32; 3]>,
    /// `corner[l] = (l, next, prev)` for the triangle containing `l`.
    corner: HashMap<i32, [i32; 3]>,
    /// Vertex class of each oriented label (the puncture at its tail).
    vertex_of: HashMap<i32, usize>,
    /// Cyclic list of outgoing oriented labels per vertex.
    vertices: Vec<Vec<i32>>,
    zeta: usize,
}

impl Triangulation {
    pub(crate) fn new(triangles: Vec<[i32; 3]>) -> Self {
        let mut corner = HashMap::new();
        for t in &triangles {
            for r in 0..3 {
                corner.insert(t[r], [t[r], t[(r + 1) % 3], t[(r + 2) % 3]]);
            }
        }
        let zeta = triangles.len() * 3 / 2;
        let mut labels: Vec<i32> = corner.keys().copied().collect();
        labels.sort_unstable();
        let mut vertex_of = HashMap::new();
        let mut vertices = Vec::new();
        for &start in &labels {
            if vertex_of.contains_key(&start) {
                continue;
            }
            let id = vertices.len();
            let mut cycle = vec![start];
            vertex_of.insert(start, id);
            loop {
                let last = *cycle.last().expect("cycle is non-empty");
                let next = !corner[&last][2];
                if vertex_of.contains_key(&next) {
                    break;
                }
                vertex_of.insert(next, id);
                cycle.push(next);
            }
            vertices.push(cycle);
        }
        Triangulation { triangles, corner, vertex_of, vertices, zeta }
    }

    pub(crate) fn zeta(&self) -> usize {
        self.zeta
    }

    pub(crate) fn triangles(&self) -> &[[i32; 3]] {
        &self.triangles
    }

    pub(crate) fn vertices(&self) -> &[Vec<i32>] {
        &self.vertices
    }

    pub(crate) fn corner(&self, label: i32) -> [i32; 3] {
        self.corner[&label]
    }

    /// Number of oriented edges leaving the vertex at the tail of `label`.
    pub(crate) fn valence(&self, label: i32) -> usize {
        self.vertices[self.vertex_of[&label]].len()
    }

    /// Flip the edge carrying `label`, returning the new triangulation and the
    /// coordinate update it induces.
    pub(crate) fn flip(&self, label: i32) -> (Triangulation, Op) {
        let ta = self.corner(label);
        let tb = self.corner(!label);
        let (a, b, c, d) = (ta[1], ta[2], tb[1], tb[2]);
        let same = |t: &[i32; 3], u: &[i32; 3]| {
            let mut x = *t;
            let mut y = *u;
            x.sort_unstable();
            y.sort_unstable();
            x == y
        };
        let mut kept: Vec<[i32; 3]> =
            self.triangles.iter().filter(|t| !same(t, &ta) && !same(t, &tb)).copied().collect();
        let e = if label >= 0 { label } else { !label };
        if label >= 0 {
            kept.push([e, d, a]);
            kept.push([!e, b, c]);
        } else {
            kept.push([!e, d, a]);
            kept.push([e, b, c]);
        }
        let op = Op::Flip {
            edge: edge_index(label),
            a: edge_index(a),
            b: edge_index(b),
            c: edge_index(c),
            d: edge_index(d),
        };
        (Triangulation::new(kept), op)
    }

    /// Find the combinatorial isomorphism extending `seed` (a map of oriented
    /// labels from `self` to `other`), if one exists.
    pub(crate) fn find_isometry(&self, other: &Triangulation, seed: &[(i32, i32)]) -> Option<BTreeMap<i32, i32>> {
        let mut map: BTreeMap<i32, i32> = seed.iter().copied().collect();
        let mut todo: Vec<(i32, i32)> = seed.to_vec();
        while let Some((from, to)) = todo.pop() {
            let candidates = [(!from, !to), (self.corner(from)[1], other.corner(to)[1])];
            for (nf, nt) in candidates {
                match map.get(&nf) {
                    Some(&existing) if existing != nt => return None,
                    Some(_) => {}
                    None => {
                        if self.valence(nf) != other.valence(nt) {
                            return None;
                        }
                        map.insert(nf, nt);
                        todo.push((nf, nt));
                    }
                }
            }
        }
        (map.len() == 2 * self.zeta).then_some(map)
    }
}

/// One step of a coordinate transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    /// Replace the weight of `edge` by `max(w[a]+w[c], w[b]+w[d]) - w[edge]`.
    Flip { edge: usize, a: usize, b: usize, c: usize, d: usize },
    /// Move the weight at index `i` to index `dst[i]`.
    Relabel(Vec<usize>),
}

/// A mapping class realised as flips and relabellings on normal coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct OpList {
    ops: Vec<Op>,
}

impl OpList {
    pub(crate) fn from_ops(ops: Vec<Op>) -> Self {
        OpList { ops }
    }

    /// The composite `self` followed by `then`.
    pub(crate) fn then(&self, then: &OpList) -> OpList {
        let mut ops = self.ops.clone();
        ops.extend(then.ops.iter().cloned());
        OpList { ops }
    }

    pub(crate) fn inverse(&self) -> OpList {
        let ops = self
            .ops
            .iter()
            .rev()
            .map(|op| match op {
                Op::Flip { .. } => op.clone(),
                Op::Relabel(dst) => {
                    let mut inv = vec![0; dst.len()];
                    for (src, &d) in dst.iter().enumerate() {
                        inv[d] = src;
                    }
                    Op::Relabel(inv)
                }
            })
            .collect();
        OpList { ops }
    }

    pub(crate) fn flip_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, Op::Flip { .. })).count()
    }

    /// Apply to normal coordinates in place.
    pub(crate) fn apply(&self, w: &mut Vec<BigInt>) {
        for op in &self.ops {
            match op {
                Op::Flip { edge, a, b, c, d } => {
                    let left = &w[*a] + &w[*c];
                    let right = &w[*b] + &w[*d];
                    let top = if left >= right { left } else { right };
                    w[*edge] = top - &w[*edge];
                }
                Op::Relabel(dst) => {
                    let mut moved = vec![BigInt::default(); w.len()];
                    for (src, &d) in dst.iter().enumerate() {
                        moved[d] = std::mem::take(&mut w[src]);
                    }
                    *w = moved;
                }
            }
        }
    }
}

/// Compile the half twist about the edge labelled `edge` (whose endpoints are
/// two distinct punctures) into an [`OpList`] acting on coordinates of `tri`.
pub(crate) fn half_twist(tri: &Triangulation, edge: i32) -> OpList {
    let edge = if tri.valence(edge) > tri.valence(!edge) { !edge } else { edge };
    let mut conj = Vec::new();
    let mut current = tri.clone();
    while current.valence(edge) > 1 {
        let (next, op) = current.flip(current.corner(edge)[2]);
        conj.push(op);
        current = next;
    }
    let middle = current.clone();
    let mut twist = Vec::new();
    while current.valence(!edge) > 1 {
        let (next, op) = current.flip(current.corner(!edge)[2]);
        twist.push(op);
        current = next;
    }
    let iso = current.find_isometry(&middle, &[(edge, !edge)]).expect("half twist closes up to an isometry");
    let mut dst = vec![0; tri.zeta()];
    for (from, to) in iso {
        dst[edge_index(from)] = edge_index(to);
    }
    let mut ops = conj.clone();
    ops.extend(twist);
    ops.push(Op::Relabel(dst));
    ops.extend(conj.into_iter().rev());
    OpList::from_ops(ops)
}
