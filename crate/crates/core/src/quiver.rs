//! Ice quivers, exchange matrices and three-step quiver mutation.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub id: String,
    pub t: usize,
    pub h: usize,
}

impl Arrow {
    pub fn new(id: impl Into<String>, t: usize, h: usize) -> Self {
        Arrow { id: id.into(), t, h }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Loop(String),
    FrozenFrozenArrow(String),
    DuplicateId(String),
    VertexOutOfRange(String),
    MutableCountExceedsVertices,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Loop(a) => write!(f, "arrow {} is a loop", a),
            Violation::FrozenFrozenArrow(a) => write!(f, "arrow {} joins two frozen vertices", a),
            Violation::DuplicateId(a) => write!(f, "arrow id {} used twice", a),
            Violation::VertexOutOfRange(a) => write!(f, "arrow {} has an endpoint out of range", a),
            Violation::MutableCountExceedsVertices => write!(f, "n exceeds m"),
        }
    }
}

/// Vertices 1..=m, of which 1..=n are mutable. Arrows are kept sorted by id,
/// so an arrow's index is its rank in id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IceQuiver {
    m: usize,
    n: usize,
    arrows: Vec<Arrow>,
}

impl IceQuiver {
    pub fn new(m: usize, n: usize, arrows: Vec<Arrow>) -> Result<Self> {
        let q = IceQuiver::new_unchecked(m, n, arrows);
        let v = q.validate();
        if v.is_empty() {
            Ok(q)
        } else {
            let msgs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Err(Error::InvalidQuiver(msgs.join("; ")))
        }
    }

    /// No invariant checks beyond sorting. Quivers produced by QP
    /// premutation may carry arrows between frozen vertices.
    pub fn new_unchecked(m: usize, n: usize, mut arrows: Vec<Arrow>) -> Self {
        arrows.sort();
        IceQuiver { m, n, arrows }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n > self.m {
            out.push(Violation::MutableCountExceedsVertices);
        }
        let mut seen = BTreeSet::new();
        for a in &self.arrows {
            if !seen.insert(a.id.as_str()) {
                out.push(Violation::DuplicateId(a.id.clone()));
            }
            if a.t == 0 || a.h == 0 || a.t > self.m || a.h > self.m {
                out.push(Violation::VertexOutOfRange(a.id.clone()));
                continue;
            }
            if a.t == a.h {
                out.push(Violation::Loop(a.id.clone()));
            }
            if a.t > self.n && a.h > self.n {
                out.push(Violation::FrozenFrozenArrow(a.id.clone()));
            }
        }
        out
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, idx: usize) -> &Arrow {
        &self.arrows[idx]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.arrows.binary_search_by(|a| a.id.as_str().cmp(id)).ok()
    }

    pub fn is_mutable(&self, k: usize) -> bool {
        k >= 1 && k <= self.n
    }

    /// Indices of arrows with head k, then of arrows with tail k.
    pub fn incident(&self, k: usize) -> (Vec<usize>, Vec<usize>) {
        let ins = (0..self.arrows.len()).filter(|&i| self.arrows[i].h == k).collect();
        let outs = (0..self.arrows.len()).filter(|&i| self.arrows[i].t == k).collect();
        (ins, outs)
    }

    pub fn has_two_cycle_at(&self, k: usize) -> bool {
        let (ins, outs) = self.incident(k);
        ins.iter().any(|&a| outs.iter().any(|&b| self.arrows[b].h == self.arrows[a].t))
    }

    /// Some pair of antiparallel arrows, if the quiver has a 2-cycle.
    pub fn find_two_cycle(&self) -> Option<(usize, usize)> {
        for (i, a) in self.arrows.iter().enumerate() {
            for (j, b) in self.arrows.iter().enumerate().skip(i + 1) {
                if a.t == b.h && a.h == b.t {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Same arrows with reversed orientation.
    pub fn opposite(&self) -> IceQuiver {
        IceQuiver::new_unchecked(
            self.m,
            self.n,
            self.arrows.iter().map(|a| Arrow::new(a.id.clone(), a.h, a.t)).collect(),
        )
    }

    /// Multiset of (tail, head) pairs; equality ignores arrow names.
    pub fn arrow_multiset(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for a in &self.arrows {
            *out.entry((a.t, a.h)).or_insert(0) += 1;
        }
        out
    }

    /// Vertex ell has no outgoing arrows.
    pub fn is_sink(&self, ell: usize) -> bool {
        self.arrows.iter().all(|a| a.t != ell)
    }
}

/// Exchange matrix b[i][j] = #(j -> i) - #(i -> j), stored as the full
/// m x m skew-symmetric matrix; the conventional m x n matrix is its first
/// n columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BMatrix {
    m: usize,
    n: usize,
    b: Vec<Vec<i64>>,
}

impl BMatrix {
    pub fn from_full(n: usize, b: Vec<Vec<i64>>) -> Self {
        let m = b.len();
        BMatrix { m, n, b }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based entry.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i - 1][j - 1]
    }

    pub fn full(&self) -> &[Vec<i64>] {
        &self.b
    }

    /// The m x n exchange matrix.
    pub fn entries(&self) -> Vec<Vec<i64>> {
        self.b.iter().map(|row| row[..self.n].to_vec()).collect()
    }

    pub fn is_principal_skew(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.b[i][j] == -self.b[j][i]))
    }

    /// Vertex ell has no outgoing arrows in the 2-acyclic quiver of B.
    pub fn is_sink(&self, ell: usize) -> bool {
        (0..self.m).all(|j| self.b[j][ell - 1] <= 0)
    }

    /// The 2-acyclic quiver described by the full matrix. Frozen-frozen
    /// entries are ignored.
    pub fn to_quiver(&self) -> IceQuiver {
        let mut arrows = Vec::new();
        for i in 0..self.m {
            for j in 0..self.m {
                if i >= self.n && j >= self.n {
                    continue;
                }
                let c = self.b[j][i];
                for r in 0..c.max(0) {
                    arrows.push(Arrow::new(format!("{}_{}_{}", i + 1, j + 1, r), i + 1, j + 1));
                }
            }
        }
        IceQuiver::new_unchecked(self.m, self.n, arrows)
    }
}

pub fn b_matrix(q: &IceQuiver) -> BMatrix {
    let mut b = vec![vec![0i64; q.m]; q.m];
    for a in &q.arrows {
        b[a.h - 1][a.t - 1] += 1;
        b[a.t - 1][a.h - 1] -= 1;
    }
    BMatrix { m: q.m, n: q.n, b }
}

pub fn mutate_b_matrix(b: &BMatrix, k: usize) -> BMatrix {
    let k0 = k - 1;
    let pos = |x: i64| x.max(0);
    let mut out = b.b.clone();
    for i in 0..b.m {
        for j in 0..b.m {
            out[i][j] = if i >= b.n && j >= b.n {
                0
            } else if i == k0 || j == k0 {
                -b.b[i][j]
            } else {
                b.b[i][j] + pos(b.b[i][k0]) * pos(b.b[k0][j]) - pos(-b.b[i][k0]) * pos(-b.b[k0][j])
            };
        }
    }
    BMatrix { m: b.m, n: b.n, b: out }
}

/// "a" becomes "a*", and "a*" goes back to "a".
pub fn star_id(id: &str) -> String {
    match id.strip_suffix('*') {
        Some(s) => s.to_string(),
        None => format!("{}*", id),
    }
}

/// Name of the composite of `out` after `inc` through a mutated vertex.
pub fn composite_id(out: &str, inc: &str) -> String {
    format!("[{},{}]", out, inc)
}

/// Steps 1 and 2 of mutation: composites for every hook and reversal of the
/// arrows at k. Returns the arrow list and, for each composite, the ids of
/// its (outgoing, incoming) factors.
pub(crate) fn premutated_arrows(q: &IceQuiver, k: usize) -> (Vec<Arrow>, Vec<(String, String, String)>) {
    let (ins, outs) = q.incident(k);
    let mut arrows = Vec::new();
    let mut composites = Vec::new();
    for a in &q.arrows {
        if a.t != k && a.h != k {
            arrows.push(a.clone());
        }
    }
    for &i in &ins {
        for &o in &outs {
            let (ai, bo) = (&q.arrows[i], &q.arrows[o]);
            let id = composite_id(&bo.id, &ai.id);
            arrows.push(Arrow::new(id.clone(), ai.t, bo.h));
            composites.push((id, bo.id.clone(), ai.id.clone()));
        }
    }
    for &i in &ins {
        let a = &q.arrows[i];
        arrows.push(Arrow::new(star_id(&a.id), k, a.t));
    }
    for &o in &outs {
        let b = &q.arrows[o];
        arrows.push(Arrow::new(star_id(&b.id), b.h, k));
    }
    (arrows, composites)
}

pub fn mutate_quiver(q: &IceQuiver, k: usize) -> Result<IceQuiver> {
    if !q.is_mutable(k) {
        return Err(Error::NotMutable(k));
    }
    if q.has_two_cycle_at(k) {
        return Err(Error::TwoCycleAtK(k));
    }
    let (mut arrows, _) = premutated_arrows(q, k);
    arrows.sort();
    // step 3: greedy cancellation in id order
    let mut removed = vec![false; arrows.len()];
    for i in 0..arrows.len() {
        if removed[i] {
            continue;
        }
        let partner = (0..arrows.len())
            .find(|&j| j != i && !removed[j] && arrows[j].t == arrows[i].h && arrows[j].h == arrows[i].t);
        if let Some(j) = partner {
            removed[i] = true;
            removed[j] = true;
        }
    }
    let kept: Vec<Arrow> = arrows
        .into_iter()
        .zip(removed)
        .filter(|(a, r)| !r && !(a.t > q.n && a.h > q.n))
        .map(|(a, _)| a)
        .collect();
    Ok(IceQuiver::new_unchecked(q.m, q.n, kept))
}

/// Full subquiver on `keep` (1-based), relabeled order-preservingly.
/// Entry i of the returned map is the old label of new vertex i+1.
pub fn full_subquiver(q: &IceQuiver, keep: &BTreeSet<usize>) -> (IceQuiver, Vec<usize>) {
    let order: Vec<usize> = keep.iter().copied().filter(|&v| v >= 1 && v <= q.m).collect();
    let new_of: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    let n = order.iter().filter(|&&v| v <= q.n).count();
    let arrows = q
        .arrows
        .iter()
        .filter_map(|a| Some(Arrow::new(a.id.clone(), *new_of.get(&a.t)?, *new_of.get(&a.h)?)))
        .collect();
    (IceQuiver::new_unchecked(order.len(), n, arrows), order)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn sl3() -> IceQuiver {
        IceQuiver::new(3, 1, vec![Arrow::new("a", 1, 3), Arrow::new("b", 2, 1)]).unwrap()
    }

    #[test]
    fn validate_catches_violations() {
        assert!(sl3().validate().is_empty());
        let l = IceQuiver::new_unchecked(3, 1, vec![Arrow::new("x", 1, 1)]);
        assert_eq!(l.validate(), vec![Violation::Loop("x".into())]);
        let f = IceQuiver::new_unchecked(3, 1, vec![Arrow::new("x", 2, 3)]);
        assert_eq!(f.validate(), vec![Violation::FrozenFrozenArrow("x".into())]);
    }

    #[test]
    fn sl3_b_matrix() {
        let b = b_matrix(&sl3());
        assert_eq!(b.entries(), vec![vec![0], vec![-1], vec![1]]);
        assert!(b.is_principal_skew());
    }

    #[test]
    fn sl3_mutation() {
        let m = mutate_quiver(&sl3(), 1).unwrap();
        let ids: Vec<(&str, usize, usize)> = m.arrows().iter().map(|a| (a.id.as_str(), a.t, a.h)).collect();
        assert_eq!(ids, vec![("a*", 3, 1), ("b*", 1, 2)]);
        assert_eq!(b_matrix(&m), mutate_b_matrix(&b_matrix(&sl3()), 1));
        let back = mutate_quiver(&m, 1).unwrap();
        assert_eq!(back.arrow_multiset(), sl3().arrow_multiset());
    }

    #[test]
    fn single_arrow_flips() {
        let q = IceQuiver::new(2, 2, vec![Arrow::new("x", 1, 2)]).unwrap();
        let m = mutate_quiver(&q, 1).unwrap();
        assert_eq!(m.arrows(), &[Arrow::new("x*", 2, 1)]);
    }

    #[test]
    fn subquivers_of_sl3() {
        let (q2, map) = full_subquiver(&sl3(), &BTreeSet::from([1, 2]));
        assert_eq!(map, vec![1, 2]);
        assert_eq!(q2.arrows(), &[Arrow::new("b", 2, 1)]);
        let (q3, map) = full_subquiver(&sl3(), &BTreeSet::from([1, 3]));
        assert_eq!(map, vec![1, 3]);
        assert_eq!(q3.arrows(), &[Arrow::new("a", 1, 2)]);
        let (all, _) = full_subquiver(&sl3(), &BTreeSet::from([1, 2, 3]));
        assert_eq!(all, sl3());
    }

    #[test]
    fn two_cycle_rejected() {
        let q = IceQuiver::new(2, 2, vec![Arrow::new("x", 1, 2), Arrow::new("y", 2, 1)]).unwrap();
        assert_eq!(mutate_quiver(&q, 1), Err(Error::TwoCycleAtK(1)));
    }
}
