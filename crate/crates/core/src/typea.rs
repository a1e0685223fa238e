//! Type A: reduced words of w0, wiring diagrams, the quivers Γ_i with their
//! face potentials, rigorous paths, chamber coordinates, braid transitions
//! and string cones computed three ways.

use crate::error::{Error, Result};
use crate::linalg::q;
use crate::qp::{restrict_potential, Potential, QPInstance};
use crate::quiver::{Arrow, IceQuiver};
use crate::rep::{build_projective, enumerate_thin_quotients};
use crate::symbolic::{LaurentExpr, RationalExpr};
use num_integer::Integer;
use std::collections::{BTreeSet, HashMap, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    n: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reads n off the length N = n(n-1)/2.
    pub fn parse(letters: &[usize]) -> Result<Self> {
        let len = letters.len();
        let n = (1..=64).find(|n| n * (n - 1) / 2 == len).ok_or_else(|| {
            Error::InvalidWord(format!("length {len} is not n(n-1)/2"))
        })?;
        validate_reduced_word(n, letters)
    }

    /// j^+ (1-based), or N+1.
    pub fn next_same(&self, j: usize) -> usize {
        let l = self.letters[j - 1];
        (j + 1..=self.len()).find(|&s| self.letters[s - 1] == l).unwrap_or(self.len() + 1)
    }

    /// ℓ_i: the last position carrying letter i.
    pub fn last_position(&self, i: usize) -> usize {
        (1..=self.len()).rev().find(|&s| self.letters[s - 1] == i).expect("every letter occurs")
    }
}

/// Checks that the letters spell a reduced word for the longest element of
/// S_n: every pair of wires crosses exactly once.
pub fn validate_reduced_word(n: usize, letters: &[usize]) -> Result<ReducedWord> {
    if n < 2 {
        return Err(Error::InvalidWord("need at least two wires".into()));
    }
    if letters.len() != n * (n - 1) / 2 {
        return Err(Error::InvalidWord(format!("expected {} letters, got {}", n * (n - 1) / 2, letters.len())));
    }
    let mut pos: Vec<usize> = (1..=n).collect();
    let mut seen = BTreeSet::new();
    for &l in letters {
        if l == 0 || l >= n {
            return Err(Error::InvalidWord(format!("letter {l} out of range 1..{}", n - 1)));
        }
        let (p, r) = (pos[l - 1], pos[l]);
        if !seen.insert((p.min(r), p.max(r))) {
            return Err(Error::InvalidWord(format!("wires {} and {} cross twice", p.min(r), p.max(r))));
        }
        pos.swap(l - 1, l);
    }
    Ok(ReducedWord { n, letters: letters.to_vec() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub pos: usize,
    pub level: usize,
    pub wires: (usize, usize),
}

/// Wires 1..n start at positions 1..n from the bottom; letter L swaps the
/// wires at positions L and L+1.
#[derive(Clone, Debug)]
pub struct WiringDiagram {
    pub word: ReducedWord,
    pub crossings: Vec<Crossing>,
    /// Crossing positions on each wire, left to right (index 0 is wire 1).
    pub wire_vertices: Vec<Vec<usize>>,
    /// positions[x][w-1]: position of wire w after the first x crossings.
    positions: Vec<Vec<usize>>,
}

pub fn wiring(word: &ReducedWord) -> WiringDiagram {
    let n = word.n;
    let mut at: Vec<usize> = (1..=n).collect();
    let mut positions = Vec::new();
    let record = |at: &Vec<usize>| {
        let mut p = vec![0; n];
        for (i, &w) in at.iter().enumerate() {
            p[w - 1] = i + 1;
        }
        p
    };
    positions.push(record(&at));
    let mut crossings = Vec::new();
    let mut wire_vertices = vec![Vec::new(); n];
    for (s, &l) in word.letters.iter().enumerate() {
        let (p, r) = (at[l - 1], at[l]);
        crossings.push(Crossing { pos: s + 1, level: l, wires: (p.min(r), p.max(r)) });
        wire_vertices[p - 1].push(s + 1);
        wire_vertices[r - 1].push(s + 1);
        at.swap(l - 1, l);
        positions.push(record(&at));
    }
    WiringDiagram { word: word.clone(), crossings, wire_vertices, positions }
}

impl WiringDiagram {
    pub fn n(&self) -> usize {
        self.word.n
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn crossing(&self, s: usize) -> &Crossing {
        &self.crossings[s - 1]
    }

    /// Twice the height of wire w at abscissa x in 0..=N+1. Crossing s sits
    /// at height level + 1/2.
    fn height2(&self, w: usize, x: usize) -> i64 {
        if x >= 1 && x <= self.len() {
            let c = self.crossing(x);
            if c.wires.0 == w || c.wires.1 == w {
                return 2 * c.level as i64 + 1;
            }
        }
        2 * self.positions[x.min(self.len())][w - 1] as i64
    }

    /// Plain-text picture, top position first, one X per crossing.
    pub fn ascii(&self) -> String {
        let n = self.n();
        let mut rows: Vec<String> = (0..2 * n - 1)
            .map(|r| if r % 2 == 0 { format!("{} ", n - r / 2) } else { "  ".to_string() })
            .collect();
        for c in &self.crossings {
            for (r, row) in rows.iter_mut().enumerate() {
                let top = 2 * (n - c.level - 1);
                let piece = if r == top {
                    "-\\ /-"
                } else if r == top + 1 {
                    "  X  "
                } else if r == top + 2 {
                    "-/ \\-"
                } else if r % 2 == 0 {
                    "-----"
                } else {
                    "     "
                };
                row.push_str(piece);
            }
        }
        let last = &self.positions[self.len()];
        for (r, row) in rows.iter_mut().enumerate() {
            if r % 2 == 0 {
                let p = n - r / 2;
                let w = last.iter().position(|&x| x == p).expect("permutation") + 1;
                row.push_str(&format!("- {w}"));
            }
        }
        rows.iter().map(|r| r.trim_end().to_string()).collect::<Vec<_>>().join("\n")
    }
}

/// Γ_i with mutable vertices relabeled to come first.
#[derive(Clone, Debug)]
pub struct GammaQuiver {
    pub word: ReducedWord,
    pub quiver: IceQuiver,
    /// relabel[r-1] is the word position of vertex r.
    pub relabel: Vec<usize>,
    /// ell[i-1] is the (relabeled) frozen vertex of Dynkin index i.
    pub ell: Vec<usize>,
}

impl GammaQuiver {
    pub fn vertex_of_position(&self, s: usize) -> usize {
        self.relabel.iter().position(|&x| x == s).expect("position in range") + 1
    }

    /// Re-indexes an expression in the vertex variables into position
    /// variables.
    pub fn to_positions(&self, f: &LaurentExpr) -> LaurentExpr {
        f.reindex(&self.relabel.iter().map(|s| s - 1).collect::<Vec<_>>(), self.relabel.len())
    }

    pub fn to_vertices(&self, f: &LaurentExpr) -> LaurentExpr {
        let map: Vec<usize> = (1..=self.relabel.len()).map(|s| self.vertex_of_position(s) - 1).collect();
        f.reindex(&map, self.relabel.len())
    }

    pub fn arrow_id(t: usize, h: usize) -> String {
        format!("{t}>{h}")
    }
}

/// Vertices are the word positions. For j < s with j^+ or s^+ inside the
/// word and i_j, i_s equal or adjacent: j -> s if s = j^+, and s -> j if
/// s < j^+ < s^+. Frozen vertices are the last occurrences of each letter.
pub fn gamma_quiver(word: &ReducedWord) -> GammaQuiver {
    let big_n = word.len();
    let plus: Vec<usize> = (1..=big_n).map(|j| word.next_same(j)).collect();
    let mut edges = Vec::new();
    for j in 1..=big_n {
        for s in j + 1..=big_n {
            let (jp, sp) = (plus[j - 1], plus[s - 1]);
            if jp > big_n && sp > big_n {
                continue;
            }
            if s == jp {
                edges.push((j, s));
            } else if s < jp && jp < sp && word.letters[j - 1].abs_diff(word.letters[s - 1]) == 1 {
                edges.push((s, j));
            }
        }
    }
    let mutable: Vec<usize> = (1..=big_n).filter(|&j| plus[j - 1] <= big_n).collect();
    let frozen: Vec<usize> = (1..=big_n).filter(|&j| plus[j - 1] > big_n).collect();
    let relabel: Vec<usize> = mutable.iter().chain(&frozen).copied().collect();
    let mut to_new = vec![0; big_n + 1];
    for (r, &s) in relabel.iter().enumerate() {
        to_new[s] = r + 1;
    }
    let arrows = edges
        .into_iter()
        .map(|(t, h)| Arrow::new(GammaQuiver::arrow_id(to_new[t], to_new[h]), to_new[t], to_new[h]))
        .collect();
    let quiver = IceQuiver::new(big_n, mutable.len(), arrows).expect("Γ_i is an ice quiver");
    let ell = (1..word.n).map(|i| to_new[word.last_position(i)]).collect();
    GammaQuiver { word: word.clone(), quiver, relabel, ell }
}

fn segments_cross(p1: (i64, i64), p2: (i64, i64), p3: (i64, i64), p4: (i64, i64)) -> bool {
    let orient = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| {
        ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
    };
    let on_seg = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| {
        c.0 >= a.0.min(b.0) && c.0 <= a.0.max(b.0) && c.1 >= a.1.min(b.1) && c.1 <= a.1.max(b.1)
    };
    let shared = [p1, p2].iter().any(|x| *x == p3 || *x == p4);
    let (d1, d2, d3, d4) = (orient(p3, p4, p1), orient(p3, p4, p2), orient(p1, p2, p3), orient(p1, p2, p4));
    if shared {
        // touching at a common endpoint is fine unless the segments overlap
        return d1 == 0 && d2 == 0 && {
            let other = if p1 == p3 || p1 == p4 { p2 } else { p1 };
            let other2 = if p3 == p1 || p3 == p2 { p4 } else { p3 };
            on_seg(p3, p4, other) || on_seg(p1, p2, other2)
        };
    }
    if d1 != d2 && d3 != d4 && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0 {
        return true;
    }
    (d1 == 0 && on_seg(p3, p4, p1))
        || (d2 == 0 && on_seg(p3, p4, p2))
        || (d3 == 0 && on_seg(p1, p2, p3))
        || (d4 == 0 && on_seg(p1, p2, p4))
}

/// S(i): clockwise faces minus anticlockwise faces of Γ_i embedded with the
/// vertex at position j drawn at (j, i_j).
pub fn face_potential(g: &GammaQuiver) -> Result<Potential> {
    let quiver = &g.quiver;
    let point = |v: usize| {
        let s = g.relabel[v - 1];
        (s as i64, g.word.letters[s - 1] as i64)
    };
    let arrows = quiver.arrows();
    for (x, a) in arrows.iter().enumerate() {
        for b in &arrows[x + 1..] {
            if segments_cross(point(a.t), point(a.h), point(b.t), point(b.h)) {
                return Err(Error::NonPlanar);
            }
        }
    }
    let m = quiver.m();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
    let mut arrow_between: HashMap<(usize, usize), String> = HashMap::new();
    for a in arrows {
        nbrs[a.t].push(a.h);
        nbrs[a.h].push(a.t);
        arrow_between.insert((a.t, a.h), a.id.clone());
    }
    for v in 1..=m {
        let pv = point(v);
        nbrs[v].sort_by(|&a, &b| {
            let (pa, pb) = (point(a), point(b));
            let ta = ((pa.1 - pv.1) as f64).atan2((pa.0 - pv.0) as f64);
            let tb = ((pb.1 - pv.1) as f64).atan2((pb.0 - pv.0) as f64);
            ta.partial_cmp(&tb).expect("finite angles")
        });
        nbrs[v].dedup();
    }
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut pot = Potential::zero();
    for start in 1..=m {
        for &first in &nbrs[start] {
            if used.contains(&(start, first)) {
                continue;
            }
            let mut face = vec![start];
            let (mut u, mut v) = (start, first);
            loop {
                used.insert((u, v));
                if v == start {
                    break;
                }
                face.push(v);
                // next neighbour clockwise from u around v
                let ring = &nbrs[v];
                let at = ring.iter().position(|&x| x == u).expect("adjacent");
                let w = ring[(at + ring.len() - 1) % ring.len()];
                u = v;
                v = w;
            }
            let area2: i64 = (0..face.len())
                .map(|i| {
                    let (a, b) = (point(face[i]), point(face[(i + 1) % face.len()]));
                    a.0 * b.1 - b.0 * a.1
                })
                .sum();
            if area2 <= 0 {
                continue;
            }
            let distinct: BTreeSet<usize> = face.iter().copied().collect();
            if distinct.len() != face.len() {
                continue;
            }
            let len = face.len();
            let forward: Option<Vec<String>> = (0..len)
                .map(|i| arrow_between.get(&(face[i], face[(i + 1) % len])).cloned())
                .collect();
            let backward: Option<Vec<String>> = (0..len)
                .map(|i| arrow_between.get(&(face[(i + 1) % len], face[i])).cloned())
                .collect();
            // traversal order is written right to left
            if let Some(mut ids) = forward {
                ids.reverse();
                pot.add_term(q(-1), ids);
            } else if let Some(ids) = backward {
                pot.add_term(q(1), ids);
            }
        }
    }
    Ok(pot)
}

pub fn gamma_qp(word: &ReducedWord) -> Result<(GammaQuiver, QPInstance)> {
    let g = gamma_quiver(word);
    let s = face_potential(&g)?;
    let qp = QPInstance::new(g.quiver.clone(), s)?;
    Ok((g, qp))
}

/// Exponent matrix of ĈA: row j lists the exponents {j,s} of X_j in the
/// coordinates x_s, both indexed by word position.
pub fn ca_hat(word: &ReducedWord) -> Vec<Vec<i64>> {
    let big_n = word.len();
    let mut c = vec![vec![0i64; big_n]; big_n];
    for j in 1..=big_n {
        let jp = word.next_same(j);
        for s in 1..=big_n {
            c[j - 1][s - 1] = if s == j || s == jp {
                -1
            } else if j < s && s < jp && word.letters[j - 1].abs_diff(word.letters[s - 1]) == 1 {
                1
            } else {
                0
            };
        }
    }
    c
}

/// The same matrix read off the wiring diagram: the chamber right of
/// crossing k gets -1 at its left and right corners and +1 at every crossing
/// where a boundary wire reaches a local extremum.
pub fn ca_hat_chambers(word: &ReducedWord) -> Vec<Vec<i64>> {
    let d = wiring(word);
    let big_n = d.len();
    let mut c = vec![vec![0i64; big_n]; big_n];
    for k in 1..=big_n {
        let level = d.crossing(k).level;
        // the chamber has `level` wires strictly below it
        let right = (k + 1..=big_n).find(|&s| d.crossing(s).level == level);
        c[k - 1][k - 1] = -1;
        if let Some(r) = right {
            c[k - 1][r - 1] = -1;
        }
        let end = right.unwrap_or(big_n + 1);
        for s in k + 1..end {
            let mut hs: Vec<i64> = (1..=d.n()).map(|w| d.height2(w, s)).collect();
            hs.sort_unstable();
            let (lower, upper) = (hs[level - 1], hs[level]);
            let corner = 2 * d.crossing(s).level as i64 + 1;
            if lower == corner || upper == corner {
                c[k - 1][s - 1] = 1;
            }
        }
    }
    c
}

/// X_j = Π_s x_s^{C[j][s]} as rational expressions in x.
pub fn ca_hat_map(word: &ReducedWord) -> Vec<RationalExpr> {
    let c = ca_hat(word);
    c.iter()
        .map(|row| {
            let exp: Vec<i32> = row.iter().map(|&e| e as i32).collect();
            RationalExpr::from_laurent(LaurentExpr::monomial(exp, q(1)))
        })
        .collect()
}

/// A path in D(i): crossing positions and the wire used by each step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RigorousPath {
    pub index: usize,
    pub vertices: Vec<usize>,
    pub wires: Vec<usize>,
}

impl RigorousPath {
    pub fn labels(&self, d: &WiringDiagram) -> Vec<(usize, usize)> {
        self.vertices.iter().map(|&v| d.crossing(v).wires).collect()
    }
}

/// Paths in D(i) (wires p <= i run left to right, the others right to left)
/// from the rightmost crossing of wire i+1 to the rightmost crossing of wire
/// i, never passing straight through [p,q] along p when p < q <= i or when
/// i < q < p.
pub fn rigorous_paths(word: &ReducedWord, i: usize) -> Vec<RigorousPath> {
    let d = wiring(word);
    let big_n = d.len();
    let mut succ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); big_n + 1];
    for w in 1..=d.n() {
        for pair in d.wire_vertices[w - 1].windows(2) {
            if w <= i {
                succ[pair[0]].push((pair[1], w));
            } else {
                succ[pair[1]].push((pair[0], w));
            }
        }
    }
    let start = *d.wire_vertices[i].last().expect("wire has crossings");
    let end = *d.wire_vertices[i - 1].last().expect("wire has crossings");
    let blocked = |p: usize, other: usize| (p <= i && other <= i && p < other) || (p > i && other > i && p > other);
    let mut out = Vec::new();
    let mut verts = vec![start];
    let mut wires: Vec<usize> = Vec::new();
    fn dfs(
        d: &WiringDiagram,
        succ: &[Vec<(usize, usize)>],
        end: usize,
        index: usize,
        blocked: &dyn Fn(usize, usize) -> bool,
        verts: &mut Vec<usize>,
        wires: &mut Vec<usize>,
        out: &mut Vec<RigorousPath>,
    ) {
        let v = *verts.last().expect("nonempty");
        if v == end {
            out.push(RigorousPath { index, vertices: verts.clone(), wires: wires.clone() });
        }
        for &(u, w) in &succ[v] {
            if wires.last() == Some(&w) {
                let (p, q) = d.crossing(v).wires;
                let other = if p == w { q } else { p };
                if blocked(w, other) {
                    continue;
                }
            }
            if verts.contains(&u) {
                continue;
            }
            verts.push(u);
            wires.push(w);
            dfs(d, succ, end, index, blocked, verts, wires, out);
            verts.pop();
            wires.pop();
        }
    }
    dfs(&d, &succ, end, i, &blocked, &mut verts, &mut wires, &mut out);
    out.sort();
    out
}

/// The paths attached to Dynkin index i: those of D(n-i).
pub fn paths_for_index(word: &ReducedWord, i: usize) -> Vec<RigorousPath> {
    rigorous_paths(word, word.n - i)
}

/// a_[p,q] = +1 where γ moves from wire p to wire q, -1 from q to p. The
/// path enters on wire i+1 and leaves on wire i.
pub fn a_gamma(word: &ReducedWord, path: &RigorousPath) -> Vec<i64> {
    let d = wiring(word);
    let mut a = vec![0i64; d.len()];
    let last = path.vertices.len() - 1;
    for (idx, &v) in path.vertices.iter().enumerate() {
        let arr = if idx == 0 { path.index + 1 } else { path.wires[idx - 1] };
        let dep = if idx == last { path.index } else { path.wires[idx] };
        if arr == dep {
            continue;
        }
        let (p, q) = d.crossing(v).wires;
        a[v - 1] += if arr == p && dep == q { 1 } else { -1 };
    }
    a
}

/// Integer inequality system ⟨A_r, x⟩ >= 0 with primitive, deduplicated,
/// lexicographically sorted normals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub dim: usize,
    pub normals: Vec<Vec<i64>>,
}

fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

impl Cone {
    pub fn new(dim: usize, normals: impl IntoIterator<Item = Vec<i64>>) -> Self {
        let set: BTreeSet<Vec<i64>> =
            normals.into_iter().filter(|v| v.iter().any(|&x| x != 0)).map(|v| primitive(&v)).collect();
        Cone { dim, normals: set.into_iter().collect() }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.normals.iter().all(|a| a.iter().zip(x).map(|(p, q)| p * q).sum::<i64>() >= 0)
    }
}

/// Normals are the negated a-vectors of the paths of each index.
pub fn string_cone_gp(word: &ReducedWord) -> Cone {
    let normals = (1..word.n).flat_map(|i| {
        paths_for_index(word, i).into_iter().map(|p| a_gamma(word, &p).into_iter().map(|x| -x).collect())
    });
    Cone::new(word.len(), normals.collect::<Vec<_>>())
}

/// Inequalities of one Dynkin index from the thin quotients of the
/// projective at ℓ_i: a quotient with dimension vector e gives the exponent
/// vector -(e C) of X^{-e} pulled back along ĈA.
pub fn index_normals_fpoly(word: &ReducedWord, g: &GammaQuiver, qp: &QPInstance, i: usize, d_max: usize) -> Result<Vec<Vec<i64>>> {
    let c = ca_hat(word);
    let ell = g.ell[i - 1];
    let keep: BTreeSet<usize> = (1..=qp.quiver.n()).chain([ell]).collect();
    let (sub, map) = restrict_potential(qp, &keep);
    let p = build_projective(&sub, sub.quiver.m(), d_max)?;
    let quots = enumerate_thin_quotients(&sub.quiver, &p)?;
    let mut out = Vec::new();
    for e in quots {
        if e.iter().all(|&x| x == 0) {
            continue;
        }
        let mut normal = vec![0i64; word.len()];
        for (v, &ev) in e.iter().enumerate() {
            if ev == 0 {
                continue;
            }
            let pos = g.relabel[map[v] - 1];
            for s in 0..word.len() {
                normal[s] -= ev as i64 * c[pos - 1][s];
            }
        }
        out.push(normal);
    }
    Ok(out)
}

pub fn string_cone_fpoly(word: &ReducedWord, d_max: usize) -> Result<Cone> {
    let (g, qp) = gamma_qp(word)?;
    let mut normals = Vec::new();
    for i in 1..word.n {
        normals.extend(index_normals_fpoly(word, &g, &qp, i, d_max)?);
    }
    Ok(Cone::new(word.len(), normals))
}

pub fn string_cone_sigma(word: &ReducedWord) -> Result<Cone> {
    let mut normals = Vec::new();
    for i in 1..word.n {
        let f = varsigma(word, i)?;
        let t = f.tropicalize()?;
        normals.extend(t.normals().ok_or(Error::NotInverseLaurent)?);
    }
    Ok(Cone::new(word.len(), normals))
}

/// Polyline of γ followed back to the right boundary, with doubled
/// coordinates.
fn enclosure_polygon(d: &WiringDiagram, path: &RigorousPath) -> Vec<(i64, i64)> {
    let big_n = d.len();
    let mut pts: Vec<(i64, i64)> = Vec::new();
    let follow = |w: usize, from: usize, to: usize, pts: &mut Vec<(i64, i64)>| {
        if from <= to {
            for x in from..=to {
                pts.push((2 * x as i64, d.height2(w, x)));
            }
        } else {
            for x in (to..=from).rev() {
                pts.push((2 * x as i64, d.height2(w, x)));
            }
        }
    };
    let first = path.vertices[0];
    follow(path.index + 1, big_n + 1, first, &mut pts);
    for (k, &w) in path.wires.iter().enumerate() {
        pts.pop();
        follow(w, path.vertices[k], path.vertices[k + 1], &mut pts);
    }
    let last = *path.vertices.last().expect("nonempty");
    pts.pop();
    follow(path.index, last, big_n + 1, &mut pts);
    pts
}

fn encloses(poly: &[(i64, i64)], x2: i64, y2: i64) -> bool {
    // vertical ray upwards from a point with odd doubled abscissa
    let mut inside = false;
    for k in 0..poly.len() {
        let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
        if a.0 == b.0 {
            continue;
        }
        let (lo, hi) = if a.0 < b.0 { (a, b) } else { (b, a) };
        if !(lo.0 < x2 && x2 < hi.0) {
            continue;
        }
        // height of the edge at x2, compared exactly
        let num = lo.1 * (hi.0 - x2) + hi.1 * (x2 - lo.0);
        if num > y2 * (hi.0 - lo.0) {
            inside = !inside;
        }
    }
    inside
}

/// Chambers (word positions) enclosed by γ and the right boundary.
pub fn enclosed_chambers(word: &ReducedWord, path: &RigorousPath) -> Vec<usize> {
    let d = wiring(word);
    let poly = enclosure_polygon(&d, path);
    (1..=d.len())
        .filter(|&j| encloses(&poly, 2 * j as i64 + 1, 2 * d.crossing(j).level as i64 + 1))
        .collect()
}

/// W_i as Σ_γ Π_{enclosed j} X_j^{-1}, variables indexed by word position.
pub fn w_via_paths(word: &ReducedWord, i: usize) -> Result<LaurentExpr> {
    let big_n = word.len();
    let terms = paths_for_index(word, i).into_iter().map(|p| {
        let mut e = vec![0i32; big_n];
        for j in enclosed_chambers(word, &p) {
            e[j - 1] = -1;
        }
        (e, q(1))
    });
    LaurentExpr::from_terms(big_n, terms.collect::<Vec<_>>())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraidMove {
    /// Swap of commuting letters at positions (p, p+1), 1-based.
    Two(usize),
    /// aba -> bab at positions (p, p+1, p+2), 1-based.
    Three(usize),
}

pub fn braid_moves(letters: &[usize]) -> Vec<(Vec<usize>, BraidMove)> {
    let mut out = Vec::new();
    for p in 0..letters.len().saturating_sub(1) {
        if letters[p].abs_diff(letters[p + 1]) > 1 {
            let mut v = letters.to_vec();
            v.swap(p, p + 1);
            out.push((v, BraidMove::Two(p + 1)));
        }
    }
    for p in 0..letters.len().saturating_sub(2) {
        if letters[p] == letters[p + 2] && letters[p].abs_diff(letters[p + 1]) == 1 {
            let mut v = letters.to_vec();
            v[p] = letters[p + 1];
            v[p + 1] = letters[p];
            v[p + 2] = letters[p + 1];
            out.push((v, BraidMove::Three(p + 1)));
        }
    }
    out
}

/// Shortest braid-move chain (BFS, at most `bound` moves) from `from` to a
/// word satisfying `goal`.
pub fn braid_chain(from: &ReducedWord, goal: impl Fn(&[usize]) -> bool, bound: usize) -> Result<Vec<BraidMove>> {
    let mut prev: HashMap<Vec<usize>, Option<(Vec<usize>, BraidMove)>> = HashMap::new();
    prev.insert(from.letters.clone(), None);
    let mut queue = VecDeque::from([(from.letters.clone(), 0usize)]);
    while let Some((w, depth)) = queue.pop_front() {
        if goal(&w) {
            let mut moves = Vec::new();
            let mut cur = w;
            while let Some(Some((p, mv))) = prev.get(&cur).cloned() {
                moves.push(mv);
                cur = p;
            }
            moves.reverse();
            return Ok(moves);
        }
        if depth >= bound {
            continue;
        }
        for (nb, mv) in braid_moves(&w) {
            if !prev.contains_key(&nb) {
                prev.insert(nb.clone(), Some((w.clone(), mv)));
                queue.push_back((nb, depth + 1));
            }
        }
    }
    Err(Error::NoBraidChainWithinBound(bound))
}

/// The coordinates of the next word as functions of the current ones.
fn move_map(nvars: usize, mv: BraidMove) -> Result<Vec<RationalExpr>> {
    let mut vals: Vec<RationalExpr> = (0..nvars).map(|i| RationalExpr::var(nvars, i)).collect();
    match mv {
        BraidMove::Two(p) => vals.swap(p - 1, p),
        BraidMove::Three(p) => {
            let (a, b, c) = (vals[p - 1].clone(), vals[p].clone(), vals[p + 1].clone());
            let acb = a.mul(&c)?.add(&b)?;
            vals[p - 1] = b.mul(&c)?.div(&acb)?;
            vals[p] = a.mul(&c)?;
            vals[p + 1] = acb.div(&c)?;
        }
    }
    Ok(vals)
}

fn apply_move(x: &[RationalExpr], mv: BraidMove) -> Result<Vec<RationalExpr>> {
    let mut out = x.to_vec();
    match mv {
        BraidMove::Two(p) => out.swap(p - 1, p),
        BraidMove::Three(p) => {
            let (a, b, c) = (&x[p - 1], &x[p], &x[p + 1]);
            let acb = a.mul(c)?.add(b)?;
            out[p - 1] = b.mul(c)?.div(&acb)?;
            out[p] = a.mul(c)?;
            out[p + 1] = acb.div(c)?;
        }
    }
    Ok(out)
}

fn default_bound(word: &ReducedWord) -> usize {
    4 * word.len()
}

/// Ψ^i_j as a tuple of rational functions of the i-coordinates.
pub fn braid_transition(i: &ReducedWord, j: &ReducedWord) -> Result<Vec<RationalExpr>> {
    let target = j.letters.clone();
    let chain = braid_chain(i, |w| w == target.as_slice(), default_bound(i))?;
    let big_n = i.len();
    let mut x: Vec<RationalExpr> = (0..big_n).map(|k| RationalExpr::var(big_n, k)).collect();
    for mv in chain {
        x = apply_move(&x, mv)?;
    }
    Ok(x)
}

/// ς_{i,idx}: x_N on a word ending in idx, pulled back along braid moves.
pub fn varsigma(word: &ReducedWord, idx: usize) -> Result<RationalExpr> {
    let chain = braid_chain(word, |w| w.last() == Some(&idx), default_bound(word))?;
    varsigma_along(word, &chain)
}

/// ς computed along a given chain ending in a word whose last letter is the
/// index; each intermediate stage is itself a Laurent polynomial.
pub fn varsigma_along(word: &ReducedWord, chain: &[BraidMove]) -> Result<RationalExpr> {
    let big_n = word.len();
    let mut f = RationalExpr::var(big_n, big_n - 1);
    for &mv in chain.iter().rev() {
        f = f.substitute(&move_map(big_n, mv)?)?;
        if let Some(l) = f.as_laurent() {
            f = RationalExpr::from_laurent(l);
        }
    }
    Ok(f)
}

/// All reduced words of w0 in S_n, sorted.
pub fn reduced_words(n: usize) -> Vec<ReducedWord> {
    let mut seed = Vec::new();
    for k in 1..n {
        seed.extend(1..=n - k);
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([seed.clone()]);
    let mut stack = vec![seed];
    while let Some(w) = stack.pop() {
        for (nb, _) in braid_moves(&w) {
            if seen.insert(nb.clone()) {
                stack.push(nb);
            }
        }
    }
    seen.into_iter().map(|letters| ReducedWord { n, letters }).collect()
}

/// Cone membership through Ψ: x is in C_i exactly when [Ψ^i_j]_trop(x) is in
/// C_j. Returns the tropicalized transition as a function.
pub fn tropical_transition(i: &ReducedWord, j: &ReducedWord) -> Result<impl Fn(&[i64]) -> Vec<i64>> {
    let psi = braid_transition(i, j)?;
    let forms = psi.iter().map(|f| f.tropicalize()).collect::<Result<Vec<_>>>()?;
    Ok(move |x: &[i64]| forms.iter().map(|t| t.eval(x)).collect())
}


#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[usize]) -> ReducedWord {
        ReducedWord::parse(letters).unwrap()
    }

    #[test]
    fn validation() {
        assert!(validate_reduced_word(3, &[1, 2, 1]).is_ok());
        assert!(validate_reduced_word(5, &[2, 1, 2, 3, 4, 3, 2, 1, 3, 2]).is_ok());
        assert!(validate_reduced_word(3, &[1, 1, 2]).is_err());
    }

    #[test]
    fn sl3_gamma() {
        let g = gamma_quiver(&w(&[1, 2, 1]));
        let arrows: Vec<(usize, usize)> = g.quiver.arrows().iter().map(|a| (a.t, a.h)).collect();
        assert_eq!(BTreeSet::from_iter(arrows), BTreeSet::from([(1, 3), (2, 1)]));
        assert_eq!(g.quiver.n(), 1);
        assert_eq!(g.ell, vec![3, 2]);
        assert!(face_potential(&g).unwrap().is_empty());
    }

    #[test]
    fn sl3_ca_hat() {
        assert_eq!(ca_hat(&w(&[1, 2, 1])), vec![vec![-1, 1, -1], vec![0, -1, 1], vec![0, 0, -1]]);
    }

    #[test]
    fn sl3_varsigma() {
        let x = |i| RationalExpr::var(3, i);
        let s2 = varsigma(&w(&[1, 2, 1]), 2).unwrap();
        assert_eq!(s2, x(0).add(&x(1).div(&x(2)).unwrap()).unwrap());
        assert_eq!(varsigma(&w(&[1, 2, 1]), 1).unwrap(), x(2));
    }

    #[test]
    fn sl3_paths() {
        let word = w(&[1, 2, 1]);
        assert_eq!(paths_for_index(&word, 2).len(), 2);
        assert_eq!(paths_for_index(&word, 1).len(), 1);
        let cone = string_cone_gp(&word);
        assert_eq!(cone.normals, vec![vec![0, 0, 1], vec![0, 1, -1], vec![1, 0, 0]]);
    }

    #[test]
    fn n2() {
        let word = w(&[1]);
        assert_eq!(rigorous_paths(&word, 1).len(), 1);
        assert_eq!(string_cone_gp(&word).normals, vec![vec![1]]);
        let g = gamma_quiver(&word);
        assert_eq!((g.quiver.m(), g.quiver.n()), (1, 0));
    }
}
