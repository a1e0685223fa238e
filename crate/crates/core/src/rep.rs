//! Decorated representations of Jacobian algebras: projectives and
//! injectives by truncated path computations, DWZ mutation, duality,
//! g/h-vectors and (dual) F-polynomials of thin modules.

use crate::error::{Error, Result};
use crate::linalg::{Mat, Q};
use crate::qp::{
    cyclic_derivative_idx, premutate, reduce_with_trace, second_derivative_idx, PathSum, QPInstance,
    ReductionTrace, Word,
};
use crate::quiver::{composite_id, star_id, IceQuiver};
use crate::symbolic::LaurentExpr;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

pub const DEFAULT_D_MAX: usize = 40;
pub const DEFAULT_ISO_TRIALS: usize = 8;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Vector spaces at vertices 1..m (stored 0-based), one matrix per arrow id
/// of shape dims[h] x dims[t], and the decoration v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedRep {
    pub dims: Vec<usize>,
    pub maps: BTreeMap<String, Mat>,
    pub v: Vec<usize>,
}

impl DecoratedRep {
    pub fn zero(q: &IceQuiver) -> Self {
        let m = q.m();
        let maps = q.arrows().iter().map(|a| (a.id.clone(), Mat::zeros(0, 0))).collect();
        DecoratedRep { dims: vec![0; m], maps, v: vec![0; m] }
    }

    /// One-dimensional at `vertex`, zero elsewhere.
    pub fn simple(q: &IceQuiver, vertex: usize) -> Self {
        let mut dims = vec![0; q.m()];
        dims[vertex - 1] = 1;
        DecoratedRep::with_zero_maps(q, dims, vec![0; q.m()])
    }

    /// The negative simple: zero module with v = e_vertex.
    pub fn negative_simple(q: &IceQuiver, vertex: usize) -> Self {
        let mut v = vec![0; q.m()];
        v[vertex - 1] = 1;
        DecoratedRep::with_zero_maps(q, vec![0; q.m()], v)
    }

    pub fn with_zero_maps(q: &IceQuiver, dims: Vec<usize>, v: Vec<usize>) -> Self {
        let maps = q
            .arrows()
            .iter()
            .map(|a| (a.id.clone(), Mat::zeros(dims[a.h - 1], dims[a.t - 1])))
            .collect();
        DecoratedRep { dims, maps, v }
    }

    pub fn dim(&self, vertex: usize) -> usize {
        self.dims[vertex - 1]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn map(&self, id: &str) -> &Mat {
        &self.maps[id]
    }

    pub fn is_thin(&self) -> bool {
        self.dims.iter().all(|&d| d <= 1)
    }

    pub fn rename_arrows(&self, f: impl Fn(&str) -> String) -> DecoratedRep {
        DecoratedRep {
            dims: self.dims.clone(),
            maps: self.maps.iter().map(|(k, m)| (f(k), m.clone())).collect(),
            v: self.v.clone(),
        }
    }
}

fn path_matrix(q: &IceQuiver, r: &DecoratedRep, w: &[usize]) -> Mat {
    let mut acc: Option<Mat> = None;
    for &i in w.iter().rev() {
        let m = r.map(&q.arrow(i).id);
        acc = Some(match acc {
            None => m.clone(),
            Some(a) => m.mul(&a),
        });
    }
    acc.expect("empty paths are handled by the caller")
}

/// Evaluates a combination of paths from `from` to `to` on `r`.
fn eval_paths(q: &IceQuiver, r: &DecoratedRep, s: &PathSum, from: usize, to: usize) -> Mat {
    let mut out = Mat::zeros(r.dim(to), r.dim(from));
    for (w, c) in s {
        let m = if w.is_empty() { Mat::identity(r.dim(from)) } else { path_matrix(q, r, w) };
        out = out.add(&m.scale(c));
    }
    out
}

/// Checks matrix shapes, the Jacobian relations and nilpotency.
pub fn check_module(qp: &QPInstance, r: &DecoratedRep) -> std::result::Result<(), Vec<String>> {
    let q = &qp.quiver;
    let mut errs = Vec::new();
    if r.dims.len() != q.m() || r.v.len() != q.m() {
        return Err(vec![format!("expected {} vertices", q.m())]);
    }
    for a in q.arrows() {
        match r.maps.get(&a.id) {
            None => errs.push(format!("missing map for arrow {}", a.id)),
            Some(m) if m.rows() != r.dim(a.h) || m.cols() != r.dim(a.t) => errs.push(format!(
                "arrow {} has shape {}x{}, expected {}x{}",
                a.id,
                m.rows(),
                m.cols(),
                r.dim(a.h),
                r.dim(a.t)
            )),
            _ => {}
        }
    }
    if r.maps.len() != q.arrows().len() {
        errs.push("maps given for arrows outside the quiver".into());
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let s = qp.index_potential();
    for (i, a) in q.arrows().iter().enumerate() {
        let d = cyclic_derivative_idx(&s, i);
        if !eval_paths(q, r, &d, a.h, a.t).is_zero() {
            errs.push(format!("relation d_{} does not vanish", a.id));
        }
    }
    // radical filtration must reach zero
    let mut layer: Vec<Mat> = (1..=q.m()).map(|x| Mat::identity(r.dim(x))).collect();
    let mut steps = 0;
    while layer.iter().any(|b| b.cols() > 0) {
        if steps > r.total_dim() {
            errs.push("representation is not nilpotent".into());
            break;
        }
        let mut next: Vec<Vec<Mat>> = vec![Vec::new(); q.m()];
        for a in q.arrows() {
            next[a.h - 1].push(r.map(&a.id).mul(&layer[a.t - 1]));
        }
        layer = next
            .into_iter()
            .enumerate()
            .map(|(x, blocks)| Mat::hstack(r.dims[x], &blocks).column_basis())
            .collect();
        steps += 1;
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

type SparseVec = BTreeMap<usize, Q>;

struct PathIndex {
    paths: Vec<Word>,
    index: HashMap<Word, usize>,
    ends: Vec<usize>,
}

fn paths_from(q: &IceQuiver, ell: usize, depth: usize) -> PathIndex {
    let mut paths = vec![Vec::new()];
    let mut ends = vec![ell];
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &p in &frontier {
            for (i, a) in q.arrows().iter().enumerate() {
                if a.t == ends[p] {
                    let mut w = Vec::with_capacity(paths[p].len() + 1);
                    w.push(i);
                    w.extend_from_slice(&paths[p]);
                    paths.push(w);
                    ends.push(a.h);
                    next.push(paths.len() - 1);
                }
            }
        }
        frontier = next;
    }
    let index = paths.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    PathIndex { paths, index, ends }
}

/// Row-reduced span with pivots at the largest index of each vector.
struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = usize::MAX;
        loop {
            let next = v.range(..cursor).rev().find(|(k, _)| self.rows.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            for (j, x) in &self.rows[&k] {
                let e = v.entry(*j).or_insert_with(Q::zero);
                *e -= &c * x;
            }
            v.retain(|_, x| !x.is_zero());
            cursor = k;
        }
        v
    }

    fn insert(&mut self, v: SparseVec) -> Option<SparseVec> {
        let v = self.reduce(v);
        let (&piv, lead) = v.iter().next_back()?;
        let inv = lead.recip();
        let v: SparseVec = v.iter().map(|(k, x)| (*k, x * &inv)).collect();
        self.rows.insert(piv, v.clone());
        Some(v)
    }
}

fn left_mul(q: &IceQuiver, idx: &PathIndex, a: usize, v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (p, c) in v {
        if idx.ends[*p] != q.arrow(a).t {
            continue;
        }
        let mut w = vec![a];
        w.extend_from_slice(&idx.paths[*p]);
        if let Some(&j) = idx.index.get(&w) {
            out.insert(j, c.clone());
        }
    }
    out
}

/// Projective P(ell) as the paths leaving ell modulo the Jacobian ideal,
/// together with the path representing each basis vector.
pub struct Projective {
    pub rep: DecoratedRep,
    /// Per vertex (0-based), the standard paths spanning that space.
    pub basis: Vec<Vec<Word>>,
}

fn projective_at_depth(qp: &QPInstance, ell: usize, depth: usize) -> (Projective, bool) {
    let q = &qp.quiver;
    let idx = paths_from(q, ell, depth);
    let s = qp.index_potential();
    let mut ech = Echelon { rows: BTreeMap::new() };
    let mut queue: VecDeque<SparseVec> = VecDeque::new();
    for (ai, a) in q.arrows().iter().enumerate() {
        let d = cyclic_derivative_idx(&s, ai);
        if d.is_empty() {
            continue;
        }
        for (pi, p) in idx.paths.iter().enumerate() {
            if idx.ends[pi] != a.h {
                continue;
            }
            let mut g = SparseVec::new();
            for (w, c) in &d {
                let mut full = w.clone();
                full.extend_from_slice(p);
                if let Some(&j) = idx.index.get(&full) {
                    *g.entry(j).or_insert_with(Q::zero) += c;
                }
            }
            g.retain(|_, x| !x.is_zero());
            if !g.is_empty() {
                queue.push_back(g);
            }
        }
    }
    while let Some(g) = queue.pop_front() {
        if let Some(r) = ech.insert(g) {
            for a in 0..q.arrows().len() {
                let x = left_mul(q, &idx, a, &r);
                if !x.is_empty() {
                    queue.push_back(x);
                }
            }
        }
    }
    let standard: Vec<usize> = (0..idx.paths.len()).filter(|i| !ech.rows.contains_key(i)).collect();
    let top_empty = standard.iter().all(|&i| idx.paths[i].len() < depth);
    let mut basis: Vec<Vec<Word>> = vec![Vec::new(); q.m()];
    let mut pos: HashMap<usize, usize> = HashMap::new();
    for &i in &standard {
        let x = idx.ends[i] - 1;
        pos.insert(i, basis[x].len());
        basis[x].push(idx.paths[i].clone());
    }
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut maps = BTreeMap::new();
    for (ai, a) in q.arrows().iter().enumerate() {
        let mut m = Mat::zeros(dims[a.h - 1], dims[a.t - 1]);
        for (col, p) in basis[a.t - 1].iter().enumerate() {
            let mut w = vec![ai];
            w.extend_from_slice(p);
            let Some(&j) = idx.index.get(&w) else { continue };
            let nf = ech.reduce(SparseVec::from([(j, Q::one())]));
            for (k, c) in nf {
                m.set(pos[&k], col, c);
            }
        }
        maps.insert(a.id.clone(), m);
    }
    let rep = DecoratedRep { dims, maps, v: vec![0; q.m()] };
    (Projective { rep, basis }, top_empty)
}

/// Raises the truncation depth until no basis path reaches it (and, for
/// inhomogeneous potentials, the dimension vector has been stable for three
/// consecutive depths).
pub fn build_projective_with_basis(qp: &QPInstance, ell: usize, d_max: usize) -> Result<Projective> {
    if ell == 0 || ell > qp.quiver.m() {
        return Err(Error::InvalidRep(format!("vertex {ell} out of range")));
    }
    let homogeneous = qp.potential.is_homogeneous();
    let mut history: Vec<Vec<usize>> = Vec::new();
    for depth in 1..=d_max {
        let (p, top_empty) = projective_at_depth(qp, ell, depth);
        history.push(p.rep.dims.clone());
        let stable = homogeneous
            || (history.len() >= 3 && history[history.len() - 3..].iter().all(|d| *d == p.rep.dims));
        if top_empty && stable {
            return Ok(p);
        }
    }
    Err(Error::DimensionNotStabilized(d_max))
}

pub fn build_projective(qp: &QPInstance, ell: usize, d_max: usize) -> Result<DecoratedRep> {
    Ok(build_projective_with_basis(qp, ell, d_max)?.rep)
}

pub fn build_injective(qp: &QPInstance, ell: usize, d_max: usize) -> Result<DecoratedRep> {
    Ok(dualize(&build_projective(&qp.opposite(), ell, d_max)?))
}

/// The dual representation over the opposite QP: arrow ids are kept and
/// every matrix is transposed.
pub fn dualize(r: &DecoratedRep) -> DecoratedRep {
    DecoratedRep {
        dims: r.dims.clone(),
        maps: r.maps.iter().map(|(k, m)| (k.clone(), m.transpose())).collect(),
        v: r.v.clone(),
    }
}

/// Subrepresentation on the given per-vertex column bases, which must be
/// stable under every arrow.
pub fn subrepresentation(q: &IceQuiver, r: &DecoratedRep, spaces: &[Mat]) -> DecoratedRep {
    let dims: Vec<usize> = spaces.iter().map(Mat::cols).collect();
    let mut maps = BTreeMap::new();
    for a in q.arrows() {
        let image = r.map(&a.id).mul(&spaces[a.t - 1]);
        let m = spaces[a.h - 1].solve(&image).expect("subspace is not arrow-stable");
        maps.insert(a.id.clone(), m);
    }
    DecoratedRep { dims, maps, v: vec![0; q.m()] }
}

/// Sum of the images of all arrows, with v = 0.
pub fn radical(q: &IceQuiver, r: &DecoratedRep) -> DecoratedRep {
    let mut blocks: Vec<Vec<Mat>> = vec![Vec::new(); q.m()];
    for a in q.arrows() {
        blocks[a.h - 1].push(r.map(&a.id).clone());
    }
    let spaces: Vec<Mat> =
        blocks.into_iter().enumerate().map(|(x, b)| Mat::hstack(r.dims[x], &b).column_basis()).collect();
    subrepresentation(q, r, &spaces)
}

/// The α, β, γ maps at vertex k with the incoming and outgoing arrows in
/// index order.
pub struct Triangle {
    pub ins: Vec<usize>,
    pub outs: Vec<usize>,
    pub alpha: Mat,
    pub beta: Mat,
    pub gamma: Mat,
    pub in_dims: Vec<usize>,
    pub out_dims: Vec<usize>,
}

pub fn triangle(qp: &QPInstance, r: &DecoratedRep, k: usize) -> Triangle {
    let q = &qp.quiver;
    let (ins, outs) = q.incident(k);
    let in_dims: Vec<usize> = ins.iter().map(|&a| r.dim(q.arrow(a).t)).collect();
    let out_dims: Vec<usize> = outs.iter().map(|&b| r.dim(q.arrow(b).h)).collect();
    let n_in: usize = in_dims.iter().sum();
    let n_out: usize = out_dims.iter().sum();
    let alpha = Mat::hstack(r.dim(k), &ins.iter().map(|&a| r.map(&q.arrow(a).id).clone()).collect::<Vec<_>>());
    let beta = Mat::vstack(r.dim(k), &outs.iter().map(|&b| r.map(&q.arrow(b).id).clone()).collect::<Vec<_>>());
    let s = qp.index_potential();
    let mut rows = Vec::new();
    for &a in &ins {
        let mut blocks = Vec::new();
        for &b in &outs {
            let d = second_derivative_idx(&s, b, a);
            blocks.push(eval_paths(q, r, &d, q.arrow(b).h, q.arrow(a).t));
        }
        rows.push(Mat::hstack(r.dim(q.arrow(a).t), &blocks));
    }
    let gamma = if rows.is_empty() { Mat::zeros(0, n_out) } else { Mat::vstack(n_out, &rows) };
    debug_assert_eq!(gamma.rows(), n_in);
    Triangle { ins, outs, alpha, beta, gamma, in_dims, out_dims }
}

fn nullity(m: &Mat) -> usize {
    m.cols() - m.rank()
}

/// Injective g-vector: dim ker γ_j − dim M_j + v_j.
pub fn g_vector(qp: &QPInstance, r: &DecoratedRep) -> Vec<i64> {
    (1..=qp.quiver.m())
        .map(|j| {
            let t = triangle(qp, r, j);
            nullity(&t.gamma) as i64 - r.dim(j) as i64 + r.v[j - 1] as i64
        })
        .collect()
}

/// h_j = −dim ker β_j.
pub fn h_vector(qp: &QPInstance, r: &DecoratedRep) -> Vec<i64> {
    (1..=qp.quiver.m()).map(|j| -(nullity(&triangle(qp, r, j).beta) as i64)).collect()
}

fn split_rows(m: &Mat, sizes: &[usize]) -> Vec<Mat> {
    let mut off = 0;
    sizes
        .iter()
        .map(|&s| {
            let b = m.block(off, off + s, 0, m.cols());
            off += s;
            b
        })
        .collect()
}

fn split_cols(m: &Mat, sizes: &[usize]) -> Vec<Mat> {
    let mut off = 0;
    sizes
        .iter()
        .map(|&s| {
            let b = m.block(0, m.rows(), off, off + s);
            off += s;
            b
        })
        .collect()
}

/// The representation of the premutated QP.
pub fn premutate_rep(qp: &QPInstance, r: &DecoratedRep, k: usize) -> Result<(QPInstance, DecoratedRep)> {
    let pre = premutate(qp, k)?;
    let q = &qp.quiver;
    let t = triangle(qp, r, k);
    let n_in: usize = t.in_dims.iter().sum();
    let n_out: usize = t.out_dims.iter().sum();
    let vk = r.v[k - 1];

    // coker β through the left kernel p, with a right inverse s
    let p = t.beta.left_kernel();
    let coker = p.rows();
    let s = p.solve(&Mat::identity(coker)).unwrap_or_else(|| Mat::zeros(n_out, 0));
    let gamma_bar = t.gamma.mul(&s);

    // complement of im γ inside ker α
    let ker_alpha = t.alpha.kernel();
    let im_gamma = t.gamma.column_basis();
    let joined = Mat::hstack(n_in, &[im_gamma.clone(), ker_alpha]);
    let (_, pivots) = joined.rref();
    let comp_cols: Vec<Mat> =
        pivots.iter().filter(|&&c| c >= im_gamma.cols()).map(|&c| joined.block(0, n_in, c, c + 1)).collect();
    let sigma = Mat::hstack(n_in, &comp_cols);
    let mid = sigma.cols();

    let new_dim = coker + mid + vk;
    let beta_bar = Mat::hstack(n_in, &[gamma_bar, sigma, Mat::zeros(n_in, vk)]);
    let alpha_bar = Mat::vstack(n_out, &[p.neg(), Mat::zeros(mid, n_out), Mat::zeros(vk, n_out)]);

    let mut dims = r.dims.clone();
    dims[k - 1] = new_dim;
    let mut v = r.v.clone();
    let ba_rank = t.beta.mul(&t.alpha).rank();
    v[k - 1] = nullity(&t.beta) - (t.alpha.rank() - ba_rank);

    let mut maps = BTreeMap::new();
    for a in q.arrows() {
        if a.t != k && a.h != k {
            maps.insert(a.id.clone(), r.map(&a.id).clone());
        }
    }
    for (&a, m) in t.ins.iter().zip(split_rows(&beta_bar, &t.in_dims)) {
        maps.insert(star_id(&q.arrow(a).id), m);
    }
    for (&b, m) in t.outs.iter().zip(split_cols(&alpha_bar, &t.out_dims)) {
        maps.insert(star_id(&q.arrow(b).id), m);
    }
    for &a in &t.ins {
        for &b in &t.outs {
            let (ai, bi) = (&q.arrow(a).id, &q.arrow(b).id);
            maps.insert(composite_id(bi, ai), r.map(bi).mul(r.map(ai)));
        }
    }
    Ok((pre, DecoratedRep { dims, maps, v }))
}

/// Carries a representation of the unreduced QP along the right-equivalence
/// recorded in `trace` and restricts it to the surviving arrows.
pub fn transport_rep(trace: &ReductionTrace, reduced: &QPInstance, r: &DecoratedRep) -> Result<DecoratedRep> {
    let q = &trace.source;
    let mut cur = r.clone();
    let cap = r.total_dim() + 2;
    for sub in &trace.substitutions {
        let a = q.arrow(sub.arrow);
        let id = a.id.clone();
        let base = cur.map(&id).clone();
        let mut it = 0;
        loop {
            let delta = eval_paths(q, &cur, &sub.delta, a.t, a.h);
            let next = base.sub(&delta);
            if next == *cur.map(&id) && it > 0 {
                break;
            }
            cur.maps.insert(id.clone(), next);
            it += 1;
            if it > cap {
                return Err(Error::InvalidRep("representation is not nilpotent along the reduction".into()));
            }
        }
    }
    let maps =
        reduced.quiver.arrows().iter().map(|a| (a.id.clone(), cur.map(&a.id).clone())).collect::<BTreeMap<_, _>>();
    Ok(DecoratedRep { dims: cur.dims, maps, v: cur.v })
}

/// DWZ mutation at k; returns the mutated QP and representation.
pub fn mutate_rep(
    qp: &QPInstance,
    r: &DecoratedRep,
    k: usize,
    bound: Option<usize>,
) -> Result<(QPInstance, DecoratedRep)> {
    let (pre, pre_rep) = premutate_rep(qp, r, k)?;
    let bound = bound.unwrap_or_else(|| pre.default_reduction_bound());
    let (reduced, trace) = reduce_with_trace(&pre, Some(bound))?;
    let out = transport_rep(&trace, &reduced, &pre_rep)?;
    Ok((reduced, out))
}

/// Basis of Hom(M, N) as per-vertex matrix tuples.
pub fn hom_basis(q: &IceQuiver, m: &DecoratedRep, n: &DecoratedRep) -> Vec<Vec<Mat>> {
    let mut offsets = Vec::with_capacity(q.m());
    let mut total = 0;
    for x in 0..q.m() {
        offsets.push(total);
        total += n.dims[x] * m.dims[x];
    }
    let var = |x: usize, i: usize, j: usize| offsets[x] + i * m.dims[x] + j;
    let mut eqs: Vec<Vec<Q>> = Vec::new();
    for a in q.arrows() {
        let (t, h) = (a.t - 1, a.h - 1);
        let (ma, na) = (m.map(&a.id), n.map(&a.id));
        // N(a) X_t - X_h M(a) = 0, entry (i, j) with i < dim N_h, j < dim M_t
        for i in 0..n.dims[h] {
            for j in 0..m.dims[t] {
                let mut row = vec![Q::zero(); total];
                for l in 0..n.dims[t] {
                    let c = na.get(i, l);
                    if !c.is_zero() {
                        row[var(t, l, j)] += c;
                    }
                }
                for l in 0..m.dims[h] {
                    let c = ma.get(l, j);
                    if !c.is_zero() {
                        row[var(h, i, l)] -= c;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    let sys = Mat::from_rows(eqs.len(), total, eqs);
    let ker = sys.kernel();
    (0..ker.cols())
        .map(|c| {
            (0..q.m())
                .map(|x| {
                    let mut b = Mat::zeros(n.dims[x], m.dims[x]);
                    for i in 0..n.dims[x] {
                        for j in 0..m.dims[x] {
                            b.set(i, j, ker.get(var(x, i, j), c).clone());
                        }
                    }
                    b
                })
                .collect()
        })
        .collect()
}

/// Randomized isomorphism test. A positive answer is certified by an explicit
/// invertible intertwiner; a negative answer is wrong only if every sampled
/// element of a Hom space containing isomorphisms was singular.
pub fn is_isomorphic_with(q: &IceQuiver, m: &DecoratedRep, n: &DecoratedRep, trials: usize, seed: u64) -> bool {
    if m.dims != n.dims || m.v != n.v {
        return false;
    }
    let hom = hom_basis(q, m, n);
    let back = hom_basis(q, n, m);
    let end = hom_basis(q, m, m);
    if hom.len() != back.len() || hom.len() != end.len() {
        return false;
    }
    if m.total_dim() == 0 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials.max(1) {
        let coeffs: Vec<Q> = hom.iter().map(|_| crate::linalg::q(rng.gen_range(-50..=50))).collect();
        let ok = (0..q.m()).all(|x| {
            let mut acc = Mat::zeros(n.dims[x], m.dims[x]);
            for (b, c) in hom.iter().zip(&coeffs) {
                acc = acc.add(&b[x].scale(c));
            }
            acc.is_invertible()
        });
        if ok {
            return true;
        }
    }
    false
}

pub fn is_isomorphic(q: &IceQuiver, m: &DecoratedRep, n: &DecoratedRep) -> bool {
    is_isomorphic_with(q, m, n, DEFAULT_ISO_TRIALS, DEFAULT_SEED)
}

/// Dimension vectors of the quotients of a thin representation, one per
/// arrow-closed subset of its support.
pub fn enumerate_thin_quotients(q: &IceQuiver, r: &DecoratedRep) -> Result<Vec<Vec<usize>>> {
    if !r.is_thin() {
        return Err(Error::NotThin);
    }
    let support: Vec<usize> = (0..q.m()).filter(|&x| r.dims[x] == 1).collect();
    let edges: Vec<(usize, usize)> = q
        .arrows()
        .iter()
        .filter(|a| r.dims[a.t - 1] == 1 && r.dims[a.h - 1] == 1 && !r.map(&a.id).is_zero())
        .map(|a| (a.t - 1, a.h - 1))
        .collect();
    if support.len() > 24 {
        return Err(Error::InvalidRep("support too large to enumerate".into()));
    }
    let mut out = BTreeSet::new();
    for mask in 0u32..(1u32 << support.len()) {
        let sub: BTreeSet<usize> =
            support.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
        if edges.iter().any(|(t, h)| sub.contains(t) && !sub.contains(h)) {
            continue;
        }
        let e: Vec<usize> = (0..q.m()).map(|x| r.dims[x] - usize::from(sub.contains(&x))).collect();
        out.insert(e);
    }
    Ok(out.into_iter().collect())
}

/// Σ over quotient dimension vectors e of u^e (every quiver Grassmannian of
/// a thin module is a point).
pub fn dual_f_polynomial(q: &IceQuiver, r: &DecoratedRep) -> Result<LaurentExpr> {
    let quots = enumerate_thin_quotients(q, r)?;
    LaurentExpr::from_terms(
        q.m(),
        quots.into_iter().map(|e| (e.into_iter().map(|x| x as i32).collect(), Q::one())),
    )
}

/// Σ over subrepresentation dimension vectors e of u^e.
pub fn f_polynomial(q: &IceQuiver, r: &DecoratedRep) -> Result<LaurentExpr> {
    dual_f_polynomial(&q.opposite(), &dualize(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qp::Potential;
    use crate::quiver::Arrow;

    fn sl3_q2() -> QPInstance {
        let quiver = IceQuiver::new(2, 1, vec![Arrow::new("b", 2, 1)]).unwrap();
        QPInstance::new(quiver, Potential::zero()).unwrap()
    }

    #[test]
    fn projective_of_arrow() {
        let qp = sl3_q2();
        let p = build_projective(&qp, 2, 10).unwrap();
        assert_eq!(p.dims, vec![1, 1]);
        assert_eq!(p.map("b"), &Mat::identity(1));
        assert!(check_module(&qp, &p).is_ok());
        let rad = radical(&qp.quiver, &p);
        assert_eq!(rad.dims, vec![1, 0]);
        let s = build_projective(&qp, 1, 10).unwrap();
        assert_eq!(s.dims, vec![1, 0]);
        assert_eq!(build_injective(&qp, 2, 10).unwrap().dims, vec![0, 1]);
    }

    #[test]
    fn dual_f_of_projective() {
        let qp = sl3_q2();
        let p = build_projective(&qp, 2, 10).unwrap();
        let f = dual_f_polynomial(&qp.quiver, &p).unwrap();
        let expect =
            LaurentExpr::from_terms(2, [(vec![0, 0], Q::one()), (vec![0, 1], Q::one()), (vec![1, 1], Q::one())])
                .unwrap();
        assert_eq!(f, expect);
        let fsub = f_polynomial(&qp.quiver, &p).unwrap();
        let expect_sub =
            LaurentExpr::from_terms(2, [(vec![0, 0], Q::one()), (vec![1, 0], Q::one()), (vec![1, 1], Q::one())])
                .unwrap();
        assert_eq!(fsub, expect_sub);
    }

    #[test]
    fn triangle_projective_is_truncated() {
        let quiver = IceQuiver::new(
            3,
            3,
            vec![Arrow::new("a", 1, 2), Arrow::new("b", 2, 3), Arrow::new("c", 3, 1)],
        )
        .unwrap();
        let qp = QPInstance::new(quiver, Potential::from_terms([(crate::linalg::q(1), vec!["c", "b", "a"])])).unwrap();
        let p = build_projective(&qp, 1, 10).unwrap();
        assert_eq!(p.dims, vec![1, 1, 0]);
        assert!(check_module(&qp, &p).is_ok());
    }

    #[test]
    fn relation_violation_is_reported() {
        let quiver = IceQuiver::new(
            3,
            3,
            vec![Arrow::new("a", 1, 2), Arrow::new("b", 2, 3), Arrow::new("c", 3, 1)],
        )
        .unwrap();
        let qp = QPInstance::new(quiver, Potential::from_terms([(crate::linalg::q(1), vec!["c", "b", "a"])])).unwrap();
        let mut r = DecoratedRep::with_zero_maps(&qp.quiver, vec![1, 1, 1], vec![0; 3]);
        r.maps.insert("a".into(), Mat::identity(1));
        r.maps.insert("b".into(), Mat::identity(1));
        let errs = check_module(&qp, &r).unwrap_err();
        assert!(errs.iter().any(|e| e.contains("d_c")));
    }

    #[test]
    fn simple_at_sink_mutates_to_negative_simple() {
        let quiver = IceQuiver::new(2, 2, vec![Arrow::new("x", 1, 2)]).unwrap();
        let qp = QPInstance::new(quiver, Potential::zero()).unwrap();
        let s = DecoratedRep::simple(&qp.quiver, 2);
        let (mqp, ms) = mutate_rep(&qp, &s, 2, None).unwrap();
        assert_eq!(ms.dims, vec![0, 0]);
        assert_eq!(ms.v, vec![0, 1]);
        let (_, back) = mutate_rep(&mqp, &ms, 2, None).unwrap();
        assert!(is_isomorphic(&qp.quiver, &back, &s));
    }

    #[test]
    fn simples_are_not_isomorphic() {
        let qp = sl3_q2();
        let a = DecoratedRep::simple(&qp.quiver, 1);
        let b = DecoratedRep::simple(&qp.quiver, 2);
        assert!(is_isomorphic(&qp.quiver, &a, &a));
        assert!(!is_isomorphic(&qp.quiver, &a, &b));
    }
}
