//! Polynomial potentials, cyclic derivatives, premutation and reduction.
//!
//! Paths are written left to right in composition order: the word
//! `[a1, a2, .., ad]` traverses `ad` first, so `t(a_j) = h(a_{j+1})`.

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::quiver::{premutated_arrows, star_id, Arrow, IceQuiver};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Arrow indices in written order.
pub type Word = Vec<usize>;

/// Linear combination of paths, keyed by arrow-index words.
pub type PathSum = BTreeMap<Word, Q>;

/// Linear combination of paths keyed by arrow ids.
pub type PathComb = BTreeMap<Vec<String>, Q>;

fn least_rotation<T: Ord + Clone>(w: &[T]) -> Vec<T> {
    let mut best: Option<Vec<T>> = None;
    for r in 0..w.len() {
        let cand: Vec<T> = w[r..].iter().chain(&w[..r]).cloned().collect();
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    }
    best.unwrap_or_default()
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Q>, k: K, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Finite linear combination of cycles, each stored in its least rotation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Potential {
    terms: BTreeMap<Vec<String>, Q>,
}

impl Potential {
    pub fn zero() -> Self {
        Potential::default()
    }

    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Q, Vec<S>)>,
        S: Into<String>,
    {
        let mut p = Potential::zero();
        for (c, cyc) in terms {
            p.add_term(c, cyc.into_iter().map(Into::into).collect());
        }
        p
    }

    pub fn add_term(&mut self, c: Q, cycle: Vec<String>) {
        accumulate(&mut self.terms, least_rotation(&cycle), c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<String>, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let degs: BTreeSet<usize> = self.terms.keys().map(|c| c.len()).collect();
        degs.len() <= 1
    }

    /// Each cycle reversed: the potential of the opposite quiver.
    pub fn opposite(&self) -> Potential {
        Potential::from_terms(self.terms.iter().map(|(c, q)| {
            let mut r = c.clone();
            r.reverse();
            (q.clone(), r)
        }))
    }

    /// Applies an arrow renaming.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Potential {
        Potential::from_terms(self.terms.iter().map(|(c, q)| (q.clone(), c.iter().map(|a| f(a)).collect::<Vec<_>>())))
    }

    pub(crate) fn to_index(&self, q: &IceQuiver) -> Result<PathSum> {
        let mut out = PathSum::new();
        for (cyc, c) in &self.terms {
            let mut w = Vec::with_capacity(cyc.len());
            for id in cyc {
                w.push(q.index_of(id).ok_or_else(|| Error::UnknownArrow(id.clone()))?);
            }
            if w.is_empty() {
                return Err(Error::InvalidPotential("empty cycle".into()));
            }
            let d = w.len();
            for j in 0..d {
                if q.arrow(w[j]).t != q.arrow(w[(j + 1) % d]).h {
                    return Err(Error::InvalidPotential(format!("term {} is not a closed path", cyc.join(""))));
                }
            }
            accumulate(&mut out, least_rotation(&w), c.clone());
        }
        Ok(out)
    }

    pub(crate) fn from_index(s: &PathSum, q: &IceQuiver) -> Potential {
        Potential::from_terms(
            s.iter().map(|(w, c)| (c.clone(), w.iter().map(|&i| q.arrow(i).id.clone()).collect::<Vec<_>>())),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPInstance {
    pub quiver: IceQuiver,
    pub potential: Potential,
}

impl QPInstance {
    pub fn new(quiver: IceQuiver, potential: Potential) -> Result<Self> {
        potential.to_index(&quiver)?;
        Ok(QPInstance { quiver, potential })
    }

    pub fn is_reduced(&self) -> bool {
        self.potential.terms().all(|(c, _)| c.len() != 2)
    }

    pub fn is_two_acyclic(&self) -> bool {
        self.quiver.find_two_cycle().is_none()
    }

    pub fn opposite(&self) -> QPInstance {
        QPInstance { quiver: self.quiver.opposite(), potential: self.potential.opposite() }
    }

    pub(crate) fn index_potential(&self) -> PathSum {
        self.potential.to_index(&self.quiver).expect("validated at construction")
    }

    pub fn default_reduction_bound(&self) -> usize {
        2 * self.potential.max_degree() + 4
    }
}

fn arrow_idx(q: &IceQuiver, id: &str) -> Result<usize> {
    q.index_of(id).ok_or_else(|| Error::UnknownArrow(id.to_string()))
}

fn to_comb(s: &PathSum, q: &IceQuiver) -> PathComb {
    s.iter().map(|(w, c)| (w.iter().map(|&i| q.arrow(i).id.clone()).collect(), c.clone())).collect()
}

pub(crate) fn cyclic_derivative_idx(s: &PathSum, a: usize) -> PathSum {
    let mut out = PathSum::new();
    for (w, c) in s {
        for i in 0..w.len() {
            if w[i] == a {
                let rest: Word = w[i + 1..].iter().chain(&w[..i]).copied().collect();
                accumulate(&mut out, rest, c.clone());
            }
        }
    }
    out
}

/// Complementary paths of every cyclic occurrence of `b a` (a first).
pub(crate) fn second_derivative_idx(s: &PathSum, b: usize, a: usize) -> PathSum {
    let mut out = PathSum::new();
    for (w, c) in s {
        let d = w.len();
        if d < 2 {
            continue;
        }
        for i in 0..d {
            if w[i] == b && w[(i + 1) % d] == a {
                let rest: Word = (2..d).map(|j| w[(i + j) % d]).collect();
                accumulate(&mut out, rest, c.clone());
            }
        }
    }
    out
}

/// ∂_a S, a path combination from h(a) to t(a).
pub fn cyclic_derivative(qp: &QPInstance, a: &str) -> Result<PathComb> {
    let ai = arrow_idx(&qp.quiver, a)?;
    Ok(to_comb(&cyclic_derivative_idx(&qp.index_potential(), ai), &qp.quiver))
}

/// ∂_{ba} S for an arrow a into k and an arrow b out of k.
pub fn second_cyclic_derivative(qp: &QPInstance, b: &str, a: &str) -> Result<PathComb> {
    let bi = arrow_idx(&qp.quiver, b)?;
    let ai = arrow_idx(&qp.quiver, a)?;
    if qp.quiver.arrow(bi).t != qp.quiver.arrow(ai).h {
        return Err(Error::NotAHook(b.to_string(), a.to_string()));
    }
    Ok(to_comb(&second_derivative_idx(&qp.index_potential(), bi, ai), &qp.quiver))
}

pub fn premutate(qp: &QPInstance, k: usize) -> Result<QPInstance> {
    let q = &qp.quiver;
    if !q.is_mutable(k) {
        return Err(Error::NotMutable(k));
    }
    if q.has_two_cycle_at(k) {
        return Err(Error::TwoCycleAtK(k));
    }
    let (arrows, composites) = premutated_arrows(q, k);
    let new_q = IceQuiver::new_unchecked(q.m(), q.n(), arrows);
    let mut pot = Potential::zero();
    for (w, c) in &qp.index_potential() {
        let d = w.len();
        let start = (0..d).find(|&r| q.arrow(w[r]).h != k).expect("loop-free cycles leave k");
        let rot: Vec<usize> = (0..d).map(|j| w[(start + j) % d]).collect();
        let mut ids = Vec::new();
        let mut j = 0;
        while j < d {
            let a = q.arrow(rot[j]);
            if a.t == k {
                let inc = q.arrow(rot[j + 1]);
                ids.push(crate::quiver::composite_id(&a.id, &inc.id));
                j += 2;
            } else {
                ids.push(a.id.clone());
                j += 1;
            }
        }
        pot.add_term(c.clone(), ids);
    }
    for (comp, out, inc) in composites {
        pot.add_term(Q::one(), vec![star_id(&out), comp, star_id(&inc)]);
    }
    QPInstance::new(new_q, pot)
}

/// One substitution `arrow -> arrow + delta` of a right-equivalence, in the
/// arrow indexing of the quiver being reduced.
#[derive(Clone, Debug)]
pub struct Substitution {
    pub arrow: usize,
    pub delta: PathSum,
}

/// Record of a reduction: the substitutions applied in order and the
/// arrows (source indices) surviving into the reduced quiver.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub source: IceQuiver,
    pub substitutions: Vec<Substitution>,
    pub kept: Vec<usize>,
}

fn substitute_arrow(s: &PathSum, v: usize, delta: &PathSum, bound: usize) -> Result<PathSum> {
    let mut out = PathSum::new();
    for (w, c) in s {
        if !w.contains(&v) {
            accumulate(&mut out, w.clone(), c.clone());
            continue;
        }
        // expand each occurrence of v into v + delta
        let mut partial: Vec<(Word, Q)> = vec![(Vec::new(), c.clone())];
        for &x in w {
            let mut next = Vec::new();
            for (pw, pc) in &partial {
                let mut keep = pw.clone();
                keep.push(x);
                next.push((keep, pc.clone()));
                if x == v {
                    for (dw, dc) in delta {
                        let mut e = pw.clone();
                        e.extend_from_slice(dw);
                        if e.len() <= bound + 1 {
                            next.push((e, pc * dc));
                        } else {
                            return Err(Error::ReductionDegreeExceeded(bound));
                        }
                    }
                }
            }
            partial = next;
        }
        for (pw, pc) in partial {
            accumulate(&mut out, least_rotation(&pw), pc);
        }
    }
    if out.keys().any(|w| w.len() > bound) {
        return Err(Error::ReductionDegreeExceeded(bound));
    }
    Ok(out)
}

/// Splits off the trivial part by eliminating every degree-2 term.
pub fn reduce_with_trace(qp: &QPInstance, bound: Option<usize>) -> Result<(QPInstance, ReductionTrace)> {
    let bound = bound.unwrap_or_else(|| qp.default_reduction_bound());
    let q = &qp.quiver;
    let mut s = qp.index_potential();
    let mut subs = Vec::new();
    let mut removed = BTreeSet::new();
    while let Some((uv, c)) = s.iter().find(|(w, _)| w.len() == 2).map(|(w, c)| (w.clone(), c.clone())) {
        let (u, v) = (uv[0], uv[1]);
        let cinv = c.recip();
        // clear every other term through u by moving v
        loop {
            let mut w_sum = PathSum::new();
            for (w, coef) in &s {
                if *w == uv {
                    continue;
                }
                if let Some(i) = w.iter().position(|&x| x == u) {
                    let rest: Word = w[i + 1..].iter().chain(&w[..i]).copied().collect();
                    accumulate(&mut w_sum, rest, coef.clone());
                }
            }
            if w_sum.is_empty() {
                break;
            }
            let delta: PathSum = w_sum.into_iter().map(|(w, x)| (w, -(x * &cinv))).collect();
            s = substitute_arrow(&s, v, &delta, bound)?;
            subs.push(Substitution { arrow: v, delta });
        }
        // then every other term through v by moving u
        let mut w_sum = PathSum::new();
        for (w, coef) in &s {
            if *w == uv {
                continue;
            }
            if let Some(i) = w.iter().position(|&x| x == v) {
                let rest: Word = w[i + 1..].iter().chain(&w[..i]).copied().collect();
                accumulate(&mut w_sum, rest, coef.clone());
            }
        }
        if !w_sum.is_empty() {
            let delta: PathSum = w_sum.into_iter().map(|(w, x)| (w, -(x * &cinv))).collect();
            s = substitute_arrow(&s, u, &delta, bound)?;
            subs.push(Substitution { arrow: u, delta });
        }
        if s.get(&uv) != Some(&c) || s.keys().any(|w| *w != uv && (w.contains(&u) || w.contains(&v))) {
            return Err(Error::NonSplitTrivialPart);
        }
        s.remove(&uv);
        removed.insert(u);
        removed.insert(v);
    }
    let kept: Vec<usize> = (0..q.arrows().len()).filter(|i| !removed.contains(i)).collect();
    let arrows: Vec<Arrow> = kept.iter().map(|&i| q.arrow(i).clone()).collect();
    let new_q = IceQuiver::new_unchecked(q.m(), q.n(), arrows);
    let pot = Potential::from_index(&s, q);
    let reduced = QPInstance::new(new_q, pot)?;
    Ok((reduced, ReductionTrace { source: q.clone(), substitutions: subs, kept }))
}

pub fn reduce(qp: &QPInstance, bound: Option<usize>) -> Result<QPInstance> {
    Ok(reduce_with_trace(qp, bound)?.0)
}

pub fn mutate_qp(qp: &QPInstance, k: usize, bound: Option<usize>) -> Result<QPInstance> {
    let pre = premutate(qp, k)?;
    let bound = bound.unwrap_or_else(|| pre.default_reduction_bound());
    reduce(&pre, Some(bound))
}

/// Restriction to the full subquiver on `keep`; terms through deleted
/// arrows vanish. Returns the map new vertex -> old vertex as well.
pub fn restrict_potential(qp: &QPInstance, keep: &BTreeSet<usize>) -> (QPInstance, Vec<usize>) {
    let (sub, map) = crate::quiver::full_subquiver(&qp.quiver, keep);
    let pot = Potential::from_terms(
        qp.potential
            .terms()
            .filter(|(cyc, _)| cyc.iter().all(|a| sub.index_of(a).is_some()))
            .map(|(cyc, c)| (c.clone(), cyc.clone())),
    );
    (QPInstance { quiver: sub, potential: pot }, map)
}

/// Mutates along `word`; returns the 1-based position of the first step
/// whose reduced QP still has a 2-cycle.
pub fn check_2_acyclic_along(qp: &QPInstance, word: &[usize], bound: Option<usize>) -> Result<Option<usize>> {
    let mut cur = qp.clone();
    for (i, &k) in word.iter().enumerate() {
        cur = mutate_qp(&cur, k, bound)?;
        if !cur.is_two_acyclic() {
            return Ok(Some(i + 1));
        }
    }
    Ok(None)
}

/// Renames arrows of a mutation of the opposite QP to the names used by the
/// opposite of the mutated QP: composites swap their factors.
pub fn op_arrow_name(id: &str) -> String {
    if let Some(base) = id.strip_suffix('*') {
        return format!("{}*", op_arrow_name(base));
    }
    if let Some(inner) = id.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let mut depth = 0;
        for (i, ch) in inner.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                ',' if depth == 0 => {
                    let (a, b) = (&inner[..i], &inner[i + 1..]);
                    return format!("[{},{}]", op_arrow_name(b), op_arrow_name(a));
                }
                _ => {}
            }
        }
    }
    id.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn sl3() -> QPInstance {
        let quiver = IceQuiver::new(3, 1, vec![Arrow::new("a", 1, 3), Arrow::new("b", 2, 1)]).unwrap();
        QPInstance::new(quiver, Potential::zero()).unwrap()
    }

    fn triangle() -> QPInstance {
        let quiver = IceQuiver::new(
            3,
            3,
            vec![Arrow::new("a", 1, 2), Arrow::new("b", 2, 3), Arrow::new("c", 3, 1)],
        )
        .unwrap();
        QPInstance::new(quiver, Potential::from_terms([(q(1), vec!["c", "b", "a"])])).unwrap()
    }

    #[test]
    fn rotation_is_canonical() {
        let p = Potential::from_terms([(q(1), vec!["c", "a", "b"]), (q(2), vec!["a", "b", "c"])]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.terms().next().unwrap(), (&vec!["a".to_string(), "b".into(), "c".into()], &q(3)));
    }

    #[test]
    fn derivatives_of_triangle() {
        let t = triangle();
        let d = cyclic_derivative(&t, "b").unwrap();
        assert_eq!(d, PathComb::from([(vec!["a".to_string(), "c".to_string()], q(1))]));
        let dd = second_cyclic_derivative(&t, "b", "a").unwrap();
        assert_eq!(dd, PathComb::from([(vec!["c".to_string()], q(1))]));
        assert_eq!(second_cyclic_derivative(&t, "c", "b").unwrap(), PathComb::from([(vec!["a".to_string()], q(1))]));
        assert!(matches!(second_cyclic_derivative(&t, "a", "b"), Err(Error::NotAHook(..))));
        assert!(matches!(second_cyclic_derivative(&t, "c", "c"), Err(Error::NotAHook(..))));
    }

    #[test]
    fn sl3_premutation_adds_delta() {
        let pre = premutate(&sl3(), 1).unwrap();
        let terms: Vec<_> = pre.potential.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, &vec!["[a,b]".to_string(), "b*".into(), "a*".into()]);
    }

    #[test]
    fn pure_two_cycle_reduces_to_nothing() {
        let quiver = IceQuiver::new(2, 2, vec![Arrow::new("u", 1, 2), Arrow::new("v", 2, 1)]).unwrap();
        let qp = QPInstance::new(quiver, Potential::from_terms([(q(1), vec!["u", "v"])])).unwrap();
        let r = reduce(&qp, None).unwrap();
        assert!(r.quiver.arrows().is_empty());
        assert!(r.potential.is_empty());
    }

    #[test]
    fn sl3_double_mutation() {
        let once = mutate_qp(&sl3(), 1, None).unwrap();
        assert_eq!(once.quiver.arrows().len(), 3);
        assert_eq!(once.potential.len(), 1);
        let twice = mutate_qp(&once, 1, None).unwrap();
        assert_eq!(twice.quiver.arrow_multiset(), sl3().quiver.arrow_multiset());
        assert!(twice.potential.is_empty());
    }

    #[test]
    fn degenerate_potential_is_detected() {
        // 1 -> 2 -> 3 and 3 -> 1 with S = 0: mutating at 2 leaves a 2-cycle
        let quiver = IceQuiver::new(
            3,
            3,
            vec![Arrow::new("x", 1, 2), Arrow::new("y", 2, 3), Arrow::new("z", 3, 1)],
        )
        .unwrap();
        let qp = QPInstance::new(quiver, Potential::zero()).unwrap();
        assert_eq!(check_2_acyclic_along(&qp, &[2], None).unwrap(), Some(1));
        assert_eq!(check_2_acyclic_along(&qp, &[], None).unwrap(), None);
    }

    #[test]
    fn op_names_swap_composites() {
        assert_eq!(op_arrow_name("[a,b]"), "[b,a]");
        assert_eq!(op_arrow_name("[[a,b]*,c]"), "[c,[b,a]*]");
        assert_eq!(op_arrow_name("x*"), "x*");
        assert_eq!(op_arrow_name("[a,b]*"), "[b,a]*");
    }
}
