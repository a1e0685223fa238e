//! Seeds on the regular tree: A-, X- and y-mutation, optimized seeds for a
//! frozen vertex, and the Landau-Ginzburg potential computed two ways.

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::qp::{restrict_potential, QPInstance};
use crate::quiver::{b_matrix, full_subquiver, mutate_b_matrix, BMatrix, IceQuiver};
use crate::rep::{build_projective, dual_f_polynomial};
use crate::symbolic::{LaurentExpr, RationalExpr};
use num_traits::One;
use std::collections::{BTreeSet, HashSet, VecDeque};

pub const DEFAULT_DEPTH_MAX: usize = 10;

/// A vertex of the n-regular tree reached from the base seed by `word`,
/// with the exchange matrices along the way.
#[derive(Clone, Debug)]
pub struct SeedPath {
    pub base: BMatrix,
    pub word: Vec<usize>,
    /// `matrices[i]` is B after the first i mutations.
    pub matrices: Vec<BMatrix>,
}

impl SeedPath {
    pub fn new(base: BMatrix, word: Vec<usize>) -> Result<Self> {
        let mut matrices = vec![base.clone()];
        for &k in &word {
            if k == 0 || k > base.n() {
                return Err(Error::NotMutable(k));
            }
            let next = mutate_b_matrix(matrices.last().expect("nonempty"), k);
            matrices.push(next);
        }
        Ok(SeedPath { base, word, matrices })
    }

    pub fn end(&self) -> &BMatrix {
        self.matrices.last().expect("nonempty")
    }

    /// Pulls an expression in the end chart back to the base chart.
    pub fn pullback(&self, expr: &RationalExpr) -> Result<RationalExpr> {
        let mut cur = expr.clone();
        for (i, &k) in self.word.iter().enumerate().rev() {
            cur = x_pullback_step(&cur, k, &self.matrices[i])?;
        }
        Ok(cur)
    }
}

fn one_plus_power(base: &RationalExpr, sign: i64, power: i64) -> Result<RationalExpr> {
    let n = base.nvars();
    let inner = if sign >= 0 { base.clone() } else { base.inv()? };
    RationalExpr::one(n).add(&inner)?.pow(power as i32)
}

/// Rewrites an expression in the X-chart of μ_k(t) in the chart of t, where
/// `b` is B(t): X_k ↦ X_k^{-1}, X_i ↦ X_i (1 + X_k^{-sgn b_ki})^{-b_ki}.
pub fn x_pullback_step(expr: &RationalExpr, k: usize, b: &BMatrix) -> Result<RationalExpr> {
    let m = b.m();
    if expr.nvars() != m {
        return Err(Error::AmbientMismatch(expr.nvars(), m));
    }
    let xk = RationalExpr::var(m, k - 1);
    let mut vals = Vec::with_capacity(m);
    for i in 1..=m {
        let xi = RationalExpr::var(m, i - 1);
        if i == k {
            vals.push(xi.inv()?);
            continue;
        }
        let bki = b.get(k, i);
        if bki == 0 {
            vals.push(xi);
        } else {
            vals.push(xi.mul(&one_plus_power(&xk, -bki.signum(), -bki)?)?);
        }
    }
    expr.substitute(&vals)
}

/// y_k ↦ y_k^{-1}, y_j ↦ y_j (1 + y_k^{-sgn b_jk})^{-b_jk}.
pub fn y_mutate(y: &[RationalExpr], b: &BMatrix, k: usize) -> Result<Vec<RationalExpr>> {
    if y.len() != b.m() {
        return Err(Error::AmbientMismatch(y.len(), b.m()));
    }
    let yk = &y[k - 1];
    y.iter()
        .enumerate()
        .map(|(j0, yj)| {
            let j = j0 + 1;
            if j == k {
                return yj.inv();
            }
            let bjk = b.get(j, k);
            if bjk == 0 {
                Ok(yj.clone())
            } else {
                yj.mul(&one_plus_power(yk, -bjk.signum(), -bjk)?)
            }
        })
        .collect()
}

/// Exchange relation u_k u_k' = Π_{h(α)=k} u_{t(α)} + Π_{t(α)=k} u_{h(α)}.
pub fn a_mutate(u: &[RationalExpr], q: &IceQuiver, k: usize) -> Result<Vec<RationalExpr>> {
    if u.len() != q.m() {
        return Err(Error::AmbientMismatch(u.len(), q.m()));
    }
    let n = u[0].nvars();
    let mut into = RationalExpr::one(n);
    let mut out = RationalExpr::one(n);
    for a in q.arrows() {
        if a.h == k {
            into = into.mul(&u[a.t - 1])?;
        }
        if a.t == k {
            out = out.mul(&u[a.h - 1])?;
        }
    }
    let mut res = u.to_vec();
    res[k - 1] = into.add(&out)?.div(&u[k - 1])?;
    Ok(res)
}

/// Shortest mutation word (BFS, ascending k, dedup by exact B-matrix) after
/// which `ell` is a sink.
pub fn find_optimized_seed(q: &IceQuiver, ell: usize, depth_max: usize) -> Result<SeedPath> {
    if ell <= q.n() || ell > q.m() {
        return Err(Error::InvalidQuiver(format!("vertex {ell} is not frozen")));
    }
    let base = b_matrix(q);
    let mut seen: HashSet<BMatrix> = HashSet::from([base.clone()]);
    let mut queue: VecDeque<(BMatrix, Vec<usize>)> = VecDeque::from([(base.clone(), Vec::new())]);
    while let Some((b, word)) = queue.pop_front() {
        if b.is_sink(ell) {
            return SeedPath::new(base, word);
        }
        if word.len() >= depth_max {
            continue;
        }
        for k in 1..=q.n() {
            if word.last() == Some(&k) {
                continue;
            }
            let next = mutate_b_matrix(&b, k);
            if seen.insert(next.clone()) {
                let mut w = word.clone();
                w.push(k);
                queue.push_back((next, w));
            }
        }
    }
    Err(Error::NotFoundWithinDepth(depth_max))
}

fn keep_set(q: &IceQuiver, ell: usize) -> BTreeSet<usize> {
    (1..=q.n()).chain([ell]).collect()
}

/// W_ℓ in the initial X-chart, by pulling X_ℓ^{-1} back from an optimized
/// seed of the full subquiver on the mutable vertices and ℓ.
pub fn lg_potential_chart(q: &IceQuiver, ell: usize, depth_max: usize) -> Result<LaurentExpr> {
    let (sub, map) = full_subquiver(q, &keep_set(q, ell));
    let local_ell = sub.m();
    let path = find_optimized_seed(&sub, local_ell, depth_max)?;
    let start = RationalExpr::var(sub.m(), local_ell - 1).inv()?;
    let w = path.pullback(&start)?.as_inverse_polynomial()?;
    Ok(w.reindex(&map.iter().map(|x| x - 1).collect::<Vec<_>>(), q.m()))
}

/// All W_ℓ for frozen ℓ, in increasing ℓ.
pub fn lg_potential(q: &IceQuiver, depth_max: usize) -> Result<Vec<(usize, LaurentExpr)>> {
    (q.n() + 1..=q.m()).map(|ell| Ok((ell, lg_potential_chart(q, ell, depth_max)?))).collect()
}

/// W_ℓ as F^∨ of the projective at ℓ evaluated at X^{-1}, minus 1.
pub fn lg_potential_via_fpoly(qp: &QPInstance, ell: usize, d_max: usize) -> Result<LaurentExpr> {
    let q = &qp.quiver;
    let (sub, map) = restrict_potential(qp, &keep_set(q, ell));
    let p = build_projective(&sub, sub.quiver.m(), d_max)?;
    let f = dual_f_polynomial(&sub.quiver, &p)?;
    let w = f.invert_variables().sub(&LaurentExpr::constant(sub.quiver.m(), Q::one()))?;
    Ok(w.reindex(&map.iter().map(|x| x - 1).collect::<Vec<_>>(), q.m()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Arrow;

    fn sl3() -> IceQuiver {
        IceQuiver::new(3, 1, vec![Arrow::new("a", 1, 3), Arrow::new("b", 2, 1)]).unwrap()
    }

    fn x(i: usize) -> RationalExpr {
        RationalExpr::var(3, i - 1)
    }

    #[test]
    fn optimized_seeds_for_sl3() {
        assert!(find_optimized_seed(&sl3(), 3, 10).unwrap().word.is_empty());
        assert_eq!(find_optimized_seed(&sl3(), 2, 10).unwrap().word, vec![1]);
        assert_eq!(find_optimized_seed(&sl3(), 2, 0).unwrap_err(), Error::NotFoundWithinDepth(0));
    }

    #[test]
    fn sl3_potentials() {
        let w2 = lg_potential_chart(&sl3(), 2, 10).unwrap();
        let expect = x(2).inv().unwrap().add(&x(1).mul(&x(2)).unwrap().inv().unwrap()).unwrap();
        assert_eq!(RationalExpr::from_laurent(w2), expect);
        let w3 = lg_potential_chart(&sl3(), 3, 10).unwrap();
        assert_eq!(RationalExpr::from_laurent(w3), x(3).inv().unwrap());
    }

    #[test]
    fn pullback_step_is_an_involution() {
        let b = b_matrix(&sl3());
        let e = x(2).add(&x(1).mul(&x(3)).unwrap()).unwrap();
        let b1 = mutate_b_matrix(&b, 1);
        let there = x_pullback_step(&e, 1, &b).unwrap();
        assert_eq!(x_pullback_step(&there, 1, &b1).unwrap(), e);
    }

    #[test]
    fn exchange_relation_sl3() {
        let u: Vec<RationalExpr> = (1..=3).map(x).collect();
        let out = a_mutate(&u, &sl3(), 1).unwrap();
        assert_eq!(out[0], x(2).add(&x(3)).unwrap().div(&x(1)).unwrap());
        let isolated = IceQuiver::new(1, 1, vec![]).unwrap();
        let v = a_mutate(&[RationalExpr::var(1, 0)], &isolated, 1).unwrap();
        assert_eq!(v[0], RationalExpr::constant(1, crate::linalg::q(2)).div(&RationalExpr::var(1, 0)).unwrap());
    }

    #[test]
    fn y_mutation_is_an_involution() {
        let q = IceQuiver::new(2, 2, vec![Arrow::new("a", 1, 2)]).unwrap();
        let b = b_matrix(&q);
        let y: Vec<RationalExpr> = (0..2).map(|i| RationalExpr::var(2, i)).collect();
        let once = y_mutate(&y, &b, 1).unwrap();
        let twice = y_mutate(&once, &mutate_b_matrix(&b, 1), 1).unwrap();
        assert_eq!(twice, y);
    }
}
