//! Sparse Laurent polynomials and rational functions over Q, plus
//! min-plus tropicalization of subtraction-free expressions.

use crate::error::{Error, Result};
use crate::linalg::{fmt_q, q, Q};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    fn add(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentExpr {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl LaurentExpr {
    pub fn zero(nvars: usize) -> Self {
        LaurentExpr { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut e = LaurentExpr::zero(nvars);
        if !c.is_zero() {
            e.terms.insert(Monomial(vec![0; nvars]), c);
        }
        e
    }

    pub fn one(nvars: usize) -> Self {
        LaurentExpr::constant(nvars, Q::one())
    }

    /// The variable with 0-based index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        LaurentExpr::monomial(exp, Q::one())
    }

    pub fn monomial(exp: Vec<i32>, c: Q) -> Self {
        let nvars = exp.len();
        let mut e = LaurentExpr::zero(nvars);
        if !c.is_zero() {
            e.terms.insert(Monomial(exp), c);
        }
        e
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i32>, Q)>) -> Result<Self> {
        let mut e = LaurentExpr::zero(nvars);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::AmbientMismatch(nvars, exp.len()));
            }
            e.add_term(Monomial(exp), c);
        }
        Ok(e)
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(m, c)| m.0.iter().all(|&e| e == 0) && c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, exp: &[i32]) -> Q {
        self.terms.get(&Monomial(exp.to_vec())).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    fn check(&self, other: &LaurentExpr) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::AmbientMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentExpr) -> Result<LaurentExpr> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LaurentExpr) -> Result<LaurentExpr> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentExpr {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> LaurentExpr {
        if s.is_zero() {
            return LaurentExpr::zero(self.nvars);
        }
        LaurentExpr {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentExpr) -> Result<LaurentExpr> {
        self.check(other)?;
        let mut out = LaurentExpr::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.add(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Multiplies by the monomial x^shift.
    pub fn shift(&self, shift: &[i32]) -> LaurentExpr {
        let s = Monomial(shift.to_vec());
        LaurentExpr {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.add(&s), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> LaurentExpr {
        let mut out = LaurentExpr::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base).expect("same ambient");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ambient");
            }
        }
        out
    }

    /// Inverse of a single term.
    pub fn inv_monomial(&self) -> Option<LaurentExpr> {
        if !self.is_monomial() {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some(LaurentExpr::monomial(m.0.iter().map(|e| -e).collect(), c.recip()))
    }

    /// Componentwise minimum of exponents (zero vector for the zero polynomial).
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut mins: Option<Vec<i32>> = None;
        for m in self.terms.keys() {
            mins = Some(match mins {
                None => m.0.clone(),
                Some(v) => v.iter().zip(&m.0).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        mins.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn max_exponents(&self) -> Vec<i32> {
        let mut maxs: Option<Vec<i32>> = None;
        for m in self.terms.keys() {
            maxs = Some(match maxs {
                None => m.0.clone(),
                Some(v) => v.iter().zip(&m.0).map(|(a, b)| *a.max(b)).collect(),
            });
        }
        maxs.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// Exact quotient self / divisor when it is again a Laurent polynomial.
    pub fn div_exact(&self, divisor: &LaurentExpr) -> Option<LaurentExpr> {
        if divisor.is_zero() || self.nvars != divisor.nvars {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let ds = divisor.min_exponents();
        let ns = self.min_exponents();
        let neg = |v: &[i32]| v.iter().map(|e| -e).collect::<Vec<_>>();
        let d0 = divisor.shift(&neg(&ds));
        let mut r = self.shift(&neg(&ns));
        let (lm, lc) = {
            let (m, c) = d0.leading()?;
            (m.clone(), c.clone())
        };
        let mut quot = LaurentExpr::zero(self.nvars);
        while let Some((m, c)) = r.leading() {
            let qm = m.sub(&lm);
            if qm.0.iter().any(|&e| e < 0) {
                return None;
            }
            let qc = c / &lc;
            let t = LaurentExpr { nvars: self.nvars, terms: BTreeMap::from([(qm.clone(), qc.clone())]) };
            r = r.sub(&d0.mul(&t).ok()?).ok()?;
            quot.add_term(qm, qc);
        }
        let back: Vec<i32> = ns.iter().zip(&ds).map(|(a, b)| a - b).collect();
        Some(quot.shift(&back))
    }

    /// Substitutes variable i by `vals[i]`; the result lives in the ambient
    /// ring of the values.
    pub fn substitute(&self, vals: &[RationalExpr]) -> Result<RationalExpr> {
        if vals.len() != self.nvars {
            return Err(Error::AmbientMismatch(self.nvars, vals.len()));
        }
        let out_n = vals.first().map(|v| v.nvars()).unwrap_or(0);
        if vals.iter().any(|v| v.nvars() != out_n) {
            return Err(Error::AmbientMismatch(out_n, out_n + 1));
        }
        if self.is_zero() {
            return Ok(RationalExpr::from_laurent(LaurentExpr::zero(out_n)));
        }
        let mins = self.min_exponents();
        let maxs = self.max_exponents();
        for (i, v) in vals.iter().enumerate() {
            if mins[i] < 0 && v.num.is_zero() {
                return Err(Error::ZeroDenominator);
            }
        }
        let mut cache: HashMap<(usize, bool, u32), LaurentExpr> = HashMap::new();
        let mut power = |i: usize, num: bool, e: u32| -> LaurentExpr {
            cache
                .entry((i, num, e))
                .or_insert_with(|| if num { vals[i].num.pow(e) } else { vals[i].den.pow(e) })
                .clone()
        };
        // common denominator prod q_i^{max+} p_i^{(-min)+}
        let mut den = LaurentExpr::one(out_n);
        for i in 0..self.nvars {
            let up = maxs[i].max(0) as u32;
            let down = (-mins[i]).max(0) as u32;
            if up > 0 {
                den = den.mul(&power(i, false, up))?;
            }
            if down > 0 {
                den = den.mul(&power(i, true, down))?;
            }
        }
        let mut num = LaurentExpr::zero(out_n);
        for (m, c) in &self.terms {
            let mut t = LaurentExpr::constant(out_n, c.clone());
            for i in 0..self.nvars {
                let e = m.0[i];
                let down = (-mins[i]).max(0);
                let up = maxs[i].max(0);
                let pe = (e + down) as u32;
                let qe = (up - e) as u32;
                if pe > 0 {
                    t = t.mul(&power(i, true, pe))?;
                }
                if qe > 0 {
                    t = t.mul(&power(i, false, qe))?;
                }
            }
            num = num.add(&t)?;
        }
        RationalExpr::new(num, den)
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn exponents(&self) -> Vec<Vec<i32>> {
        self.terms.keys().map(|m| m.0.clone()).collect()
    }

    /// Reindexes variables: variable i goes to position `map[i]` in a ring
    /// with `nvars` variables.
    pub fn reindex(&self, map: &[usize], nvars: usize) -> LaurentExpr {
        let mut out = LaurentExpr::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Replaces every exponent vector u by -u.
    pub fn invert_variables(&self) -> LaurentExpr {
        LaurentExpr {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(m.0.iter().map(|e| -e).collect()), c.clone()))
                .collect(),
        }
    }

    /// Renders with variables named `{name}_{i}` (1-based), highest term last.
    pub fn render(&self, name: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => mono.push_str(&format!("{}_{}", name, i + 1)),
                    _ => mono.push_str(&format!("{}_{}^{{{}}}", name, i + 1, e)),
                }
            }
            let coeff = if mono.is_empty() {
                fmt_q(c)
            } else if c.is_one() {
                String::new()
            } else if *c == -Q::one() {
                "-".to_string()
            } else {
                fmt_q(c)
            };
            parts.push(if mono.is_empty() { coeff } else { format!("{}{}", coeff, mono) });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Debug for LaurentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

impl fmt::Display for LaurentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

/// A quotient of Laurent polynomials kept in a light canonical form.
#[derive(Clone)]
pub struct RationalExpr {
    num: LaurentExpr,
    den: LaurentExpr,
}

impl PartialEq for RationalExpr {
    fn eq(&self, other: &Self) -> bool {
        self.nvars() == other.nvars()
            && self.num.mul(&other.den).ok() == other.num.mul(&self.den).ok()
    }
}

impl Eq for RationalExpr {}

impl fmt::Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl RationalExpr {
    pub fn new(num: LaurentExpr, den: LaurentExpr) -> Result<Self> {
        num.check(&den)?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut r = RationalExpr { num, den };
        r.canonicalize();
        Ok(r)
    }

    pub fn from_laurent(p: LaurentExpr) -> Self {
        let n = p.nvars;
        RationalExpr { num: p, den: LaurentExpr::one(n) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        RationalExpr::from_laurent(LaurentExpr::var(nvars, i))
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        RationalExpr::from_laurent(LaurentExpr::constant(nvars, c))
    }

    pub fn one(nvars: usize) -> Self {
        RationalExpr::constant(nvars, Q::one())
    }

    pub fn num(&self) -> &LaurentExpr {
        &self.num
    }

    pub fn den(&self) -> &LaurentExpr {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn canonicalize(&mut self) {
        let n = self.num.nvars;
        if self.num.is_zero() {
            self.den = LaurentExpr::one(n);
            return;
        }
        let content = self.den.min_exponents();
        if content.iter().any(|&e| e != 0) {
            let neg: Vec<i32> = content.iter().map(|e| -e).collect();
            self.den = self.den.shift(&neg);
            self.num = self.num.shift(&neg);
        }
        if !self.den.is_monomial() {
            if let Some(qt) = self.num.div_exact(&self.den) {
                self.num = qt;
                self.den = LaurentExpr::one(n);
                return;
            }
            for k in 0..n {
                let f = LaurentExpr::one(n).add(&LaurentExpr::var(n, k)).expect("same ambient");
                loop {
                    let (Some(dq), Some(nq)) = (self.den.div_exact(&f), self.num.div_exact(&f)) else {
                        break;
                    };
                    self.den = dq;
                    self.num = nq;
                }
            }
        }
        let lc = self.den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lc.is_one() {
            let inv = lc.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn add(&self, other: &RationalExpr) -> Result<RationalExpr> {
        if self.den == other.den {
            return RationalExpr::new(self.num.add(&other.num)?, self.den.clone());
        }
        let n = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        RationalExpr::new(n, self.den.mul(&other.den)?)
    }

    pub fn neg(&self) -> RationalExpr {
        RationalExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RationalExpr) -> Result<RationalExpr> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalExpr) -> Result<RationalExpr> {
        RationalExpr::new(self.num.mul(&other.num)?, self.den.mul(&other.den)?)
    }

    pub fn inv(&self) -> Result<RationalExpr> {
        RationalExpr::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RationalExpr) -> Result<RationalExpr> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<RationalExpr> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        RationalExpr::new(base.num.pow(k), base.den.pow(k))
    }

    pub fn substitute(&self, vals: &[RationalExpr]) -> Result<RationalExpr> {
        let n = self.num.substitute(vals)?;
        let d = self.den.substitute(vals)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        n.div(&d)
    }

    /// The Laurent polynomial this expression equals, if any.
    pub fn as_laurent(&self) -> Option<LaurentExpr> {
        if self.den.is_monomial() {
            let inv = self.den.inv_monomial()?;
            return self.num.mul(&inv).ok();
        }
        self.num.div_exact(&self.den)
    }

    pub fn tropicalize(&self) -> Result<TropicalForm> {
        if !self.num.all_coefficients_positive() || !self.den.all_coefficients_positive() {
            return Err(Error::NonPositiveCoefficient);
        }
        Ok(TropicalForm {
            numer_exponents: self.num.exponents().into_iter().map(to_i64).collect(),
            denom_exponents: self.den.exponents().into_iter().map(to_i64).collect(),
        })
    }

    /// A polynomial in inverse variables: every exponent is nonpositive.
    pub fn as_inverse_polynomial(&self) -> Result<LaurentExpr> {
        let p = self.as_laurent().ok_or(Error::NotInverseLaurent)?;
        if p.terms.keys().any(|m| m.0.iter().any(|&e| e > 0)) {
            return Err(Error::NotInverseLaurent);
        }
        Ok(p)
    }
}

fn to_i64(v: Vec<i32>) -> Vec<i64> {
    v.into_iter().map(|e| e as i64).collect()
}

/// min over numerator exponents minus min over denominator exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalForm {
    pub numer_exponents: Vec<Vec<i64>>,
    pub denom_exponents: Vec<Vec<i64>>,
}

impl TropicalForm {
    pub fn linear(u: Vec<i64>) -> Self {
        let n = u.len();
        TropicalForm { numer_exponents: vec![u], denom_exponents: vec![vec![0; n]] }
    }

    pub fn eval(&self, x: &[i64]) -> i64 {
        let dot = |u: &Vec<i64>| u.iter().zip(x).map(|(a, b)| a * b).sum::<i64>();
        let a = self.numer_exponents.iter().map(dot).min().unwrap_or(0);
        let b = self.denom_exponents.iter().map(dot).min().unwrap_or(0);
        a - b
    }

    /// Normals of the inequalities self >= 0 when the denominator is a
    /// single monomial.
    pub fn normals(&self) -> Option<Vec<Vec<i64>>> {
        if self.denom_exponents.len() != 1 {
            return None;
        }
        let d = &self.denom_exponents[0];
        Some(
            self.numer_exponents
                .iter()
                .map(|u| u.iter().zip(d).map(|(a, b)| a - b).collect())
                .collect(),
        )
    }
}

pub fn tropicalize(f: &RationalExpr) -> Result<TropicalForm> {
    f.tropicalize()
}

pub fn as_inverse_polynomial(f: &RationalExpr) -> Result<LaurentExpr> {
    f.as_inverse_polynomial()
}

/// 1 + x^u as a Laurent polynomial.
pub fn one_plus_monomial(nvars: usize, exp: Vec<i32>) -> LaurentExpr {
    LaurentExpr::one(nvars).add(&LaurentExpr::monomial(exp, q(1))).expect("same ambient")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> LaurentExpr {
        LaurentExpr::var(n, i)
    }

    #[test]
    fn cancellation_and_inverse() {
        let a = x(2, 0).add(&x(2, 1)).unwrap();
        assert_eq!(a.add(&x(2, 1).neg()).unwrap(), x(2, 0));
        let inv = x(2, 0).inv_monomial().unwrap();
        assert!(x(2, 0).mul(&inv).unwrap().is_one());
    }

    #[test]
    fn monomial_times_denominator() {
        let u = LaurentExpr::monomial(vec![-1, 1, -1], q(1));
        let d = LaurentExpr::monomial(vec![1, 0, 1], q(1));
        assert_eq!(u.mul(&d).unwrap(), x(3, 1));
    }

    #[test]
    fn exact_division() {
        // (x+1)(x^2 y + 3) / (x+1)
        let a = one_plus_monomial(2, vec![1, 0]);
        let b = LaurentExpr::monomial(vec![2, 1], q(1)).add(&LaurentExpr::constant(2, q(3))).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(b.div_exact(&a).is_none());
        let shifted = p.shift(&[-3, 2]);
        assert_eq!(shifted.div_exact(&a).unwrap(), b.shift(&[-3, 2]));
    }

    #[test]
    fn rational_canonical_form() {
        let n = 2;
        let a = one_plus_monomial(n, vec![1, 0]);
        let f = RationalExpr::new(a.mul(&x(n, 1)).unwrap(), a.shift(&[2, 0]).scale(&q(3))).unwrap();
        assert!(f.den().is_one());
        assert_eq!(f.num(), &LaurentExpr::monomial(vec![-2, 1], crate::linalg::qf(1, 3)));
    }

    #[test]
    fn substitution_of_inverse() {
        // X2^{-1} with X2 -> x3/x2 gives x2/x3
        let f = RationalExpr::from_laurent(LaurentExpr::monomial(vec![0, -1, 0], q(1)));
        let vals = vec![
            RationalExpr::var(3, 0),
            RationalExpr::from_laurent(LaurentExpr::monomial(vec![0, -1, 1], q(1))),
            RationalExpr::var(3, 2),
        ];
        let g = f.substitute(&vals).unwrap();
        assert_eq!(g, RationalExpr::from_laurent(LaurentExpr::monomial(vec![0, 1, -1], q(1))));
    }

    #[test]
    fn tropical_of_sum() {
        let f = RationalExpr::from_laurent(x(3, 0).add(&LaurentExpr::monomial(vec![0, 1, -1], q(1))).unwrap());
        let t = f.tropicalize().unwrap();
        assert_eq!(t.eval(&[2, 5, 1]), 2);
        assert_eq!(t.eval(&[7, 1, 3]), -2);
        let bad = RationalExpr::from_laurent(x(1, 0).neg());
        assert_eq!(bad.tropicalize(), Err(Error::NonPositiveCoefficient));
    }

    #[test]
    fn inverse_polynomial_check() {
        let n = 2;
        let num = one_plus_monomial(n, vec![1, 0]);
        let den = LaurentExpr::monomial(vec![1, 1], q(1));
        let f = RationalExpr::new(num, den).unwrap();
        let p = f.as_inverse_polynomial().unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&[0, -1]), q(1));
        assert_eq!(p.coeff(&[-1, -1]), q(1));
        assert!(RationalExpr::var(2, 0).as_inverse_polynomial().is_err());
    }
}
