//! JSON encodings of quivers, potentials, representations, Laurent and
//! rational expressions, and cones.

use crate::error::{Error, Result};
use crate::linalg::{fmt_q, parse_q, Mat, Q};
use crate::qp::{Potential, QPInstance};
use crate::quiver::{Arrow, IceQuiver};
use crate::rep::DecoratedRep;
use crate::symbolic::{LaurentExpr, RationalExpr};
use crate::typea::Cone;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    id: String,
    t: usize,
    h: usize,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    m: usize,
    n: usize,
    arrows: Vec<ArrowJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    cycle: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct MonoJson {
    coeff: String,
    exp: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    dims: Vec<usize>,
    v: Vec<usize>,
    maps: BTreeMap<String, Vec<Vec<String>>>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn coeff(s: &str) -> Result<Q> {
    parse_q(s).ok_or_else(|| Error::Parse(format!("bad rational {s:?}")))
}

pub fn quiver_to_json(q: &IceQuiver) -> Value {
    let arrows = q.arrows().iter().map(|a| ArrowJson { id: a.id.clone(), t: a.t, h: a.h }).collect();
    serde_json::to_value(QuiverJson { m: q.m(), n: q.n(), arrows }).expect("serializable")
}

pub fn quiver_from_json(v: &Value) -> Result<IceQuiver> {
    let j: QuiverJson = serde_json::from_value(v.clone()).map_err(parse_err)?;
    IceQuiver::new(j.m, j.n, j.arrows.into_iter().map(|a| Arrow::new(a.id, a.t, a.h)).collect())
}

pub fn potential_to_json(s: &Potential) -> Value {
    let terms: Vec<TermJson> = s.terms().map(|(c, x)| TermJson { coeff: fmt_q(x), cycle: c.clone() }).collect();
    serde_json::to_value(terms).expect("serializable")
}

pub fn potential_from_json(v: &Value) -> Result<Potential> {
    let terms: Vec<TermJson> = serde_json::from_value(v.clone()).map_err(parse_err)?;
    let mut s = Potential::zero();
    for t in terms {
        s.add_term(coeff(&t.coeff)?, t.cycle);
    }
    Ok(s)
}

/// {"quiver": …, "potential": …}
pub fn qp_to_json(qp: &QPInstance) -> Value {
    json!({"quiver": quiver_to_json(&qp.quiver), "potential": potential_to_json(&qp.potential)})
}

pub fn qp_from_json(v: &Value) -> Result<QPInstance> {
    let q = quiver_from_json(v.get("quiver").ok_or_else(|| Error::Parse("missing \"quiver\"".into()))?)?;
    let s = match v.get("potential") {
        Some(p) => potential_from_json(p)?,
        None => Potential::zero(),
    };
    QPInstance::new(q, s)
}

fn mat_to_json(m: &Mat) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(fmt_q).collect()).collect()
}

pub fn rep_to_json(r: &DecoratedRep) -> Value {
    let maps = r.maps.iter().map(|(k, m)| (k.clone(), mat_to_json(m))).collect();
    serde_json::to_value(RepJson { dims: r.dims.clone(), v: r.v.clone(), maps }).expect("serializable")
}

/// Reads a representation; matrix entries may be JSON integers or "p/q"
/// strings. Missing maps are zero.
pub fn rep_from_json(q: &IceQuiver, v: &Value) -> Result<DecoratedRep> {
    let dims: Vec<usize> = serde_json::from_value(v.get("dims").cloned().unwrap_or(Value::Null)).map_err(parse_err)?;
    if dims.len() != q.m() {
        return Err(Error::InvalidRep(format!("expected {} dims, got {}", q.m(), dims.len())));
    }
    let dv: Vec<usize> = match v.get("v") {
        Some(x) => serde_json::from_value(x.clone()).map_err(parse_err)?,
        None => vec![0; q.m()],
    };
    if dv.len() != q.m() {
        return Err(Error::InvalidRep(format!("expected {} decorations, got {}", q.m(), dv.len())));
    }
    let mut r = DecoratedRep::with_zero_maps(q, dims, dv);
    if let Some(maps) = v.get("maps").and_then(Value::as_object) {
        for (id, m) in maps {
            let a = q.index_of(id).map(|i| q.arrow(i)).ok_or_else(|| Error::UnknownArrow(id.clone()))?;
            let rows = m.as_array().ok_or_else(|| Error::Parse(format!("map {id} is not a matrix")))?;
            let (nr, nc) = (r.dim(a.h), r.dim(a.t));
            if rows.len() != nr {
                return Err(Error::InvalidRep(format!("map {id} has {} rows, expected {nr}", rows.len())));
            }
            let mut entries = Vec::with_capacity(nr);
            for row in rows {
                let row = row.as_array().ok_or_else(|| Error::Parse(format!("map {id} row is not a list")))?;
                if row.len() != nc {
                    return Err(Error::InvalidRep(format!("map {id} has {} columns, expected {nc}", row.len())));
                }
                entries.push(row.iter().map(value_to_q).collect::<Result<Vec<_>>>()?);
            }
            r.maps.insert(id.clone(), Mat::from_rows(nr, nc, entries));
        }
    }
    Ok(r)
}

fn value_to_q(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => coeff(s),
        Value::Number(n) => n
            .as_i64()
            .map(|x| Q::from_integer(x.into()))
            .ok_or_else(|| Error::Parse(format!("non-integer number {n}"))),
        _ => Err(Error::Parse(format!("bad matrix entry {v}"))),
    }
}

pub fn laurent_to_json(p: &LaurentExpr) -> Value {
    let terms: Vec<MonoJson> = p.terms().map(|(m, c)| MonoJson { coeff: fmt_q(c), exp: m.0.clone() }).collect();
    serde_json::to_value(terms).expect("serializable")
}

pub fn laurent_from_json(nvars: usize, v: &Value) -> Result<LaurentExpr> {
    let terms: Vec<MonoJson> = serde_json::from_value(v.clone()).map_err(parse_err)?;
    let terms = terms.into_iter().map(|t| Ok((t.exp, coeff(&t.coeff)?))).collect::<Result<Vec<_>>>()?;
    LaurentExpr::from_terms(nvars, terms)
}

pub fn rational_to_json(f: &RationalExpr) -> Value {
    json!({"num": laurent_to_json(f.num()), "den": laurent_to_json(f.den())})
}

pub fn rational_from_json(nvars: usize, v: &Value) -> Result<RationalExpr> {
    let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing {k:?}")));
    RationalExpr::new(laurent_from_json(nvars, get("num")?)?, laurent_from_json(nvars, get("den")?)?)
}

pub fn cone_to_json(c: &Cone) -> Value {
    json!({"dim": c.dim, "normals": c.normals})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qf;

    #[test]
    fn quiver_roundtrip() {
        let q = IceQuiver::new(3, 1, vec![Arrow::new("a", 1, 3), Arrow::new("b", 2, 1)]).unwrap();
        assert_eq!(quiver_from_json(&quiver_to_json(&q)).unwrap(), q);
    }

    #[test]
    fn expression_roundtrip() {
        let p = LaurentExpr::from_terms(2, vec![(vec![-1, 2], qf(3, 4)), (vec![0, 0], qf(-1, 1))]).unwrap();
        assert_eq!(laurent_from_json(2, &laurent_to_json(&p)).unwrap(), p);
        let f = RationalExpr::var(2, 0).div(&RationalExpr::from_laurent(p)).unwrap();
        assert_eq!(rational_from_json(2, &rational_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn rep_entries_accept_integers() {
        let q = IceQuiver::new(2, 2, vec![Arrow::new("a", 1, 2)]).unwrap();
        let v = json!({"dims": [1, 1], "maps": {"a": [[2]]}});
        let r = rep_from_json(&q, &v).unwrap();
        assert_eq!(rep_from_json(&q, &rep_to_json(&r)).unwrap(), r);
        assert!(rep_from_json(&q, &json!({"dims": [1, 1], "maps": {"a": [[1, 2]]}})).is_err());
    }
}
