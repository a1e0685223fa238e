//! Python bindings for the qpc core crate.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use qpc::cluster::{lg_potential_chart, lg_potential_via_fpoly, DEFAULT_DEPTH_MAX};
use qpc::io;
use qpc::linalg::parse_q;
use qpc::rep::{self, DEFAULT_D_MAX};
use qpc::{qp, quiver, typea, Arrow, DecoratedRep, IceQuiver, Potential, QPInstance};
use serde_json::Value;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_json(s: &str) -> PyResult<Value> {
    serde_json::from_str(s).map_err(err)
}

fn word(letters: Vec<usize>) -> PyResult<typea::ReducedWord> {
    typea::ReducedWord::parse(&letters).map_err(err)
}

/// An ice quiver on vertices 1..=m whose first n vertices are mutable.
#[pyclass(name = "Quiver", module = "qpc_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyQuiver(IceQuiver);

#[pymethods]
impl PyQuiver {
    #[new]
    fn new(m: usize, n: usize, arrows: Vec<(String, usize, usize)>) -> PyResult<Self> {
        let arrows = arrows.into_iter().map(|(id, t, h)| Arrow::new(id, t, h)).collect();
        IceQuiver::new(m, n, arrows).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        io::quiver_from_json(&parse_json(s)?).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        io::quiver_to_json(&self.0).to_string()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn arrows(&self) -> Vec<(String, usize, usize)> {
        self.0.arrows().iter().map(|a| (a.id.clone(), a.t, a.h)).collect()
    }

    /// The m x n exchange matrix.
    fn b_matrix(&self) -> Vec<Vec<i64>> {
        quiver::b_matrix(&self.0).entries()
    }

    fn mutate(&self, k: usize) -> PyResult<Self> {
        quiver::mutate_quiver(&self.0, k).map(Self).map_err(err)
    }

    fn is_sink(&self, ell: usize) -> bool {
        self.0.is_sink(ell)
    }

    #[pyo3(signature = (ell, depth_max = None))]
    fn lg_potential(&self, ell: usize, depth_max: Option<usize>) -> PyResult<String> {
        let w = lg_potential_chart(&self.0, ell, depth_max.unwrap_or(DEFAULT_DEPTH_MAX)).map_err(err)?;
        Ok(w.render("X"))
    }

    fn __repr__(&self) -> String {
        format!("Quiver(m={}, n={}, arrows={})", self.0.m(), self.0.n(), self.0.arrows().len())
    }
}

/// A quiver with potential.
#[pyclass(name = "QP", module = "qpc_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyQP(QPInstance);

#[pymethods]
impl PyQP {
    /// `terms` is a list of (coefficient, cycle) with coefficients written
    /// as "p/q" strings.
    #[new]
    fn new(quiver: &PyQuiver, terms: Vec<(String, Vec<String>)>) -> PyResult<Self> {
        let mut s = Potential::zero();
        for (c, cycle) in terms {
            let c = parse_q(&c).ok_or_else(|| err(format!("bad rational {c:?}")))?;
            s.add_term(c, cycle);
        }
        QPInstance::new(quiver.0.clone(), s).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        io::qp_from_json(&parse_json(s)?).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        io::qp_to_json(&self.0).to_string()
    }

    #[getter]
    fn quiver(&self) -> PyQuiver {
        PyQuiver(self.0.quiver.clone())
    }

    #[getter]
    fn potential(&self) -> Vec<(String, Vec<String>)> {
        self.0.potential.terms().map(|(c, x)| (qpc::linalg::fmt_q(x), c.clone())).collect()
    }

    #[pyo3(signature = (k, bound = None))]
    fn mutate(&self, k: usize, bound: Option<usize>) -> PyResult<Self> {
        qp::mutate_qp(&self.0, k, bound).map(Self).map_err(err)
    }

    fn opposite(&self) -> Self {
        Self(self.0.opposite())
    }

    #[pyo3(signature = (ell, d_max = None))]
    fn projective(&self, ell: usize, d_max: Option<usize>) -> PyResult<PyRep> {
        rep::build_projective(&self.0, ell, d_max.unwrap_or(DEFAULT_D_MAX)).map(PyRep).map_err(err)
    }

    #[pyo3(signature = (ell, d_max = None))]
    fn injective(&self, ell: usize, d_max: Option<usize>) -> PyResult<PyRep> {
        rep::build_injective(&self.0, ell, d_max.unwrap_or(DEFAULT_D_MAX)).map(PyRep).map_err(err)
    }

    /// W_ℓ through the dual F-polynomial of the projective at ℓ.
    #[pyo3(signature = (ell, d_max = None))]
    fn lg_potential(&self, ell: usize, d_max: Option<usize>) -> PyResult<String> {
        let w = lg_potential_via_fpoly(&self.0, ell, d_max.unwrap_or(DEFAULT_D_MAX)).map_err(err)?;
        Ok(w.render("X"))
    }

    fn __repr__(&self) -> String {
        format!("QP(m={}, n={}, terms={})", self.0.quiver.m(), self.0.quiver.n(), self.0.potential.len())
    }
}

/// A decorated representation.
#[pyclass(name = "Rep", module = "qpc_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRep(DecoratedRep);

#[pymethods]
impl PyRep {
    #[staticmethod]
    fn from_json(quiver: &PyQuiver, s: &str) -> PyResult<Self> {
        io::rep_from_json(&quiver.0, &parse_json(s)?).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        io::rep_to_json(&self.0).to_string()
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.dims.clone()
    }

    #[getter]
    fn v(&self) -> Vec<usize> {
        self.0.v.clone()
    }

    /// Returns the mutated QP together with the mutated representation.
    fn mutate(&self, qp: &PyQP, k: usize) -> PyResult<(PyQP, PyRep)> {
        let (q2, r2) = rep::mutate_rep(&qp.0, &self.0, k, None).map_err(err)?;
        Ok((PyQP(q2), PyRep(r2)))
    }

    fn dual(&self) -> Self {
        Self(rep::dualize(&self.0))
    }

    fn is_isomorphic(&self, quiver: &PyQuiver, other: &PyRep) -> bool {
        rep::is_isomorphic(&quiver.0, &self.0, &other.0)
    }

    fn g_vector(&self, qp: &PyQP) -> Vec<i64> {
        rep::g_vector(&qp.0, &self.0)
    }

    fn h_vector(&self, qp: &PyQP) -> Vec<i64> {
        rep::h_vector(&qp.0, &self.0)
    }

    fn f_polynomial(&self, quiver: &PyQuiver) -> PyResult<String> {
        rep::f_polynomial(&quiver.0, &self.0).map(|f| f.render("y")).map_err(err)
    }

    fn thin_quotients(&self, quiver: &PyQuiver) -> PyResult<Vec<Vec<usize>>> {
        rep::enumerate_thin_quotients(&quiver.0, &self.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Rep(dims={:?}, v={:?})", self.0.dims, self.0.v)
    }
}

/// The quiver with potential attached to a reduced word of w_0.
#[pyfunction]
fn gamma_qp(letters: Vec<usize>) -> PyResult<PyQP> {
    typea::gamma_qp(&word(letters)?).map(|(_, q)| PyQP(q)).map_err(err)
}

/// The frozen vertex ℓ_i for each Dynkin index i.
#[pyfunction]
fn frozen_vertices(letters: Vec<usize>) -> PyResult<Vec<usize>> {
    Ok(typea::gamma_quiver(&word(letters)?).ell)
}

/// (ℓ_i, chart, fpoly, paths) for every Dynkin index i, potentials as strings.
#[pyfunction]
fn lg_potentials(letters: Vec<usize>) -> PyResult<Vec<(usize, String, String, String)>> {
    let w = word(letters)?;
    let (g, qp) = typea::gamma_qp(&w).map_err(err)?;
    let mut out = Vec::new();
    for (i, &ell) in g.ell.iter().enumerate() {
        let chart = lg_potential_chart(&qp.quiver, ell, DEFAULT_DEPTH_MAX).map_err(err)?;
        let fpoly = lg_potential_via_fpoly(&qp, ell, DEFAULT_D_MAX).map_err(err)?;
        let paths = g.to_vertices(&typea::w_via_paths(&w, i + 1).map_err(err)?);
        out.push((ell, chart.render("X"), fpoly.render("X"), paths.render("X")));
    }
    Ok(out)
}

/// Inner normals of the string cone; `method` is "gp", "fpoly" or "sigma".
#[pyfunction]
#[pyo3(signature = (letters, method = "gp"))]
fn string_cone(letters: Vec<usize>, method: &str) -> PyResult<Vec<Vec<i64>>> {
    let w = word(letters)?;
    let cone = match method {
        "gp" => typea::string_cone_gp(&w),
        "fpoly" => typea::string_cone_fpoly(&w, DEFAULT_D_MAX).map_err(err)?,
        "sigma" => typea::string_cone_sigma(&w).map_err(err)?,
        _ => return Err(err(format!("unknown method {method:?}"))),
    };
    Ok(cone.normals)
}

#[pyfunction]
fn wiring(letters: Vec<usize>) -> PyResult<String> {
    Ok(typea::wiring(&word(letters)?).ascii())
}

#[pymodule]
fn qpc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuiver>()?;
    m.add_class::<PyQP>()?;
    m.add_class::<PyRep>()?;
    m.add_function(wrap_pyfunction!(gamma_qp, m)?)?;
    m.add_function(wrap_pyfunction!(frozen_vertices, m)?)?;
    m.add_function(wrap_pyfunction!(lg_potentials, m)?)?;
    m.add_function(wrap_pyfunction!(string_cone, m)?)?;
    m.add_function(wrap_pyfunction!(wiring, m)?)?;
    Ok(())
}
