//! Python bindings: `sl2q.Mtc`, `sl2q.ModularData` and the CLI entry point.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sl2q_mtc::chars::oracle_fuse;
use sl2q_mtc::cli::{self, Suite};
use sl2q_mtc::dw::{dw_invariant, Manifold};
use sl2q_mtc::fusion::fuse;
use sl2q_mtc::modular::{check_relations, ModularData};
use sl2q_mtc::{Error, Mtc};

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::OutOfRange { .. } | Error::InvalidOrder { .. } | Error::BlockAbsent { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// The category Rep D(SL(2,q)) for one admissible q.
#[pyclass(name = "Mtc", frozen)]
struct PyMtc {
    inner: Mtc,
}

#[pymethods]
impl PyMtc {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        Ok(PyMtc { inner: Mtc::new(q).map_err(err)? })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.group.order()
    }

    #[getter]
    fn conductor(&self) -> u32 {
        self.inner.conductor
    }

    fn __len__(&self) -> usize {
        self.inner.catalog.len()
    }

    fn __repr__(&self) -> String {
        format!("Mtc(q={}, simples={})", self.inner.q(), self.inner.catalog.len())
    }

    /// Labels of all simple objects in catalogue order.
    fn simples(&self) -> Vec<String> {
        let m = &self.inner;
        m.catalog.labels().map(|l| m.name(&l).to_string()).collect()
    }

    /// (support, dimension, parity, twist) of one simple; the twist is an exact string.
    fn info(&self, label: &str) -> PyResult<(String, u64, char, String)> {
        let m = &self.inner;
        let l = m.parse(label).map_err(err)?;
        let name = m.name(&l).to_string();
        let rows = m.catalog.rows(&m.group);
        let r = rows.iter().find(|r| r.label == name).ok_or_else(|| PyValueError::new_err(name.clone()))?;
        Ok((r.support.clone(), r.qdim, r.parity, r.twist.to_string()))
    }

    /// Closed-form fusion as a list of (label, multiplicity).
    fn fuse(&self, x1: &str, x2: &str) -> PyResult<Vec<(String, u64)>> {
        let m = &self.inner;
        let (a, b) = (m.parse(x1).map_err(err)?, m.parse(x2).map_err(err)?);
        Ok(fuse(m, &a, &b).map_err(err)?.named_terms(m))
    }

    /// Fusion from the character inner products.
    fn oracle_fuse(&self, x1: &str, x2: &str) -> PyResult<Vec<(String, u64)>> {
        let m = &self.inner;
        let (a, b) = (m.parse(x1).map_err(err)?, m.parse(x2).map_err(err)?);
        Ok(oracle_fuse(m, &a, &b).map_err(err)?.named_terms(m))
    }

    /// Dijkgraaf-Witten invariant as (numerator, denominator).
    fn dw(&self, manifold: &str) -> PyResult<(i128, i128)> {
        let man: Manifold = manifold.parse().map_err(err)?;
        let r = dw_invariant(&self.inner, man);
        Ok((*r.numer(), *r.denom()))
    }

    fn modular_data(&self) -> PyModularData {
        let md = ModularData::build(&self.inner);
        let names = md.labels.iter().map(|l| self.inner.name(l).to_string()).collect();
        let report = check_relations(&self.inner, &md);
        PyModularData { md, names, relations_ok: report.ok() }
    }
}

/// S and T of one category, exact values rendered as strings.
#[pyclass(name = "ModularData", frozen)]
struct PyModularData {
    md: ModularData,
    names: Vec<String>,
    relations_ok: bool,
}

impl PyModularData {
    fn index(&self, label: &str) -> PyResult<usize> {
        self.names.iter().position(|n| n == label).ok_or_else(|| PyValueError::new_err(format!("unknown simple {label}")))
    }
}

#[pymethods]
impl PyModularData {
    fn labels(&self) -> Vec<String> {
        self.names.clone()
    }

    fn __len__(&self) -> usize {
        self.md.len()
    }

    /// S_{XY} exactly.
    fn s(&self, x: &str, y: &str) -> PyResult<String> {
        Ok(self.md.s(self.index(x)?, self.index(y)?).to_string())
    }

    /// S_{XY} as a complex number.
    fn s_complex(&self, x: &str, y: &str) -> PyResult<(f64, f64)> {
        Ok(self.md.s(self.index(x)?, self.index(y)?).to_complex())
    }

    fn t(&self, x: &str) -> PyResult<String> {
        Ok(self.md.t[self.index(x)?].to_string())
    }

    /// λ in (ST)³ = λS².
    fn anomaly(&self) -> String {
        self.md.anomaly().to_string()
    }

    /// Unitarity, symmetry, S² and the (ST)³ relation all hold.
    #[getter]
    fn relations_ok(&self) -> bool {
        self.relations_ok
    }
}

/// Runs one verification suite; returns (suite, check, passed) triples.
#[pyfunction]
#[pyo3(signature = (q, suite = "all", seed = 0))]
fn verify(py: Python<'_>, q: u64, suite: &str, seed: u64) -> PyResult<Vec<(String, String, bool)>> {
    let s = <Suite as clap::ValueEnum>::from_str(suite, true).map_err(PyValueError::new_err)?;
    let checks = py.detach(|| cli::verify(q, s, seed)).map_err(err)?;
    Ok(checks.into_iter().map(|c| (c.suite.to_string(), c.name, c.pass)).collect())
}

/// The command-line interface: returns (exit code, stdout, stderr).
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    let mut full = vec!["sl2q-mtc".to_string()];
    full.extend(args);
    let out = py.detach(|| cli::run(full));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
pub fn sl2q(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMtc>()?;
    m.add_class::<PyModularData>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("SCHEMA", cli::SCHEMA)?;
    Ok(())
}
