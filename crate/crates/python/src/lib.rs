//! Python bindings: polynomials, expressions, ideals with membership
//! oracles, bounds, and the command-line entry point.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use ncnull::bounds::{self, StarKind};
use ncnull::ideals::{builtin_ideal, custom_ideal, IdealKind, RRIdeal, Witness, WitnessSearch};
use ncnull::realization::{compile, Basepoint};
use ncnull::{parse_expression, parse_polynomial, Letter, NcPoly, RatExpr, Scalar};

fn value_err<E: ToString>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Polynomial in noncommuting letters `X_j, Y_j` and their adjoints.
#[pyclass(name = "Poly", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPoly(NcPoly);

#[pymethods]
impl PyPoly {
    #[new]
    fn new(text: &str, g: usize) -> PyResult<Self> {
        parse_polynomial(text, g).map(PyPoly).map_err(value_err)
    }

    #[getter]
    fn g(&self) -> usize {
        self.0.alphabet_size()
    }

    /// `(degree, number of terms)`.
    fn degree_and_terms(&self) -> PyResult<(usize, usize)> {
        self.0.degree_and_terms().map_err(value_err)
    }

    fn star(&self) -> Self {
        PyPoly(self.0.star())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &PyPoly) -> PyResult<Self> {
        self.0.try_add(&other.0).map(PyPoly).map_err(value_err)
    }

    fn __sub__(&self, other: &PyPoly) -> PyResult<Self> {
        self.0.try_sub(&other.0).map(PyPoly).map_err(value_err)
    }

    fn __mul__(&self, other: &PyPoly) -> PyResult<Self> {
        self.0.try_mul(&other.0).map(PyPoly).map_err(value_err)
    }

    fn __eq__(&self, other: &PyPoly) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}', {})", self.0, self.0.alphabet_size())
    }
}

/// Rational expression tree.
#[pyclass(name = "Expr", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyExpr(RatExpr);

#[pymethods]
impl PyExpr {
    #[new]
    fn new(text: &str, g: usize) -> PyResult<Self> {
        parse_expression(text, g).map(PyExpr).map_err(value_err)
    }

    /// Nesting depth of inverses.
    fn height(&self) -> usize {
        self.0.height()
    }

    /// Dimension of the compiled realization and of its minimization about
    /// a scalar point given as `{"X1": "1", ...}`.
    fn realization_dims(&self, point: BTreeMap<String, String>) -> PyResult<(usize, usize)> {
        let rep = compile(&self.0, &scalar_basepoint(&point)?).map_err(value_err)?;
        Ok((rep.dim(), rep.minimize_scalar().1))
    }

    /// Whether the expression is a rational identity, decided about a scalar point.
    fn is_identity(&self, point: BTreeMap<String, String>) -> PyResult<bool> {
        let rep = compile(&self.0, &scalar_basepoint(&point)?).map_err(value_err)?;
        Ok(rep.is_zero())
    }

    fn __str__(&self) -> String {
        ncnull::format_expression(&self.0)
    }
}

fn scalar_basepoint(point: &BTreeMap<String, String>) -> PyResult<std::sync::Arc<Basepoint>> {
    let mut pairs = Vec::new();
    for (name, value) in point {
        let l = Letter::parse(name).ok_or_else(|| PyKeyError::new_err(name.clone()))?;
        let v = parse_polynomial(value, 1).map_err(value_err)?;
        if v.degree().unwrap_or(0) > 0 {
            return Err(PyValueError::new_err(format!("`{value}` is not a constant")));
        }
        pairs.push((l, v.coeff(&ncnull::Word::empty())));
    }
    if pairs.is_empty() {
        pairs.push((Letter::x(1), Scalar::zero()));
    }
    Ok(Basepoint::scalar(pairs))
}

/// Rationally resolvable ideal with an exact membership oracle.
#[pyclass(name = "Ideal", frozen)]
struct PyIdeal(RRIdeal);

#[pymethods]
impl PyIdeal {
    /// Built-in ideal by name (`T'`, `S'`, `U'`, `CommInv`, `T`, `S`, `U`).
    #[new]
    #[pyo3(signature = (name, g=None))]
    fn new(name: &str, g: Option<usize>) -> PyResult<Self> {
        let kind: IdealKind = name.parse().map_err(PyValueError::new_err)?;
        let g = g.or(kind.fixed_g()).ok_or_else(|| PyValueError::new_err("g is required"))?;
        builtin_ideal(kind, g).map(PyIdeal).map_err(value_err)
    }

    /// Custom ideal from its JSON description.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        custom_ideal(text).map(PyIdeal).map_err(value_err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    /// Alphabet size of the polynomials the ideal accepts.
    #[getter]
    fn g(&self) -> usize {
        self.0.g()
    }

    fn generators(&self) -> Vec<PyPoly> {
        self.0.generators().iter().cloned().map(PyPoly).collect()
    }

    fn poly(&self, text: &str) -> PyResult<PyPoly> {
        PyPoly::new(text, self.0.g())
    }

    fn is_member(&self, f: &PyPoly) -> PyResult<bool> {
        self.0.is_member(&f.0).map_err(value_err)
    }

    /// Membership by compiling the substituted polynomial directly.
    fn is_member_direct(&self, f: &PyPoly) -> PyResult<bool> {
        self.0.is_member_direct(&f.0).map_err(value_err)
    }

    /// `(member, witness size or None, exact witness or None)`.
    #[pyo3(signature = (f, seed=0, trials=200))]
    fn membership(&self, f: &PyPoly, seed: u64, trials: u64) -> PyResult<(bool, Option<usize>, Option<bool>)> {
        let search = WitnessSearch { seed, trials, ..WitnessSearch::default() };
        let v = self.0.membership(&f.0, Some(&search)).map_err(value_err)?;
        let size = v.witness.as_ref().map(Witness::size);
        let exact = v.witness.as_ref().map(|w| matches!(w, Witness::Exact { .. }));
        Ok((v.member, size, exact))
    }

    fn witness_size(&self, f: &PyPoly) -> PyResult<u64> {
        self.0.witness_size(&f.0).map_err(value_err)
    }

    #[pyo3(signature = (seed, max_len=2, terms=2))]
    fn random_element(&self, seed: u64, max_len: usize, terms: usize) -> PyPoly {
        PyPoly(self.0.random_element(seed, (max_len, terms)))
    }

    fn __repr__(&self) -> String {
        format!("Ideal('{}', g={})", self.0.name(), self.0.g())
    }
}

fn star_kind(name: &str) -> PyResult<StarKind> {
    name.parse().map_err(PyValueError::new_err)
}

#[pyfunction]
fn ri_bound(m: u64, n: u64) -> PyResult<u64> {
    bounds::ri_bound(m, n).map_err(value_err)
}

#[pyfunction]
fn nss_bound(m: u64, n: u64, u: u64, v: u64) -> PyResult<u64> {
    bounds::nss_bound(m, n, u, v).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (kind, g, u, v, real=false))]
fn star_bound(kind: &str, g: u64, u: u64, v: u64, real: bool) -> PyResult<u64> {
    bounds::star_bound(star_kind(kind)?, g, u, v, real).map_err(value_err)
}

#[pyfunction]
fn pos_size(kind: &str, g: u64, d: u64) -> PyResult<u64> {
    bounds::pos_size(star_kind(kind)?, g, d).map_err(value_err)
}

/// Runs the command line with `args` (without the program name);
/// returns `(exit code, output)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    let mut out = Vec::new();
    let code = ncnull::cli::run(std::iter::once("ncnull".to_string()).chain(args), &mut out);
    (code, String::from_utf8_lossy(&out).into_owned())
}

#[pymodule]
fn ncnull_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_class::<PyExpr>()?;
    m.add_class::<PyIdeal>()?;
    m.add_function(wrap_pyfunction!(ri_bound, m)?)?;
    m.add_function(wrap_pyfunction!(nss_bound, m)?)?;
    m.add_function(wrap_pyfunction!(star_bound, m)?)?;
    m.add_function(wrap_pyfunction!(pos_size, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
