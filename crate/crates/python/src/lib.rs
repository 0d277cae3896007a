//! Python bindings. Values cross the boundary in the library's canonical text forms.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use floer_core::affinoid::{AffinoidContext, LaurentElement};
use floer_core::novikov::{Novikov, Precision};
use floer_core::operator::{classify_hf as classify, duality_identity_holds, inclusion_identity_defect, GradedOperator};
use floer_core::polytope::Polytope;
use floer_core::rational::Rational;
use floer_core::text::{self, print_polytope};
use floer_core::verify::{run_suite, VerifyConfig};

fn err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn precision(e: &str) -> PyResult<Precision> {
    Ok(Precision::new(text::parse_rational(e).map_err(err)?))
}

#[pyclass(name = "Novikov", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyNovikov(Novikov);

#[pymethods]
impl PyNovikov {
    #[new]
    fn new(src: &str) -> PyResult<Self> {
        text::parse_novikov(src).map(PyNovikov).map_err(err)
    }

    /// Valuation as text; `+inf` for zero.
    fn val(&self) -> String {
        self.0.val().to_string()
    }

    fn invert(&self, prec: &str) -> PyResult<Self> {
        self.0.invert(&precision(prec)?).map(PyNovikov).map_err(err)
    }

    fn truncate(&self, prec: &str) -> PyResult<Self> {
        Ok(PyNovikov(self.0.truncate(&precision(prec)?)))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &Self) -> Self {
        PyNovikov(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyNovikov(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyNovikov(&self.0 * &other.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Novikov('{}')", self.0)
    }
}

#[pyclass(name = "Polytope", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolytope {
    poly: Polytope,
    base: Vec<Rational>,
}

#[pymethods]
impl PyPolytope {
    #[new]
    fn new(src: &str) -> PyResult<Self> {
        let (poly, base) = text::parse_polytope(src).map_err(err)?;
        Ok(PyPolytope { poly, base })
    }

    #[staticmethod]
    fn interval(lo: &str, hi: &str) -> PyResult<Self> {
        let poly = Polytope::interval(text::parse_rational(lo).map_err(err)?, text::parse_rational(hi).map_err(err)?)
            .map_err(err)?;
        Ok(PyPolytope { poly, base: vec![Rational::zero()] })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.poly.dim()
    }

    /// Vertices as lists of rational strings.
    fn vertices(&self) -> Vec<Vec<String>> {
        self.poly.vertices().iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect()
    }

    /// `(min, max)` of `⟨beta, x⟩` over the polytope.
    fn support(&self, beta: Vec<i64>) -> PyResult<(String, String)> {
        let lo = self.poly.support_min(&beta).map_err(err)?;
        let hi = self.poly.support_max(&beta).map_err(err)?;
        Ok((lo.to_string(), hi.to_string()))
    }

    fn intersect(&self, other: &Self) -> PyResult<Option<Self>> {
        let meet = self.poly.intersect(&other.poly).map_err(err)?;
        Ok(meet.map(|poly| PyPolytope { poly, base: self.base.clone() }))
    }

    fn is_subset(&self, other: &Self) -> PyResult<bool> {
        self.poly.is_subset(&other.poly).map_err(err)
    }

    /// Valuation of a Laurent element over this polytope, from its basepoint.
    fn val(&self, f: &PyLaurent) -> PyResult<String> {
        let ctx = AffinoidContext::new(self.poly.clone(), self.base.clone()).map_err(err)?;
        Ok(ctx.val(&f.0).map_err(err)?.to_string())
    }

    fn __str__(&self) -> String {
        print_polytope(&self.poly, &self.base)
    }
}

#[pyclass(name = "Laurent", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLaurent(LaurentElement);

#[pymethods]
impl PyLaurent {
    #[new]
    #[pyo3(signature = (src, dim=None))]
    fn new(src: &str, dim: Option<usize>) -> PyResult<Self> {
        text::parse_laurent(src, dim).map(PyLaurent).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn __add__(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        out.add_assign(&other.0);
        PyLaurent(out)
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyLaurent(self.0.mul(&other.0))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "Operator", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyOperator(GradedOperator);

#[pymethods]
impl PyOperator {
    #[new]
    #[pyo3(signature = (src, dim=None))]
    fn new(src: &str, dim: Option<usize>) -> PyResult<Self> {
        text::parse_operator(src, dim).map(PyOperator).map_err(err)
    }

    fn differential(&self) -> Self {
        PyOperator(self.0.differential())
    }

    fn dual_differential(&self) -> Self {
        PyOperator(self.0.dual_differential())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Whether the inclusion homotopy identity holds for `|α| ≤ window`.
    fn inclusion_identity_holds(&self, window: i64) -> bool {
        inclusion_identity_defect(&self.0, window).is_none()
    }

    fn duality_identity_holds(&self) -> bool {
        duality_identity_holds(&self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Classification of the complex between two polytopes, e.g. `InclusionIso deg=0 ring=Gamma^[0,1]`.
#[pyfunction]
fn classify_hf(p0: &PyPolytope, p1: &PyPolytope) -> PyResult<String> {
    Ok(classify(&p0.poly, &p1.poly, &p0.base).map_err(err)?.to_string())
}

/// Runs one verification suite and returns `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (suite, seed=0, prec="6", samples=100, window=4))]
fn verify(suite: &str, seed: u64, prec: &str, samples: usize, window: i64) -> PyResult<(bool, String)> {
    let cfg = VerifyConfig { seed, prec: precision(prec)?, samples, window };
    let rep = run_suite(suite, &cfg).ok_or_else(|| err(format!("unknown suite `{suite}`")))?;
    Ok((rep.passed(), rep.to_string()))
}

/// The command line in-process: `(exit code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let r = floer_core::cli::run(std::iter::once("floer".to_string()).chain(args));
    (r.code, r.stdout, r.stderr)
}

#[pymodule]
fn floer_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNovikov>()?;
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyLaurent>()?;
    m.add_class::<PyOperator>()?;
    m.add_function(wrap_pyfunction!(classify_hf, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
