//! Python bindings: models, exangles, quotients, rigid sets and the
//! verification drivers.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use hicat_core::emit::{self, ArrowPolicy, Format};
use hicat_core::{
    build_quiver, correspondence_check, injproj_ideal, is_maximal_rigid, is_rigid, maximal_rigid, mutate,
    projinj_ideal, quotient, realize, run_grid, run_theorem, CategoryModel, Error, FiniteCategory, Grid, IndexTuple,
    ModelKind, QuotientModel, RigidSet, TheoremId,
};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn tuple(raw: Vec<i64>) -> PyResult<IndexTuple> {
    IndexTuple::new(raw).map_err(err)
}

fn rigid_set(raw: Vec<Vec<i64>>) -> PyResult<RigidSet> {
    Ok(RigidSet::new(raw.into_iter().map(tuple).collect::<PyResult<Vec<_>>>()?))
}

fn entries(t: &IndexTuple) -> Vec<i64> {
    t.entries().to_vec()
}

fn to_python<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (value.to_string(),))
}

fn parse_kind(kind: &str, window: Option<(i64, i64)>, d: usize, n: usize) -> PyResult<ModelKind> {
    let m = (n + 2 * d + 1) as i64;
    let kind = match kind {
        "module" => ModelKind::Module,
        "derived" => {
            let (lo, hi) = window.unwrap_or((1, m));
            ModelKind::DerivedWindow { lo, hi }
        }
        "cluster" => ModelKind::Cluster,
        "almost-positive" => ModelKind::AlmostPositive,
        "relative-f" => ModelKind::RelativeF,
        _ => return Err(PyValueError::new_err(format!("unknown model {kind:?}"))),
    };
    if window.is_some() && !matches!(kind, ModelKind::DerivedWindow { .. }) {
        return Err(PyValueError::new_err("window only applies to the derived model"));
    }
    Ok(kind)
}

/// One of the five finite category models, indexed by `(d, n)`.
///
/// ```python
/// m = Model("module", 2, 3)
/// m.hom((1, 3, 5), (1, 3, 6))
/// ```
#[pyclass(name = "Model", module = "hicat", frozen)]
struct PyModel {
    inner: CategoryModel,
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (kind, d, n, window=None))]
    fn new(kind: &str, d: usize, n: usize, window: Option<(i64, i64)>) -> PyResult<Self> {
        let kind = parse_kind(kind, window, d, n)?;
        Ok(Self { inner: CategoryModel::new(kind, d, n).map_err(err)? })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().name()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Model({})", self.inner)
    }

    fn objects(&self) -> Vec<Vec<i64>> {
        self.inner.objects().iter().map(entries).collect()
    }

    fn __contains__(&self, t: Vec<i64>) -> bool {
        IndexTuple::new(t).is_ok_and(|t| self.inner.contains(&t))
    }

    /// Dimension of `Hom(source, target)`.
    fn hom(&self, source: Vec<i64>, target: Vec<i64>) -> PyResult<u8> {
        self.inner.hom_dim(&tuple(source)?, &tuple(target)?).map_err(err)
    }

    /// Dimension of the extension space `E(b, a)`.
    fn ext(&self, b: Vec<i64>, a: Vec<i64>) -> PyResult<u8> {
        self.inner.ext_dim(&tuple(b)?, &tuple(a)?).map_err(err)
    }

    /// Scalar of the composite `x -> y -> z` of basis morphisms.
    fn compose(&self, x: Vec<i64>, y: Vec<i64>, z: Vec<i64>) -> PyResult<i64> {
        let (x, y, z) = (tuple(x)?, tuple(y)?, tuple(z)?);
        if self.inner.hom_dim(&x, &y).map_err(err)? == 0 || self.inner.hom_dim(&y, &z).map_err(err)? == 0 {
            return Ok(0);
        }
        let f = self.inner.basis(&x, &y).map_err(err)?;
        let g = self.inner.basis(&y, &z).map_err(err)?;
        self.inner.compose(&g, &f).map_err(err)
    }

    fn classify<'py>(&self, py: Python<'py>, t: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
        let c = self.inner.classify(&tuple(t)?).map_err(err)?;
        to_python(py, &serde_json::to_value(c).map_err(|e| err(e.into()))?)
    }

    fn descriptor<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &self.inner.descriptor())
    }

    /// The distinguished exangle realizing the extension `E(b, a)`.
    fn exangle(&self, b: Vec<i64>, a: Vec<i64>) -> PyResult<PyExangle> {
        let e = realize(&self.inner, &tuple(b)?, &tuple(a)?).map_err(err)?;
        let complex = e.is_complex(&self.inner).map_err(err)?;
        let exact = e.hom_exactness_report(&self.inner).map_err(err)?.passed();
        Ok(PyExangle { inner: e, complex, exact })
    }

    /// The quotient by projective-injectives (module) or by shifted
    /// projective to projective morphisms (relative-f).
    fn quotient(&self) -> PyResult<PyQuotient> {
        let ideal = match self.inner.kind() {
            ModelKind::Module => projinj_ideal(&self.inner),
            _ => injproj_ideal(&self.inner),
        }
        .map_err(err)?;
        Ok(PyQuotient { inner: quotient(&self.inner, &ideal) })
    }

    fn is_rigid(&self, set: Vec<Vec<i64>>) -> PyResult<bool> {
        is_rigid(&self.inner, &rigid_set(set)?).map_err(err)
    }

    fn is_maximal_rigid(&self, set: Vec<Vec<i64>>) -> PyResult<bool> {
        is_maximal_rigid(&self.inner, &rigid_set(set)?).map_err(err)
    }

    fn maximal_rigid(&self, py: Python<'_>) -> Vec<Vec<Vec<i64>>> {
        let sets = py.detach(|| maximal_rigid(&self.inner));
        sets.iter().map(|s| s.summands().iter().map(entries).collect()).collect()
    }

    /// The set obtained by exchanging `at`, or `None` when it cannot be
    /// exchanged.
    fn mutate(&self, set: Vec<Vec<i64>>, at: Vec<i64>) -> PyResult<Option<Vec<Vec<i64>>>> {
        let out = mutate(&self.inner, &rigid_set(set)?, &tuple(at)?).map_err(err)?;
        Ok(out.map(|s| s.summands().iter().map(entries).collect()))
    }

    #[pyo3(signature = (format="dot", arrows="irreducible"))]
    fn emit(&self, format: &str, arrows: &str) -> PyResult<String> {
        let format: Format = format.parse().map_err(err)?;
        let policy: ArrowPolicy = arrows.parse().map_err(err)?;
        Ok(emit::emit_category(&self.inner, format, policy))
    }
}

#[pyclass(name = "Exangle", module = "hicat", frozen)]
struct PyExangle {
    inner: hicat_core::Exangle,
    complex: bool,
    exact: bool,
}

#[pymethods]
impl PyExangle {
    #[getter]
    fn a(&self) -> Vec<i64> {
        entries(self.inner.a())
    }

    #[getter]
    fn b(&self) -> Vec<i64> {
        entries(self.inner.b())
    }

    #[getter]
    fn middles(&self) -> Vec<Vec<Vec<i64>>> {
        self.inner.middles().iter().map(|m| m.iter().map(entries).collect()).collect()
    }

    /// Matrices with rows indexed by target summands.
    #[getter]
    fn differentials(&self) -> Vec<Vec<Vec<i64>>> {
        self.inner.differentials().iter().map(|m| m.entries().to_vec()).collect()
    }

    fn is_complex(&self) -> bool {
        self.complex
    }

    fn is_hom_exact(&self) -> bool {
        self.exact
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &self.inner.to_json())
    }

    #[pyo3(signature = (format="dot"))]
    fn emit(&self, format: &str) -> PyResult<String> {
        Ok(emit::emit_exangle(&self.inner, format.parse().map_err(err)?))
    }
}

#[pyclass(name = "Quotient", module = "hicat", frozen)]
struct PyQuotient {
    inner: QuotientModel,
}

#[pymethods]
impl PyQuotient {
    fn objects(&self) -> Vec<Vec<i64>> {
        self.inner.objects().iter().map(entries).collect()
    }

    fn zero_objects(&self) -> Vec<Vec<i64>> {
        self.inner.zero_objects().iter().map(entries).collect()
    }

    fn killed(&self) -> Vec<(Vec<i64>, Vec<i64>)> {
        self.inner.killed_pairs().iter().map(|(s, t)| (entries(s), entries(t))).collect()
    }

    fn hom(&self, source: Vec<i64>, target: Vec<i64>) -> PyResult<u8> {
        self.inner.hom_dim(&tuple(source)?, &tuple(target)?).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.objects().len()
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &self.inner.to_json())
    }
}

/// Runs a theorem check at one point, or over a `DMAX:NMAX:OBJMAX` grid, and
/// returns the report as plain data.
#[pyfunction]
#[pyo3(signature = (theorem, d=None, n=None, grid=None))]
fn verify<'py>(
    py: Python<'py>,
    theorem: &str,
    d: Option<usize>,
    n: Option<usize>,
    grid: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let theorem: TheoremId = theorem.parse().map_err(err)?;
    let value = match (d, n) {
        (Some(d), Some(n)) => {
            let reports = py.detach(|| run_theorem(theorem, d, n)).map_err(err)?;
            serde_json::to_value(reports).map_err(|e| err(e.into()))?
        }
        (None, None) => {
            let grid = match grid {
                Some(g) => g.parse::<Grid>().map_err(err)?,
                None => Grid::from_env().map_err(err)?,
            };
            py.detach(|| run_grid(theorem, &grid)).map_err(err)?.to_json()
        }
        _ => return Err(PyValueError::new_err("give both d and n, or neither")),
    };
    to_python(py, &value)
}

/// Mutation and exchange exangles agree across the module, relative and
/// almost positive models at `(d, n)`.
#[pyfunction]
fn correspondence<'py>(py: Python<'py>, d: usize, n: usize) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| correspondence_check(d, n)).map_err(err)?;
    to_python(py, &report.to_json())
}

#[pyfunction]
#[pyo3(signature = (d, n, format="dot"))]
fn emit_quiver(d: usize, n: usize, format: &str) -> PyResult<String> {
    let q = build_quiver(d, n).map_err(err)?;
    Ok(emit::emit_quiver(&q, format.parse().map_err(err)?))
}

#[pymodule]
fn hicat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyExangle>()?;
    m.add_class::<PyQuotient>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(correspondence, m)?)?;
    m.add_function(wrap_pyfunction!(emit_quiver, m)?)?;
    Ok(())
}
