//! Python module `goodcoord`. Structured results cross the boundary as
//! plain dicts decoded from the same JSON the command line emits.

use goodcoord::atlas::Atlas as CoreAtlas;
use goodcoord::basis::{basis_family, build_compact_model, verify_nbb, KPoint};
use goodcoord::corpus::{builtin, generate as gen_atlas, GenParams, BUILTINS};
use goodcoord::format::{analysis_json, kpoint_json, nbb_json, parse_atlas, serialize_atlas, shrink_json, to_text, validation_json};
use goodcoord::gbox::GBox;
use goodcoord::interval::Interval;
use goodcoord::quotient::{analyze as core_analyze, AnalyzeOptions, RelationModel};
use goodcoord::rational::{dyadic, parse_rational, Rational};
use goodcoord::render::{render_svg, RenderOptions};
use goodcoord::shrink::{shrink_to_strong, ShrinkOutcome, ShrinkSchedule};
use goodcoord::validate::validate_weak_gcs;
use goodcoord::{BoxSet as CoreBoxSet, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};

pyo3::create_exception!(goodcoord, GoodcoordError, PyRuntimeError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Document { .. }
        | Error::InvalidInterval(_)
        | Error::InvalidRational(_)
        | Error::DimensionMismatch { .. }
        | Error::UnknownLabel(_) => PyValueError::new_err(e.to_string()),
        _ => GoodcoordError::new_err(e.to_string()),
    }
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (to_text(v),))?.unbind())
}

fn rational(s: &str) -> PyResult<Rational> {
    parse_rational(s).map(|(r, _)| r).map_err(err)
}

/// Finite union of boxes with rational endpoints, in canonical form.
#[pyclass(frozen, eq, skip_from_py_object, module = "goodcoord")]
#[derive(Clone, PartialEq)]
struct BoxSet(CoreBoxSet);

#[pymethods]
impl BoxSet {
    /// `boxes` is a list of boxes, each a list of interval literals such as `"[0,1/2)"`.
    #[new]
    #[pyo3(signature = (dim, boxes = Vec::new()))]
    fn new(dim: usize, boxes: Vec<Vec<String>>) -> PyResult<Self> {
        let boxes = boxes
            .iter()
            .map(|b| GBox::new(b.iter().map(|s| Interval::parse(s)).collect::<Result<_, _>>()?))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        CoreBoxSet::from_boxes(dim, boxes).map(BoxSet).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn union(&self, other: &BoxSet) -> PyResult<BoxSet> {
        self.0.union(&other.0).map(BoxSet).map_err(err)
    }

    fn intersection(&self, other: &BoxSet) -> PyResult<BoxSet> {
        self.0.intersection(&other.0).map(BoxSet).map_err(err)
    }

    fn difference(&self, other: &BoxSet) -> PyResult<BoxSet> {
        self.0.difference(&other.0).map(BoxSet).map_err(err)
    }

    fn complement(&self) -> BoxSet {
        BoxSet(self.0.complement())
    }

    fn closure(&self) -> BoxSet {
        BoxSet(self.0.closure())
    }

    fn interior(&self) -> BoxSet {
        BoxSet(self.0.interior())
    }

    fn is_subset(&self, other: &BoxSet) -> PyResult<bool> {
        self.0.is_subset(&other.0).map_err(err)
    }

    fn is_compact(&self) -> bool {
        self.0.is_compact()
    }

    /// Point given as rational literals, e.g. `["1/2", "-3"]`.
    fn contains(&self, point: Vec<String>) -> PyResult<bool> {
        let x = point.iter().map(|s| rational(s)).collect::<PyResult<Vec<_>>>()?;
        Ok(x.len() == self.0.dim() && self.0.contains_point(&x))
    }

    /// Disjoint cells as lists of interval literals.
    fn cells(&self) -> Vec<Vec<String>> {
        self.0.cells().iter().map(|b| b.sides().iter().map(|s| s.to_string()).collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!("BoxSet({})", self.0)
    }
}

/// Weak chart system.
#[pyclass(frozen, skip_from_py_object, module = "goodcoord")]
#[derive(Clone)]
struct Atlas(CoreAtlas);

#[pymethods]
impl Atlas {
    /// Parses a `goodcoord/1` document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_atlas(text).map(|p| Atlas(p.atlas)).map_err(err)
    }

    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        builtin(name).map(Atlas).ok_or_else(|| PyValueError::new_err(format!("unknown builtin `{name}`")))
    }

    fn to_json(&self) -> String {
        serialize_atlas(&self.0)
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        (0..self.0.len()).map(|i| self.0.label(i).to_string()).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &validation_json(&validate_weak_gcs(&self.0)))
    }

    #[pyo3(signature = (seed = 0, falsifier_depth = 10))]
    fn analyze(&self, py: Python<'_>, seed: u64, falsifier_depth: u32) -> PyResult<Py<PyAny>> {
        let rm = RelationModel::from_atlas(&self.0).map_err(err)?;
        let an = core_analyze(&rm, &AnalyzeOptions { seed, falsifier_depth, ..AnalyzeOptions::default() }).map_err(err)?;
        to_py(py, &analysis_json(&rm, &an))
    }

    fn is_strong(&self) -> PyResult<bool> {
        let rm = RelationModel::from_atlas(&self.0).map_err(err)?;
        Ok(core_analyze(&rm, &AnalyzeOptions::default()).map_err(err)?.strong())
    }

    /// `delta0` is a rational literal; chosen automatically when omitted.
    #[pyo3(signature = (delta0 = None, max_n = 32))]
    fn shrink(&self, delta0: Option<&str>, max_n: u32) -> PyResult<Shrunk> {
        let schedule = ShrinkSchedule { delta0: delta0.map(rational).transpose()?, max_n, ..Default::default() };
        let outcome = shrink_to_strong(&self.0, &schedule).map_err(err)?;
        Ok(Shrunk { original: self.0.clone(), outcome })
    }

    #[pyo3(signature = (axes = (0, 1), witnesses = true))]
    fn render_svg(&self, axes: (usize, usize), witnesses: bool) -> PyResult<String> {
        let opts = RenderOptions { axes };
        if witnesses && validate_weak_gcs(&self.0).pass() {
            let rm = RelationModel::from_atlas(&self.0).map_err(err)?;
            let an = core_analyze(&rm, &AnalyzeOptions::default()).map_err(err)?;
            render_svg(&self.0, Some((&rm, &an)), &opts).map_err(err)
        } else {
            render_svg(&self.0, None, &opts).map_err(err)
        }
    }

    fn __repr__(&self) -> String {
        format!("Atlas(labels={:?})", self.labels())
    }
}

/// Certified strong shrinking of an atlas.
#[pyclass(frozen, module = "goodcoord")]
struct Shrunk {
    original: CoreAtlas,
    outcome: ShrinkOutcome,
}

#[pymethods]
impl Shrunk {
    #[getter]
    fn atlas(&self) -> Atlas {
        Atlas(self.outcome.atlas().clone())
    }

    #[getter]
    fn n(&self) -> u32 {
        self.outcome.certificate.n
    }

    #[getter]
    fn delta(&self) -> String {
        self.outcome.certificate.delta.to_string()
    }

    fn report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &shrink_json(&self.original, &self.outcome).map_err(err)?)
    }

    /// Checks the dyadic basis at `points`, given as `(label, [coords])`.
    #[pyo3(signature = (points, level = 3))]
    fn basis_check(&self, py: Python<'_>, points: Vec<(String, Vec<String>)>, level: u32) -> PyResult<Py<PyAny>> {
        let strong = self.outcome.atlas();
        let cm = build_compact_model(strong, &self.outcome.inner_sets().map_err(err)?).map_err(err)?;
        let fam = basis_family(level).map_err(err)?;
        let mut reports = Vec::new();
        let mut ok = true;
        for (label, coords) in &points {
            let q = KPoint::new(strong.index(label).map_err(err)?, coords.iter().map(|s| rational(s)).collect::<PyResult<_>>()?);
            let opens = (1..=3).map(|k| cm.ball_open(&q, &dyadic(k))).collect::<Result<Vec<_>, _>>().map_err(err)?;
            let r = verify_nbb(&cm, &q, &fam, &opens).map_err(err)?;
            ok &= r.neighbourhoods_hold() && r.refinements_hold();
            let mut v = nbb_json(&cm.rm, &r);
            v["point"] = kpoint_json(&cm.rm, &q);
            reports.push(v);
        }
        to_py(py, &json!({"level": level, "points": reports, "pass": ok}))
    }
}

#[pyfunction]
fn builtins() -> Vec<&'static str> {
    BUILTINS.to_vec()
}

#[pyfunction]
fn generate(seed: u64) -> Atlas {
    Atlas(gen_atlas(seed, &GenParams::default()))
}

#[pymodule(name = "goodcoord")]
pub fn goodcoord_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<BoxSet>()?;
    m.add_class::<Atlas>()?;
    m.add_class::<Shrunk>()?;
    m.add_function(wrap_pyfunction!(builtins, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add("GoodcoordError", m.py().get_type::<GoodcoordError>())?;
    Ok(())
}
