//! Python bindings. Build with `cargo build -p dimer-coamoeba-py --release
//! --features extension-module` and import the resulting library as
//! `pydimer`.

use std::collections::BTreeMap;

use dimer_coamoeba::bundles::{self, ExceptionalCollection, LineBundleClass};
use dimer_coamoeba::coamoeba::{self, PredictedCoamoeba, SamplingGrid, TorusPoint};
use dimer_coamoeba::dimer::{self, DimerModel};
use dimer_coamoeba::fibration::{self, CycleSystem};
use dimer_coamoeba::hananyvegh::unique_admissible;
use dimer_coamoeba::{LatticePoint, LatticePolygon, LaurentPolynomial};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: dimer_coamoeba::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn points(p: &LatticePolygon) -> Vec<(i64, i64)> {
    p.vertices().iter().map(|q| (q.u, q.v)).collect()
}

fn collection(pairs: Vec<(i64, i64)>) -> ExceptionalCollection {
    ExceptionalCollection::from_pairs(&pairs)
}

fn pairs(c: &ExceptionalCollection) -> Vec<(i64, i64)> {
    c.0.iter().map(|l| (l.a, l.b)).collect()
}

/// A Laurent polynomial in x and y.
#[pyclass(name = "Polynomial", frozen)]
struct PyPolynomial(LaurentPolynomial);

#[pymethods]
impl PyPolynomial {
    /// Parses an expression such as `"x*y + x - y + 1"`; `params` binds
    /// extra names to complex values.
    #[new]
    #[pyo3(signature = (text, params=None))]
    fn new(text: &str, params: Option<BTreeMap<String, Complex64>>) -> PyResult<Self> {
        let w = dimer_coamoeba::parse_poly_with(text, &params.unwrap_or_default()).map_err(err)?;
        Ok(PyPolynomial(w))
    }

    fn terms(&self) -> Vec<((i64, i64), Complex64)> {
        self.0.terms().map(|(e, c)| ((e.u, e.v), c)).collect()
    }

    fn __call__(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.0.eval(x, y)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({})", self.0)
    }

    fn newton_polygon(&self) -> Vec<(i64, i64)> {
        points(&dimer_coamoeba::newton_polygon(&self.0))
    }

    /// `(x, y, value)` for each critical point.
    fn critical_points(&self) -> PyResult<Vec<(Complex64, Complex64, Complex64)>> {
        let pts = fibration::critical_data(&self.0).map_err(err)?;
        Ok(pts.into_iter().map(|p| (p.x, p.y, p.value)).collect())
    }

    /// Samples the coamoeba and compares it with the predicted cells.
    #[pyo3(signature = (radial=400, angular=64, modulus_range=(1e-2, 1e2), tolerance=1e-3))]
    fn coamoeba<'py>(
        &self,
        py: Python<'py>,
        radial: usize,
        angular: usize,
        modulus_range: (f64, f64),
        tolerance: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let grid = SamplingGrid { radial, angular, modulus_range, ..Default::default() };
        let s = coamoeba::sample_zero_locus(&self.0, &grid).map_err(err)?;
        let pred = PredictedCoamoeba::from_polynomial(&self.0, tolerance).map_err(err)?;
        let cells = coamoeba::verify_cell_structure(&s, &pred);
        let orient = coamoeba::verify_orientation(&s, &pred);
        let d = PyDict::new(py);
        d.set_item("samples", s.points.len())?;
        d.set_item("containment_fraction", cells.containment_fraction)?;
        d.set_item("uncolored_violations", cells.uncolored_violations)?;
        d.set_item("orientation_constant", orient.passes())?;
        let fiber = coamoeba::vertex_fiber(&s, TorusPoint::new(0.5, 0.5), 1e-6)
            .map(|f| (f.monotone, f.span))
            .ok();
        d.set_item("center_fiber", fiber)?;
        Ok(d)
    }
}

/// A bipartite graph on the torus with its rotation system.
#[pyclass(name = "DimerModel", frozen)]
struct PyDimer(DimerModel);

#[pymethods]
impl PyDimer {
    /// One of the bundled models: `square`, `fig11` or `fig24`.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        match name {
            "square" => Ok(PyDimer(dimer::square_dimer())),
            "fig11" => Ok(PyDimer(dimer::fig11_dimer())),
            "fig24" => Ok(PyDimer(dimer::fig24_dimer())),
            _ => Err(PyValueError::new_err(format!("unknown fixture {name:?}"))),
        }
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyDimer(dimer::from_fixture_text(text).map_err(err)?))
    }

    fn to_text(&self) -> String {
        dimer::to_fixture_text(&self.0)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    /// `(vertices, edges, faces, euler characteristic)`.
    fn euler(&self) -> PyResult<(usize, usize, usize, i64)> {
        let e = dimer::euler_check(&self.0).map_err(err)?;
        Ok((e.vertices, e.edges, e.faces, e.chi))
    }

    /// Perfect matchings as lists of edge ids.
    fn matchings(&self) -> Vec<Vec<String>> {
        dimer::enumerate_matchings(&self.0)
            .iter()
            .map(|m| m.edges.iter().map(|&e| self.0.edges[e].id.clone()).collect())
            .collect()
    }

    /// Exponent → coefficient, relative to the first matching.
    fn characteristic_polynomial(&self) -> PyResult<BTreeMap<(i64, i64), i64>> {
        let ms = dimer::enumerate_matchings(&self.0);
        let reference = ms.first().ok_or_else(|| err(dimer_coamoeba::Error::NoMatchings))?;
        let cp = dimer::characteristic_polynomial(&self.0, reference).map_err(err)?;
        Ok(cp.terms.iter().map(|(e, &c)| ((e.u, e.v), c)).collect())
    }

    fn newton_polygon(&self) -> PyResult<Vec<(i64, i64)>> {
        let terms = self.characteristic_polynomial()?;
        let hull = LatticePolygon::hull(terms.keys().map(|&(u, v)| LatticePoint::new(u, v))).map_err(err)?;
        Ok(points(&hull))
    }

    fn is_isoradial(&self) -> PyResult<bool> {
        dimer::is_isoradial_feasible(&self.0).map_err(err)
    }

    #[pyo3(signature = (title=""))]
    fn svg(&self, title: &str) -> String {
        dimer::render_svg(&self.0, title)
    }

    fn __repr__(&self) -> String {
        format!("DimerModel({:?}, nodes={}, edges={})", self.0.name, self.0.nodes.len(), self.0.edges.len())
    }
}

/// Dimer model of a lattice parallelogram from its admissible arrangement.
#[pyfunction]
fn hv_dimer(vertices: Vec<(i64, i64)>) -> PyResult<PyDimer> {
    let p = LatticePolygon::hull(vertices.into_iter().map(|(u, v)| LatticePoint::new(u, v))).map_err(err)?;
    Ok(PyDimer(unique_admissible(&p).map_err(err)?))
}

/// Full vanishing-cycle report for `ec` or `ec2`, as a JSON string.
#[pyfunction]
#[pyo3(signature = (collection, steps=1024))]
fn fibration_report_json(collection: &str, steps: usize) -> PyResult<String> {
    let system = CycleSystem::by_name(collection)
        .ok_or_else(|| PyValueError::new_err(format!("unknown collection {collection:?}")))?;
    let report = fibration::fibration_report(&system, steps).map_err(err)?;
    Ok(serde_json::to_string(&report).expect("serializable"))
}

/// Contracted dimer model of a cycle system.
#[pyfunction]
fn contracted_dimer(collection: &str) -> PyResult<PyDimer> {
    let system = CycleSystem::by_name(collection)
        .ok_or_else(|| PyValueError::new_err(format!("unknown collection {collection:?}")))?;
    let cx = fibration::PreimageComplex::build(&system).map_err(err)?;
    let g = fibration::contract_to_graph(&cx, &fibration::face_census(&cx)).map_err(err)?;
    Ok(PyDimer(g.dimer))
}

/// `(hom, ext1, ext2)` between line bundles `O(a,b)`.
#[pyfunction]
fn hom_ext_dims(e: (i64, i64), f: (i64, i64)) -> (i64, i64, i64) {
    bundles::hom_ext_dims(LineBundleClass::new(e.0, e.1), LineBundleClass::new(f.0, f.1))
}

#[pyfunction]
fn is_strong_exceptional(c: Vec<(i64, i64)>) -> bool {
    bundles::is_strong_exceptional(&collection(c)).strong_exceptional
}

#[pyfunction]
fn is_full(c: Vec<(i64, i64)>) -> bool {
    bundles::fullness_proxy(&collection(c))
}

/// The mutation of the last pair that turns the first standard
/// collection into the second; `inverse` undoes it.
#[pyfunction]
#[pyo3(signature = (c, inverse=false))]
fn mutate_last(c: Vec<(i64, i64)>, inverse: bool) -> PyResult<Vec<(i64, i64)>> {
    let c = collection(c);
    let out = if inverse { bundles::unmutate_last_pair(&c) } else { bundles::mutate_last_pair(&c) };
    Ok(pairs(&out.map_err(err)?.0))
}

#[pymodule]
fn pydimer(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyDimer>()?;
    m.add_function(wrap_pyfunction!(hv_dimer, m)?)?;
    m.add_function(wrap_pyfunction!(fibration_report_json, m)?)?;
    m.add_function(wrap_pyfunction!(contracted_dimer, m)?)?;
    m.add_function(wrap_pyfunction!(hom_ext_dims, m)?)?;
    m.add_function(wrap_pyfunction!(is_strong_exceptional, m)?)?;
    m.add_function(wrap_pyfunction!(is_full, m)?)?;
    m.add_function(wrap_pyfunction!(mutate_last, m)?)?;
    Ok(())
}
