//! Python bindings for the periodicity calculus: exact lattices, points,
//! quasi-periodic functions and telescopes, the reconstruction and divisor
//! pipelines (as JSON-round-tripping functions), and the Weierstrass
//! engine.
//!
//! Exact rationals cross the boundary as strings `"num/den"`, the same wire
//! convention the CLI uses; certificates come back as Python dictionaries.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use perioda::divisor as dv;
use perioda::jsonio;
use perioda::point::parse_rat;
use perioda::reconstruct as rc;
use perioda::sparse::{self, PointFn};
use perioda::weierstrass as ws;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        serde_json::Value::Null => py.None().into_bound(py),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_any()
        }
    })
}

fn rat_from_str(s: &str) -> PyResult<perioda::Rat> {
    parse_rat(s).ok_or_else(|| err(format!("bad rational literal {s:?}")))
}

/// An exact point with rational and formal-irrational coordinate parts.
#[pyclass(name = "Point", from_py_object)]
#[derive(Clone)]
struct PyPoint {
    inner: perioda::Point,
}

#[pymethods]
impl PyPoint {
    #[new]
    #[pyo3(signature = (rat, irr = None))]
    fn new(rat: Vec<String>, irr: Option<Vec<String>>) -> PyResult<Self> {
        let dto = jsonio::PointDto { rat, irr };
        Ok(PyPoint {
            inner: jsonio::point_from_dto(&dto).map_err(err)?,
        })
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn is_rational(&self) -> bool {
        self.inner.is_rational()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __repr__(&self) -> String {
        format!("Point{}", self.inner)
    }

    fn __eq__(&self, other: &PyPoint) -> bool {
        self.inner == other.inner
    }
}

/// A full-rank lattice in Q^r given by a basis matrix (rows of "num/den"
/// strings).
#[pyclass(name = "Lattice", from_py_object)]
#[derive(Clone)]
struct PyLattice {
    inner: perioda::Lattice,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(basis: Vec<Vec<String>>) -> PyResult<Self> {
        let dto: jsonio::LatticeDto = basis
            .into_iter()
            .map(|row| row.into_iter().map(jsonio::NumDto::Str).collect())
            .collect();
        Ok(PyLattice {
            inner: jsonio::lattice_from_dto(&dto).map_err(err)?,
        })
    }

    #[staticmethod]
    fn standard(rank: usize) -> PyResult<Self> {
        if rank == 0 {
            return Err(err("rank must be positive"));
        }
        Ok(PyLattice {
            inner: perioda::Lattice::standard(rank),
        })
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn contains(&self, x: &PyPoint) -> PyResult<bool> {
        self.inner.contains(&x.inner).map_err(err)
    }

    fn reduce(&self, x: &PyPoint) -> PyResult<PyPoint> {
        Ok(PyPoint {
            inner: self.inner.reduce(&x.inner).map_err(err)?,
        })
    }

    fn join(&self, other: &PyLattice) -> PyResult<PyLattice> {
        Ok(PyLattice {
            inner: self.inner.join(&other.inner).map_err(err)?,
        })
    }

    fn scaled(&self, c: &str) -> PyResult<PyLattice> {
        Ok(PyLattice {
            inner: self.inner.scaled(&rat_from_str(c)?).map_err(err)?,
        })
    }

    fn det(&self) -> String {
        perioda::rat_to_string(self.inner.det())
    }

    fn basis(&self) -> Vec<Vec<String>> {
        let r = self.inner.rank();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| perioda::rat_to_string(&self.inner.basis()[i * r + j]))
                    .collect()
            })
            .collect()
    }

    fn __eq__(&self, other: &PyLattice) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Lattice(rank {})", self.inner.rank())
    }
}

/// A lattice-periodic function with finite coset support plus an explicit
/// value at 0.
#[pyclass(name = "QuasiPeriodicFn", from_py_object)]
#[derive(Clone)]
struct PyQpf {
    inner: perioda::QuasiPeriodicFn,
}

#[pymethods]
impl PyQpf {
    #[new]
    #[pyo3(signature = (lattice, entries, zero_value = String::from("0")))]
    fn new(
        lattice: &PyLattice,
        entries: Vec<(PyPoint, String)>,
        zero_value: String,
    ) -> PyResult<Self> {
        let entries = entries
            .into_iter()
            .map(|(p, v)| Ok((p.inner, rat_from_str(&v)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = perioda::QuasiPeriodicFn::new(
            lattice.inner.clone(),
            entries,
            rat_from_str(&zero_value)?,
        )
        .map_err(err)?;
        Ok(PyQpf { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let dto: jsonio::QpfDto = serde_json::from_str(text).map_err(err)?;
        Ok(PyQpf {
            inner: jsonio::qpf_from_dto(&dto).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&jsonio::qpf_to_dto(&self.inner)).map_err(err)
    }

    fn eval(&self, x: &PyPoint) -> String {
        perioda::rat_to_string(&self.inner.eval(&x.inner))
    }

    fn support_len(&self) -> usize {
        self.inner.support_len()
    }

    fn zero_value(&self) -> String {
        perioda::rat_to_string(self.inner.zero_value())
    }

    /// Closed form of x -> f(m x) - f(x) over the same lattice.
    fn dilate_diff(&self, m: u32) -> PyQpf {
        PyQpf {
            inner: self.inner.dilate_diff(m),
        }
    }

    fn equal_on_cosets(&self, other: &PyQpf) -> PyResult<bool> {
        sparse::equal_on_cosets(&self.inner, &other.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "QuasiPeriodicFn({} cosets, rank {})",
            self.inner.support_len(),
            self.inner.rank()
        )
    }
}

/// The lazy telescoping sum x -> sum_{i>=1} g(x / m^i).
#[pyclass(name = "TelescopeFn")]
struct PyTelescope {
    inner: perioda::TelescopeFn,
}

#[pymethods]
impl PyTelescope {
    #[new]
    fn new(g: &PyQpf, m: u32) -> PyResult<Self> {
        Ok(PyTelescope {
            inner: perioda::TelescopeFn::new(g.inner.clone(), m).map_err(err)?,
        })
    }

    fn eval(&self, x: &PyPoint) -> String {
        perioda::rat_to_string(&self.inner.eval(&x.inner))
    }

    fn i_stop(&self, x: &PyPoint) -> u32 {
        self.inner.i_stop(&x.inner)
    }
}

/// Equal p-adic valuations over the prime set and congruent prime-to-set
/// parts mod n.
#[pyfunction]
fn sim_s(x: i64, y: i64, s: Vec<u64>, n: i64) -> PyResult<bool> {
    rc::sim_s(x, y, &s, n).map_err(err)
}

/// The Bezout walk x ~S z ~T y; returns the chain and its coefficients.
#[pyfunction]
fn lemma1_walk<'py>(
    py: Python<'py>,
    x: i64,
    y: i64,
    n: i64,
    s: Vec<u64>,
    t: Vec<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let w = rc::lemma1_walk(x, y, n, &s, &t).map_err(err)?;
    let v = serde_json::json!({
        "chain": [w.x.to_string(), w.z.to_string(), w.y.to_string()],
        "p": w.p.to_string(),
        "q": w.q.to_string(),
        "s": w.s.to_string(),
        "t": w.t.to_string(),
    });
    json_to_py(py, &v)
}

/// Reconstructs the periodic function behind a coprime pair of dilation
/// differences; returns the certificate as a dictionary.
#[pyfunction]
#[pyo3(signature = (g_p, g_q, p, q, window_bound = 4, den_cap = 6))]
fn reconstruct<'py>(
    py: Python<'py>,
    g_p: &PyQpf,
    g_q: &PyQpf,
    p: u32,
    q: u32,
    window_bound: u32,
    den_cap: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let window = sparse::Window::new(window_bound, den_cap);
    let cert = rc::reconstruct_periodic(&g_p.inner, &g_q.inner, p, q, &window).map_err(err)?;
    let v = serde_json::to_value(jsonio::periodicity_cert_to_dto(&cert)).map_err(err)?;
    json_to_py(py, &v)
}

/// Solves the divisor coboundary problem on the CLI wire format and returns
/// the solution certificate as a dictionary.
#[pyfunction]
#[pyo3(signature = (input_json, window_bound = 2, den_cap = 3))]
fn divisor_solve<'py>(
    py: Python<'py>,
    input_json: &str,
    window_bound: u32,
    den_cap: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let dto: jsonio::CocycleInputDto = serde_json::from_str(input_json).map_err(err)?;
    let (pair, lattice_f) = jsonio::cocycle_from_dto(&dto).map_err(err)?;
    let sol = dv::solve_coboundary(
        &pair,
        &lattice_f,
        &sparse::Window::new(window_bound, den_cap),
    )
    .map_err(err)?;
    let v = serde_json::to_value(jsonio::coboundary_solution_to_dto(&sol)).map_err(err)?;
    json_to_py(py, &v)
}

/// Degree-and-Abel-Jacobi principality certificate for a divisor given in
/// the wire format, against the lattice in the same payload.
#[pyfunction]
fn divisor_check<'py>(py: Python<'py>, input_json: &str) -> PyResult<Bound<'py, PyAny>> {
    #[derive(serde::Deserialize)]
    struct Input {
        divisor: jsonio::DivisorDto,
        lattice: jsonio::LatticeDto,
    }
    let input: Input = serde_json::from_str(input_json).map_err(err)?;
    let d = jsonio::divisor_from_dto(&input.divisor).map_err(err)?;
    let l = jsonio::lattice_from_dto(&input.lattice).map_err(err)?;
    let cert = dv::principality_certificate(&d, &l).map_err(err)?;
    let v = serde_json::to_value(jsonio::principality_cert_to_dto(&cert)).map_err(err)?;
    json_to_py(py, &v)
}

fn lattice_from_periods(omega1: Complex64, omega2: Complex64) -> PyResult<ws::ComplexLattice> {
    ws::ComplexLattice::new(omega1, omega2).map_err(err)
}

fn default_policy(lat: &ws::ComplexLattice, pq: u32, tol: f64) -> ws::TruncationPolicy {
    ws::TruncationPolicy::for_dilations(lat, pq, 30.0, tol)
}

/// Weierstrass zeta at z for the lattice spanned by omega1, omega2.
#[pyfunction]
#[pyo3(signature = (z, omega1, omega2, tol = 1e-8))]
fn zeta(z: Complex64, omega1: Complex64, omega2: Complex64, tol: f64) -> PyResult<Complex64> {
    let lat = lattice_from_periods(omega1, omega2)?;
    let engine = ws::WeierstrassEngine::new(lat).map_err(err)?;
    engine.zeta(z, &default_policy(&lat, 1, tol)).map_err(err)
}

/// Weierstrass wp (the negative derivative of zeta).
#[pyfunction]
#[pyo3(signature = (z, omega1, omega2, tol = 1e-8))]
fn wp(z: Complex64, omega1: Complex64, omega2: Complex64, tol: f64) -> PyResult<Complex64> {
    let lat = lattice_from_periods(omega1, omega2)?;
    let engine = ws::WeierstrassEngine::new(lat).map_err(err)?;
    engine.wp(z, &default_policy(&lat, 1, tol)).map_err(err)
}

/// Quasi-period eta(omega) for a lattice vector.
#[pyfunction]
#[pyo3(signature = (omega, omega1, omega2, tol = 1e-8))]
fn eta(omega: Complex64, omega1: Complex64, omega2: Complex64, tol: f64) -> PyResult<Complex64> {
    let lat = lattice_from_periods(omega1, omega2)?;
    let engine = ws::WeierstrassEngine::new(lat).map_err(err)?;
    engine
        .eta(omega, &default_policy(&lat, 2, tol))
        .map_err(err)
}

/// (g_p(z), g_q(z)) for the matrix cocycle entries.
#[pyfunction]
#[pyo3(signature = (p, q, z, omega1, omega2, tol = 1e-8))]
fn g_pair(
    p: u32,
    q: u32,
    z: Complex64,
    omega1: Complex64,
    omega2: Complex64,
    tol: f64,
) -> PyResult<(Complex64, Complex64)> {
    let lat = lattice_from_periods(omega1, omega2)?;
    let engine = ws::WeierstrassEngine::new(lat).map_err(err)?;
    engine
        .g_pair(p, q, z, &default_policy(&lat, p * q, tol))
        .map_err(err)
}

/// Max-entry modulus of A(z/q) B(z) - B(z/p) A(z).
#[pyfunction]
#[pyo3(signature = (p, q, z, omega1, omega2, tol = 1e-8))]
fn consistency_residual(
    p: u32,
    q: u32,
    z: Complex64,
    omega1: Complex64,
    omega2: Complex64,
    tol: f64,
) -> PyResult<f64> {
    let lat = lattice_from_periods(omega1, omega2)?;
    let engine = ws::WeierstrassEngine::new(lat).map_err(err)?;
    engine
        .consistency_residual(p, q, z, &default_policy(&lat, p * q, tol))
        .map_err(err)
}

/// The full residual verification suite; returns the report dictionary.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (omega1, omega2, p = 2, q = 3, probes = 50, seed = 7, tol = 1e-8))]
fn weierstrass_suite<'py>(
    py: Python<'py>,
    omega1: Complex64,
    omega2: Complex64,
    p: u32,
    q: u32,
    probes: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let lat = lattice_from_periods(omega1, omega2)?;
    let t = default_policy(&lat, p * q, tol);
    let suite = ws::verification_suite(&lat, p, q, probes, seed, &t).map_err(err)?;
    let v = serde_json::to_value(&suite).map_err(err)?;
    json_to_py(py, &v)
}

#[pymodule]
fn perioda_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoint>()?;
    m.add_class::<PyLattice>()?;
    m.add_class::<PyQpf>()?;
    m.add_class::<PyTelescope>()?;
    m.add_function(wrap_pyfunction!(sim_s, m)?)?;
    m.add_function(wrap_pyfunction!(lemma1_walk, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(divisor_solve, m)?)?;
    m.add_function(wrap_pyfunction!(divisor_check, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(wp, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(g_pair, m)?)?;
    m.add_function(wrap_pyfunction!(consistency_residual, m)?)?;
    m.add_function(wrap_pyfunction!(weierstrass_suite, m)?)?;
    Ok(())
}
