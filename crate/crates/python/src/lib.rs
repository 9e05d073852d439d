//! Python bindings. Spins are given as strings ("3/2") or numbers (1.5);
//! vectors and matrices travel as plain lists of complex numbers.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rotinv::invariant::{self, BetaVector, LMethod, ProductState, SpinPair};
use rotinv::sep3n::{self, ClassifierOptions};
use rotinv::{oracle, wigner, CMatrix, CVector, HalfInt, HermitianOperator, SqrtRational};

fn err(e: rotinv::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spin(obj: &Bound<'_, PyAny>) -> PyResult<HalfInt> {
    if let Ok(s) = obj.extract::<String>() {
        return s.parse().map_err(err);
    }
    let x: f64 = obj.extract()?;
    let t = 2.0 * x;
    if t.fract() != 0.0 || !t.is_finite() {
        return Err(PyValueError::new_err(format!("{x} is not a multiple of 1/2")));
    }
    Ok(HalfInt::from_twice(t as i64))
}

fn pair(j1: &Bound<'_, PyAny>, j2: &Bound<'_, PyAny>) -> PyResult<SpinPair> {
    SpinPair::new(spin(j1)?, spin(j2)?).map_err(err)
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(CMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

fn rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect()
}

fn xy(p: rotinv::geometry::Point2) -> (f64, f64) {
    (p.beta1, p.beta2)
}

/// Exact `sign · √(num/den)`.
#[pyclass(name = "Surd", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PySurd(SqrtRational);

#[pymethods]
impl PySurd {
    #[getter]
    fn sign(&self) -> i8 {
        self.0.sign()
    }

    /// `(numerator, denominator)` of the radicand.
    #[getter]
    fn radicand(&self) -> (String, String) {
        let r = self.0.radicand();
        (r.numer().to_string(), r.denom().to_string())
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Surd({})", self.0)
    }
}

#[pyfunction]
fn wigner_3j(
    j1: &Bound<'_, PyAny>,
    j2: &Bound<'_, PyAny>,
    j3: &Bound<'_, PyAny>,
    m1: &Bound<'_, PyAny>,
    m2: &Bound<'_, PyAny>,
    m3: &Bound<'_, PyAny>,
) -> PyResult<PySurd> {
    wigner::wigner_3j(spin(j1)?, spin(j2)?, spin(j3)?, spin(m1)?, spin(m2)?, spin(m3)?)
        .map(PySurd)
        .map_err(err)
}

/// `<j1 m1; j2 m2 | j m>`.
#[pyfunction]
fn clebsch_gordan(
    j1: &Bound<'_, PyAny>,
    m1: &Bound<'_, PyAny>,
    j2: &Bound<'_, PyAny>,
    m2: &Bound<'_, PyAny>,
    j: &Bound<'_, PyAny>,
    m: &Bound<'_, PyAny>,
) -> PyResult<PySurd> {
    wigner::clebsch_gordan(spin(j1)?, spin(m1)?, spin(j2)?, spin(m2)?, spin(j)?, spin(m)?)
        .map(PySurd)
        .map_err(err)
}

#[pyfunction]
fn wigner_6j(
    j1: &Bound<'_, PyAny>,
    j2: &Bound<'_, PyAny>,
    j3: &Bound<'_, PyAny>,
    j4: &Bound<'_, PyAny>,
    j5: &Bound<'_, PyAny>,
    j6: &Bound<'_, PyAny>,
) -> PyResult<PySurd> {
    wigner::wigner_6j(spin(j1)?, spin(j2)?, spin(j3)?, spin(j4)?, spin(j5)?, spin(j6)?)
        .map(PySurd)
        .map_err(err)
}

/// Rows `K`, columns `J`; rows the method cannot produce are `None`.
#[pyfunction]
#[pyo3(signature = (j1, j2, method = "six_j"))]
fn l_matrix(j1: &Bound<'_, PyAny>, j2: &Bound<'_, PyAny>, method: &str) -> PyResult<Vec<Option<Vec<f64>>>> {
    let method = match method {
        "six_j" => LMethod::SixJ,
        "trace" => LMethod::Trace,
        "closed_rows" => LMethod::ClosedRows,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    let l = invariant::l_matrix(pair(j1, j2)?, method).map_err(err)?;
    Ok((0..l.values.nrows())
        .map(|r| l.defined_rows[r].then(|| l.values.row(r).iter().copied().collect()))
        .collect())
}

/// Invariant operators and coordinates for one spin pair.
#[pyclass(name = "InvariantBasis", frozen)]
struct PyBasis(invariant::InvariantBasis);

#[pymethods]
impl PyBasis {
    #[new]
    fn new(j1: &Bound<'_, PyAny>, j2: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyBasis(invariant::InvariantBasis::new(pair(j1, j2)?).map_err(err)?))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.pair().dim()
    }

    fn total_spins(&self) -> Vec<String> {
        self.0.pair().total_spins().iter().map(|j| j.to_string()).collect()
    }

    fn alpha_to_beta(&self, alpha: Vec<f64>) -> PyResult<Vec<f64>> {
        let a = invariant::AlphaVector::new(self.0.pair(), alpha).map_err(err)?;
        Ok(self.0.alpha_to_beta(&a).map_err(err)?.components().to_vec())
    }

    fn beta_to_alpha(&self, beta: Vec<f64>) -> PyResult<Vec<f64>> {
        let b = BetaVector::new(self.0.pair(), beta).map_err(err)?;
        Ok(self.0.beta_to_alpha(&b).map_err(err)?.components().to_vec())
    }

    fn alpha_from_probabilities(&self, p: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(invariant::AlphaVector::from_probabilities(self.0.pair(), &p)
            .map_err(err)?
            .components()
            .to_vec())
    }

    fn rho_from_alpha(&self, alpha: Vec<f64>) -> PyResult<Vec<Vec<Complex64>>> {
        let a = invariant::AlphaVector::new(self.0.pair(), alpha).map_err(err)?;
        Ok(rows(self.0.rho_from_alpha(&a).map_err(err)?.matrix()))
    }

    /// `(alpha, beta)` of the twirled state.
    fn twirl(&self, rho: Vec<Vec<Complex64>>) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let rho = HermitianOperator::new(matrix(rho)?).map_err(err)?;
        let (a, b) = self.0.twirl(&rho).map_err(err)?;
        Ok((a.components().to_vec(), b.components().to_vec()))
    }

    fn beta_functionals(&self, phi1: Vec<Complex64>, phi2: Vec<Complex64>) -> PyResult<Vec<f64>> {
        let s = ProductState::new(CVector::from_vec(phi1), CVector::from_vec(phi2)).map_err(err)?;
        Ok(self.0.beta_functionals(&s).map_err(err)?.components().to_vec())
    }
}

/// `λ_min(T₂ρ) >= -tol` by dense eigensolve.
#[pyfunction]
#[pyo3(signature = (rho, j1, j2, tol = 1e-12))]
fn ppt_bruteforce(rho: Vec<Vec<Complex64>>, j1: &Bound<'_, PyAny>, j2: &Bound<'_, PyAny>, tol: f64) -> PyResult<bool> {
    oracle::ppt_bruteforce(&matrix(rho)?, pair(j1, j2)?, tol).map_err(err)
}

#[pyfunction]
fn partial_transpose(rho: Vec<Vec<Complex64>>, j1: &Bound<'_, PyAny>, j2: &Bound<'_, PyAny>) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(rows(&invariant::partial_transpose_matrix(&matrix(rho)?, pair(j1, j2)?).map_err(err)?))
}

/// `count` points `β̃` from seeded product-state sampling.
#[pyfunction]
#[pyo3(signature = (j1, j2, count, seed, scheme = "mixed"))]
fn wbeta_cloud(j1: &Bound<'_, PyAny>, j2: &Bound<'_, PyAny>, count: usize, seed: u64, scheme: &str) -> PyResult<Vec<Vec<f64>>> {
    let scheme = match scheme {
        "mixed" => oracle::SamplingScheme::Mixed,
        "haar" => oracle::SamplingScheme::Haar,
        other => return Err(PyValueError::new_err(format!("unknown scheme {other:?}"))),
    };
    let cloud = oracle::wbeta_cloud_with(pair(j1, j2)?, count, seed, scheme).map_err(err)?;
    Ok(cloud.points.iter().map(|b| b.components().to_vec()).collect())
}

#[pyfunction]
fn vertices(n: usize) -> PyResult<BTreeMap<&'static str, (f64, f64)>> {
    let v = sep3n::vertices(n).map_err(err)?;
    let mut out = BTreeMap::from([
        ("A", xy(v.a)),
        ("B", xy(v.b)),
        ("C", xy(v.c)),
        ("A'", xy(v.a_prime)),
        ("D", xy(v.d)),
        ("E", xy(v.e)),
    ]);
    if let Some(f) = v.f {
        out.insert("F", xy(f));
    }
    Ok(out)
}

#[pyfunction]
fn ppt_polygon(n: usize) -> PyResult<Vec<(f64, f64)>> {
    Ok(sep3n::ppt_polygon(n).map_err(err)?.vertices.into_iter().map(xy).collect())
}

/// Counterclockwise outline; for even `N` the certified inner region.
#[pyfunction]
fn separable_region(n: usize) -> PyResult<Vec<(f64, f64)>> {
    Ok(sep3n::separable_region(n).map_err(err)?.vertices.into_iter().map(xy).collect())
}

#[pyfunction]
fn epsilon0(n: usize, lam: f64) -> PyResult<f64> {
    sep3n::epsilon0(n, lam).map_err(err)
}

#[pyfunction]
fn epsilon0_closed(n: usize) -> PyResult<f64> {
    sep3n::pair_for(n).map_err(err)?;
    Ok(sep3n::epsilon0_closed(n))
}

#[pyfunction]
fn ellipse_curve(n: usize, mu: f64) -> PyResult<(f64, f64)> {
    sep3n::ellipse_curve(n, mu).map(xy).map_err(err)
}

#[pyfunction]
fn witness_value(p: Vec<f64>, n: usize) -> PyResult<f64> {
    sep3n::witness_value(&p, n).map_err(err)
}

#[pyfunction]
fn ppt_inequalities(p: Vec<f64>, n: usize) -> PyResult<(f64, f64)> {
    sep3n::ppt_inequalities(&p, n).map_err(err)
}

/// Separability verdicts for `3 ⊗ N` invariant states.
#[pyclass(name = "Classifier", frozen)]
struct PyClassifier(sep3n::Classifier);

#[pymethods]
impl PyClassifier {
    #[new]
    #[pyo3(signature = (n, seed = None, samples = 10_000, directions = 256))]
    fn new(n: usize, seed: Option<u64>, samples: usize, directions: usize) -> PyResult<Self> {
        let options = ClassifierOptions {
            directions,
            samples,
            seed,
        };
        Ok(PyClassifier(sep3n::Classifier::with_options(n, options).map_err(err)?))
    }

    /// `(verdict, certificate)` for the point `(β1, β2)`.
    fn classify_beta(&self, beta1: f64, beta2: f64) -> PyResult<(String, String)> {
        let pair = sep3n::pair_for(self.0.n()).map_err(err)?;
        let b = BetaVector::new(pair, vec![1.0, beta1, beta2]).map_err(err)?;
        verdict(self.0.classify(&b).map_err(err)?)
    }

    /// `(verdict, certificate)` for the distribution `p_J`.
    fn classify_p(&self, p: Vec<f64>) -> PyResult<(String, String)> {
        let b = self.0.beta_from_probabilities(&p).map_err(err)?;
        verdict(self.0.classify(&b).map_err(err)?)
    }

    fn beta_from_probabilities(&self, p: Vec<f64>) -> PyResult<(f64, f64)> {
        let b = self.0.beta_from_probabilities(&p).map_err(err)?;
        Ok((b.components()[1], b.components()[2]))
    }
}

fn verdict(v: sep3n::Verdict) -> PyResult<(String, String)> {
    let name = match v.class {
        sep3n::VerdictClass::NotAState => "not_a_state",
        sep3n::VerdictClass::Separable => "separable",
        sep3n::VerdictClass::PptEntangled => "ppt_entangled",
        sep3n::VerdictClass::NptEntangled => "npt_entangled",
        sep3n::VerdictClass::Unknown => "unknown",
    };
    Ok((name.to_string(), v.certificate))
}

#[pymodule]
fn rotinv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySurd>()?;
    m.add_class::<PyBasis>()?;
    m.add_class::<PyClassifier>()?;
    m.add_function(wrap_pyfunction!(wigner_3j, m)?)?;
    m.add_function(wrap_pyfunction!(clebsch_gordan, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_6j, m)?)?;
    m.add_function(wrap_pyfunction!(l_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(ppt_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(partial_transpose, m)?)?;
    m.add_function(wrap_pyfunction!(wbeta_cloud, m)?)?;
    m.add_function(wrap_pyfunction!(vertices, m)?)?;
    m.add_function(wrap_pyfunction!(ppt_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(separable_region, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon0, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon0_closed, m)?)?;
    m.add_function(wrap_pyfunction!(ellipse_curve, m)?)?;
    m.add_function(wrap_pyfunction!(witness_value, m)?)?;
    m.add_function(wrap_pyfunction!(ppt_inequalities, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
