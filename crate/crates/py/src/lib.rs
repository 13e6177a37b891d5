//! Python bindings: estimators, ladder games and the production recursion.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use stochlab::infotheory as it;
use stochlab::marketdata as md;
use stochlab::parrondo as pg;
use stochlab::production as pr;

fn err(e: stochlab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pairs(x: Vec<f64>, y: Vec<f64>) -> PyResult<it::PairedSamples> {
    it::PairedSamples::new(x, y).map_err(err)
}

#[pyfunction]
fn pearson(x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    it::pearson(&pairs(x, y)?).map_err(err)
}

#[pyfunction]
fn spearman(x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    it::spearman(&pairs(x, y)?).map_err(err)
}

/// Histogram mutual information in nats.
#[pyfunction]
#[pyo3(signature = (x, y, bins = 10))]
fn mi_histogram(x: Vec<f64>, y: Vec<f64>, bins: usize) -> PyResult<f64> {
    Ok(it::mi_histogram(&pairs(x, y)?, bins).map_err(err)?.value)
}

/// Nearest-neighbour mutual information in nats; `algorithm` is 1 or 2.
#[pyfunction]
#[pyo3(signature = (x, y, k = 5, algorithm = 1))]
fn mi_knn(x: Vec<f64>, y: Vec<f64>, k: usize, algorithm: u8) -> PyResult<f64> {
    let alg = it::KnnAlgorithm::from_number(algorithm).map_err(err)?;
    Ok(it::mi_knn(&pairs(x, y)?, k, alg).map_err(err)?.value)
}

#[pyfunction]
fn gaussian_mi(a: f64) -> PyResult<f64> {
    it::gaussian_mi(a).map_err(err)
}

/// `(x, y)` of a stationary AR(1) path with `y_t = a x_{t−1}`.
#[pyfunction]
#[pyo3(signature = (a, n, seed, c = 0.0, sigma = 1.0))]
fn ar1_generate(a: f64, n: usize, seed: u64, c: f64, sigma: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let s = it::ar1_generate(a, c, sigma, n, seed).map_err(err)?;
    Ok((s.x, s.y))
}

/// Night→day and day→night dependence from daily open/close prices.
#[pyfunction]
#[pyo3(signature = (open, close, method = "spearman", k = 5))]
fn session_asymmetry<'py>(
    py: Python<'py>,
    open: Vec<f64>,
    close: Vec<f64>,
    method: &str,
    k: usize,
) -> PyResult<Bound<'py, PyDict>> {
    if open.len() != close.len() {
        return Err(PyValueError::new_err("open and close differ in length"));
    }
    let records = md::business_days(open.len())
        .into_iter()
        .zip(open.into_iter().zip(close))
        .map(|(date, (open, close))| md::OhlcRecord { date, open, close })
        .collect();
    let series = md::OhlcSeries::new(records).map_err(err)?;
    let m = md::AsymmetryMethod::parse(method).map_err(err)?;
    let rep = md::asymmetry(&md::session_returns(&series).map_err(err)?, &[m], k).map_err(err)?;
    let r = rep.methods[0];
    let d = PyDict::new(py);
    d.set_item("C_nd", r.c_nd)?;
    d.set_item("C_dn", r.c_dn)?;
    d.set_item("ratio", r.ratio)?;
    d.set_item("days", rep.days)?;
    Ok(d)
}

/// An M-periodic ladder game.
#[pyclass(name = "GameSpec")]
struct PyGameSpec {
    inner: pg::GameSpec,
}

#[pymethods]
impl PyGameSpec {
    #[new]
    #[pyo3(signature = (p, q = None))]
    fn new(p: Vec<f64>, q: Option<Vec<f64>>) -> PyResult<Self> {
        let q = q.unwrap_or_else(|| p.iter().map(|v| 1.0 - v).collect());
        Ok(Self { inner: pg::GameSpec::new(p, q).map_err(err)? })
    }

    #[staticmethod]
    fn uniform(m: usize, p: f64) -> PyResult<Self> {
        Ok(Self { inner: pg::GameSpec::uniform(m, p).map_err(err)? })
    }

    #[staticmethod]
    fn capital_dependent(m: usize, p_zero: f64, p_other: f64) -> PyResult<Self> {
        Ok(Self { inner: pg::GameSpec::capital_dependent(m, p_zero, p_other).map_err(err)? })
    }

    /// Random half-half mixture with another game of the same M.
    fn mix(&self, other: &PyGameSpec) -> PyResult<Self> {
        Ok(Self { inner: pg::mix_strategies(&self.inner, &other.inner).map_err(err)? })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    /// Drift `r` and diffusion `K` per step in cells, plus capital-unit values.
    fn rate_variance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let rv = pg::rate_variance(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("r", rv.r)?;
        d.set_item("K", rv.k)?;
        d.set_item("second_moment_rate", rv.second_moment_rate)?;
        d.set_item("capital_rate", rv.capital_rate)?;
        d.set_item("capital_variance", rv.capital_variance)?;
        Ok(d)
    }

    /// `(n_min, masses)` of the rung-summed exact distribution at time `t`.
    fn exact_pmf(&self, t: usize) -> (i64, Vec<f64>) {
        let d = pg::exact_pmf(&self.inner, t);
        (d.n_min(), d.summed())
    }

    /// Same distribution from direct master-equation iteration.
    fn iterate(&self, t: usize) -> (i64, Vec<f64>) {
        let d = pg::iterate(&self.inner, t);
        (d.n_min(), d.summed())
    }

    fn __repr__(&self) -> String {
        format!("GameSpec(p={:?}, q={:?})", self.inner.p(), self.inner.q())
    }
}

/// Cumulative production with Gaussian or Lorentzian shocks.
#[pyclass(name = "ProductionModel")]
struct PyProductionModel {
    inner: pr::ProductionModelSpec,
}

#[pymethods]
impl PyProductionModel {
    #[new]
    #[pyo3(signature = (g, sigma = None, gamma = None, d = 0.0))]
    fn new(g: f64, sigma: Option<f64>, gamma: Option<f64>, d: f64) -> PyResult<Self> {
        let noise = match (sigma, gamma) {
            (Some(s), None) => pr::NoiseSpec::gaussian(s),
            (None, Some(w)) => pr::NoiseSpec::lorentzian(w),
            _ => return Err(PyValueError::new_err("give exactly one of sigma or gamma")),
        }
        .map_err(err)?;
        Ok(Self { inner: pr::ProductionModelSpec::new(g, noise, d).map_err(err)? })
    }

    /// Cumulants of the increment after `t` recursion steps.
    fn volatility_moments<'py>(&self, py: Python<'py>, t: usize) -> PyResult<Bound<'py, PyDict>> {
        let opts = pr::EvolveOptions { track_z: false, ..Default::default() };
        let s = pr::evolve_to(&self.inner, t, opts).map_err(err)?;
        let v = pr::volatility_moments(&s).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("mean", v.mean)?;
        d.set_item("var", v.var)?;
        d.set_item("c3", v.c3)?;
        d.set_item("c4", v.c4)?;
        Ok(d)
    }

    /// `(x0, dx, density)` of log-production at time `t`.
    fn log_production_density(&self, t: usize) -> PyResult<(f64, f64, Vec<f64>)> {
        let s = pr::evolve_to(&self.inner, t, pr::EvolveOptions::default()).map_err(err)?;
        let z = s.rho_z().map_err(err)?;
        Ok((z.x0(), z.dx(), z.density().to_vec()))
    }

    fn narrow_limit_check(&self, t: usize) -> PyResult<f64> {
        pr::narrow_limit_check(&self.inner, t).map_err(err)
    }

    /// Sample variance of the increment over `paths` simulated paths at time `t`.
    fn simulate_variance(&self, t: usize, paths: usize, seed: u64) -> PyResult<f64> {
        let p = pr::simulate_paths(&self.inner, &[t], paths, seed).map_err(err)?;
        let v = &p.delta[0];
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        Ok(v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
    }
}

#[pyfunction]
fn tanh_law(g: f64, sigma: f64) -> f64 {
    pr::tanh_law(g, sigma)
}

/// `(r, v)` of the two-envelope game with amounts x and 2x.
#[pyfunction]
#[pyo3(signature = (p1, p2, x = 1.0))]
fn envelope_moments(p1: f64, p2: f64, x: f64) -> PyResult<(f64, f64)> {
    let spec = pg::EnvelopeSpec::new(
        pg::AmountLaw::delta(x),
        pg::SwitchingFunction::Table { x: vec![x, 2.0 * x], p: vec![p1, p2] },
    );
    let m = pg::envelope_moments(&spec).map_err(err)?;
    Ok((m.r, m.v))
}

#[pymodule]
fn stochlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(pearson, m)?)?;
    m.add_function(wrap_pyfunction!(spearman, m)?)?;
    m.add_function(wrap_pyfunction!(mi_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(mi_knn, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_mi, m)?)?;
    m.add_function(wrap_pyfunction!(ar1_generate, m)?)?;
    m.add_function(wrap_pyfunction!(session_asymmetry, m)?)?;
    m.add_function(wrap_pyfunction!(tanh_law, m)?)?;
    m.add_function(wrap_pyfunction!(envelope_moments, m)?)?;
    m.add_class::<PyGameSpec>()?;
    m.add_class::<PyProductionModel>()?;
    Ok(())
}
