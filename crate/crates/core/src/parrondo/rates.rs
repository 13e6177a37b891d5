use super::{GameSpec, ParityClass, TransferSystem};
use crate::error::{Error, Result};
use crate::numerics::{derivative1, derivative2, eigen_leading};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Perron eigenvalue of `Q(κ)` with its first two κ-derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronDerivatives {
    pub kappa: f64,
    pub lambda: f64,
    pub d1: f64,
    pub d2: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

impl PerronDerivatives {
    /// d ln λ / dκ
    pub fn log_d1(&self) -> f64 {
        self.d1 / self.lambda
    }

    /// d² ln λ / dκ²
    pub fn log_d2(&self) -> f64 {
        self.d2 / self.lambda - (self.d1 / self.lambda).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMethod {
    Perturbation,
    Stencil,
}

/// Drift and diffusion of the cell index `n`, plus the same in capital units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateVariance {
    /// `−λ'(0)`: mean cells per step.
    pub r: f64,
    /// `d² ln λ/dκ²` at 0: variance of `n` per step.
    #[serde(rename = "K")]
    pub k: f64,
    /// `λ''(0) = K + r²`.
    pub second_moment_rate: f64,
    /// `M·r`: mean capital per step.
    pub capital_rate: f64,
    /// `M²·K`: capital variance per step.
    pub capital_variance: f64,
    pub m: usize,
    pub degenerate: bool,
    pub maximal: Vec<Complex64>,
    pub parity_class: ParityClass,
    pub method: RateMethod,
}

/// The three stationary-state expressions for the drift, in cells per step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFormulas {
    /// `Σ(p_l − q_l) x_l / (M Σ x_l)`
    pub stationary_sum: f64,
    /// `−y·Q'(0)·x / (y·x)` with `y = (1, …, 1)`
    pub hellmann_feynman: f64,
    /// `(p_{M−1} x_{M−1} − q_0 x_0) / Σ x_l`
    pub boundary_flux: f64,
}

impl RateFormulas {
    pub fn spread(&self) -> f64 {
        let v = [self.stationary_sum, self.hellmann_feynman, self.boundary_flux];
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

fn dot(a: &DVector<f64>, m: &DMatrix<f64>, b: &DVector<f64>) -> f64 {
    a.dot(&(m * b))
}

/// Exact first- and second-order perturbation of the Perron eigenvalue at real κ.
pub fn perron_derivatives(sys: &TransferSystem, kappa: f64) -> Result<PerronDerivatives> {
    let n = sys.dim();
    let q = sys.at(kappa);
    let lead = eigen_leading(&sys.complex_at(Complex64::new(kappa, 0.0)))?;
    let lambda = lead.value.re;
    let x = DVector::from_iterator(n, lead.right.iter().map(|c| c.re));
    let y = DVector::from_iterator(n, lead.left.iter().map(|c| c.re));
    let yx = y.dot(&x);
    let (q1, q2) = (sys.d1(kappa), sys.d2(kappa));
    let d1 = dot(&y, &q1, &x) / yx;

    let mut a = DMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = if i == j { lambda } else { 0.0 } - q[(i, j)];
        }
        a[(i, n)] = x[i];
        a[(n, i)] = y[i];
    }
    let rhs_top = &q1 * &x - &x * d1;
    let mut rhs = DVector::zeros(n + 1);
    rhs.rows_mut(0, n).copy_from(&rhs_top);
    let sol = a.lu().solve(&rhs).ok_or_else(|| Error::NumericalFailure {
        detail: format!("Perron eigenvalue at kappa = {kappa} is not simple"),
        residual: f64::NAN,
    })?;
    let z = sol.rows(0, n).into_owned();
    let d2 = (dot(&y, &q2, &x) + 2.0 * dot(&y, &q1, &z)) / yx;
    if !(d1.is_finite() && d2.is_finite()) {
        return Err(Error::NumericalFailure { detail: "non-finite eigenvalue derivatives".into(), residual: f64::NAN });
    }
    Ok(PerronDerivatives { kappa, lambda, d1, d2, right: x.iter().cloned().collect(), left: y.iter().cloned().collect() })
}

pub(crate) fn rates_of_system(sys: &TransferSystem, m: usize, parity_class: ParityClass) -> Result<RateVariance> {
    let lead = eigen_leading(&sys.complex_at(Complex64::new(0.0, 0.0)))?;
    let (r, k, second, method) = match perron_derivatives(sys, 0.0) {
        Ok(pd) => (-pd.d1, pd.d2 - pd.d1 * pd.d1, pd.d2, RateMethod::Perturbation),
        Err(_) => {
            let (d1, d2) = stencil_log_derivatives(sys)?;
            (-d1, d2, d2 + d1 * d1, RateMethod::Stencil)
        }
    };
    let k = if k < 0.0 && k > -1e-12 { 0.0 } else { k };
    Ok(RateVariance {
        r,
        k,
        second_moment_rate: second,
        capital_rate: m as f64 * r,
        capital_variance: (m * m) as f64 * k,
        m,
        degenerate: lead.degenerate,
        maximal: lead.maximal,
        parity_class,
        method,
    })
}

fn perron_log(sys: &TransferSystem, kappa: f64) -> f64 {
    eigen_leading(&sys.complex_at(Complex64::new(kappa, 0.0))).map(|e| e.value.re.ln()).unwrap_or(f64::NAN)
}

fn stencil_log_derivatives(sys: &TransferSystem) -> Result<(f64, f64)> {
    let f = |k: f64| perron_log(sys, k);
    let (d1, d2) = (derivative1(f, 0.0, 1e-3), derivative2(f, 0.0, 1e-3));
    if !(d1.is_finite() && d2.is_finite()) {
        return Err(Error::NumericalFailure { detail: "stencil on ln λ failed".into(), residual: f64::NAN });
    }
    Ok((d1, d2))
}

/// Growth rate and diffusion from the leading eigenvalue of `Q(κ)` near κ = 0.
pub fn rate_variance(spec: &GameSpec) -> Result<RateVariance> {
    rates_of_system(&TransferSystem::from_game(spec), spec.m(), spec.parity_class())
}

/// Same quantities from finite-difference stencils on `ln λ(κ)`.
pub fn rate_variance_stencil(spec: &GameSpec) -> Result<RateVariance> {
    let sys = TransferSystem::from_game(spec);
    let (d1, d2) = stencil_log_derivatives(&sys)?;
    let mut rv = rates_of_system(&sys, spec.m(), spec.parity_class())?;
    rv.r = -d1;
    rv.k = d2;
    rv.second_moment_rate = d2 + d1 * d1;
    rv.capital_rate = spec.m() as f64 * rv.r;
    rv.capital_variance = (spec.m() * spec.m()) as f64 * d2;
    rv.method = RateMethod::Stencil;
    Ok(rv)
}

/// Stationary state by a direct linear solve, then the three drift expressions.
pub fn rate_formulas(spec: &GameSpec) -> Result<RateFormulas> {
    let sys = TransferSystem::from_game(spec);
    let m = spec.m();
    let q0 = sys.at(0.0);
    let mut a = DMatrix::identity(m, m) - &q0;
    for j in 0..m {
        a[(m - 1, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(m);
    rhs[m - 1] = 1.0;
    let x = a.lu().solve(&rhs).ok_or_else(|| Error::NumericalFailure {
        detail: "stationary state is not unique".into(),
        residual: f64::NAN,
    })?;
    let sx: f64 = x.sum();
    let ones = DVector::from_element(m, 1.0);
    let (p, q) = (spec.p(), spec.q());
    let stationary_sum = (0..m).map(|l| (p[l] - q[l]) * x[l]).sum::<f64>() / (m as f64 * sx);
    let hellmann_feynman = -dot(&ones, &sys.d1(0.0), &x) / sx;
    let boundary_flux = (p[m - 1] * x[m - 1] - q[0] * x[0]) / sx;
    Ok(RateFormulas { stationary_sum, hellmann_feynman, boundary_flux })
}
