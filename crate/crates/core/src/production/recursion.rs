use super::model::ProductionModelSpec;
use crate::error::{Error, Result};
use crate::numerics::{convolve_masses, GridPdf};
use serde::{Deserialize, Serialize};

/// Mass leaking off the grid beyond this aborts the step.
pub const LEAK_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolveOptions {
    /// Grid spacing; the noise law's default when absent.
    pub dx: Option<f64>,
    /// Tail mass dropped from each end of a grid after every step.
    pub tail_tol: f64,
    /// Largest grid allowed before reporting an overflow.
    pub max_cells: usize,
    /// Whether to propagate `ρ_z` alongside `ρ_y`.
    pub track_z: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { dx: None, tail_tol: 1e-14, max_cells: 1 << 22, track_z: true }
    }
}

/// Masses on cells `[k·dx, (k+1)·dx]`, `k = start, start+1, …`.
#[derive(Debug, Clone, PartialEq)]
struct Cells {
    start: i64,
    masses: Vec<f64>,
}

impl Cells {
    fn delta() -> Self {
        Self { start: 0, masses: Vec::new() }
    }

    fn is_delta(&self) -> bool {
        self.masses.is_empty()
    }

    fn to_grid(&self, dx: f64, shift: f64) -> Result<GridPdf> {
        if self.is_delta() {
            return GridPdf::spike(shift, dx);
        }
        GridPdf::from_masses((self.start as f64 + 0.5) * dx + shift, dx, &self.masses)
    }

    fn prefix(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.masses.len() + 1);
        let mut acc = 0.0;
        p.push(0.0);
        for m in &self.masses {
            acc += m;
            p.push(acc);
        }
        p
    }
}

/// Piecewise-linear CDF of a [`Cells`] distribution.
struct CellCdf<'a> {
    cells: &'a Cells,
    prefix: Vec<f64>,
    dx: f64,
}

impl<'a> CellCdf<'a> {
    fn new(cells: &'a Cells, dx: f64) -> Self {
        Self { prefix: cells.prefix(), cells, dx }
    }

    fn eval(&self, u: f64) -> f64 {
        let s = u / self.dx - self.cells.start as f64;
        let n = self.cells.masses.len();
        if s.is_nan() || s <= 0.0 {
            return 0.0;
        }
        if s >= n as f64 {
            return self.prefix[n];
        }
        let k = s as usize;
        self.prefix[k] + self.cells.masses[k] * (s - k as f64)
    }
}

pub(crate) fn softplus(s: f64) -> f64 {
    if s > 30.0 {
        s + (-s).exp().ln_1p()
    } else {
        s.exp().ln_1p()
    }
}

/// Inverse of [`softplus`] on `(0, ∞)`; `−∞` at zero.
pub(crate) fn inv_softplus(v: f64) -> f64 {
    if v <= 0.0 {
        f64::NEG_INFINITY
    } else if v > 30.0 {
        v + (-(-v).exp()).ln_1p()
    } else {
        v.exp_m1().ln()
    }
}

/// `h(y) = −ln(1 − e^{−y})`, which maps `y_t` to `Δz_t` and is its own inverse.
pub(crate) fn involution(y: f64) -> f64 {
    if y <= 0.0 {
        f64::INFINITY
    } else if y > std::f64::consts::LN_2 {
        -(-(-y).exp()).ln_1p()
    } else {
        -(-(-y).exp_m1()).ln()
    }
}

/// Pushes a law with CDF `cdf` on `[w_lo, w_hi]` through `v = softplus(drift + w)`
/// onto cells of width `dx`, integrating the CDF exactly across each cell.
fn remap(
    cdf: impl Fn(f64) -> f64,
    w_lo: f64,
    w_hi: f64,
    drift: f64,
    dx: f64,
    opts: &EvolveOptions,
) -> Result<(Cells, f64)> {
    let k_lo = (softplus(drift + w_lo) / dx).floor();
    let k_hi = (softplus(drift + w_hi) / dx).floor();
    let needed = k_hi - k_lo + 1.0;
    let mut n = needed as usize;
    if !needed.is_finite() || needed > opts.max_cells as f64 {
        n = opts.max_cells;
        let edge = (k_lo + n as f64) * dx;
        let leaked = 1.0 - cdf(inv_softplus(edge) - drift);
        if leaked > LEAK_LIMIT {
            return Err(Error::GridOverflow {
                leaked,
                suggested_cells: needed.min(usize::MAX as f64) as usize,
            });
        }
    }
    let k_lo = k_lo as i64;
    let mut lower = cdf(inv_softplus(k_lo as f64 * dx) - drift);
    let mut masses = Vec::with_capacity(n);
    for k in k_lo..k_lo + n as i64 {
        let upper = cdf(inv_softplus((k + 1) as f64 * dx) - drift);
        masses.push((upper - lower).max(0.0));
        lower = upper;
    }
    let total: f64 = masses.iter().sum();
    let mut cells = Cells { start: k_lo, masses };
    let trimmed = trim(&mut cells, opts.tail_tol);
    cells.masses.iter_mut().for_each(|m| *m /= total - trimmed);
    Ok((cells, total))
}

fn trim(c: &mut Cells, tol: f64) -> f64 {
    let n = c.masses.len();
    let (mut lo, mut acc_lo) = (0, 0.0);
    while lo + 1 < n && acc_lo + c.masses[lo] < tol {
        acc_lo += c.masses[lo];
        lo += 1;
    }
    let (mut hi, mut acc_hi) = (n, 0.0);
    while hi > lo + 1 && acc_hi + c.masses[hi - 1] < tol {
        acc_hi += c.masses[hi - 1];
        hi -= 1;
    }
    c.masses.truncate(hi);
    c.masses.drain(..lo);
    c.start += lo as i64;
    acc_lo + acc_hi
}

/// Densities of `z_t = log Z_t` and `y_t = log(Z_t/Q_t)` at time `t`.
///
/// With depreciation the grids evolve in the frame of the equivalent plain
/// model (drift `g − ln(1−d)`); the accessors shift back by `t·ln(1−d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PdfState {
    t: usize,
    dx: f64,
    opts: EvolveOptions,
    z: Option<Cells>,
    y: Cells,
    log_retention: f64,
    mass_before_norm: f64,
}

impl PdfState {
    /// `Z_0 = Q_0 = 1`: both densities are a unit spike at zero.
    pub fn initial(spec: &ProductionModelSpec, opts: EvolveOptions) -> Result<Self> {
        spec.validate()?;
        let dx = opts.dx.unwrap_or_else(|| spec.noise().default_dx());
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::RejectedGrid(format!("grid spacing must be positive, got {dx}")));
        }
        Ok(Self {
            t: 0,
            dx,
            opts,
            z: opts.track_z.then(Cells::delta),
            y: Cells::delta(),
            log_retention: spec.log_retention(),
            mass_before_norm: 1.0,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Total mass produced by the last step before renormalisation.
    pub fn mass_before_normalization(&self) -> f64 {
        self.mass_before_norm
    }

    pub fn rho_z(&self) -> Result<GridPdf> {
        match &self.z {
            Some(z) => z.to_grid(self.dx, self.t as f64 * self.log_retention),
            None => Err(Error::RejectedInput("log Z density was not tracked".into())),
        }
    }

    pub fn rho_y(&self) -> Result<GridPdf> {
        self.y.to_grid(self.dx, 0.0)
    }
}

/// One step of `z ← softplus(g + a + z)` and `y ← softplus(y − g − a)`.
pub fn evolve_pdf(state: &PdfState, spec: &ProductionModelSpec) -> Result<PdfState> {
    let g = spec.effective_drift();
    let dx = state.dx;
    let noise = spec.noise();
    let opts = &state.opts;
    let (a_lo, a_hi) = noise.support();

    let mut mass = f64::INFINITY;
    let mut worst = |m: f64| {
        if (m - 1.0).abs() > (mass - 1.0f64).abs() || mass.is_infinite() {
            mass = m;
        }
    };

    let (y, ym) = if state.y.is_delta() {
        remap(|u| 1.0 - noise.cdf(-u), -a_hi, -a_lo, -g, dx, opts)?
    } else {
        let (j0, kernel) = noise.kernel_masses(dx);
        let reflected: Vec<f64> = kernel.iter().rev().copied().collect();
        let j_hi = j0 + kernel.len() as i64 - 1;
        let w = Cells { start: state.y.start - j_hi, masses: convolve_masses(&state.y.masses, &reflected) };
        let lo = w.start as f64 * dx;
        let hi = (w.start + w.masses.len() as i64) as f64 * dx;
        let cdf = CellCdf::new(&w, dx);
        remap(|u| cdf.eval(u), lo, hi, -g, dx, opts)?
    };
    worst(ym);

    let z = match &state.z {
        None => None,
        Some(z) if z.is_delta() => {
            let (c, m) = remap(|u| noise.cdf(u), a_lo, a_hi, g, dx, opts)?;
            worst(m);
            Some(c)
        }
        Some(z) => {
            let (j0, kernel) = noise.kernel_masses(dx);
            let w = Cells { start: z.start + j0, masses: convolve_masses(&z.masses, &kernel) };
            let lo = w.start as f64 * dx;
            let hi = (w.start + w.masses.len() as i64) as f64 * dx;
            let cdf = CellCdf::new(&w, dx);
            let (c, m) = remap(|u| cdf.eval(u), lo, hi, g, dx, opts)?;
            worst(m);
            Some(c)
        }
    };

    Ok(PdfState {
        t: state.t + 1,
        dx,
        opts: state.opts,
        z,
        y,
        log_retention: state.log_retention,
        mass_before_norm: mass,
    })
}

/// Runs the recursion from `t = 0` up to `t`.
pub fn evolve_to(spec: &ProductionModelSpec, t: usize, opts: EvolveOptions) -> Result<PdfState> {
    let mut s = PdfState::initial(spec, opts)?;
    for _ in 0..t {
        s = evolve_pdf(&s, spec)?;
    }
    Ok(s)
}

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Moments of the one-step increment `Δz_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolatilityMoments {
    pub mean: f64,
    pub var: f64,
    pub c3: f64,
    pub c4: f64,
}

fn require_increment(state: &PdfState) -> Result<()> {
    if state.y.is_delta() {
        return Err(Error::RejectedInput("the increment is defined from t = 1 on".into()));
    }
    Ok(())
}

/// Cumulants of `Δz_t = h(y_t)`, integrating `h` over each `y` cell with
/// 8-point Gauss–Legendre under a flat in-cell density.
pub fn volatility_moments(state: &PdfState) -> Result<VolatilityMoments> {
    require_increment(state)?;
    let dx = state.dx;
    let mut nodes = Vec::with_capacity(state.y.masses.len() * 8);
    for (i, m) in state.y.masses.iter().enumerate() {
        if *m == 0.0 {
            continue;
        }
        let mid = (state.y.start + i as i64) as f64 * dx + 0.5 * dx;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            nodes.push((involution(mid + 0.5 * dx * x), 0.5 * w * m));
        }
    }
    let mean = nodes.iter().map(|(h, w)| h * w).sum::<f64>();
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for (h, w) in &nodes {
        let d = h - mean;
        let d2 = d * d;
        m2 += w * d2;
        m3 += w * d2 * d;
        m4 += w * d2 * d2;
    }
    Ok(VolatilityMoments { mean: mean + state.log_retention, var: m2, c3: m3, c4: m4 - 3.0 * m2 * m2 })
}

/// `P(Δz_t ≤ x) = 1 − F_y(h(x))`, exact at every `x = h(y)` for a `y` cell edge.
pub fn volatility_cdf(state: &PdfState, x: f64) -> Result<f64> {
    require_increment(state)?;
    let x = x - state.log_retention;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let cdf = CellCdf::new(&state.y, state.dx);
    Ok((1.0 - cdf.eval(involution(x))).clamp(0.0, 1.0))
}

/// Density of `Δz_t` on an explicit grid of cell centres `x0 + i·dx`.
///
/// Cell masses are `F_y(h(a)) − F_y(h(b))` for the cell `[a, b]`; mass outside
/// the grid is not folded back in.
pub fn volatility_pdf_on(state: &PdfState, x0: f64, dx: f64, n: usize) -> Result<GridPdf> {
    require_increment(state)?;
    let x0 = x0 - state.log_retention;
    if !(dx > 0.0) || n == 0 || x0 - 0.5 * dx <= 0.0 {
        return Err(Error::RejectedGrid(format!(
            "increment grid must lie strictly in x > 0, got first edge {}",
            x0 - 0.5 * dx
        )));
    }
    let cdf = CellCdf::new(&state.y, state.dx);
    let masses: Vec<f64> = (0..n)
        .map(|i| {
            let a = x0 + (i as f64 - 0.5) * dx;
            (cdf.eval(involution(a)) - cdf.eval(involution(a + dx))).max(0.0)
        })
        .collect();
    GridPdf::from_masses(x0 + state.log_retention, dx, &masses)
}

/// Density of `Δz_t` on an automatic grid of `n` cells spanning the image of
/// the `y` grid. Mass beyond the upper end (from `y` near zero) lands in the
/// last cell.
pub fn volatility_pdf(state: &PdfState, n: usize) -> Result<GridPdf> {
    require_increment(state)?;
    let dy = state.dx;
    let y_lo = (state.y.start as f64 * dy).max(1e-9 * dy);
    let y_hi = (state.y.start + state.y.masses.len() as i64) as f64 * dy;
    let (x_lo, x_hi) = (involution(y_hi), involution(y_lo));
    let n = n.max(2);
    let dx = (x_hi - x_lo) / n as f64;
    let cdf = CellCdf::new(&state.y, dy);
    let mut masses: Vec<f64> = (0..n)
        .map(|i| {
            let a = x_lo + i as f64 * dx;
            (cdf.eval(involution(a)) - cdf.eval(involution(a + dx))).max(0.0)
        })
        .collect();
    let rest = 1.0 - masses.iter().sum::<f64>();
    if let Some(last) = masses.last_mut() {
        *last += rest.max(0.0);
    }
    GridPdf::from_masses(x_lo + 0.5 * dx + state.log_retention, dx, &masses)
}

/// `σ_{Δz}` from the recursion at time `t` divided by `σ_a·√tanh(g/2)`.
pub fn narrow_limit_check(spec: &ProductionModelSpec, t: usize) -> Result<f64> {
    narrow_limit_check_with(spec, t, EvolveOptions { track_z: false, ..EvolveOptions::default() })
}

pub fn narrow_limit_check_with(spec: &ProductionModelSpec, t: usize, opts: EvolveOptions) -> Result<f64> {
    let sigma = spec
        .gaussian_sigma()
        .ok_or_else(|| Error::OutOfRegime("the narrow-noise reference needs gaussian noise".into()))?;
    let g = spec.effective_drift();
    if g <= 0.0 {
        return Err(Error::OutOfRegime(format!("the tanh reference needs g > 0, got {g}")));
    }
    let s = evolve_to(spec, t.max(1), opts)?;
    let v = volatility_moments(&s)?;
    Ok(v.var.sqrt() / (sigma * (0.5 * g).tanh().sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_is_self_inverse() {
        for y in [1e-3, 0.1, 1.0, 5.0, 20.0] {
            assert!((involution(involution(y)) - y).abs() < 1e-9 * y.max(1.0));
        }
    }

    #[test]
    fn softplus_inverse() {
        for s in [-20.0, -1.0, 0.0, 2.0, 40.0] {
            assert!((inv_softplus(softplus(s)) - s).abs() < 1e-9);
        }
    }

    #[test]
    fn narrow_noise_first_step_is_deterministic_map() {
        let spec = ProductionModelSpec::gaussian(0.2, 1e-4).unwrap();
        let s = evolve_to(&spec, 1, EvolveOptions { dx: Some(1e-5), ..Default::default() }).unwrap();
        let z = s.rho_z().unwrap();
        assert!((z.mean() - softplus(0.2)).abs() < 1e-5);
    }

    #[test]
    fn trimming_keeps_mass() {
        let mut c = Cells { start: 3, masses: vec![1e-20, 1e-18, 0.5, 0.5, 1e-19] };
        let cut = trim(&mut c, 1e-14);
        assert_eq!(c.start, 5);
        assert_eq!(c.masses, vec![0.5, 0.5]);
        assert!(cut < 1e-17);
    }

    #[test]
    fn rejects_non_positive_increment_grid() {
        let spec = ProductionModelSpec::gaussian(0.2, 0.05).unwrap();
        let s = evolve_to(&spec, 3, EvolveOptions::default()).unwrap();
        assert!(matches!(volatility_pdf_on(&s, 0.0, 0.01, 10), Err(Error::RejectedGrid(_))));
        assert!(volatility_pdf_on(&s, 0.01, 0.01, 100).is_ok());
    }
}
