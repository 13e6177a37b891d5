use super::GridPdf;
use crate::error::{reject, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

const DIRECT_LIMIT: usize = 1 << 15;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Density of the sum of two independent variables.
///
/// Inputs with different spacing are first brought to the finer spacing by
/// linear interpolation. The output spans `[f.x0 + g.x0, f.xmax + g.xmax]` and is
/// renormalised to unit mass.
pub fn grid_convolve(f: &GridPdf, g: &GridPdf) -> Result<GridPdf> {
    let (f, g) = align(f, g)?;
    let dx = f.dx();
    if ((f.dx() - g.dx()) / dx).abs() > 1e-12 {
        return reject(format!("grid spacings {} and {} differ after resampling", f.dx(), g.dx()));
    }
    let m = convolve_masses(&f.masses(), &g.masses());
    GridPdf::from_masses(f.x0() + g.x0(), dx, &m)?.normalized()
}

fn align(f: &GridPdf, g: &GridPdf) -> Result<(GridPdf, GridPdf)> {
    if f.is_empty() || g.is_empty() {
        return reject("empty grid");
    }
    let rel = (f.dx() - g.dx()).abs() / f.dx().min(g.dx());
    if rel <= 1e-12 {
        return Ok((f.clone(), g.clone()));
    }
    if f.dx() > g.dx() {
        Ok((f.resample(g.dx())?, g.clone()))
    } else {
        Ok((f.clone(), g.resample(f.dx())?))
    }
}

/// Discrete linear convolution of two mass vectors, picking the direct or FFT
/// route by size.
pub fn convolve_masses(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.len().saturating_mul(b.len()) <= DIRECT_LIMIT {
        convolve_direct(a, b)
    } else {
        convolve_fft(a, b)
    }
}

pub fn convolve_direct(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// FFT convolution, zero-padded to the next power of two; round-off negatives
/// are clipped to zero.
pub fn convolve_fft(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let len = n.next_power_of_two();
    let (fwd, inv) = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(len), p.plan_fft_inverse(len))
    });
    let mut fa: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fa.resize(len, Complex64::new(0.0, 0.0));
    let mut fb: Vec<Complex64> = b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fb.resize(len, Complex64::new(0.0, 0.0));
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    let scale = 1.0 / len as f64;
    fa[..n].iter().map(|c| (c.re * scale).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(var: f64, dx: f64, half: f64) -> GridPdf {
        let n = (2.0 * half / dx).round() as usize + 1;
        GridPdf::from_fn(-half, dx, n, |x| (-x * x / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt())
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn gaussians_add_variances() {
        let h = grid_convolve(&gauss(1.0, 0.01, 10.0), &gauss(2.0, 0.01, 12.0)).unwrap();
        let err = h
            .xs()
            .iter()
            .zip(h.density())
            .map(|(x, d)| (d - (-x * x / 6.0).exp() / (6.0 * std::f64::consts::PI).sqrt()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "max error {err}");
    }

    #[test]
    fn spikes_add_positions() {
        let a = GridPdf::spike(1.5, 0.5).unwrap();
        let b = GridPdf::spike(-0.5, 0.5).unwrap();
        let c = grid_convolve(&a, &b).unwrap();
        assert_eq!(c.len(), 1);
        assert!((c.x0() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniforms_make_a_triangle() {
        let dx = 0.001;
        let n = 1000;
        let u = GridPdf::new(dx / 2.0, dx, vec![1.0; n]).unwrap();
        let t = grid_convolve(&u, &u).unwrap();
        // cell-centred uniforms: exact triangle evaluated at node k·dx up to O(dx)
        for (i, &d) in t.density().iter().enumerate() {
            let x = t.x(i);
            let tri = if x < 1.0 { x } else { 2.0 - x };
            assert!((d - tri).abs() <= dx + 1e-12, "x={x} d={d}");
        }
        let peak = t.density().iter().cloned().fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 2e-3);
    }

    #[test]
    fn fft_matches_direct() {
        let a: Vec<f64> = (0..300).map(|i| ((i as f64) * 0.37).sin().abs()).collect();
        let b: Vec<f64> = (0..200).map(|i| ((i as f64) * 0.11).cos().powi(2)).collect();
        let d = convolve_direct(&a, &b);
        let f = convolve_fft(&a, &b);
        for (x, y) in d.iter().zip(&f) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn mismatched_spacing_is_resampled() {
        let a = gauss(1.0, 0.02, 8.0);
        let b = gauss(1.0, 0.01, 8.0);
        let c = grid_convolve(&a, &b).unwrap();
        assert!((c.dx() - 0.01).abs() < 1e-15);
        assert!((c.variance() - 2.0).abs() < 1e-3);
    }
}
