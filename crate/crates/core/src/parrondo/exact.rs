use super::{GameSpec, LatticeDistribution, TransferSystem};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

fn to_na(sys: &TransferSystem, k: f64) -> DMatrix<Complex64> {
    let q = sys.complex_at(Complex64::new(0.0, k));
    DMatrix::from_fn(sys.dim(), sys.dim(), |i, j| q.get(i, j))
}

fn power_apply(mut a: DMatrix<Complex64>, mut v: DVector<Complex64>, mut t: usize) -> DVector<Complex64> {
    while t > 0 {
        if t & 1 == 1 {
            v = &a * v;
        }
        t >>= 1;
        if t > 0 {
            a = &a * &a;
        }
    }
    v
}

/// Exact `P_l(n, t)` from the point start via the discrete characteristic function.
///
/// `Q(ik)^t e_0` is sampled at the `2t + 1` momenta `k_m = 2πm/(2t+1)` and
/// inverted with an FFT; the `1/(2t+1)` normalisation makes the total mass one.
pub fn exact_pmf(spec: &GameSpec, t: usize) -> LatticeDistribution {
    let sys = TransferSystem::from_game(spec);
    let dim = sys.dim();
    let n = 2 * t + 1;
    let mut e0 = DVector::zeros(dim);
    e0[0] = Complex64::new(1.0, 0.0);
    let samples: Vec<DVector<Complex64>> = (0..n)
        .map(|m| power_apply(to_na(&sys, 2.0 * std::f64::consts::PI * m as f64 / n as f64), e0.clone(), t))
        .collect();
    let ifft = FftPlanner::<f64>::new().plan_fft_inverse(n);
    let mut masses = vec![0.0; n * dim];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for l in 0..dim {
        for (m, s) in samples.iter().enumerate() {
            buf[m] = s[l];
        }
        ifft.process(&mut buf);
        for (j, c) in buf.iter().enumerate() {
            let cell = if j <= t { j as i64 } else { j as i64 - n as i64 };
            let idx = (cell + t as i64) as usize;
            masses[idx * dim + l] = (c.re / n as f64).max(0.0);
        }
    }
    LatticeDistribution::from_parts(t, dim, -(t as i64), masses)
}
