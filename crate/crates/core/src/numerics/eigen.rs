use crate::error::{reject, Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Relative tolerance under which two moduli count as tied.
pub const DEGENERACY_TOL: f64 = 1e-9;
const MAX_DIM: usize = 8;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return reject("matrix must be square and non-empty");
        }
        Ok(Self { dim, entries: rows.concat() })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] += v;
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column_sums(&self) -> Vec<Complex64> {
        (0..self.dim).map(|j| (0..self.dim).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.entries.chunks(self.dim).map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    fn norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> =
            self.entries.chunks(self.dim).map(|r| r.iter().map(|c| [c.re, c.im]).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<Complex64>> =
            rows.into_iter().map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).collect();
        Self::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: Complex64,
    /// Normalised to unit component sum when that sum is not negligible, else to unit norm.
    pub right: Vec<Complex64>,
    /// Scaled so that `left · right = 1` (bilinear, no conjugation).
    pub left: Vec<Complex64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadingEigen {
    pub value: Complex64,
    pub right: Vec<Complex64>,
    pub left: Vec<Complex64>,
    pub residual: f64,
    pub degenerate: bool,
    /// Every eigenvalue whose modulus ties the leading one.
    pub maximal: Vec<Complex64>,
}

fn check_dim(m: &ComplexMatrix) -> Result<()> {
    if m.dim == 0 || m.dim > MAX_DIM {
        return reject(format!("eigen solver supports 1 <= dim <= {MAX_DIM}, got {}", m.dim));
    }
    if m.entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return reject("matrix entries must be finite");
    }
    Ok(())
}

/// All eigenvalues from a complex Schur decomposition.
///
/// When the QR sweep stalls (symmetric spectra such as {+1, −1} can defeat the
/// shift strategy) the decomposition is retried on a shifted copy and then on
/// a diagonally rescaled copy, both of which keep the spectrum recoverable.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    check_dim(m)?;
    let a = m.to_na();
    let n = m.dim;
    let scale = m.norm().max(1.0);
    let shift = Complex64::new(0.137, 0.071) * scale;
    let diag = DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(1.0 + 0.3 * i as f64, 0.0) } else { Complex64::new(0.0, 0.0) });
    let diag_inv = DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(1.0 / (1.0 + 0.3 * i as f64), 0.0) } else { Complex64::new(0.0, 0.0) });
    let attempts: [(DMatrix<Complex64>, Complex64); 3] = [
        (a.clone(), Complex64::new(0.0, 0.0)),
        (&a + DMatrix::<Complex64>::identity(n, n) * shift, shift),
        (&diag * &a * &diag_inv + DMatrix::<Complex64>::identity(n, n) * shift, shift),
    ];
    for (mat, s) in attempts {
        if let Some(schur) = mat.try_schur(1e-15, 10_000) {
            let (_, t) = schur.unpack();
            return Ok((0..n).map(|i| t[(i, i)] - s).collect());
        }
    }
    Err(Error::NumericalFailure { detail: "Schur iteration did not converge".into(), residual: f64::NAN })
}

fn inverse_iteration(a: &DMatrix<Complex64>, lambda: Complex64) -> Option<DVector<Complex64>> {
    let n = a.nrows();
    let scale = lambda.norm().max(1.0);
    for shift in [1e-13, 1e-10, 1e-7] {
        let mu = lambda + Complex64::new(shift * scale, shift * scale * 0.5);
        let shifted = a - DMatrix::<Complex64>::identity(n, n) * mu;
        let lu = shifted.lu();
        let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * i as f64 / n as f64, 0.03 * i as f64));
        let mut ok = true;
        for _ in 0..3 {
            match lu.solve(&v) {
                Some(w) if w.iter().all(|c| c.re.is_finite() && c.im.is_finite()) => {
                    let nrm = w.norm();
                    if nrm == 0.0 {
                        ok = false;
                        break;
                    }
                    v = w / Complex64::new(nrm, 0.0);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(v);
        }
    }
    None
}

fn eigen_pair(m: &ComplexMatrix, lambda: Complex64) -> Result<EigenPair> {
    let a = m.to_na();
    let at = a.transpose();
    let fail = |what: &str| Error::NumericalFailure { detail: format!("inverse iteration failed for {what} vector"), residual: f64::NAN };
    let x = inverse_iteration(&a, lambda).ok_or_else(|| fail("right"))?;
    let y = inverse_iteration(&at, lambda).ok_or_else(|| fail("left"))?;
    let resid = (&a * &x - &x * lambda).norm() / x.norm();
    let tol = 1e-10 * m.norm().max(1.0);
    if !(resid < tol) {
        return Err(Error::NumericalFailure { detail: format!("eigenvector residual above {tol:e}"), residual: resid });
    }
    let mut right: Vec<Complex64> = x.iter().cloned().collect();
    let sum: Complex64 = right.iter().sum();
    if sum.norm() > 1e-8 {
        right.iter_mut().for_each(|c| *c /= sum);
    }
    let mut left: Vec<Complex64> = y.iter().cloned().collect();
    let dot: Complex64 = left.iter().zip(&right).map(|(a, b)| a * b).sum();
    if dot.norm() > 1e-12 {
        left.iter_mut().for_each(|c| *c /= dot);
    }
    Ok(EigenPair { value: lambda, right, left, residual: resid })
}

/// Leading eigenpair by modulus; ties of modulus within [`DEGENERACY_TOL`] are
/// flagged and listed, the branch with the largest real part is returned.
pub fn eigen_leading(m: &ComplexMatrix) -> Result<LeadingEigen> {
    let vals = eigenvalues(m)?;
    let top = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut maximal: Vec<Complex64> =
        vals.iter().cloned().filter(|v| (v.norm() - top).abs() <= DEGENERACY_TOL * top.max(f64::MIN_POSITIVE)).collect();
    maximal.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap().then(b.im.partial_cmp(&a.im).unwrap()));
    let lead = maximal[0];
    let p = eigen_pair(m, lead)?;
    Ok(LeadingEigen {
        value: p.value,
        right: p.right,
        left: p.left,
        residual: p.residual,
        degenerate: maximal.len() > 1,
        maximal,
    })
}

/// Every eigenpair, ordered by decreasing modulus.
pub fn eigen_all(m: &ComplexMatrix) -> Result<Vec<EigenPair>> {
    let mut vals = eigenvalues(m)?;
    vals.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap().then(b.re.partial_cmp(&a.re).unwrap()));
    vals.into_iter().map(|v| eigen_pair(m, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_is_degenerate() {
        let m = ComplexMatrix::from_fn(3, |i, j| c(if i == j { 1.0 } else { 0.0 }));
        let e = eigen_leading(&m).unwrap();
        assert!((e.value - c(1.0)).norm() < 1e-14);
        assert!(e.degenerate);
        assert_eq!(e.maximal.len(), 3);
    }

    #[test]
    fn stochastic_matrix() {
        let m = ComplexMatrix::from_real_rows(&[vec![0.5, 0.2, 0.1], vec![0.3, 0.6, 0.4], vec![0.2, 0.2, 0.5]]).unwrap();
        let e = eigen_leading(&m).unwrap();
        assert!((e.value - c(1.0)).norm() < 1e-13);
        assert!(!e.degenerate);
        for y in &e.left {
            assert!((y - c(1.0)).norm() < 1e-10);
        }
        assert!(e.residual < 1e-12);
    }

    #[test]
    fn plus_minus_pair() {
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = eigen_leading(&m).unwrap();
        assert!(e.degenerate);
        assert!((e.value - c(1.0)).norm() < 1e-14);
        assert!(e.maximal.iter().any(|v| (v - c(-1.0)).norm() < 1e-14));
    }

    #[test]
    fn complex_entries_and_json() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 1.0), Complex64::new(0.5, 0.0)],
            vec![Complex64::new(0.0, -0.2), Complex64::new(0.3, 0.0)],
        ])
        .unwrap();
        let e = eigen_leading(&m).unwrap();
        let mv = m.mul_vec(&e.right);
        for (a, b) in mv.iter().zip(&e.right) {
            assert!((a - e.value * b).norm() < 1e-12);
        }
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, "[[[1.0,1.0],[0.5,0.0]],[[0.0,-0.2],[0.3,0.0]]]");
        let back: ComplexMatrix = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn biorthogonal() {
        let m = ComplexMatrix::from_real_rows(&[
            vec![0.1, 0.4, 0.0, 0.3],
            vec![0.6, 0.1, 0.5, 0.0],
            vec![0.0, 0.5, 0.2, 0.3],
            vec![0.3, 0.0, 0.3, 0.4],
        ])
        .unwrap();
        let pairs = eigen_all(&m).unwrap();
        for (i, a) in pairs.iter().enumerate() {
            for (j, b) in pairs.iter().enumerate() {
                let dot: Complex64 = a.left.iter().zip(&b.right).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - c(want)).norm() < 1e-8, "{i} {j} {dot}");
            }
        }
    }

    #[test]
    fn rejects_large() {
        assert!(eigen_leading(&ComplexMatrix::zeros(9)).is_err());
    }
}
