use super::{GameSpec, HistoryGameSpec};
use crate::numerics::ComplexMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// `Q(κ) = H + U e^{−κ} + D e^{κ}`, column-stochastic at κ = 0.
///
/// `U` collects moves that advance the cell index by one, `D` those that move
/// it back by one, `H` the moves that stay within the cell. Entries are indexed
/// `[to, from]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferSystem {
    pub hold: DMatrix<f64>,
    pub up: DMatrix<f64>,
    pub down: DMatrix<f64>,
}

impl TransferSystem {
    pub fn from_game(spec: &GameSpec) -> Self {
        let m = spec.m();
        let mut hold = DMatrix::zeros(m, m);
        let mut up = DMatrix::zeros(m, m);
        let mut down = DMatrix::zeros(m, m);
        for l in 0..m {
            hold[(l, l)] += spec.hold(l);
            if l + 1 == m {
                up[(0, l)] += spec.p()[l];
            } else {
                hold[(l + 1, l)] += spec.p()[l];
            }
            if l == 0 {
                down[(m - 1, 0)] += spec.q()[0];
            } else {
                hold[(l - 1, l)] += spec.q()[l];
            }
        }
        Self { hold, up, down }
    }

    /// States ordered (−,−), (−,+), (+,−), (+,+); every step moves capital by ±1.
    pub fn from_history(spec: &HistoryGameSpec) -> Self {
        let p = spec.probs();
        let mut up = DMatrix::zeros(4, 4);
        let mut down = DMatrix::zeros(4, 4);
        for (s, &ps) in p.iter().enumerate() {
            let last = s & 1;
            up[(2 * last + 1, s)] += ps;
            down[(2 * last, s)] += 1.0 - ps;
        }
        Self { hold: DMatrix::zeros(4, 4), up, down }
    }

    pub fn dim(&self) -> usize {
        self.hold.nrows()
    }

    pub fn at(&self, kappa: f64) -> DMatrix<f64> {
        &self.hold + &self.up * (-kappa).exp() + &self.down * kappa.exp()
    }

    /// dQ/dκ
    pub fn d1(&self, kappa: f64) -> DMatrix<f64> {
        &self.down * kappa.exp() - &self.up * (-kappa).exp()
    }

    /// d²Q/dκ²
    pub fn d2(&self, kappa: f64) -> DMatrix<f64> {
        &self.down * kappa.exp() + &self.up * (-kappa).exp()
    }

    pub fn complex_at(&self, kappa: Complex64) -> ComplexMatrix {
        let (eu, ed) = ((-kappa).exp(), kappa.exp());
        ComplexMatrix::from_fn(self.dim(), |i, j| {
            Complex64::new(self.hold[(i, j)], 0.0) + eu * self.up[(i, j)] + ed * self.down[(i, j)]
        })
    }
}

/// The momentum-dependent transfer matrix of a ladder game.
pub fn q_matrix(spec: &GameSpec, kappa: Complex64) -> ComplexMatrix {
    TransferSystem::from_game(spec).complex_at(kappa)
}
