use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const PROB_TOL: f64 = 1e-12;

/// Per-rung win/lose probabilities of an M-periodic ladder game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GameSpecFile", into = "GameSpecFile")]
pub struct GameSpec {
    p: Vec<f64>,
    q: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameSpecFile {
    #[serde(rename = "M")]
    m: usize,
    p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<Vec<f64>>,
}

impl TryFrom<GameSpecFile> for GameSpec {
    type Error = Error;

    fn try_from(f: GameSpecFile) -> Result<Self> {
        if f.p.len() != f.m {
            return Err(Error::RejectedSpec(format!("M = {} but p has {} entries", f.m, f.p.len())));
        }
        let q = f.q.unwrap_or_else(|| f.p.iter().map(|p| 1.0 - p).collect());
        GameSpec::new(f.p, q)
    }
}

impl From<GameSpec> for GameSpecFile {
    fn from(g: GameSpec) -> Self {
        Self { m: g.m(), p: g.p, q: Some(g.q) }
    }
}

/// Which two-step structure the support follows from a point start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityClass {
    /// Some rung can hold; no parity constraint.
    Aperiodic,
    /// No holding and even M: ±1 pair at κ = 0, summed profile does not oscillate.
    EvenM,
    /// No holding and odd M: summed profile oscillates with n + t.
    OddM,
}

impl GameSpec {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.is_empty() || p.len() != q.len() {
            return Err(Error::RejectedSpec(format!("need equal non-empty p and q, got {} and {}", p.len(), q.len())));
        }
        for (l, (a, b)) in p.iter().zip(&q).enumerate() {
            if !(*a >= 0.0 && *b >= 0.0 && a + b <= 1.0 + PROB_TOL) {
                return Err(Error::RejectedSpec(format!("rung {l}: p = {a}, q = {b} is not a valid pair")));
            }
        }
        Ok(Self { p, q })
    }

    /// Single-rung chain.
    pub fn chain(p: f64, q: f64) -> Result<Self> {
        Self::new(vec![p], vec![q])
    }

    /// Same coin on every rung, no holding.
    pub fn uniform(m: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; m], vec![1.0 - p; m])
    }

    /// Coin `p_zero` when capital ≡ 0 (mod M), coin `p_other` elsewhere, no holding.
    pub fn capital_dependent(m: usize, p_zero: f64, p_other: f64) -> Result<Self> {
        let mut p = vec![p_other; m];
        p[0] = p_zero;
        let q = p.iter().map(|v| 1.0 - v).collect();
        Self::new(p, q)
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("game spec serialises")
    }

    pub fn m(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn hold(&self, l: usize) -> f64 {
        (1.0 - self.p[l] - self.q[l]).max(0.0)
    }

    pub fn is_holdless(&self) -> bool {
        (0..self.m()).all(|l| (self.p[l] + self.q[l] - 1.0).abs() <= PROB_TOL)
    }

    pub fn parity_class(&self) -> ParityClass {
        match (self.is_holdless(), self.m() % 2 == 0) {
            (false, _) => ParityClass::Aperiodic,
            (true, true) => ParityClass::EvenM,
            (true, false) => ParityClass::OddM,
        }
    }
}

/// Per-rung average of two games played with equal probability each round.
pub fn mix_strategies(a: &GameSpec, b: &GameSpec) -> Result<GameSpec> {
    if a.m() != b.m() {
        return Err(Error::RejectedInput(format!("cannot mix M = {} with M = {}", a.m(), b.m())));
    }
    let avg = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(u, v)| 0.5 * (u + v)).collect();
    GameSpec::new(avg(&a.p, &b.p), avg(&a.q, &b.q))
}

/// Right-jump probabilities after the histories (−,−), (−,+), (+,−), (+,+),
/// listed as (second-to-last, last).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistoryGameSpec {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl HistoryGameSpec {
    pub fn new(p1: f64, p2: f64, p3: f64, p4: f64) -> Result<Self> {
        let s = Self { p1, p2, p3, p4 };
        for (i, v) in s.probs().iter().enumerate() {
            if !(0.0..=1.0).contains(v) {
                return Err(Error::RejectedSpec(format!("p{} = {v} is outside [0, 1]", i + 1)));
            }
        }
        Ok(s)
    }

    pub fn probs(&self) -> [f64; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }
}
