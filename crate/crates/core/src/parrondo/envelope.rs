use crate::error::{Error, Result};
use crate::numerics::{convolve_direct, GridPdf};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Discrete law of the smaller envelope amount.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmountLaw {
    /// `(amount, probability)` pairs.
    pub atoms: Vec<(f64, f64)>,
}

impl AmountLaw {
    pub fn delta(x: f64) -> Self {
        Self { atoms: vec![(x, 1.0)] }
    }

    /// Grid nodes become atoms weighted by their cell masses.
    pub fn from_grid(g: &GridPdf) -> Self {
        let atoms = g.masses().into_iter().enumerate().filter(|(_, m)| *m > 0.0).map(|(i, m)| (g.x(i), m)).collect();
        Self { atoms }
    }

    fn validate(&self) -> Result<()> {
        if self.atoms.is_empty() {
            return Err(Error::RejectedSpec("amount law has no atoms".into()));
        }
        if self.atoms.iter().any(|(x, w)| !(x.is_finite() && *x > 0.0 && w.is_finite() && *w >= 0.0)) {
            return Err(Error::RejectedSpec("amounts must be positive and finite with non-negative weights".into()));
        }
        let s: f64 = self.atoms.iter().map(|a| a.1).sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::RejectedSpec(format!("amount weights sum to {s}, not 1")));
        }
        Ok(())
    }
}

/// Probability of swapping after seeing amount `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SwitchingFunction {
    Constant(f64),
    /// Linear interpolation between strictly increasing nodes, flat outside.
    Table { x: Vec<f64>, p: Vec<f64> },
}

impl SwitchingFunction {
    pub fn eval(&self, at: f64) -> Result<f64> {
        let v = match self {
            Self::Constant(c) => *c,
            Self::Table { x, p } => {
                if x.is_empty() || x.len() != p.len() || x.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::RejectedSpec("switching table needs strictly increasing nodes".into()));
                }
                if at <= x[0] {
                    p[0]
                } else if at >= x[x.len() - 1] {
                    p[p.len() - 1]
                } else {
                    let k = x.partition_point(|&v| v <= at) - 1;
                    let w = (at - x[k]) / (x[k + 1] - x[k]);
                    p[k] * (1.0 - w) + p[k + 1] * w
                }
            }
        };
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::RejectedSpec(format!("switching probability {v} at x = {at} is outside [0, 1]")));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeSpec {
    pub amounts: AmountLaw,
    pub switching: SwitchingFunction,
    /// Capital lattice spacing; every amount must be a multiple of it.
    /// Defaults to the smallest amount.
    #[serde(default)]
    pub unit: Option<f64>,
}

impl EnvelopeSpec {
    pub fn new(amounts: AmountLaw, switching: SwitchingFunction) -> Self {
        Self { amounts, switching, unit: None }
    }

    pub fn unit(&self) -> f64 {
        self.unit.unwrap_or_else(|| self.amounts.atoms.iter().map(|a| a.0).fold(f64::INFINITY, f64::min))
    }

    /// Keep/swap probabilities `(a, 1 − a)` for gaining `x` or `2x` at each atom.
    fn branch_probs(&self) -> Result<Vec<(f64, f64, f64)>> {
        self.amounts.validate()?;
        self.amounts
            .atoms
            .iter()
            .map(|&(x, w)| {
                let (p1, p2) = (self.switching.eval(x)?, self.switching.eval(2.0 * x)?);
                Ok((x, w, 0.5 * (1.0 - p1) + 0.5 * p2))
            })
            .collect()
    }

    /// Per-round gain law on the capital lattice, indexed by multiples of the unit.
    pub fn increment_pmf(&self) -> Result<Vec<f64>> {
        let unit = self.unit();
        if !(unit > 0.0 && unit.is_finite()) {
            return Err(Error::RejectedSpec("lattice unit must be positive".into()));
        }
        let cells = |v: f64| -> Result<usize> {
            let c = v / unit;
            if (c - c.round()).abs() > 1e-9 * c.max(1.0) {
                return Err(Error::RejectedSpec(format!("amount {v} is not a multiple of the unit {unit}")));
            }
            Ok(c.round() as usize)
        };
        let probs = self.branch_probs()?;
        let top = probs.iter().map(|b| cells(2.0 * b.0)).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(0);
        let mut pmf = vec![0.0; top + 1];
        for (x, w, a) in probs {
            pmf[cells(x)?] += w * a;
            pmf[cells(2.0 * x)?] += w * (1.0 - a);
        }
        Ok(pmf)
    }
}

/// Capital masses on `(offset + i)·unit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapitalPmf {
    pub unit: f64,
    pub offset: i64,
    pub masses: Vec<f64>,
}

impl CapitalPmf {
    pub fn point(unit: f64) -> Self {
        Self { unit, offset: 0, masses: vec![1.0] }
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.masses.iter().enumerate().map(|(i, m)| m * (self.offset + i as i64) as f64 * self.unit).sum::<f64>()
            / self.total_mass()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.masses
            .iter()
            .enumerate()
            .map(|(i, m)| m * ((self.offset + i as i64) as f64 * self.unit - mu).powi(2))
            .sum::<f64>()
            / self.total_mass()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["capital", "mass"])?;
        for (i, m) in self.masses.iter().enumerate() {
            wtr.write_record([format!("{}", (self.offset + i as i64) as f64 * self.unit), format!("{m:.15e}")])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// One round of the keep-or-swap game.
pub fn envelope_evolve(spec: &EnvelopeSpec, dist: &CapitalPmf) -> Result<CapitalPmf> {
    let unit = spec.unit();
    if ((dist.unit - unit) / unit).abs() > 1e-12 {
        return Err(Error::RejectedInput(format!("capital lattice unit {} differs from spec unit {unit}", dist.unit)));
    }
    let inc = spec.increment_pmf()?;
    Ok(CapitalPmf { unit, offset: dist.offset, masses: convolve_direct(&dist.masses, &inc) })
}

/// Mean gain `r` and variance `v` per round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeMoments {
    pub r: f64,
    pub v: f64,
}

pub fn envelope_moments(spec: &EnvelopeSpec) -> Result<EnvelopeMoments> {
    let (mut m1, mut m2) = (0.0, 0.0);
    for (x, w, a) in spec.branch_probs()? {
        m1 += w * (a * x + (1.0 - a) * 2.0 * x);
        m2 += w * (a * x * x + (1.0 - a) * 4.0 * x * x);
    }
    let v = m2 - m1 * m1;
    if !(m1.is_finite() && v.is_finite()) {
        return Err(Error::RejectedSpec("amount law has divergent moments".into()));
    }
    Ok(EnvelopeMoments { r: m1, v: v.max(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig_spec() -> EnvelopeSpec {
        EnvelopeSpec::new(AmountLaw::delta(1.0), SwitchingFunction::Table { x: vec![1.0, 2.0], p: vec![0.2, 0.3] })
    }

    #[test]
    fn one_round() {
        let d = envelope_evolve(&fig_spec(), &CapitalPmf::point(1.0)).unwrap();
        assert!((d.masses[1] - 0.55).abs() < 1e-15);
        assert!((d.masses[2] - 0.45).abs() < 1e-15);
        assert_eq!(d.masses[0], 0.0);
    }

    #[test]
    fn moments() {
        let m = envelope_moments(&fig_spec()).unwrap();
        assert!((m.r - 1.45).abs() < 1e-15);
        assert!((m.v - 0.2475).abs() < 1e-15);
        let never = EnvelopeSpec::new(AmountLaw::delta(3.0), SwitchingFunction::Constant(0.0));
        let m = envelope_moments(&never).unwrap();
        assert!((m.r - 4.5).abs() < 1e-15);
        let perfect = EnvelopeSpec::new(AmountLaw::delta(1.0), SwitchingFunction::Table { x: vec![1.0, 2.0], p: vec![1.0, 0.0] });
        let m = envelope_moments(&perfect).unwrap();
        assert!((m.r - 2.0).abs() < 1e-15 && m.v.abs() < 1e-15);
    }

    #[test]
    fn blind_switching_is_neutral() {
        for c in [0.0, 0.3, 1.0] {
            let s = EnvelopeSpec::new(AmountLaw::delta(2.0), SwitchingFunction::Constant(c));
            let d = envelope_evolve(&s, &CapitalPmf::point(2.0)).unwrap();
            assert!((d.masses[1] - 0.5).abs() < 1e-15 && (d.masses[2] - 0.5).abs() < 1e-15);
            assert!((envelope_moments(&s).unwrap().r - 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_switching_rejected() {
        let s = EnvelopeSpec::new(AmountLaw::delta(1.0), SwitchingFunction::Constant(1.5));
        assert!(matches!(envelope_moments(&s), Err(Error::RejectedSpec(_))));
    }

    #[test]
    fn toml_config() {
        let s: EnvelopeSpec = toml::from_str(
            "[amounts]\natoms = [[1.0, 0.5], [2.0, 0.5]]\n[switching.table]\nx = [1.0, 4.0]\np = [0.4, 0.1]\n",
        )
        .unwrap();
        assert_eq!(s.unit(), 1.0);
        let inc = s.increment_pmf().unwrap();
        assert_eq!(inc.len(), 5);
        assert!((inc.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
