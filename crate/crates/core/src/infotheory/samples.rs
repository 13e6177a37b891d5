use crate::error::{reject, Result};
use serde::{Deserialize, Serialize};
use std::io::Read;

/// Two aligned sample vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedSamples {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PairedSamples {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return reject(format!("sample lengths differ: {} vs {}", x.len(), y.len()));
        }
        if x.len() < 2 {
            return Err(crate::Error::InsufficientData { needed: 2, got: x.len() });
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return reject("samples contain NaN or infinite values");
        }
        Ok(Self { x, y })
    }

    /// Drops every pair with a non-finite member; returns the pairs and the drop count.
    pub fn cleaned(x: &[f64], y: &[f64]) -> Result<(Self, usize)> {
        if x.len() != y.len() {
            return reject(format!("sample lengths differ: {} vs {}", x.len(), y.len()));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            x.iter().zip(y).filter(|(a, b)| a.is_finite() && b.is_finite()).map(|(a, b)| (*a, *b)).unzip();
        let dropped = x.len() - xs.len();
        Ok((Self::new(xs, ys)?, dropped))
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Two-column CSV `x,y`; non-finite pairs are dropped.
    pub fn read_csv<R: Read>(r: R, has_header: bool) -> Result<(Self, usize)> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(has_header).trim(csv::Trim::All).from_reader(r);
        let (mut x, mut y) = (Vec::new(), Vec::new());
        let offset = if has_header { 2 } else { 1 };
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() < 2 {
                return Err(crate::Error::Parse { line: i + offset, msg: "expected two columns".into() });
            }
            let p = |s: &str| s.parse::<f64>().unwrap_or(f64::NAN);
            x.push(p(&rec[0]));
            y.push(p(&rec[1]));
        }
        Self::cleaned(&x, &y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PairedSamples::new(vec![1.0], vec![1.0]).is_err());
        assert!(PairedSamples::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(PairedSamples::new(vec![1.0, f64::NAN], vec![1.0, 2.0]).is_err());
        let (s, d) = PairedSamples::cleaned(&[1.0, f64::NAN, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.len(), d), (2, 1));
    }

    #[test]
    fn csv() {
        let (s, d) = PairedSamples::read_csv("x,y\n1,2\n3,4\nNaN,1\n".as_bytes(), true).unwrap();
        assert_eq!(s.x(), &[1.0, 3.0]);
        assert_eq!(d, 1);
        let (s, _) = PairedSamples::read_csv("1,2\n3,5\n".as_bytes(), false).unwrap();
        assert_eq!(s.y(), &[2.0, 5.0]);
    }
}
