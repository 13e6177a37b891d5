/// First derivative: 5-point central stencil plus one Richardson step.
pub fn derivative1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
    let (a, b) = (d(h), d(h / 2.0));
    (16.0 * b - a) / 15.0
}

/// Second derivative: 5-point central stencil plus one Richardson step.
pub fn derivative2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| {
        (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h * h)
    };
    let (a, b) = (d(h), d(h / 2.0));
    (16.0 * b - a) / 15.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_derivatives() {
        assert!((derivative1(f64::exp, 0.3, 1e-3) - 0.3f64.exp()).abs() < 1e-11);
        assert!((derivative2(f64::exp, 0.3, 1e-2) - 0.3f64.exp()).abs() < 1e-9);
    }
}
