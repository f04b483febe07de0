use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ModularError;
use crate::moebius::Point;

/// `πiz/12 + Σ Log(1 - qⁿ)`, summed until the terms fall below `1e-18`.
pub fn log_eta_series(z: Complex64) -> Complex64 {
    let q = (Complex64::new(0.0, std::f64::consts::TAU) * z).exp();
    let mut acc = Complex64::new(0.0, std::f64::consts::PI / 12.0) * z;
    let mut qn = q;
    let aq = q.norm();
    let mut mag = aq;
    for _ in 0..10_000_000 {
        if mag < 1e-18 * (1.0 - aq) {
            break;
        }
        acc += (1.0 - qn).ln();
        qn *= q;
        mag *= aq;
    }
    acc
}

/// The holomorphic logarithm of η given by the series with principal
/// logarithms.
///
/// The point is first moved into the standard domain using
/// `L(z+1) = L(z) + πi/12` and `L(-1/z) = L(z) + ½ Log(-iz)`, which hold
/// exactly for this branch (the constant in the second law vanishes at
/// `z = i`), so the series is only ever summed where `|q| < 0.005`.
pub fn log_eta(z: Point) -> Result<Complex64, ModularError> {
    let mut w = z.expect_half_plane()?;
    let mut correction = Complex64::new(0.0, 0.0);
    let pi12 = Complex64::new(0.0, std::f64::consts::PI / 12.0);
    for _ in 0..100_000 {
        let n = w.re.round();
        if n != 0.0 {
            w.re -= n;
            correction += n * pi12;
        }
        if w.norm_sqr() < 1.0 - 1e-15 {
            correction -= 0.5 * (Complex64::new(0.0, -1.0) * w).ln();
            w = -1.0 / w;
        } else {
            break;
        }
    }
    Ok(log_eta_series(w) + correction)
}

/// `η(z)^r = exp(r log η(z))`.
pub fn eta_pow(z: Point, r: f64) -> Result<Complex64, ModularError> {
    if r == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok((r * log_eta(z)?).exp())
}

/// The function `η^r` on the branch of [`log_eta`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaPower {
    pub exponent: f64,
}

impl EtaPower {
    pub fn eval(&self, z: Point) -> Result<Complex64, ModularError> {
        eta_pow(z, self.exponent)
    }
}
