use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BergmanElement, BergmanError, basis_scales, check_weight};
use crate::moebius::Point;

/// `((s-1)/4π) (1 - z conj(w))^{-s}` on the principal branch.
pub fn kernel_raw(s: f64, z: Complex64, w: Complex64) -> Complex64 {
    let base = Complex64::new(1.0, 0.0) - z * w.conj();
    (s - 1.0) / (4.0 * std::f64::consts::PI) * (-s * base.ln()).exp()
}

/// The reproducing kernel `K(z, w) = Σ e_n(z) conj(e_n(w))`.
pub fn kernel_eval(s: f64, z: Point, w: Point) -> Result<Complex64, BergmanError> {
    check_weight(s)?;
    Ok(kernel_raw(s, z.expect_disc()?, w.expect_disc()?))
}

/// The evaluation vector `ε_{w0}`, with `⟨f, ε_{w0}⟩ = f(w0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelVector {
    pub point: Point,
    pub weight: f64,
}

impl KernelVector {
    pub fn new(point: Point, weight: f64) -> Result<Self, BergmanError> {
        check_weight(weight)?;
        point.expect_disc()?;
        Ok(KernelVector { point, weight })
    }

    /// Coefficients `conj(e_n(w0))` up to `truncation`.
    pub fn to_element(&self, truncation: usize) -> BergmanElement {
        let w = self.point.value().conj();
        let b = basis_scales(self.weight, truncation);
        let mut p = Complex64::new(1.0, 0.0);
        let coeffs = b
            .iter()
            .map(|&b| {
                let c = b * p;
                p *= w;
                c
            })
            .collect();
        BergmanElement::new(self.weight, coeffs).expect("weight checked")
    }

    /// `‖ε_{w0}‖² = K(w0, w0)`.
    pub fn norm_sqr(&self) -> f64 {
        kernel_raw(self.weight, self.point.value(), self.point.value()).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin() {
        let o = Point::disc(Complex64::new(0.0, 0.0)).unwrap();
        let k = kernel_eval(2.5, o, o).unwrap();
        assert!((k.re - 1.5 / (4.0 * std::f64::consts::PI)).abs() < 1e-16);
        assert_eq!(k.im, 0.0);
    }
}
