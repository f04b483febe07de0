use num_complex::Complex64;

use super::{BergmanElement, BergmanError, KernelVector};
use crate::moebius::Point;

/// Relative tolerance on the remainders of the synthetic divisions.
const VANISHING_TOL: f64 = 1e-8;

/// `f(w) / (w - w0)^j`, by `j` synthetic divisions from the top coefficient.
///
/// Each remainder is `f(w0)` for the current quotient; it must be small
/// compared with `‖f‖ √K(w0, w0)`, the largest value a function of that
/// norm can take at `w0`.
pub fn pop_zero(
    f: &BergmanElement,
    w0: Point,
    j: usize,
) -> Result<BergmanElement, BergmanError> {
    let w = w0.expect_disc()?;
    let scale = f.norm() * KernelVector::new(w0, f.weight())?.norm_sqr().sqrt();
    let mut a = f.to_taylor();
    for order in 0..j {
        if a.len() <= 1 {
            let residual = a.first().map_or(0.0, |c| c.norm());
            if residual > VANISHING_TOL * scale {
                return Err(BergmanError::InsufficientVanishing { order: order + 1, residual });
            }
            a = vec![Complex64::new(0.0, 0.0)];
            continue;
        }
        let n = a.len() - 1;
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        let mut carry = Complex64::new(0.0, 0.0);
        for k in (1..=n).rev() {
            carry = a[k] + w * carry;
            q[k - 1] = carry;
        }
        let residual = (a[0] + w * carry).norm();
        if residual > VANISHING_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(BergmanError::InsufficientVanishing { order: order + 1, residual });
        }
        a = q;
    }
    a.resize(f.truncation() + 1, Complex64::new(0.0, 0.0));
    BergmanElement::from_taylor(f.weight(), &a)
}
