use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use super::{BergmanError, check_weight, transport::transport_factor};
use crate::moebius::Point;

/// `β_n = √((s-1)/4π) √(s(s+1)…(s+n-1)/n!)`, through log-Gamma.
pub fn basis_scale(n: usize, s: f64) -> f64 {
    let n = n as f64;
    let log_ratio = ln_gamma(s + n) - ln_gamma(s) - ln_gamma(n + 1.0);
    ((s - 1.0) / (4.0 * std::f64::consts::PI)).sqrt() * (0.5 * log_ratio).exp()
}

/// `β_0..β_n` by the recursion `β_k = β_{k-1} √((s+k-1)/k)`.
pub fn basis_scales(s: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut b = ((s - 1.0) / (4.0 * std::f64::consts::PI)).sqrt();
    out.push(b);
    for k in 1..=n {
        b *= ((s + k as f64 - 1.0) / k as f64).sqrt();
        out.push(b);
    }
    out
}

/// `e_n(w)` for `w` in the disc.
pub fn basis_eval(n: usize, s: f64, w: Point) -> Result<Complex64, BergmanError> {
    check_weight(s)?;
    let w = w.expect_disc()?;
    Ok(basis_scale(n, s) * w.powu(n as u32))
}

/// `f_n(z) = β_n (2/(z+i))^s ((z-i)/(z+i))ⁿ`, the half-plane basis.
pub fn half_plane_basis_eval(n: usize, s: f64, z: Point) -> Result<Complex64, BergmanError> {
    check_weight(s)?;
    let z = z.expect_half_plane()?;
    let i = Complex64::i();
    Ok(basis_scale(n, s) * transport_factor(z, s) * ((z - i) / (z + i)).powu(n as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scales_agree_between_recursion_and_log_gamma() {
        for &s in &[1.5, 2.0, 13.0, 27.3] {
            let rec = basis_scales(s, 400);
            for (n, &b) in rec.iter().enumerate() {
                assert!(((b - basis_scale(n, s)) / b).abs() < 1e-11, "s={s} n={n}");
            }
        }
    }

    #[test]
    fn large_index_is_finite() {
        let b = basis_scale(10_000, 13.0);
        assert!(b.is_finite() && b > 0.0);
    }

    #[test]
    fn first_values() {
        let w = Point::disc(Complex64::new(0.5, 0.0)).unwrap();
        let b0 = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
        assert!((basis_eval(0, 2.0, w).unwrap().re - b0).abs() < 1e-15);
        let e1 = basis_eval(1, 2.0, w).unwrap();
        assert!((e1.re - b0 * 2f64.sqrt() * 0.5).abs() < 1e-15);
        assert!(basis_eval(1, 1.0, w).is_err());
    }
}
