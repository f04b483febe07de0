use num_complex::Complex64;

use super::{GroupPreset, PresetName};
use crate::moebius::{GroupElement, Letter, MoebiusError, Point, apply_moebius};

const MAX_STEPS: usize = 100_000;
const ELLIPTIC_TOL: f64 = 1e-9;

fn translation(k: i64) -> GroupElement {
    let l = if k >= 0 { Letter::T } else { Letter::TInv };
    GroupElement { a: 1, b: k, c: 0, d: 1, word: vec![l; k.unsigned_abs() as usize] }
}

/// Move `z` into the standard domain `|Re z| <= 1/2`, `|z| >= 1`.
///
/// Returns `(z0, g)` with `g(z) = z0`; the word of `g` lists the steps with
/// the last one first, so `0.3 + 0.4i` gives the word `T S`.
pub fn reduce_to_fundamental_domain(z: Point) -> Result<(Point, GroupElement), MoebiusError> {
    let z_in = z.as_half_plane()?;
    let mut w = z_in.value();
    let mut g = GroupElement::identity();
    for _ in 0..MAX_STEPS {
        let n = w.re.round();
        if n != 0.0 {
            w.re -= n;
            g = &translation(-(n as i64)) * &g;
        }
        if w.norm_sqr() < 1.0 - 1e-15 {
            w = -1.0 / w;
            g = &GroupElement::s() * &g;
        } else {
            break;
        }
    }
    let z0 = apply_moebius(&g, z_in)?;
    Ok((z0, g))
}

/// Order of the stabilizer of `z` in the preset.
pub fn stabilizer_order(preset: &GroupPreset, z: Point) -> Result<u32, MoebiusError> {
    if preset.name == PresetName::Gamma2 {
        return Ok(1);
    }
    let (z0, _) = reduce_to_fundamental_domain(z)?;
    let v = z0.value();
    let rho = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    if (v - Complex64::i()).norm() < ELLIPTIC_TOL {
        Ok(2)
    } else if (v - rho).norm() < ELLIPTIC_TOL || (v + rho.conj()).norm() < ELLIPTIC_TOL {
        Ok(3)
    } else {
        Ok(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::format_word;

    fn hp(re: f64, im: f64) -> Point {
        Point::half_plane(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn reduces_known_points() {
        let (z0, g) = reduce_to_fundamental_domain(Point::i()).unwrap();
        assert!(g.is_identity());
        assert_eq!(z0.value(), Complex64::i());

        let (z0, g) = reduce_to_fundamental_domain(hp(0.3, 0.4)).unwrap();
        assert!((z0.value() - Complex64::new(-0.2, 1.6)).norm() < 1e-12);
        assert_eq!(format_word(&g.word), "T S");
        assert_eq!(g.entries(), [1, -1, 1, 0]);

        let (z0, g) = reduce_to_fundamental_domain(hp(5.0, 2.0)).unwrap();
        assert!((z0.value() - Complex64::new(0.0, 2.0)).norm() < 1e-12);
        assert_eq!(g.entries(), [1, -5, 0, 1]);
        assert_eq!(g.word.len(), 5);
    }

    #[test]
    fn elliptic_orders() {
        let p = GroupPreset::psl2z();
        let rho = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        assert_eq!(stabilizer_order(&p, Point::i()).unwrap(), 2);
        assert_eq!(stabilizer_order(&p, Point::half_plane(rho).unwrap()).unwrap(), 3);
        assert_eq!(stabilizer_order(&p, hp(0.0, 2.0)).unwrap(), 1);
        assert_eq!(stabilizer_order(&p, hp(7.0, 1.0)).unwrap(), 2);
        assert_eq!(stabilizer_order(&GroupPreset::gamma2(), Point::i()).unwrap(), 1);
    }
}
