use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    BergmanElement, BergmanError, TRUNCATION_LOSS_LIMIT, basis_scales, check_weight, same_weight,
};
use crate::Evaluator;
use crate::moebius::{GroupElement, automorphy_raw};
use crate::quadrature::GaussRule;

/// Collocation grid projecting disc functions onto `e_0..e_N`.
///
/// Radial Gauss–Jacobi nodes in `t = r²` make the projection exact for
/// polynomials of degree `N`; the angular grid is wide enough that aliasing
/// from higher Taylor coefficients stays below the coefficient decay.
#[derive(Debug, Clone)]
pub struct ProjectionGrid {
    pub weight: f64,
    pub truncation: usize,
    radii: Vec<f64>,
    radial_weights: Vec<f64>,
    angles: usize,
    cos_sin: Vec<Complex64>,
    scales: Vec<f64>,
}

impl ProjectionGrid {
    pub fn new(s: f64, truncation: usize) -> Result<Self, BergmanError> {
        check_weight(s)?;
        let radial = truncation / 2 + 24;
        let angles = 4 * (truncation + 1) + 64;
        let rule = GaussRule::jacobi(radial, s - 2.0, 0.0)?;
        let step = std::f64::consts::TAU / angles as f64;
        let (radii, radial_weights) = rule
            .on_interval(0.0, 1.0)
            .into_iter()
            .map(|(t, w)| (t.sqrt(), 2.0 * w * step))
            .unzip();
        let cos_sin = (0..angles).map(|l| Complex64::from_polar(1.0, -step * l as f64)).collect();
        Ok(ProjectionGrid {
            weight: s,
            truncation,
            radii,
            radial_weights,
            angles,
            cos_sin,
            scales: basis_scales(s, truncation),
        })
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        let step = std::f64::consts::TAU / self.angles as f64;
        self.radii.iter().flat_map(move |&r| {
            (0..self.angles).map(move |l| Complex64::from_polar(r, step * l as f64))
        })
    }

    /// Coefficients `⟨F, e_n⟩` for `n <= N`, from values of `F` on the grid.
    pub fn project_values(&self, values: &[Complex64]) -> BergmanElement {
        let m = self.angles;
        let n_max = self.truncation;
        let rings: Vec<Vec<Complex64>> = self
            .radii
            .par_iter()
            .enumerate()
            .map(|(k, &r)| {
                let row = &values[k * m..(k + 1) * m];
                let mut acc = vec![Complex64::new(0.0, 0.0); n_max + 1];
                let mut rn = self.radial_weights[k];
                for (n, slot) in acc.iter_mut().enumerate() {
                    let mut sum = Complex64::new(0.0, 0.0);
                    let mut idx = 0usize;
                    for v in row {
                        sum += v * self.cos_sin[idx];
                        idx += n;
                        if idx >= m {
                            idx -= m;
                        }
                    }
                    *slot = sum * rn;
                    rn *= r;
                }
                acc
            })
            .collect();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
        for ring in &rings {
            for (c, v) in coeffs.iter_mut().zip(ring) {
                *c += v;
            }
        }
        for (c, b) in coeffs.iter_mut().zip(&self.scales) {
            *c *= b;
        }
        BergmanElement::new(self.weight, coeffs).expect("weight checked")
    }

    pub fn project(&self, f: &(dyn Fn(Complex64) -> Complex64 + Sync)) -> BergmanElement {
        let pts: Vec<Complex64> = self.points().collect();
        let values: Vec<Complex64> = pts.par_iter().map(|&w| f(w)).collect();
        self.project_values(&values)
    }
}

/// Project a disc function onto `e_0..e_N` for weight `s`.
pub fn project(
    f: &(dyn Fn(Complex64) -> Complex64 + Sync),
    s: f64,
    truncation: usize,
) -> Result<BergmanElement, BergmanError> {
    Ok(ProjectionGrid::new(s, truncation)?.project(f))
}

/// The disc function `π_s(g) f`.
///
/// On the half-plane `π̌_s(g)F(z) = (cz+d)^{-s} F(hz)` with `h = g⁻¹` and
/// `(c, d)` taken from `h`; the disc version conjugates by the transport
/// factor `(2/(z+i))^s`, which gives the multiplier
/// `exp(s [Log(z+i) - Log(hz+i) - log(cz+d)])`.
pub fn pi_action_evaluator<'a>(g: &GroupElement, s: f64, f: Evaluator<'a>) -> Evaluator<'a> {
    let h = g.inverse().without_word();
    let i = Complex64::i();
    Box::new(move |w: Complex64| {
        let z = i * (1.0 + w) / (1.0 - w);
        let hz = (h.a as f64 * z + h.b as f64) / h.j(z);
        let log_mult = (z + i).ln() - (hz + i).ln();
        let mult = (s * log_mult).exp() / automorphy_raw(&h, z, s);
        mult * f((hz - i) / (hz + i))
    })
}

/// `π_s(g) f` projected to `out_truncation`, with the relative squared-norm
/// loss `1 - ‖π_s(g) f‖²_N / ‖f‖²`.
pub fn pi_action_with(
    g: &GroupElement,
    s: f64,
    f: &BergmanElement,
    out_truncation: usize,
) -> Result<(BergmanElement, f64), BergmanError> {
    same_weight(s, f.weight())?;
    let out = if g.is_identity() {
        f.resized(out_truncation)
    } else {
        let ev = pi_action_evaluator(g, s, f.evaluator());
        project(&ev, s, out_truncation)?
    };
    let n = f.norm_sqr();
    let loss = if n > 0.0 { 1.0 - out.norm_sqr() / n } else { 0.0 };
    Ok((out, loss))
}

/// `π_s(g) f` at the truncation of `f`; fails when the projection loses
/// more than [`TRUNCATION_LOSS_LIMIT`] of the squared norm.
pub fn pi_action(
    g: &GroupElement,
    s: f64,
    f: &BergmanElement,
) -> Result<BergmanElement, BergmanError> {
    let (out, loss) = pi_action_with(g, s, f, f.truncation())?;
    if loss.abs() > TRUNCATION_LOSS_LIMIT {
        return Err(BergmanError::TruncationLoss { loss, limit: TRUNCATION_LOSS_LIMIT });
    }
    Ok(out)
}
