use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ModularError, QSeries, SeriesEvaluator};
use crate::quadrature::GaussRule;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeterssonSpec {
    /// Gauss–Legendre order per direction and panel.
    pub order: usize,
    /// Largest accepted relative change when the order is doubled.
    pub tolerance: f64,
    /// The cusp tail above the last panel must be below this fraction of
    /// the computed value.
    pub tail_tolerance: f64,
    /// Hard cap on the panel height.
    pub max_height: f64,
}

impl Default for PeterssonSpec {
    fn default() -> Self {
        PeterssonSpec { order: 24, tolerance: 1e-9, tail_tolerance: 1e-10, max_height: 60.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeterssonEstimate {
    pub value: Complex64,
    /// Height `Y` where integration stopped.
    pub height: f64,
    /// Analytic bound on the part above `Y`.
    pub tail_bound: f64,
    /// Relative change under doubling of the rule order.
    pub refinement_delta: f64,
}

impl SeriesEvaluator {
    /// `A` with `|F(z)| <= A e^{-2π Im z}` for `Im z >= y`, valid for cusp
    /// forms.
    fn cusp_envelope(&self, y: f64) -> f64 {
        let q = (-std::f64::consts::TAU * y).exp();
        let coeffs = self.coeffs();
        let mut acc = 0.0;
        let mut qn = 1.0;
        for a in coeffs.iter().skip(1) {
            acc += a.abs() * qn;
            qn *= q;
        }
        acc + self.tail_after_pub(coeffs.len() - 1, q) / q
    }
}

fn integrate(
    f: &SeriesEvaluator,
    g: &SeriesEvaluator,
    weight: u32,
    order: usize,
    spec: &PeterssonSpec,
) -> Result<(Complex64, f64, f64), ModularError> {
    let rule = GaussRule::legendre(order)?;
    let p = weight as f64 - 2.0;
    let integrand = |x: f64, y: f64| -> Result<Complex64, ModularError> {
        let z = Complex64::new(x, y);
        Ok(f.eval(z)?.value.conj() * g.eval(z)?.value * y.powf(p))
    };
    let mut total = Complex64::new(0.0, 0.0);
    // Region under y = 1, above the unit circle.
    for (lo, hi) in [(-0.5, 0.0), (0.0, 0.5)] {
        for (x, wx) in rule.on_interval(lo, hi) {
            let y0 = (1.0 - x * x).sqrt();
            for (y, wy) in rule.on_interval(y0, 1.0) {
                total += wx * wy * integrand(x, y)?;
            }
        }
    }
    let xs = rule.on_interval(-0.5, 0.5);
    let mut height = 1.0;
    let decay = 4.0 * std::f64::consts::PI;
    loop {
        for &(x, wx) in &xs {
            for (y, wy) in rule.on_interval(height, height + 1.0) {
                total += wx * wy * integrand(x, y)?;
            }
        }
        height += 1.0;
        // ∫_Y^∞ e^{-4πy} y^p dy <= e^{-4πY} Y^p / (4π - p/Y) for Y > p/(4π).
        let tail = if height > p / decay {
            f.cusp_envelope(height) * g.cusp_envelope(height) * (-decay * height).exp()
                * height.powf(p)
                / (decay - p / height)
        } else {
            f64::INFINITY
        };
        if tail <= spec.tail_tolerance * total.norm() || height >= spec.max_height {
            return Ok((total, height, tail));
        }
    }
}

/// `∫_F conj(f) g Im(z)^k dμ₀` over the standard fundamental domain, with
/// `dμ₀ = dx dy / y²`.
pub fn petersson(
    f: &QSeries,
    g: &QSeries,
    spec: &PeterssonSpec,
) -> Result<PeterssonEstimate, ModularError> {
    if f.weight != g.weight {
        return Err(ModularError::WeightMismatch(f.weight, g.weight));
    }
    for h in [f, g] {
        if !h.is_cusp() {
            return Err(ModularError::NotCuspForm(h.coeffs[0].to_string()));
        }
    }
    let (ef, eg) = (SeriesEvaluator::new(f), SeriesEvaluator::new(g));
    let (coarse, _, _) = integrate(&ef, &eg, f.weight, spec.order, spec)?;
    let (value, height, tail_bound) = integrate(&ef, &eg, f.weight, 2 * spec.order, spec)?;
    let scale = value.norm().max(f64::MIN_POSITIVE);
    let delta = (value - coarse).norm() / scale;
    if delta > spec.tolerance {
        return Err(ModularError::QuadratureUnresolved { delta, tolerance: spec.tolerance });
    }
    Ok(PeterssonEstimate { value, height, tail_bound, refinement_delta: delta })
}
