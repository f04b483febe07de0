use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BergmanError, check_weight};
use crate::quadrature::GaussRule;

/// Rule sizes for disc and half-plane integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss–Jacobi order in `t = r²`.
    pub radial_order: usize,
    /// Points of the uniform angular grid.
    pub angular_points: usize,
    /// Maximum bisection depth for adaptive panels.
    pub subdivision_depth: usize,
    /// Disc distance from the cusp image `w = 1` below which integrals are
    /// bounded analytically rather than computed (`Im z ≳ 2/cutoff`).
    pub cusp_cutoff: f64,
    /// Largest accepted change under doubling of both rule sizes.
    pub tolerance: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_order: 40,
            angular_points: 96,
            subdivision_depth: 6,
            cusp_cutoff: 1e-4,
            tolerance: Some(1e-8),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), BergmanError> {
        if self.radial_order == 0 || self.angular_points == 0 {
            return Err(BergmanError::BadSpec("rule orders must be at least 1".into()));
        }
        if !(self.cusp_cutoff > 0.0 && self.cusp_cutoff < 1.0) {
            return Err(BergmanError::BadSpec(format!(
                "cusp cutoff {} outside (0, 1)",
                self.cusp_cutoff
            )));
        }
        Ok(())
    }

    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            radial_order: 2 * self.radial_order,
            angular_points: 2 * self.angular_points,
            ..*self
        }
    }
}

/// A quadrature value and the change seen when the rules were doubled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadEstimate {
    pub value: Complex64,
    pub refinement_delta: f64,
}

/// Tensor grid for `∫_𝔻 F (1-|w|²)^{s-2} 4 du dv`: Gauss–Jacobi in `t = r²`
/// against `(1-t)^{s-2}` times a uniform angular rule.
#[derive(Debug, Clone)]
pub struct DiscGrid {
    pub radii: Vec<f64>,
    pub radial_weights: Vec<f64>,
    pub angles: usize,
}

impl DiscGrid {
    pub fn new(s: f64, radial: usize, angular: usize) -> Result<Self, BergmanError> {
        check_weight(s)?;
        let rule = GaussRule::jacobi(radial, s - 2.0, 0.0)?;
        let step = std::f64::consts::TAU / angular as f64;
        let (radii, radial_weights) = rule
            .on_interval(0.0, 1.0)
            .into_iter()
            .map(|(t, w)| (t.sqrt(), 2.0 * w * step))
            .unzip();
        Ok(DiscGrid { radii, radial_weights, angles: angular })
    }

    pub fn integrate(&self, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        let step = std::f64::consts::TAU / self.angles as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for (&r, &w) in self.radii.iter().zip(&self.radial_weights) {
            let mut ring = Complex64::new(0.0, 0.0);
            for l in 0..self.angles {
                ring += f(Complex64::from_polar(r, step * l as f64));
            }
            total += w * ring;
        }
        total
    }
}

fn refine(
    spec: &QuadratureSpec,
    run: impl Fn(&QuadratureSpec) -> Result<Complex64, BergmanError>,
) -> Result<QuadEstimate, BergmanError> {
    spec.validate()?;
    let coarse = run(spec)?;
    let fine = run(&spec.doubled())?;
    let delta = (fine - coarse).norm();
    if let Some(tol) = spec.tolerance
        && delta > tol {
            return Err(BergmanError::QuadratureUnresolved { delta, tolerance: tol });
        }
    Ok(QuadEstimate { value: fine, refinement_delta: delta })
}

/// `∫_𝔻 f conj(g) (1-|w|²)^{s-2} 4 du dv`, checked against a doubled rule.
pub fn quad_inner(
    f: &(dyn Fn(Complex64) -> Complex64 + Sync),
    g: &(dyn Fn(Complex64) -> Complex64 + Sync),
    s: f64,
    spec: &QuadratureSpec,
) -> Result<QuadEstimate, BergmanError> {
    check_weight(s)?;
    refine(spec, |sp| {
        let grid = DiscGrid::new(s, sp.radial_order, sp.angular_points)?;
        Ok(grid.integrate(|w| f(w) * g(w).conj()))
    })
}

/// `∫_ℍ F conj(G) y^{s-2} dx dy`, checked against a doubled rule.
///
/// Polar coordinates `z = ρ e^{iθ}` with `ρ = v/(1-v)`: the radial rule is
/// Gauss–Jacobi for `v^{s-1} (1-v)^{s-1}` and the angular rule Gauss–Jacobi
/// for `(θ(π-θ))^{s-2}`. The remaining factor is smooth when `|F|` decays
/// like `|z|^{-s}`, as it does for transported disc polynomials.
pub fn quad_inner_half_plane(
    f: &(dyn Fn(Complex64) -> Complex64 + Sync),
    g: &(dyn Fn(Complex64) -> Complex64 + Sync),
    s: f64,
    spec: &QuadratureSpec,
) -> Result<QuadEstimate, BergmanError> {
    check_weight(s)?;
    let pi = std::f64::consts::PI;
    refine(spec, |sp| {
        let radial = GaussRule::jacobi(sp.radial_order, s - 1.0, s - 1.0)?.on_interval(0.0, 1.0);
        let angular = GaussRule::jacobi(sp.angular_points, s - 2.0, s - 2.0)?.on_interval(0.0, pi);
        let mut total = Complex64::new(0.0, 0.0);
        for &(th, wt) in &angular {
            let smooth_angle = (th.sin() / (th * (pi - th))).powf(s - 2.0);
            for &(v, wv) in &radial {
                let rho = v / (1.0 - v);
                let z = Complex64::from_polar(rho, th);
                // ρ^{s-1} dρ = v^{s-1} (1-v)^{s-1} (1-v)^{-2s} dv.
                let jac = (1.0 - v).powf(-2.0 * s);
                total += wt * wv * smooth_angle * jac * f(z) * g(z).conj();
            }
        }
        Ok(total)
    })
}
