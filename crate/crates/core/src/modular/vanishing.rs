use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ModularError, QSeries, SeriesEvaluator, log_eta, standard_forms};
use crate::groups::reduce_to_fundamental_domain;
use crate::moebius::{GroupElement, Point, apply_moebius};

/// Sample grid on the standard fundamental domain: `nx` abscissae in
/// `[-1/2, 1/2]`, and for each `ny` ordinates log-spaced from the lower arc
/// to `y_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdGrid {
    pub nx: usize,
    pub ny: usize,
    pub y_max: f64,
}

impl FdGrid {
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for i in 0..self.nx {
            let x = if self.nx == 1 { 0.0 } else { -0.5 + i as f64 / (self.nx - 1) as f64 };
            let y0 = (1.0 - x * x).sqrt();
            let ratio = (self.y_max / y0).ln();
            for j in 0..self.ny {
                let t = if self.ny == 1 { 0.0 } else { j as f64 / (self.ny - 1) as f64 };
                out.push(Complex64::new(x, y0 * (ratio * t).exp()));
            }
        }
        out
    }

    pub fn refined(&self) -> Self {
        FdGrid { nx: 2 * self.nx - 1, ny: 2 * self.ny - 1, y_max: self.y_max }
    }
}

/// `f(z) = (j(z) - w) Δ(z) η(z)^r = (E4³ - wΔ) η^r`, a holomorphic function
/// of weight `12 + r/2` whose zeros are exactly the orbit `{j = w}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingFunction {
    pub target: Complex64,
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub grid: FdGrid,
    /// Exponent `6 + r/4` (plus any extra offset requested).
    pub exponent: f64,
    pub sup: f64,
    pub argmax: Complex64,
}

pub fn rw_function(w: Complex64, r: f64) -> Result<VanishingFunction, ModularError> {
    if !(r > 0.0) {
        return Err(ModularError::BadExponent(r));
    }
    Ok(VanishingFunction { target: w, exponent: r })
}

impl VanishingFunction {
    pub fn weight(&self) -> f64 {
        12.0 + self.exponent / 2.0
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, ModularError> {
        let p = Point::half_plane(z)?;
        let (z0, g) = reduce_to_fundamental_domain(p)?;
        let v = z0.value();
        let forms = standard_forms();
        let e4 = forms.e4.eval(v)?.value;
        let d = forms.delta.eval(v)?.value;
        let weight12 = (e4 * e4 * e4 - self.target * d) * g.j(z).powi(-12);
        Ok(weight12 * (self.exponent * log_eta(p)?).exp())
    }

    /// `sup |f| Im^{6 + r/4 + extra}` over the grid.
    pub fn growth_sup(&self, grid: &FdGrid, extra: f64) -> Result<GrowthCertificate, ModularError> {
        let exponent = 6.0 + self.exponent / 4.0 + extra;
        let vals: Vec<Result<(f64, Complex64), ModularError>> = grid
            .points()
            .par_iter()
            .map(|&z| Ok(((self.eval(z)?.norm().ln() + exponent * z.im.ln()).exp(), z)))
            .collect();
        let mut best = (0.0, Complex64::new(0.0, 1.0));
        for v in vals {
            let v = v?;
            if v.0 > best.0 {
                best = v;
            }
        }
        Ok(GrowthCertificate { grid: *grid, exponent, sup: best.0, argmax: best.1 })
    }

    pub fn growth_certificate(&self, grid: &FdGrid) -> Result<GrowthCertificate, ModularError> {
        self.growth_sup(grid, 0.0)
    }
}

/// The point `iy`, `y >= 1`, with `j(iy) = w`, for real `w > 1728`.
pub fn preimage_on_imaginary_axis(w: f64) -> Result<Point, ModularError> {
    if !(w > 1728.0) || !w.is_finite() {
        return Err(ModularError::BadTarget(w));
    }
    let j_on_axis = |y: f64| -> Result<f64, ModularError> {
        let forms = standard_forms();
        let z = Complex64::new(0.0, y);
        let e4 = forms.e4.eval(z)?.value.re;
        let d = forms.delta.eval(z)?.value.re;
        Ok(e4 * e4 * e4 / d)
    };
    let (mut lo, mut hi) = (1.0, 2.0);
    while j_on_axis(hi)? < w {
        lo = hi;
        hi *= 2.0;
        if hi > 50.0 {
            return Err(ModularError::BadTarget(w));
        }
    }
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if j_on_axis(mid)? < w {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Point::half_plane(Complex64::new(0.0, 0.5 * (lo + hi)))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspSupReport {
    pub grid: FdGrid,
    pub sup: f64,
    /// Largest relative mismatch of `|F| Im^{k/2}` between grid points and
    /// their translates under `S`, `T`, `T⁻¹`, `ST`, evaluated by the series
    /// directly at the translates.
    pub invariance_residual: f64,
}

/// `sup |F(z)| Im(z)^{k/2}` over a fundamental-domain grid, for a cusp
/// form `F`.
pub fn cusp_sup_invariant(f: &QSeries, grid: &FdGrid) -> Result<CuspSupReport, ModularError> {
    if !f.is_cusp() {
        return Err(ModularError::NotCuspForm(f.coeffs[0].to_string()));
    }
    let ev = SeriesEvaluator::new(f);
    let half = f.weight as f64 / 2.0;
    let h = |z: Complex64| -> Result<f64, ModularError> {
        Ok(ev.eval(z)?.value.norm() * z.im.powf(half))
    };
    let s = GroupElement::s();
    let t = GroupElement::t();
    let moves = [s.clone(), t.clone(), t.inverse(), &s * &t];
    let mut sup: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let pts = grid.points();
    for &z in &pts {
        let base = h(z)?;
        sup = sup.max(base);
        for g in &moves {
            let gz = apply_moebius(g, Point::half_plane(z)?)?.value();
            residual = residual.max((h(gz)? - base).abs());
        }
    }
    Ok(CuspSupReport {
        grid: *grid,
        sup,
        invariance_residual: if sup > 0.0 { residual / sup } else { 0.0 },
    })
}
