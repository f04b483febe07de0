//! von Neumann dimensions of `A²_{s-2}` over a Fuchsian group, their check
//! by integration over a fundamental domain, and orbit densities.

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bergman::{BergmanError, QuadratureSpec, basis_scales};
use crate::groups::{GroupError, GroupPreset, OrbitBudget, OrbitSample, PresetName};
use crate::moebius::Point;
use crate::quadrature::{GaussRule, QuadratureError};

/// Largest accepted cusp bound relative to the formula value.
pub const CUSP_TAIL_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DimensionError {
    #[error("weight s must exceed 1, got {0}")]
    InvalidWeight(f64),
    #[error("numeric dimension needs the PSL2Z fundamental domain, got {0:?}")]
    UnsupportedPreset(PresetName),
    #[error("cusp contribution bound {bound:e} exceeds tolerance {tolerance:e}")]
    CuspTail { bound: f64, tolerance: f64 },
    #[error("radii must increase strictly inside (0, 1)")]
    BadRadii,
    #[error("need at least {0} radii for a slope")]
    TooFewRadii(usize),
    #[error("largest radius {radius} exceeds the certified radius {certified} of the enumeration")]
    CoverageInsufficient { radius: f64, certified: f64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Bergman(#[from] BergmanError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// `(s-1)/4π · covolume`, exactly, for rational `s`.
pub fn vn_dimension_exact(s: Ratio<i64>, preset: &GroupPreset) -> Result<Ratio<i64>, DimensionError> {
    if s <= Ratio::from_integer(1) {
        return Err(DimensionError::InvalidWeight(*s.numer() as f64 / *s.denom() as f64));
    }
    Ok((s - 1) / 4 * preset.covolume_over_pi)
}

/// `(s-1)/4π · covolume`.
pub fn vn_dimension(s: f64, preset: &GroupPreset) -> Result<f64, DimensionError> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(DimensionError::InvalidWeight(s));
    }
    let c = preset.covolume_over_pi;
    Ok((s - 1.0) / 4.0 * (*c.numer() as f64 / *c.denom() as f64))
}

/// `1 + 4π/covolume`, the weight at which the dimension equals one.
pub fn critical_exponent(preset: &GroupPreset) -> Ratio<i64> {
    Ratio::from_integer(1) + Ratio::from_integer(4) / preset.covolume_over_pi
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub s: f64,
    pub preset: PresetName,
    pub formula: f64,
    /// `partial_sums[n] = Σ_{k<=n} ∫_F |e_k|² (1-|w|²)^{s-2} 4 du dv`.
    pub partial_sums: Vec<f64>,
    /// Bound on everything above `Im z = height`.
    pub cusp_bound: f64,
    pub height: f64,
    pub spec: QuadratureSpec,
    /// Panels still above tolerance at the maximum bisection depth.
    pub unresolved_panels: usize,
}

impl DimensionReport {
    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,partial_sum\n");
        for (n, v) in self.partial_sums.iter().enumerate() {
            out.push_str(&format!("{n},{v:.16e}\n"));
        }
        out
    }
}

struct Integrand {
    s: f64,
    beta_sq: Vec<f64>,
}

impl Integrand {
    /// Adds `w · β_n² t^n u^s / y²` for all `n` at `x + iy`, where
    /// `u = 1 - |w|² = 4y / |z+i|²` and `t = 1 - u`.
    fn accumulate(&self, x: f64, y: f64, w: f64, acc: &mut [f64]) {
        let den = x * x + (y + 1.0) * (y + 1.0);
        let u = 4.0 * y / den;
        let t = (x * x + (y - 1.0) * (y - 1.0)) / den;
        let mut p = w * u.powf(self.s) / (y * y);
        for (a, b) in acc.iter_mut().zip(&self.beta_sq) {
            *a += p * b;
            p *= t;
            if p == 0.0 {
                break;
            }
        }
    }

    fn panel(&self, xs: &[(f64, f64)], ys: &GaussRule, lo: f64, hi: f64) -> Vec<f64> {
        let mut acc = vec![0.0; self.beta_sq.len()];
        let yw = ys.on_interval(lo, hi);
        for &(x, wx) in xs {
            for &(y, wy) in &yw {
                self.accumulate(x, y, wx * wy, &mut acc);
            }
        }
        acc
    }

    /// Adaptive bisection in `y`; returns the values and the number of
    /// panels left unresolved.
    fn adaptive(
        &self,
        xs: &[(f64, f64)],
        ys: &GaussRule,
        lo: f64,
        hi: f64,
        coarse: Vec<f64>,
        depth: usize,
        tol: f64,
    ) -> (Vec<f64>, usize) {
        let mid = 0.5 * (lo + hi);
        let left = self.panel(xs, ys, lo, mid);
        let right = self.panel(xs, ys, mid, hi);
        let fine: Vec<f64> = left.iter().zip(&right).map(|(a, b)| a + b).collect();
        let diff: f64 = fine.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).sum();
        let size: f64 = fine.iter().sum();
        if diff <= tol * size || size == 0.0 {
            return (fine, 0);
        }
        if depth == 0 {
            return (fine, 1);
        }
        let (l, ul) = self.adaptive(xs, ys, lo, mid, left, depth - 1, tol);
        let (r, ur) = self.adaptive(xs, ys, mid, hi, right, depth - 1, tol);
        (l.iter().zip(&r).map(|(a, b)| a + b).collect(), ul + ur)
    }
}

/// Partial sums over the basis of the fundamental-domain integrals whose
/// full sum is the von Neumann dimension.
///
/// The standard domain is cut into the region under `Im z = 1` and dyadic
/// panels `[2^k, 2^{k+1}]` up to `Y = 2 / cusp_cutoff`, each adaptively
/// bisected in `y`. Above `Y` the whole kernel integrates to
/// `(s-1)/(4πY)`, which bounds what is left out for every truncation.
pub fn vn_dimension_numeric(
    s: f64,
    preset: &GroupPreset,
    basis_n: usize,
    spec: &QuadratureSpec,
) -> Result<DimensionReport, DimensionError> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(DimensionError::InvalidWeight(s));
    }
    if preset.name != PresetName::Psl2z {
        return Err(DimensionError::UnsupportedPreset(preset.name));
    }
    spec.validate()?;
    let formula = vn_dimension(s, preset)?;
    let tol = spec.tolerance.unwrap_or(1e-8);
    let height = 2.0 / spec.cusp_cutoff;
    let cusp_bound = (s - 1.0) / (4.0 * std::f64::consts::PI * height);
    if cusp_bound > CUSP_TAIL_LIMIT * formula {
        return Err(DimensionError::CuspTail { bound: cusp_bound, tolerance: CUSP_TAIL_LIMIT * formula });
    }
    let integrand = Integrand {
        s,
        beta_sq: basis_scales(s, basis_n).iter().map(|b| b * b).collect(),
    };
    let ys = GaussRule::legendre(spec.radial_order)?;
    let xs = GaussRule::legendre(spec.angular_points)?.on_interval(-0.5, 0.5);

    let mut bottom = vec![0.0; basis_n + 1];
    for &(x, wx) in &xs {
        for (y, wy) in ys.on_interval((1.0 - x * x).sqrt(), 1.0) {
            integrand.accumulate(x, y, wx * wy, &mut bottom);
        }
    }
    let mut panels = Vec::new();
    let mut lo = 1.0;
    while lo < height {
        let hi = (2.0 * lo).min(height);
        panels.push((lo, hi));
        lo = hi;
    }
    let results: Vec<(Vec<f64>, usize)> = panels
        .par_iter()
        .map(|&(lo, hi)| {
            let coarse = integrand.panel(&xs, &ys, lo, hi);
            integrand.adaptive(&xs, &ys, lo, hi, coarse, spec.subdivision_depth, tol)
        })
        .collect();
    let mut per_index = bottom;
    let mut unresolved = 0;
    for (v, u) in results {
        for (a, b) in per_index.iter_mut().zip(&v) {
            *a += b;
        }
        unresolved += u;
    }
    let mut partial_sums = Vec::with_capacity(per_index.len());
    let mut acc = 0.0;
    for v in per_index {
        acc += v;
        partial_sums.push(acc);
    }
    Ok(DimensionReport {
        s,
        preset: preset.name,
        formula,
        partial_sums,
        cusp_bound,
        height,
        spec: *spec,
        unresolved_panels: unresolved,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub preset: PresetName,
    pub base: Complex64,
    pub budget: OrbitBudget,
    pub stabilizer_order: u32,
    pub certified_radius: f64,
    pub radii: Vec<f64>,
    /// `log(1/(1-ρ))` for each radius.
    pub log_scale: Vec<f64>,
    /// `Σ_{|w| < ρ} (1 - |w|)` over distinct orbit points.
    pub partial_sums: Vec<f64>,
    /// Least-squares slope of `partial_sums` against `log_scale`.
    pub slope: f64,
    pub intercept: f64,
    /// `2π / (stabilizer order · covolume)`.
    pub target: f64,
}

impl DensityEstimate {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,log_scale,partial_sum\n");
        for ((r, l), p) in self.radii.iter().zip(&self.log_scale).zip(&self.partial_sums) {
            out.push_str(&format!("{r:.16e},{l:.16e},{p:.16e}\n"));
        }
        out
    }
}

/// `Σ (1 - |w|)` over the orbit points with `|w| < radius`.
pub fn blaschke_sum(disc_images: &[Complex64], radius: f64) -> f64 {
    let mut r: Vec<f64> = disc_images.iter().map(|w| w.norm()).filter(|&r| r < radius).collect();
    r.sort_by(f64::total_cmp);
    r.iter().map(|r| 1.0 - r).sum()
}

/// Radii whose `log(1/(1-ρ))` are evenly spaced from `lo` up to the value
/// at `top`.
pub fn log_spaced_radii(lo: f64, top: f64, count: usize) -> Vec<f64> {
    let hi = -(1.0 - top).ln();
    (0..count)
        .map(|k| {
            let l = if count == 1 { hi } else { lo + (hi - lo) * k as f64 / (count - 1) as f64 };
            1.0 - (-l).exp()
        })
        .collect()
}

/// Growth rate of the Blaschke sums of an orbit against `log(1/(1-ρ))`.
pub fn density_estimate(orbit: &OrbitSample, radii: &[f64]) -> Result<DensityEstimate, DimensionError> {
    if radii.len() < 2 {
        return Err(DimensionError::TooFewRadii(2));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) || radii[0] <= 0.0 || radii[radii.len() - 1] >= 1.0 {
        return Err(DimensionError::BadRadii);
    }
    let certified = orbit.certified_radius()?;
    let largest = radii[radii.len() - 1];
    if largest > certified {
        return Err(DimensionError::CoverageInsufficient { radius: largest, certified });
    }
    let images = orbit.disc_images()?;
    let partial_sums: Vec<f64> = radii.iter().map(|&r| blaschke_sum(&images, r)).collect();
    let log_scale: Vec<f64> = radii.iter().map(|r| -(1.0 - r).ln()).collect();
    let n = radii.len() as f64;
    let mx = log_scale.iter().sum::<f64>() / n;
    let my = partial_sums.iter().sum::<f64>() / n;
    let sxy: f64 = log_scale.iter().zip(&partial_sums).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = log_scale.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let preset = GroupPreset::from_name(orbit.preset);
    let c = preset.covolume_over_pi;
    let target = 2.0 / (orbit.stabilizer_order as f64 * (*c.numer() as f64 / *c.denom() as f64));
    Ok(DensityEstimate {
        preset: orbit.preset,
        base: orbit.base.value(),
        budget: orbit.budget,
        stabilizer_order: orbit.stabilizer_order,
        certified_radius: certified,
        radii: radii.to_vec(),
        log_scale,
        partial_sums,
        slope,
        intercept: my - slope * mx,
        target,
    })
}

/// Orbit of `z` by entry bound, with the density estimated on `count`
/// log-spaced radii from `log(1/(1-ρ)) = lo` up to the certified radius.
pub fn density_for(
    preset: &GroupPreset,
    z: Point,
    max_entry: i64,
    lo: f64,
    count: usize,
) -> Result<DensityEstimate, DimensionError> {
    let orbit = preset.orbit(z, max_entry)?;
    let certified = orbit.certified_radius()?;
    if -(1.0 - certified).ln() <= lo {
        return Err(DimensionError::CoverageInsufficient { radius: 1.0 - (-lo).exp(), certified });
    }
    density_estimate(&orbit, &log_spaced_radii(lo, certified, count))
}
