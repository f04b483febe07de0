//! Poincaré sums over a truncated group, the tracelike deviation of a
//! half-plane function, and Gram matrices `⟨π_s(γ)ξ, π_s(γ')ξ⟩`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bergman::{BergmanElement, BergmanError, TRUNCATION_LOSS_LIMIT, pi_action_with};
use crate::groups::{GroupError, GroupPreset, OrbitSample};
use crate::moebius::{GroupElement, MoebiusError, Point, automorphy_raw};

/// A sum is called converged when its outermost shell contributes at most
/// this fraction of the total.
pub const SHELL_RATIO_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PoincareError {
    #[error("weight s must exceed 1, got {0}")]
    InvalidWeight(f64),
    #[error("the function vanishes on every sample; no tracelike constant exists")]
    ZeroVector,
    #[error("outer shell carries {ratio:e} of the sum (limit {limit:e}); raise the entry budget")]
    Unconverged { ratio: f64, limit: f64 },
    #[error("need at least {needed} sample points, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("element list must contain the identity")]
    MissingIdentity,
    #[error("π_s(γ)ξ lost {loss:e} of its squared norm to truncation (limit {limit:e})")]
    TruncationLoss { loss: f64, limit: f64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Bergman(#[from] BergmanError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareSums {
    /// `Σ ξ(γz)² (cz+d)^{-2s}`.
    pub holomorphic: Complex64,
    /// `Σ |ξ(γz)|² |cz+d|^{-2s}`.
    pub absolute: f64,
    /// Contribution of the elements of largest sup-norm to `absolute`.
    pub last_shell: f64,
    /// Heuristic remainder `last_shell · N / (2s - 2)` for shells decaying
    /// like `n^{1-2s}`.
    pub tail_estimate: f64,
    /// Sup-norm of the outermost shell.
    pub shell: i64,
    pub terms: usize,
    pub converged: bool,
}

fn check_s(s: f64) -> Result<(), PoincareError> {
    if s > 1.0 && s.is_finite() { Ok(()) } else { Err(PoincareError::InvalidWeight(s)) }
}

/// Poincaré sums of `ξ` at `z` over the group elements of `orbit`.
///
/// Elements merged in the sample because they share an image contribute
/// identical terms, so each entry is counted `stabilizer_order` times.
pub fn poincare_sums(
    xi: &(dyn Fn(Complex64) -> Complex64 + Sync),
    z: Point,
    s: f64,
    orbit: &OrbitSample,
) -> Result<PoincareSums, PoincareError> {
    check_s(s)?;
    let zv = z.expect_half_plane()?;
    let mult = orbit.stabilizer_order as f64;
    let shell = orbit.entries.iter().map(|e| e.element.sup_norm()).max().unwrap_or(0);
    let terms: Vec<(Complex64, f64, i64)> = orbit
        .entries
        .par_iter()
        .map(|e| {
            let g = &e.element;
            let gz = (g.a as f64 * zv + g.b as f64) / g.j(zv);
            let v = xi(gz);
            let hol = v * v / automorphy_raw(g, zv, 2.0 * s);
            let abs = v.norm_sqr() * g.j(zv).norm_sqr().powf(-s);
            (hol, abs, g.sup_norm())
        })
        .collect();
    let mut holomorphic = Complex64::new(0.0, 0.0);
    let mut absolute = 0.0;
    let mut last_shell = 0.0;
    for (h, a, n) in terms {
        holomorphic += mult * h;
        absolute += mult * a;
        if n == shell {
            last_shell += mult * a;
        }
    }
    let tail_estimate = last_shell * shell as f64 / (2.0 * s - 2.0);
    let converged = absolute == 0.0 || last_shell <= SHELL_RATIO_LIMIT * absolute;
    Ok(PoincareSums {
        holomorphic,
        absolute,
        last_shell,
        tail_estimate,
        shell,
        terms: orbit.entries.len(),
        converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracelikeReport {
    pub weight: f64,
    pub samples: Vec<Complex64>,
    /// `Im(z)^s Σ |ξ(γz)|² |cz+d|^{-2s}` at each sample.
    pub values: Vec<f64>,
    /// Least-squares constant, i.e. the mean of `values`.
    pub constant: f64,
    /// `max |value - constant| / constant`.
    pub deviation: f64,
    pub max_entry: i64,
    /// Largest shell ratio over the samples.
    pub shell_ratio: f64,
}

/// How far `ξ` is from being tracelike on the given samples.
pub fn tracelike_deviation(
    xi: &(dyn Fn(Complex64) -> Complex64 + Sync),
    s: f64,
    samples: &[Point],
    preset: &GroupPreset,
    max_entry: i64,
) -> Result<TracelikeReport, PoincareError> {
    check_s(s)?;
    if samples.len() < 2 {
        return Err(PoincareError::TooFewSamples { needed: 2, got: samples.len() });
    }
    let mut values = Vec::with_capacity(samples.len());
    let mut shell_ratio: f64 = 0.0;
    for &z in samples {
        let z = z.as_half_plane()?;
        let orbit = preset.orbit(z, max_entry)?;
        let sums = poincare_sums(xi, z, s, &orbit)?;
        if sums.absolute == 0.0 {
            return Err(PoincareError::ZeroVector);
        }
        let ratio = sums.last_shell / sums.absolute;
        if !sums.converged {
            return Err(PoincareError::Unconverged { ratio, limit: SHELL_RATIO_LIMIT });
        }
        shell_ratio = shell_ratio.max(ratio);
        values.push(z.value().im.powf(s) * sums.absolute);
    }
    let constant = values.iter().sum::<f64>() / values.len() as f64;
    let deviation = values.iter().map(|v| (v - constant).abs()).fold(0.0, f64::max) / constant;
    Ok(TracelikeReport {
        weight: s,
        samples: samples.iter().map(|p| p.value()).collect(),
        values,
        constant,
        deviation,
        max_entry,
        shell_ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub elements: Vec<[i64; 4]>,
    /// `G[i][j] = ⟨π_s(γ_i)ξ, π_s(γ_j)ξ⟩`.
    pub matrix: Vec<Vec<Complex64>>,
    /// `max_{γ ≠ id} |G[γ, id]| / G[id, id]`.
    pub wandering_deviation: f64,
    /// `(Σ_{i≠j} |G_ij|²)^{1/2}` divided by the mean diagonal entry.
    pub off_diagonal_mass: f64,
    pub min_eigenvalue: f64,
    pub trace: f64,
    /// Largest relative squared-norm loss among the projected translates.
    pub max_loss: f64,
}

impl GramReport {
    /// Positive semidefinite up to `1e-8 · trace`.
    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue >= -1e-8 * self.trace
    }
}

/// Gram matrix of the translates of `ξ`, each projected to
/// `out_truncation`; truncation losses are reported, not enforced.
pub fn gram_matrix_with(
    xi: &BergmanElement,
    elems: &[GroupElement],
    s: f64,
    out_truncation: usize,
) -> Result<GramReport, PoincareError> {
    check_s(s)?;
    let id = elems.iter().position(|g| g.is_identity()).ok_or(PoincareError::MissingIdentity)?;
    let images: Vec<(BergmanElement, f64)> = elems
        .iter()
        .map(|g| pi_action_with(g, s, xi, out_truncation))
        .collect::<Result<_, _>>()?;
    let n = elems.len();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = images[i].0.inner(&images[j].0)?;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
        m[(i, i)].im = 0.0;
    }
    let trace: f64 = (0..n).map(|i| m[(i, i)].re).sum();
    let min_eigenvalue = m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    let g0 = m[(id, id)].re;
    let wandering_deviation = if g0 > 0.0 {
        (0..n).filter(|&i| i != id).map(|i| m[(i, id)].norm()).fold(0.0, f64::max) / g0
    } else {
        0.0
    };
    let mut off = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off += m[(i, j)].norm_sqr();
            }
        }
    }
    let mean_diag = trace / n as f64;
    let off_diagonal_mass = if mean_diag > 0.0 { off.sqrt() / mean_diag } else { 0.0 };
    Ok(GramReport {
        elements: elems.iter().map(|g| g.entries()).collect(),
        matrix: (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect(),
        wandering_deviation,
        off_diagonal_mass,
        min_eigenvalue,
        trace,
        max_loss: images.iter().map(|x| x.1.abs()).fold(0.0, f64::max),
    })
}

/// [`gram_matrix_with`] at twice the truncation of `ξ` plus 32, failing
/// when a translate loses more than [`TRUNCATION_LOSS_LIMIT`].
pub fn gram_matrix(
    xi: &BergmanElement,
    elems: &[GroupElement],
    s: f64,
) -> Result<GramReport, PoincareError> {
    let report = gram_matrix_with(xi, elems, s, 2 * xi.truncation() + 32)?;
    if report.max_loss > TRUNCATION_LOSS_LIMIT {
        return Err(PoincareError::TruncationLoss {
            loss: report.max_loss,
            limit: TRUNCATION_LOSS_LIMIT,
        });
    }
    Ok(report)
}
