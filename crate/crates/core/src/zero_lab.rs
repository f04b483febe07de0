//! Zero-set experiments: extremal values of evaluation functionals under
//! orbit constraints, and a finite-dimensional version of the left-order
//! construction of a wandering subspace for Gamma(2).

use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bergman::{
    BergmanElement, BergmanError, KernelVector, ProjectionGrid, basis_scale, kernel_raw,
    pi_action_evaluator, transport_factor,
};
use crate::groups::{FreeWord, GroupError, GroupPreset, gamma2_decompose, magnus_cmp};
use crate::modular::{ModularError, VanishingFunction, preimage_on_imaginary_axis, rw_function};
use crate::moebius::{GroupElement, MoebiusError, Point, to_disc};
use crate::poincare::{GramReport, PoincareError, gram_matrix_with};

/// Cholesky pivots below this multiple of the trace mark a constraint as
/// numerically dependent on the earlier ones.
pub const PIVOT_FLOOR: f64 = 1e-12;

/// Points closer than this in the disc are treated as equal.
const COINCIDENCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZeroLabError {
    #[error("weight s must exceed 1, got {0}")]
    InvalidWeight(f64),
    #[error("every constraint direction is absorbed: V equals U at this truncation")]
    NoCandidate,
    #[error("orbit sample has no points inside its certified radius")]
    EmptyOrbit,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Bergman(#[from] BergmanError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Poincare(#[from] PoincareError),
}

fn check_s(s: f64) -> Result<(), ZeroLabError> {
    if s > 1.0 && s.is_finite() { Ok(()) } else { Err(ZeroLabError::InvalidWeight(s)) }
}

/// `K(a, b) / √(K(a, a) K(b, b))`.
fn normalized_kernel(s: f64, a: Complex64, b: Complex64) -> Complex64 {
    let ga = (1.0 - a.norm()) * (1.0 + a.norm());
    let gb = (1.0 - b.norm()) * (1.0 + b.norm());
    let log = 0.5 * s * (ga.ln() + gb.ln()) - s * (Complex64::new(1.0, 0.0) - a * b.conj()).ln();
    log.exp()
}

/// Incremental Cholesky factor of the normalized kernel Gram matrix, with
/// the coordinates of a fixed target vector.
struct Interpolator {
    s: f64,
    target: Complex64,
    points: Vec<Complex64>,
    /// Row `m` holds `⟨u_m, q_l⟩` for the accepted directions `q_l`.
    rows: Vec<Vec<Complex64>>,
    pivots: Vec<f64>,
    /// `⟨u_*, q_l⟩`.
    coords: Vec<Complex64>,
    captured: f64,
    skipped: usize,
}

impl Interpolator {
    fn new(s: f64, target: Complex64) -> Self {
        Interpolator {
            s,
            target,
            points: Vec::new(),
            rows: Vec::new(),
            pivots: Vec::new(),
            coords: Vec::new(),
            captured: 0.0,
            skipped: 0,
        }
    }

    /// Remaining fraction `1 - |P u_*|²` after adding `p`.
    fn push(&mut self, p: Complex64) -> f64 {
        let k = self.pivots.len();
        let mut row = Vec::with_capacity(k);
        for l in 0..k {
            let g = normalized_kernel(self.s, self.points[l], p);
            let acc: Complex64 = (0..l).map(|m| row[m] * self.rows[l][m].conj()).sum();
            row.push((g - acc) / self.pivots[l]);
        }
        let d = 1.0 - row.iter().map(|r: &Complex64| r.norm_sqr()).sum::<f64>();
        let trace = (k + 1) as f64;
        if d <= PIVOT_FLOOR * trace {
            self.skipped += 1;
            return (1.0 - self.captured).max(0.0);
        }
        let pivot = d.sqrt();
        let gt = normalized_kernel(self.s, p, self.target);
        let acc: Complex64 = (0..k).map(|m| self.coords[m] * row[m].conj()).sum();
        let c = (gt - acc) / pivot;
        self.captured += c.norm_sqr();
        self.coords.push(c);
        self.points.push(p);
        self.rows.push(row);
        self.pivots.push(pivot);
        (1.0 - self.captured).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalValue {
    pub value: f64,
    /// The evaluation point is one of the constraint points.
    pub coincident: bool,
    /// Constraints dropped as numerically dependent.
    pub skipped: usize,
}

/// Squared distance from `ε_{z*}` to the span of `ε_p`, `p ∈ points`:
/// `K(z*,z*) - k* G⁻¹ k`, evaluated through a Cholesky factorization of
/// the normalized Gram matrix.
pub fn extremal_value(s: f64, z_star: Point, points: &[Point]) -> Result<ExtremalValue, ZeroLabError> {
    check_s(s)?;
    let zs = z_star.as_disc()?.value();
    let pts: Vec<Complex64> =
        points.iter().map(|p| Ok(p.as_disc()?.value())).collect::<Result<_, MoebiusError>>()?;
    let k0 = kernel_raw(s, zs, zs).re;
    if pts.iter().any(|p| (p - zs).norm() < COINCIDENCE) {
        return Ok(ExtremalValue { value: 0.0, coincident: true, skipped: 0 });
    }
    let mut it = Interpolator::new(s, zs);
    let mut rel = 1.0;
    for p in pts {
        rel = it.push(p);
    }
    Ok(ExtremalValue { value: k0 * rel, coincident: false, skipped: it.skipped })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalProfile {
    pub s: f64,
    pub z_star: Complex64,
    /// Constraint points in the disc, in the order used.
    pub points: Vec<Complex64>,
    /// `values[m]` uses the first `m` points; `values[0] = K(z*, z*)`.
    pub values: Vec<f64>,
    pub skipped: usize,
    pub coincident_at: Option<usize>,
}

impl ExtremalProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,lambda\n");
        for (m, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{m},{v:.16e}\n"));
        }
        out
    }
}

fn profile(s: f64, zs: Complex64, pts: &[Complex64]) -> ExtremalProfile {
    let k0 = kernel_raw(s, zs, zs).re;
    let mut values = vec![k0];
    let mut it = Interpolator::new(s, zs);
    let mut coincident_at = None;
    for (m, &p) in pts.iter().enumerate() {
        if coincident_at.is_none() && (p - zs).norm() < COINCIDENCE {
            coincident_at = Some(m + 1);
        }
        let rel = it.push(p);
        values.push(if coincident_at.is_some() { 0.0 } else { k0 * rel });
    }
    // Nested subspaces: enforce monotonicity against rounding.
    for m in 1..values.len() {
        if values[m] > values[m - 1] {
            values[m] = values[m - 1];
        }
    }
    ExtremalProfile {
        s,
        z_star: zs,
        points: pts.to_vec(),
        values,
        skipped: it.skipped,
        coincident_at,
    }
}

/// Orbit points of `z` inside the certified radius of the entry budget,
/// in the disc, ordered by modulus then argument.
pub fn certified_orbit_points(
    preset: &GroupPreset,
    z: Point,
    max_entry: i64,
) -> Result<Vec<Complex64>, ZeroLabError> {
    let orbit = preset.orbit(z, max_entry)?;
    let radius = orbit.certified_radius()?;
    let mut pts: Vec<Complex64> =
        orbit.disc_images()?.into_iter().filter(|w| w.norm() < radius).collect();
    pts.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
    Ok(pts)
}

/// Extremal profiles `λ_M`, `M = 0..`, for each weight in `s_grid`, with
/// constraints at the orbit of `z` taken from the centre outwards.
pub fn extremal_profile(
    preset: &GroupPreset,
    z: Point,
    z_star: Point,
    s_grid: &[f64],
    max_entry: i64,
    max_points: Option<usize>,
) -> Result<Vec<ExtremalProfile>, ZeroLabError> {
    for &s in s_grid {
        check_s(s)?;
    }
    let zs = z_star.as_disc()?.value();
    let mut pts = certified_orbit_points(preset, z, max_entry)?;
    if let Some(m) = max_points {
        pts.truncate(m);
    }
    Ok(s_grid.par_iter().map(|&s| profile(s, zs, &pts)).collect())
}

/// Summary of how `λ_M` moves over the last doubling of `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaySummary {
    pub s: f64,
    pub m_half: usize,
    pub m_full: usize,
    pub lambda_half: f64,
    pub lambda_full: f64,
    /// `1 - λ(M) / λ(M/2)`.
    pub relative_drop: f64,
}

pub fn decay_summary(p: &ExtremalProfile) -> DecaySummary {
    let m_full = p.values.len() - 1;
    let m_half = m_full / 2;
    let (a, b) = (p.values[m_half], p.values[m_full]);
    DecaySummary {
        s: p.s,
        m_half,
        m_full,
        lambda_half: a,
        lambda_full: b,
        relative_drop: if a > 0.0 { 1.0 - b / a } else { 0.0 },
    }
}

/// The disc function `β₀(s₀) f(z) (2/(z+i))^{s₀} / (2/(z+i))^t` with
/// `f = (j - w) Δ η^r` and `t = s₀ + 12 + r/2`: the product of `f` with the
/// transported `e_0` of weight `s₀`, moved to the disc in weight `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportedVanishing {
    pub function: VanishingFunction,
    pub base_weight: f64,
}

impl TransportedVanishing {
    pub fn new(w: f64, r: f64, base_weight: f64) -> Result<Self, ZeroLabError> {
        check_s(base_weight)?;
        Ok(TransportedVanishing { function: rw_function(Complex64::new(w, 0.0), r)?, base_weight })
    }

    /// Bergman weight of the product.
    pub fn weight(&self) -> f64 {
        self.base_weight + self.function.weight()
    }

    pub fn eval_disc(&self, w: Complex64) -> Result<Complex64, ZeroLabError> {
        let i = Complex64::i();
        let z = i * (1.0 + w) / (1.0 - w);
        let f = self.function.eval(z)?;
        let b0 = basis_scale(0, self.base_weight);
        Ok(b0 * f * transport_factor(z, self.base_weight) / transport_factor(z, self.weight()))
    }

    /// Total function for quadrature grids; failures evaluate to NaN.
    pub fn evaluator(&self) -> impl Fn(Complex64) -> Complex64 + Send + Sync + 'static {
        let me = *self;
        move |w| me.eval_disc(w).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

/// An orbit point labelled by its Gamma(2) element and that element's
/// position relative to the identity in the Magnus order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedPoint {
    pub element: GroupElement,
    pub word: String,
    pub disc: Complex64,
    /// `-1`, `0`, `1` for `γ < id`, `γ = id`, `γ > id`.
    pub sign: i8,
}

/// The Gamma(2) orbit of `z` in the disc, `count` points nearest the centre,
/// each labelled by its sign in the Magnus order.
pub fn ordered_orbit(z: Point, count: usize, max_entry: i64) -> Result<Vec<OrderedPoint>, ZeroLabError> {
    let preset = GroupPreset::gamma2();
    let orbit = preset.orbit(z, max_entry)?;
    let radius = orbit.certified_radius()?;
    let mut labelled = Vec::new();
    for e in &orbit.entries {
        let w = to_disc(e.image)?.value();
        if w.norm() >= radius {
            continue;
        }
        labelled.push((w, e.element.clone()));
    }
    labelled.sort_by(|a, b| a.0.norm().total_cmp(&b.0.norm()).then(a.0.arg().total_cmp(&b.0.arg())));
    labelled.truncate(count);
    if labelled.is_empty() {
        return Err(ZeroLabError::EmptyOrbit);
    }
    labelled
        .into_iter()
        .map(|(disc, g)| {
            let word = gamma2_decompose(&g)?;
            let sign = match magnus_cmp(&word, &FreeWord::empty())? {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            };
            Ok(OrderedPoint { element: g, word: word.to_string(), disc, sign })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WanderingCandidate {
    pub order: String,
    pub weight: f64,
    pub truncation: usize,
    pub points: Vec<OrderedPoint>,
    /// Number of `γ < id` constraints imposed.
    pub constraint_count: usize,
    pub candidate: BergmanElement,
    /// `max |ξ(p)| / √K_N(p, p)` over the constraint points.
    pub constraint_residual: f64,
    pub gram: GramReport,
    /// `|⟨ξ, P_N π(γ) F⟩|` for the elements of the Gram ball.
    pub f_overlaps: Vec<f64>,
}

impl WanderingCandidate {
    pub fn max_f_overlap(&self) -> f64 {
        self.f_overlaps.iter().copied().fold(0.0, f64::max)
    }
}

/// `{id, A, A⁻¹, B, B⁻¹}` for the free generators of Gamma(2).
pub fn generator_ball() -> Vec<GroupElement> {
    use crate::moebius::Letter;
    let mut out = vec![GroupElement::identity()];
    for l in [Letter::A, Letter::AInv, Letter::B, Letter::BInv] {
        out.push(GroupElement::generator(l));
    }
    out
}

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / n).collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// Truncation of the left-order construction to `span(e_0..e_N)`.
///
/// With `r_p` the truncated kernel at `p`, `V` is the orthogonal complement
/// of `{r_p : γ_p < id}` and `U = V ∩ r_{z}^⊥`, so `V ⊖ U` is spanned by the
/// component of `r_z` orthogonal to the `γ < id` constraints.
pub fn wandering_truncated(
    points: &[OrderedPoint],
    f: &TransportedVanishing,
    truncation: usize,
) -> Result<WanderingCandidate, ZeroLabError> {
    let s = f.weight();
    let base = points
        .iter()
        .find(|p| p.sign == 0)
        .ok_or(ZeroLabError::NoCandidate)?;
    let kernel = |w: Complex64| -> Result<Vec<Complex64>, ZeroLabError> {
        Ok(KernelVector::new(Point::disc(w)?, s)?.to_element(truncation).coeffs().to_vec())
    };
    let negatives: Vec<Vec<Complex64>> = points
        .iter()
        .filter(|p| p.sign < 0)
        .map(|p| Ok(normalized(kernel(p.disc)?)))
        .collect::<Result<_, ZeroLabError>>()?;
    // Modified Gram–Schmidt with one reorthogonalization pass.
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in &negatives {
        let mut v = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&v, q);
                for (a, b) in v.iter_mut().zip(q) {
                    *a -= c * b;
                }
            }
        }
        let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-10 {
            basis.push(v.into_iter().map(|c| c / n).collect());
        }
    }
    let mut xi = normalized(kernel(base.disc)?);
    for _ in 0..2 {
        for q in &basis {
            let c = dot(&xi, q);
            for (a, b) in xi.iter_mut().zip(q) {
                *a -= c * b;
            }
        }
    }
    let n = xi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n < 1e-8 {
        return Err(ZeroLabError::NoCandidate);
    }
    let xi: Vec<Complex64> = xi.into_iter().map(|c| c / n).collect();
    let constraint_residual =
        negatives.iter().map(|r| dot(&xi, r).norm()).fold(0.0, f64::max);
    let candidate = BergmanElement::new(s, xi)?;

    let ball = generator_ball();
    let gram = gram_matrix_with(&candidate, &ball, s, 2 * truncation + 32)?;
    let grid = ProjectionGrid::new(s, truncation)?;
    let f_overlaps = ball
        .iter()
        .map(|g| {
            let ev = pi_action_evaluator(g, s, Box::new(f.evaluator()));
            let image = grid.project(&ev);
            Ok(candidate.inner(&image)?.norm())
        })
        .collect::<Result<Vec<f64>, ZeroLabError>>()?;
    Ok(WanderingCandidate {
        order: "magnus".into(),
        weight: s,
        truncation,
        points: points.to_vec(),
        constraint_count: negatives.len(),
        candidate,
        constraint_residual,
        gram,
        f_overlaps,
    })
}

/// The point `iy` with `j(iy) = w`, the natural base point for
/// [`TransportedVanishing`].
pub fn vanishing_base_point(w: f64) -> Result<Point, ZeroLabError> {
    Ok(preimage_on_imaginary_axis(w)?)
}

