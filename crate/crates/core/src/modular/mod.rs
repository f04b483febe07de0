//! Modular forms for PSL(2,Z): exact q-expansions, evaluation with tail
//! bounds, real powers of η, `j`, the Rolen–Wagner vanishing functions,
//! Petersson products and dimensions of `M_k` and `S_k`.
//!
//! Naming follows weights: older texts that index Eisenstein series by half
//! the weight call these
//!
//! | here | half-weight index |
//! |------|-------------------|
//! | `E4` | `G₂`              |
//! | `E6` | `G₃`              |
//!
//! (the classical weight-2 `G₂` does not appear).

mod dims;
mod eta;
mod eval;
mod petersson;
mod qseries;
mod vanishing;

use thiserror::Error;

use crate::moebius::MoebiusError;

pub use dims::{SpaceDims, exact_rank, space_dims};
pub use eta::{EtaPower, eta_pow, log_eta, log_eta_series};
pub use eval::{
    SeriesEvaluator, SeriesValue, TAIL_TOLERANCE, eval_modular, j_eval, qseries_eval,
    standard_forms,
};
pub use petersson::{PeterssonEstimate, PeterssonSpec, petersson};
pub use qseries::{QSeries, delta_q, eisenstein_q};
pub use vanishing::{
    CuspSupReport, FdGrid, GrowthCertificate, VanishingFunction, cusp_sup_invariant,
    preimage_on_imaginary_axis, rw_function,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModularError {
    #[error("Eisenstein series of weight {0} not provided (use 4 or 6)")]
    UnsupportedWeight(u32),
    #[error("weights differ: {0} vs {1}")]
    WeightMismatch(u32, u32),
    #[error("truncation must be at least {needed}, got {got}")]
    TruncationTooSmall { needed: usize, got: usize },
    #[error("q-series tail bound {bound:e} exceeds {tolerance:e} at Im z = {im}")]
    TailUnbounded { bound: f64, tolerance: f64, im: f64 },
    #[error("not divisible exactly by {0}")]
    NotDivisible(String),
    #[error("Δ underflows at Im z = {0} (reduced point above Im 50)")]
    Underflow(f64),
    #[error("input is not a cusp form (a_0 = {0})")]
    NotCuspForm(String),
    #[error("exponent r must be positive, got {0}")]
    BadExponent(f64),
    #[error("target {0} is outside the supported root-finding range (real, > 1728)")]
    BadTarget(f64),
    #[error("quadrature refinement changed the result by {delta:e} (relative), above {tolerance:e}")]
    QuadratureUnresolved { delta: f64, tolerance: f64 },
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Quadrature(#[from] crate::quadrature::QuadratureError),
}
