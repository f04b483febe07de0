//! The weighted Bergman space `A²_{s-2}` on the disc.
//!
//! Elements are stored as coefficient vectors in the orthonormal basis
//! `e_n(w) = β_n wⁿ`, `β_n = √((s-1)/4π) √((s)_n / n!)`, for the measure
//! `(1 - |w|²)^{s-2} 4 du dv`. Inner products are linear in the first slot.

mod action;
mod basis;
mod element;
mod kernel;
mod pop;
mod quad;
mod transport;

use thiserror::Error;

use crate::moebius::MoebiusError;
use crate::quadrature::QuadratureError;

pub use action::{ProjectionGrid, pi_action, pi_action_evaluator, pi_action_with, project};
pub use basis::{basis_eval, basis_scale, basis_scales, half_plane_basis_eval};
pub use element::BergmanElement;
pub use kernel::{KernelVector, kernel_eval, kernel_raw};
pub use pop::pop_zero;
pub use quad::{DiscGrid, QuadEstimate, QuadratureSpec, quad_inner, quad_inner_half_plane};
pub use transport::{Direction, cayley_transport, transport_factor};

/// Largest relative norm loss accepted when projecting onto a truncation.
pub const TRUNCATION_LOSS_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BergmanError {
    #[error("weight s = {0} must exceed 1")]
    InvalidWeight(f64),
    #[error("weights differ: {left} vs {right}")]
    WeightMismatch { left: f64, right: f64 },
    #[error("quadrature refinement changed the result by {delta:e}, above {tolerance:e}")]
    QuadratureUnresolved { delta: f64, tolerance: f64 },
    #[error("invalid quadrature spec: {0}")]
    BadSpec(String),
    #[error("projection lost {loss:e} of the squared norm, above {limit:e}")]
    TruncationLoss { loss: f64, limit: f64 },
    #[error("function does not vanish to order {order} at the point (residual {residual:e})")]
    InsufficientVanishing { order: usize, residual: f64 },
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

pub(crate) fn check_weight(s: f64) -> Result<(), BergmanError> {
    if s > 1.0 && s.is_finite() { Ok(()) } else { Err(BergmanError::InvalidWeight(s)) }
}

pub(crate) fn same_weight(a: f64, b: f64) -> Result<(), BergmanError> {
    if (a - b).abs() <= 1e-12 * a.abs().max(1.0) {
        Ok(())
    } else {
        Err(BergmanError::WeightMismatch { left: a, right: b })
    }
}
