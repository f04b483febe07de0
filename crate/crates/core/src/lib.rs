//! Numerical laboratory for weighted Bergman spaces on the disc and the
//! upper half-plane under Fuchsian group actions.
//!
//! The crate covers:
//!
//! * [`moebius`]: Möbius action, Cayley transform and the branched automorphy
//!   factor `(cz+d)^s` with its projective cocycle;
//! * [`groups`]: PSL(2,Z) and its free subgroup Gamma(2): enumeration,
//!   reduction, orbits, free-word decomposition and the Magnus left order;
//! * [`bergman`]: the orthonormal basis of `A²_{s-2}`, the reproducing kernel,
//!   the projective action, zero popping and Cayley transport;
//! * [`modular`]: exact q-expansions, evaluation, `η^r`, `j`, the
//!   Rolen–Wagner vanishing functions, Petersson products and dimensions of
//!   spaces of modular forms;
//! * [`poincare`]: Poincaré sums, tracelike deviation and Gram diagnostics;
//! * [`dimension`]: von Neumann dimension formulas, their numerical check, and
//!   orbit densities;
//! * [`zero_lab`]: kernel extremal values and the truncated wandering-subspace
//!   construction.

pub mod bergman;
pub mod dimension;
pub mod groups;
pub mod modular;
pub mod moebius;
pub mod poincare;
pub mod quadrature;
pub mod zero_lab;

pub use moebius::{GroupElement, Letter, Model, Point};

/// Complex evaluator on either model.
pub type Evaluator<'a> = Box<dyn Fn(num_complex::Complex64) -> num_complex::Complex64 + Send + Sync + 'a>;
