//! Gauss–Jacobi and Gauss–Legendre rules.
//!
//! Nodes start from the Golub–Welsch eigenvalues and are polished by Newton
//! steps on the three-term recurrence; weights use the closed form in terms
//! of `P_n'`, with the Gamma prefactor taken in log space.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("rule order must be at least 1")]
    ZeroOrder,
    #[error("Jacobi exponents must exceed -1 (got alpha = {alpha}, beta = {beta})")]
    BadExponent { alpha: f64, beta: f64 },
}

/// A Gauss rule on `[-1, 1]` for the weight `(1 - x)^alpha (1 + x)^beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub alpha: f64,
    pub beta: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `(P_n(x), P_{n-1}(x))` for the Jacobi family.
fn jacobi_pair(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    if n == 0 {
        return (p_prev, 0.0);
    }
    let mut p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let a1 = 2.0 * k * (k + a + b) * (c - 2.0);
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let next = ((a2 + a3 * x) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// `P_n'(x)` from `(P_n, P_{n-1})`.
fn jacobi_derivative(n: usize, a: f64, b: f64, x: f64, p: f64, p_prev: f64) -> f64 {
    let nf = n as f64;
    let c = 2.0 * nf + a + b;
    (nf * ((a - b) - c * x) * p + 2.0 * (nf + a) * (nf + b) * p_prev) / (c * (1.0 - x * x))
}

fn golub_welsch_nodes(n: usize, a: f64, b: f64) -> Vec<f64> {
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let c = 2.0 * kf + a + b;
        m[(k, k)] = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (c * (c + 2.0))
        };
        if k + 1 < n {
            let j = kf + 1.0;
            let c = 2.0 * j + a + b;
            let num = 4.0 * j * (j + a) * (j + b) * (j + a + b);
            let den = c * c * (c + 1.0) * (c - 1.0);
            let off = (num / den).sqrt();
            m[(k, k + 1)] = off;
            m[(k + 1, k)] = off;
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    nodes
}

impl GaussRule {
    pub fn jacobi(n: usize, alpha: f64, beta: f64) -> Result<Self, QuadratureError> {
        if n == 0 {
            return Err(QuadratureError::ZeroOrder);
        }
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(QuadratureError::BadExponent { alpha, beta });
        }
        let (a, b) = (alpha, beta);
        let mut nodes = golub_welsch_nodes(n, a, b);
        let nf = n as f64;
        let log_pref = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(nf + a + 1.0)
            + ln_gamma(nf + b + 1.0)
            - ln_gamma(nf + a + b + 1.0)
            - ln_gamma(nf + 1.0);
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, q) = jacobi_pair(n, a, b, *x);
                let dp = jacobi_derivative(n, a, b, *x, p, q);
                let step = p / dp;
                let nx = *x - step;
                if nx > -1.0 && nx < 1.0 {
                    *x = nx;
                }
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (p, q) = jacobi_pair(n, a, b, *x);
            let dp = jacobi_derivative(n, a, b, *x, p, q);
            weights.push((log_pref - ((1.0 - *x * *x) * dp * dp).ln()).exp());
        }
        Ok(GaussRule { alpha, beta, nodes, weights })
    }

    pub fn legendre(n: usize) -> Result<Self, QuadratureError> {
        Self::jacobi(n, 0.0, 0.0)
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_{-1}^{1} (1-x)^alpha (1+x)^beta f(x) dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Nodes and weights transplanted to `[lo, hi]` for the weight
    /// `(hi - t)^alpha (t - lo)^beta`.
    pub fn on_interval(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let half = 0.5 * (hi - lo);
        let scale = half.powf(self.alpha + self.beta + 1.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (lo + half * (x + 1.0), w * scale))
            .collect()
    }
}
