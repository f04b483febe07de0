use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ModularError, QSeries, delta_q, eisenstein_q};
use crate::groups::reduce_to_fundamental_domain;
use crate::moebius::Point;

/// Largest accepted tail bound for a series evaluation.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// Truncation used for the cached standard forms.
const STANDARD_N: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Bound on the neglected part of the series.
    pub tail_bound: f64,
}

/// Double-precision evaluator of a q-series with an envelope
/// `|a_n| <= C n^e`, `e = max(weight, 1)`, fitted on the known
/// coefficients and used to bound the tail geometrically.
#[derive(Debug, Clone)]
pub struct SeriesEvaluator {
    pub weight: u32,
    coeffs: Vec<f64>,
    envelope: f64,
    exponent: f64,
}

impl SeriesEvaluator {
    pub fn new(f: &QSeries) -> Self {
        let coeffs = f.to_f64();
        let exponent = f.weight.max(1) as f64;
        let envelope = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, a)| a.abs() / (n as f64).powf(exponent))
            .fold(0.0, f64::max);
        SeriesEvaluator { weight: f.weight, coeffs, envelope, exponent }
    }

    /// Bound on `Σ_{n>m} C n^e |q|ⁿ`, or infinity when the ratio test fails.
    fn tail_after(&self, m: usize, aq: f64) -> f64 {
        let next = (m + 1) as f64;
        let ratio = ((next + 1.0) / next).powf(self.exponent) * aq;
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        self.envelope * next.powf(self.exponent) * aq.powf(next) / (1.0 - ratio)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub(crate) fn tail_after_pub(&self, m: usize, aq: f64) -> f64 {
        self.tail_after(m, aq)
    }

    /// `Σ a_n qⁿ` at `q = e^{2πiz}`, stopping once the tail bound is
    /// negligible against the partial sum.
    pub fn eval_raw(&self, z: Complex64) -> SeriesValue {
        let q = (Complex64::new(0.0, std::f64::consts::TAU) * z).exp();
        let aq = q.norm();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut qn = Complex64::new(1.0, 0.0);
        let last = self.coeffs.len() - 1;
        for (n, &a) in self.coeffs.iter().enumerate() {
            sum += a * qn;
            if n >= 4 && n < last && n % 4 == 0 {
                let tail = self.tail_after(n, aq);
                if tail < 1e-18 * sum.norm().max(1e-300) {
                    return SeriesValue { value: sum, tail_bound: tail };
                }
            }
            qn *= q;
        }
        SeriesValue { value: sum, tail_bound: self.tail_after(last, aq) }
    }

    pub fn eval(&self, z: Complex64) -> Result<SeriesValue, ModularError> {
        let v = self.eval_raw(z);
        if !(v.tail_bound <= TAIL_TOLERANCE) {
            return Err(ModularError::TailUnbounded {
                bound: v.tail_bound,
                tolerance: TAIL_TOLERANCE,
                im: z.im,
            });
        }
        Ok(v)
    }

    /// Evaluate after moving `z` into the standard domain, using
    /// `F(z) = (cz+d)^{-k} F(gz)`.
    pub fn eval_modular(&self, z: Complex64) -> Result<SeriesValue, ModularError> {
        let (z0, g) = reduce_to_fundamental_domain(Point::half_plane(z)?)?;
        let v = self.eval(z0.value())?;
        let jk = g.j(z).powi(-(self.weight as i32));
        Ok(SeriesValue { value: v.value * jk, tail_bound: v.tail_bound * jk.norm() })
    }
}

/// `Σ a_n qⁿ` with a reported tail bound.
pub fn qseries_eval(f: &QSeries, z: Point) -> Result<SeriesValue, ModularError> {
    SeriesEvaluator::new(f).eval(z.expect_half_plane()?)
}

/// Modular evaluation through reduction to the standard domain.
pub fn eval_modular(f: &QSeries, z: Point) -> Result<SeriesValue, ModularError> {
    SeriesEvaluator::new(f).eval_modular(z.expect_half_plane()?)
}

/// Cached evaluators for `E4`, `E6`, `Δ` at truncation 200.
pub struct StandardForms {
    pub e4: SeriesEvaluator,
    pub e6: SeriesEvaluator,
    pub delta: SeriesEvaluator,
}

pub fn standard_forms() -> &'static StandardForms {
    static FORMS: OnceLock<StandardForms> = OnceLock::new();
    FORMS.get_or_init(|| StandardForms {
        e4: SeriesEvaluator::new(&eisenstein_q(4, STANDARD_N).expect("weight 4")),
        e6: SeriesEvaluator::new(&eisenstein_q(6, STANDARD_N).expect("weight 6")),
        delta: SeriesEvaluator::new(&delta_q(STANDARD_N).expect("N >= 1")),
    })
}

/// `j = E4³/Δ`, evaluated at the reduced point.
pub fn j_eval(z: Point) -> Result<Complex64, ModularError> {
    let (z0, _) = reduce_to_fundamental_domain(z.as_half_plane()?)?;
    let v = z0.value();
    if v.im > 50.0 {
        return Err(ModularError::Underflow(v.im));
    }
    let forms = standard_forms();
    let e4 = forms.e4.eval(v)?.value;
    let d = forms.delta.eval(v)?.value;
    Ok(e4 * e4 * e4 / d)
}
