use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BergmanError, basis_scales, check_weight, same_weight};
use crate::Evaluator;

/// A truncated element `Σ c_n e_n` of `A²_{s-2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ElementRepr", try_from = "ElementRepr")]
pub struct BergmanElement {
    weight: f64,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    weight: f64,
    truncation: usize,
    coefficients: Vec<[f64; 2]>,
}

impl From<BergmanElement> for ElementRepr {
    fn from(e: BergmanElement) -> Self {
        ElementRepr {
            weight: e.weight,
            truncation: e.truncation(),
            coefficients: e.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<ElementRepr> for BergmanElement {
    type Error = String;

    fn try_from(r: ElementRepr) -> Result<Self, Self::Error> {
        if r.coefficients.len() != r.truncation + 1 {
            return Err(format!(
                "truncation {} does not match {} coefficients",
                r.truncation,
                r.coefficients.len()
            ));
        }
        let coeffs = r.coefficients.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        BergmanElement::new(r.weight, coeffs).map_err(|e| e.to_string())
    }
}

impl BergmanElement {
    pub fn new(weight: f64, coeffs: Vec<Complex64>) -> Result<Self, BergmanError> {
        check_weight(weight)?;
        let coeffs = if coeffs.is_empty() { vec![Complex64::new(0.0, 0.0)] } else { coeffs };
        Ok(BergmanElement { weight, coeffs })
    }

    pub fn zeros(weight: f64, truncation: usize) -> Result<Self, BergmanError> {
        Self::new(weight, vec![Complex64::new(0.0, 0.0); truncation + 1])
    }

    /// The basis vector `e_n` inside truncation `truncation`.
    pub fn basis(weight: f64, n: usize, truncation: usize) -> Result<Self, BergmanError> {
        let mut e = Self::zeros(weight, truncation.max(n))?;
        e.coeffs[n] = Complex64::new(1.0, 0.0);
        Ok(e)
    }

    /// From Taylor coefficients `a_n` of `Σ a_n wⁿ`.
    pub fn from_taylor(weight: f64, taylor: &[Complex64]) -> Result<Self, BergmanError> {
        check_weight(weight)?;
        let b = basis_scales(weight, taylor.len().saturating_sub(1));
        Self::new(weight, taylor.iter().zip(&b).map(|(a, b)| a / b).collect())
    }

    pub fn to_taylor(&self) -> Vec<Complex64> {
        let b = basis_scales(self.weight, self.truncation());
        self.coeffs.iter().zip(&b).map(|(c, b)| c * b).collect()
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Zero-padded or cut to the given truncation.
    pub fn resized(&self, truncation: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(truncation + 1, Complex64::new(0.0, 0.0));
        BergmanElement { weight: self.weight, coeffs }
    }

    /// `⟨self, other⟩ = Σ c_n conj(d_n)` over the common truncation.
    pub fn inner(&self, other: &Self) -> Result<Complex64, BergmanError> {
        same_weight(self.weight, other.weight)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        BergmanElement { weight: self.weight, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// `self + k·other`, on the larger truncation.
    pub fn add_scaled(&self, k: Complex64, other: &Self) -> Result<Self, BergmanError> {
        same_weight(self.weight, other.weight)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = self.resized(n - 1);
        for (o, c) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o += k * c;
        }
        Ok(out)
    }

    /// Point evaluation `Σ c_n β_n wⁿ` at a complex number in the disc.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let b = basis_scales(self.weight, self.truncation());
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, b) in self.coeffs.iter().zip(&b).rev() {
            acc = acc * w + c * b;
        }
        acc
    }

    /// A disc evaluator sharing the precomputed Taylor coefficients.
    pub fn evaluator(&self) -> Evaluator<'static> {
        let taylor = self.to_taylor();
        Box::new(move |w: Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in taylor.iter().rev() {
                acc = acc * w + a;
            }
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let e = BergmanElement::new(2.5, vec![Complex64::new(1.0, -0.5), Complex64::new(0.0, 3.0)])
            .unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains("\"truncation\":1"));
        let back: BergmanElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<BergmanElement>(
            r#"{"weight":0.5,"truncation":0,"coefficients":[[1,0]]}"#
        )
        .is_err());
    }

    #[test]
    fn orthonormal_coefficients() {
        let e3 = BergmanElement::basis(2.0, 3, 8).unwrap();
        let e5 = BergmanElement::basis(2.0, 5, 8).unwrap();
        assert_eq!(e3.inner(&e3).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(e3.inner(&e5).unwrap(), Complex64::new(0.0, 0.0));
        let other = BergmanElement::basis(3.0, 3, 8).unwrap();
        assert!(e3.inner(&other).is_err());
    }

    #[test]
    fn taylor_round_trip() {
        let t = vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0), Complex64::new(0.0, 0.25)];
        let e = BergmanElement::from_taylor(13.0, &t).unwrap();
        for (a, b) in e.to_taylor().iter().zip(&t) {
            assert!((a - b).norm() < 1e-14);
        }
        let w = Complex64::new(0.3, -0.2);
        let direct = t[0] + t[1] * w + t[2] * w * w;
        assert!((e.eval(w) - direct).norm() < 1e-14);
        assert!((e.evaluator()(w) - direct).norm() < 1e-14);
    }
}
