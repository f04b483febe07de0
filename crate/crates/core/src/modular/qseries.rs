use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ModularError;

/// A truncated q-expansion `Σ_{n<=N} a_n qⁿ` with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries {
    pub weight: u32,
    #[serde(with = "decimal")]
    pub coeffs: Vec<BigInt>,
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer, de::Error};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(D::Error::custom)).collect()
    }
}

fn sigma(n: u64, p: u32) -> BigInt {
    let mut total = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += BigInt::from(d).pow(p);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(p);
            }
        }
        d += 1;
    }
    total
}

/// `E_k = 1 + c_k Σ σ_{k-1}(n) qⁿ` for `k = 4` (`c = 240`) or `k = 6`
/// (`c = -504`).
pub fn eisenstein_q(k: u32, n: usize) -> Result<QSeries, ModularError> {
    let c = match k {
        4 => 240,
        6 => -504,
        _ => return Err(ModularError::UnsupportedWeight(k)),
    };
    let mut coeffs = vec![BigInt::one()];
    coeffs.extend((1..=n as u64).map(|m| sigma(m, k - 1) * c));
    Ok(QSeries { weight: k, coeffs })
}

/// `Δ = q ∏_{n>=1} (1 - qⁿ)^24`, expanded exactly.
pub fn delta_q(n: usize) -> Result<QSeries, ModularError> {
    if n < 1 {
        return Err(ModularError::TruncationTooSmall { needed: 1, got: n });
    }
    // P = ∏ (1 - q^m) up to q^{n-1}, then Δ = q P^24.
    let len = n;
    let mut p = vec![0i64; len];
    p[0] = 1;
    for m in 1..len {
        for k in (m..len).rev() {
            p[k] -= p[k - m];
        }
    }
    let base = QSeries { weight: 0, coeffs: p.into_iter().map(BigInt::from).collect() };
    let p24 = base.pow(24);
    let mut coeffs = vec![BigInt::zero()];
    coeffs.extend(p24.coeffs.into_iter().take(n));
    Ok(QSeries { weight: 12, coeffs })
}

impl QSeries {
    pub fn new(weight: u32, coeffs: Vec<BigInt>) -> Self {
        QSeries { weight, coeffs }
    }

    pub fn constant(c: i64) -> Self {
        QSeries { weight: 0, coeffs: vec![BigInt::from(c)] }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_cusp(&self) -> bool {
        self.coeffs.first().is_none_or(|a| a.is_zero())
    }

    pub fn truncated(&self, n: usize) -> Self {
        QSeries { weight: self.weight, coeffs: self.coeffs.iter().take(n + 1).cloned().collect() }
    }

    fn combine(
        &self,
        other: &Self,
        f: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> Result<Self, ModularError> {
        if self.weight != other.weight {
            return Err(ModularError::WeightMismatch(self.weight, other.weight));
        }
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n).map(|i| f(&self.coeffs[i], &other.coeffs[i])).collect();
        Ok(QSeries { weight: self.weight, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self, ModularError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ModularError> {
        self.combine(other, |a, b| a - b)
    }

    /// Product, truncated to the shorter input; weights add.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QSeries { weight: self.weight + other.weight, coeffs }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = QSeries { weight: 0, coeffs: vec![BigInt::one(); 1] };
        result.coeffs.resize(self.coeffs.len(), BigInt::zero());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        QSeries { weight: self.weight, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Coefficientwise exact division by an integer.
    pub fn exact_div(&self, c: &BigInt) -> Result<Self, ModularError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let (q, r) = a.div_rem(c);
                if r.is_zero() { Ok(q) } else { Err(ModularError::NotDivisible(c.to_string())) }
            })
            .collect::<Result<_, _>>()?;
        Ok(QSeries { weight: self.weight, coeffs })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|a| a.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_brute_force() {
        for n in 1..60u64 {
            let brute: u64 = (1..=n).filter(|d| n % d == 0).map(|d| d.pow(3)).sum();
            assert_eq!(sigma(n, 3), BigInt::from(brute));
        }
    }

    #[test]
    fn first_coefficients() {
        let e4 = eisenstein_q(4, 3).unwrap();
        assert_eq!(e4.decimal_strings(), ["1", "240", "2160", "6720"]);
        let e6 = eisenstein_q(6, 2).unwrap();
        assert_eq!(e6.decimal_strings(), ["1", "-504", "-16632"]);
        let d = delta_q(4).unwrap();
        assert_eq!(d.decimal_strings(), ["0", "1", "-24", "252", "-1472"]);
        assert!(eisenstein_q(8, 3).is_err());
    }

    #[test]
    fn json_uses_decimal_strings() {
        let d = delta_q(2).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"weight":12,"coeffs":["0","1","-24"]}"#);
        assert_eq!(serde_json::from_str::<QSeries>(&s).unwrap(), d);
    }
}
