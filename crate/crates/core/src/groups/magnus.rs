use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{FreeWord, GroupError};

/// Truncation degrees tried in turn when comparing words.
pub const MAGNUS_DEGREES: [usize; 3] = [8, 16, 32];

/// A truncated power series in noncommuting `X` (index 0) and `Y` (index 1),
/// the Magnus image of a free word under `A -> 1 + X`, `B -> 1 + Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagnusSeries {
    pub degree: usize,
    /// Nonzero coefficients keyed by monomial; one map per degree.
    pub components: Vec<BTreeMap<Vec<u8>, BigInt>>,
}

/// `binom(e, j)` for any integer `e`.
fn binom(e: i64, j: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j as i64 {
        num *= BigInt::from(e - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

impl MagnusSeries {
    /// Full expansion of `w` up to total degree `degree`.
    pub fn of_word(w: &FreeWord, degree: usize) -> Self {
        let mut comps: Vec<BTreeMap<Vec<u8>, BigInt>> = vec![BTreeMap::new(); degree + 1];
        comps[0].insert(Vec::new(), BigInt::one());
        for (v, e) in w.syllables() {
            let factors: Vec<BigInt> = (0..=degree).map(|j| binom(e, j)).collect();
            let mut next: Vec<BTreeMap<Vec<u8>, BigInt>> = vec![BTreeMap::new(); degree + 1];
            for (k, comp) in comps.iter().enumerate() {
                for (mono, c) in comp {
                    for (j, f) in factors.iter().enumerate().take(degree - k + 1) {
                        if f.is_zero() {
                            continue;
                        }
                        let mut m = mono.clone();
                        m.extend(std::iter::repeat_n(v, j));
                        *next[k + j].entry(m).or_insert_with(BigInt::zero) += c * f;
                    }
                }
            }
            for comp in next.iter_mut() {
                comp.retain(|_, c| !c.is_zero());
            }
            comps = next;
        }
        MagnusSeries { degree, components: comps }
    }

    pub fn coefficient(&self, mono: &[u8]) -> BigInt {
        self.components
            .get(mono.len())
            .and_then(|c| c.get(mono))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Sign of the first nonzero coefficient of `self - 1` in
    /// degree-then-lexicographic order, if any within the truncation.
    pub fn leading_sign(&self) -> Option<Ordering> {
        self.components.iter().skip(1).find_map(|comp| {
            comp.values().next().map(|c| if c.is_positive() { Ordering::Greater } else { Ordering::Less })
        })
    }
}

/// Sum over ways to distribute `k` letters among the syllables, with
/// binomial weights, accumulated by monomial.
fn homogeneous_component(syl: &[(u8, i64)], k: usize) -> BTreeMap<Vec<u8>, BigInt> {
    fn rec(
        syl: &[(u8, i64)],
        left: usize,
        mono: &mut Vec<u8>,
        coef: BigInt,
        out: &mut BTreeMap<Vec<u8>, BigInt>,
    ) {
        let Some((&(v, e), rest)) = syl.split_first() else {
            if left == 0 {
                *out.entry(mono.clone()).or_insert_with(BigInt::zero) += coef;
            }
            return;
        };
        for j in 0..=left {
            let b = binom(e, j);
            if b.is_zero() {
                if e >= 0 {
                    break;
                }
                continue;
            }
            let len = mono.len();
            mono.extend(std::iter::repeat_n(v, j));
            rec(rest, left - j, mono, &coef * b, out);
            mono.truncate(len);
        }
    }
    let mut out = BTreeMap::new();
    rec(syl, k, &mut Vec::new(), BigInt::one(), &mut out);
    out.retain(|_, c| !c.is_zero());
    out
}

/// Compare `u` and `v` in the left order whose positive cone is the set of
/// `g` with `μ(g) - 1` having positive leading coefficient.
///
/// Degrees are examined lowest first; the truncation escalates through
/// [`MAGNUS_DEGREES`].
pub fn magnus_cmp(u: &FreeWord, v: &FreeWord) -> Result<Ordering, GroupError> {
    let g = u.inverse().mul(v);
    if g.is_empty() {
        return Ok(Ordering::Equal);
    }
    let syl = g.syllables();
    let mut k = 1;
    for &cap in &MAGNUS_DEGREES {
        while k <= cap {
            let comp = homogeneous_component(&syl, k);
            if let Some(c) = comp.values().next() {
                return Ok(if c.is_positive() { Ordering::Less } else { Ordering::Greater });
            }
            k += 1;
        }
    }
    Err(GroupError::UnresolvedTie(*MAGNUS_DEGREES.last().expect("nonempty")))
}

/// `u < v` in the Magnus left order.
pub fn magnus_less(u: &FreeWord, v: &FreeWord) -> Result<bool, GroupError> {
    Ok(magnus_cmp(u, v)? == Ordering::Less)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn basic_comparisons() {
        assert!(magnus_less(&FreeWord::empty(), &w("A")).unwrap());
        assert!(magnus_less(&w("A^-1"), &FreeWord::empty()).unwrap());
        assert!(!magnus_less(&w("A B"), &w("A B")).unwrap());
        assert_eq!(magnus_cmp(&w("B"), &w("B")).unwrap(), Ordering::Equal);
    }

    #[test]
    fn series_of_inverse() {
        let s = MagnusSeries::of_word(&w("A^-1"), 4);
        for k in 0..=4u32 {
            let mono = vec![0u8; k as usize];
            assert_eq!(s.coefficient(&mono), BigInt::from((-1i64).pow(k)));
        }
    }

    #[test]
    fn commutator_starts_in_degree_two() {
        // μ([A,B]) = 1 + XY - YX + ...
        let s = MagnusSeries::of_word(&w("A B A^-1 B^-1"), 3);
        assert!(s.components[1].is_empty());
        assert_eq!(s.coefficient(&[0, 1]), BigInt::from(1));
        assert_eq!(s.coefficient(&[1, 0]), BigInt::from(-1));
    }

    #[test]
    fn component_matches_full_series() {
        for word in ["A B^-1 A A", "B^-1 A^-1 B A^-1", "A^-1 A^-1 B B B"] {
            let fw = w(word);
            let full = MagnusSeries::of_word(&fw, 6);
            for k in 0..=6 {
                assert_eq!(homogeneous_component(&fw.syllables(), k), full.components[k]);
            }
        }
    }
}
