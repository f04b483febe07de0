use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GroupError;
use crate::moebius::{GroupElement, Letter, format_word, parse_word};

/// A freely reduced word in `A`, `B` and their inverses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

fn is_free_letter(l: Letter) -> bool {
    matches!(l, Letter::A | Letter::AInv | Letter::B | Letter::BInv)
}

impl FreeWord {
    /// Builds the reduced form of `letters`.
    pub fn new(letters: &[Letter]) -> Result<Self, GroupError> {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        for &l in letters {
            if !is_free_letter(l) {
                return Err(GroupError::NotFreeLetter(format_word(letters)));
            }
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(FreeWord { letters: out })
    }

    pub fn empty() -> Self {
        FreeWord::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord { letters: out }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn to_element(&self) -> Result<GroupElement, GroupError> {
        Ok(GroupElement::from_word(&self.letters)?)
    }

    /// Maximal runs of one generator as `(variable, exponent)` where
    /// variable 0 is `A` and 1 is `B`.
    pub fn syllables(&self) -> Vec<(u8, i64)> {
        let mut out: Vec<(u8, i64)> = Vec::new();
        for &l in &self.letters {
            let (v, e) = match l {
                Letter::A => (0, 1),
                Letter::AInv => (0, -1),
                Letter::B => (1, 1),
                _ => (1, -1),
            };
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        out
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.letters))
    }
}

impl FromStr for FreeWord {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FreeWord::new(&parse_word(s)?)
    }
}

const FREE_LETTERS: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

/// The reduced word in `A`, `B` whose product is `g`.
///
/// Peels one generator at a time from the left, always choosing the letter
/// that lowers the Frobenius norm the most. Each step moves `g(i)` closer to
/// `i`, and the Dirichlet domain of Gamma(2) at `i` is bounded by the sides
/// paired by `A^±1`, `B^±1`, so some letter always helps until `g = id`.
pub fn gamma2_decompose(g: &GroupElement) -> Result<FreeWord, GroupError> {
    if !g.in_gamma2() {
        return Err(GroupError::NotInGamma2(g.clone().without_word()));
    }
    let mut cur = g.clone().without_word();
    let mut letters = Vec::new();
    while !cur.is_identity() {
        let norm = cur.frobenius_sq();
        let (best, next) = FREE_LETTERS
            .iter()
            .map(|&l| {
                let h = GroupElement::generator(l.inverse()).without_word();
                (l, (&h * &cur).without_word())
            })
            .min_by_key(|(_, h)| h.frobenius_sq())
            .expect("four letters");
        assert!(next.frobenius_sq() < norm, "norm descent stalled at {cur}");
        letters.push(best);
        cur = next;
    }
    FreeWord::new(&letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_examples() {
        let a = GroupElement::generator(Letter::A);
        assert_eq!(gamma2_decompose(&a).unwrap().to_string(), "A");
        let t2 = &GroupElement::t() * &GroupElement::t();
        assert_eq!(gamma2_decompose(&t2).unwrap().to_string(), "A");
        let w: FreeWord = "A B A^-1".parse().unwrap();
        let g = w.to_element().unwrap().without_word();
        assert_eq!(gamma2_decompose(&g).unwrap(), w);
        assert!(gamma2_decompose(&GroupElement::t()).is_err());
        assert!(gamma2_decompose(&GroupElement::identity()).unwrap().is_empty());
    }

    #[test]
    fn reduction_and_syllables() {
        let w: FreeWord = "A A B B^-1 A^-1 B^-1 B^-1".parse().unwrap();
        assert_eq!(w.to_string(), "A B^-1 B^-1");
        assert_eq!(w.syllables(), vec![(0, 1), (1, -2)]);
        assert!(FreeWord::new(&[Letter::S]).is_err());
    }
}
