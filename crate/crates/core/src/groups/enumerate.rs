use std::collections::HashSet;
use std::collections::VecDeque;

use num_integer::Integer;

use super::{GroupError, GroupPreset, PresetName};
use crate::moebius::GroupElement;

/// Largest number of elements an enumeration may produce.
pub const ENUMERATION_CAP: usize = 4_000_000;

/// Breadth-first enumeration over generators and inverses.
///
/// Returns every element reachable by a word of length at most
/// `max_word_len` whose intermediate and final entries stay within
/// `max_entry`, each with a shortest such word. Sorted by sup-norm, then
/// word, then matrix.
pub fn enumerate_group(
    preset: &GroupPreset,
    max_word_len: usize,
    max_entry: i64,
) -> Result<Vec<GroupElement>, GroupError> {
    let letters = preset.letters();
    let mut seen: HashSet<[i64; 4]> = HashSet::new();
    let mut out = vec![GroupElement::identity()];
    seen.insert(GroupElement::identity().entries());
    let mut queue = VecDeque::from([(GroupElement::identity(), 0usize)]);
    while let Some((g, len)) = queue.pop_front() {
        if len == max_word_len {
            continue;
        }
        for &l in letters {
            let Some(h) = g.checked_mul(&GroupElement::generator(l)) else {
                continue;
            };
            if h.sup_norm() > max_entry || !seen.insert(h.entries()) {
                continue;
            }
            if out.len() >= ENUMERATION_CAP {
                return Err(GroupError::BudgetOverflow { cap: ENUMERATION_CAP });
            }
            out.push(h.clone());
            queue.push_back((h, len + 1));
        }
    }
    out.sort_by(|x, y| {
        (x.sup_norm(), &x.word, x.entries()).cmp(&(y.sup_norm(), &y.word, y.entries()))
    });
    Ok(out)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Every element of the preset with all entries at most `max_entry` in
/// absolute value, without words. Sorted by sup-norm, then matrix.
///
/// Runs over coprime bottom rows `(c, d)` and solves for the top row.
pub fn enumerate_by_entry(
    preset: &GroupPreset,
    max_entry: i64,
) -> Result<Vec<GroupElement>, GroupError> {
    let n = max_entry.max(0);
    let gamma2 = preset.name == PresetName::Gamma2;
    let mut out = Vec::new();
    let push = |g: GroupElement, out: &mut Vec<GroupElement>| -> Result<(), GroupError> {
        if out.len() >= ENUMERATION_CAP {
            return Err(GroupError::BudgetOverflow { cap: ENUMERATION_CAP });
        }
        out.push(g);
        Ok(())
    };
    for b in -n..=n {
        if !gamma2 || b % 2 == 0 {
            push(GroupElement { a: 1, b, c: 0, d: 1, word: Vec::new() }, &mut out)?;
        }
    }
    for c in 1..=n {
        if gamma2 && c % 2 == 1 {
            continue;
        }
        for d in -n..=n {
            if gamma2 && d % 2 == 0 {
                continue;
            }
            // a d - b c = 1 with a = a0 + k c, b = b0 + k d.
            let (g, x, y) = ext_gcd(d, c);
            if g.abs() != 1 {
                continue;
            }
            let (a0, b0) = (x * g, -y * g);
            let mut lo = Integer::div_ceil(&(-n - a0), &c);
            let mut hi = Integer::div_floor(&(n - a0), &c);
            match d.signum() {
                1 => {
                    lo = lo.max(Integer::div_ceil(&(-n - b0), &d));
                    hi = hi.min(Integer::div_floor(&(n - b0), &d));
                }
                -1 => {
                    lo = lo.max(Integer::div_ceil(&(n - b0), &d));
                    hi = hi.min(Integer::div_floor(&(-n - b0), &d));
                }
                _ => {
                    if b0.abs() > n {
                        continue;
                    }
                }
            }
            for k in lo..=hi {
                if gamma2 && (b0 + k).rem_euclid(2) != 0 {
                    continue;
                }
                let g = GroupElement { a: a0 + k * c, b: b0 + k * d, c, d, word: Vec::new() };
                debug_assert_eq!(g.a * g.d - g.b * g.c, 1);
                push(g, &mut out)?;
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::Letter;

    #[test]
    fn word_length_one() {
        let g = enumerate_group(&GroupPreset::psl2z(), 1, 10).unwrap();
        assert_eq!(g.len(), 4);
        let set: HashSet<_> = g.iter().map(|x| x.entries()).collect();
        for l in [Letter::S, Letter::T, Letter::TInv] {
            assert!(set.contains(&GroupElement::generator(l).entries()));
        }
        assert!(set.contains(&[1, 0, 0, 1]));
    }

    #[test]
    fn word_length_zero() {
        let g = enumerate_group(&GroupPreset::gamma2(), 0, 100).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g[0].is_identity());
    }

    #[test]
    fn lattice_counts_small() {
        // Elements of PSL(2,Z) with entries in {-1,0,1}.
        let g = enumerate_by_entry(&GroupPreset::psl2z(), 1).unwrap();
        let mut brute = 0;
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                for c in -1i64..=1 {
                    for d in -1i64..=1 {
                        if a * d - b * c == 1 && (c > 0 || (c == 0 && d > 0)) {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(g.len(), brute);
    }
}
