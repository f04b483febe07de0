use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{ModularError, QSeries, eisenstein_q};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDims {
    pub weight: u32,
    pub dim_modular: usize,
    pub dim_cusp: usize,
    /// Monomials `E4^a E6^b` with `4a + 6b = k`.
    pub basis: Vec<QSeries>,
    /// Differences `m_i - m_0`, which span the cusp subspace.
    pub cusp_basis: Vec<QSeries>,
}

/// Rank over Q by fraction-free elimination.
pub fn exact_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = m.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in m.iter_mut() {
        r.resize(cols, BigInt::zero());
    }
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let (a, b) = (m[rank][col].clone(), m[i][col].clone());
            let mut g = BigInt::zero();
            for j in col..cols {
                let v = &m[i][j] * &a - &m[rank][j] * &b;
                g = g.gcd(&v);
                m[i][j] = v;
            }
            if !g.is_zero() && g != BigInt::from(1) {
                for v in m[i][col..].iter_mut() {
                    *v = &*v / &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimensions of `M_k` and `S_k` from the span of the monomials in `E4`,
/// `E6`, computed exactly on q-expansions to order `n`.
pub fn space_dims(k: u32, n: usize) -> Result<SpaceDims, ModularError> {
    let mut exps = Vec::new();
    if k.is_multiple_of(2) {
        for a in 0..=k / 4 {
            let rest = k - 4 * a;
            if rest.is_multiple_of(6) {
                exps.push((a, rest / 6));
            }
        }
    }
    let needed = 2 * exps.len();
    if n < needed {
        return Err(ModularError::TruncationTooSmall { needed, got: n });
    }
    let e4 = eisenstein_q(4, n)?;
    let e6 = eisenstein_q(6, n)?;
    let basis: Vec<QSeries> = exps
        .iter()
        .map(|&(a, b)| {
            let mut m = e4.pow(a).mul(&e6.pow(b));
            m.weight = k;
            m
        })
        .collect();
    let rows: Vec<Vec<BigInt>> = basis.iter().map(|m| m.coeffs.clone()).collect();
    let dim_modular = exact_rank(&rows);
    let cusp_basis: Vec<QSeries> = basis
        .iter()
        .skip(1)
        .map(|m| m.sub(&basis[0]).expect("equal weights"))
        .collect();
    let cusp_rows: Vec<Vec<BigInt>> = cusp_basis.iter().map(|m| m.coeffs.clone()).collect();
    // Every monomial has constant term 1, so the differences span S_k.
    let dim_cusp = exact_rank(&cusp_rows);
    Ok(SpaceDims { weight: k, dim_modular, dim_cusp, basis, cusp_basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        let r = |v: &[&[i64]]| -> Vec<Vec<BigInt>> {
            v.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect()
        };
        assert_eq!(exact_rank(&r(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(exact_rank(&r(&[&[0, 1], &[1, 0], &[1, 1]])), 2);
        assert_eq!(exact_rank(&r(&[])), 0);
        assert_eq!(exact_rank(&r(&[&[0, 0]])), 0);
    }
}
