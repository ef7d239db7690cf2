//! Exact linear algebra over the rationals, sized for this crate's needs
//! (a few hundred rows/columns).
//!
//! Two engines: a fraction-free Bareiss elimination for ranks of integer
//! matrices (no rational blow-up, everything stays in `BigInt`), and a plain
//! rational row reduction used where actual kernel bases or coordinates are
//! needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        // Pivot: smallest nonzero magnitude keeps the intermediates modest.
        let pivot = (row..rows)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].abs());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for r in row + 1..rows {
            for c in col + 1..cols {
                let val = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                m[r][c] = &val / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        rank += 1;
        row += 1;
    }
    rank
}

/// Reduced row echelon form in place; returns the pivot column list.
pub fn rref(m: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in col..cols {
            let v = &m[row][c] * &inv;
            m[row][c] = v;
        }
        for r in 0..rows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..cols {
                let v = &m[r][c] - &factor * &m[row][c];
                m[r][c] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of the right kernel of `m` (rows are equations). Each basis vector
/// has a 1 in "its" free column and 0 in every other free column, so the
/// coordinates of any kernel vector in this basis can be read off at the
/// free columns without solving.
pub struct KernelBasis {
    pub free_columns: Vec<usize>,
    pub vectors: Vec<Vec<BigRational>>,
}

pub fn kernel_basis(mut m: Vec<Vec<BigRational>>, cols: usize) -> KernelBasis {
    for row in &m {
        debug_assert_eq!(row.len(), cols);
    }
    let pivots = rref(&mut m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let free_columns: Vec<usize> = (0..cols).filter(|c| !pivot_set.contains(c)).collect();
    let mut vectors = Vec::with_capacity(free_columns.len());
    for &fc in &free_columns {
        let mut v = vec![BigRational::zero(); cols];
        v[fc] = BigRational::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            // Row ri reads: x_pc + sum over non-pivot c of m[ri][c] x_c = 0.
            v[pc] = -m[ri][fc].clone();
        }
        vectors.push(v);
    }
    KernelBasis {
        free_columns,
        vectors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(BigInt::from(x)))
                    .collect()
            })
            .collect()
    }

    fn zm(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn ranks_agree_between_engines() {
        let cases: Vec<(Vec<&[i64]>, usize)> = vec![
            (vec![&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]], 2),
            (vec![&[0, 0], &[0, 0]], 0),
            (vec![&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]], 3),
            (vec![&[1, 2], &[3, 4], &[5, 6]], 2),
            (vec![&[7]], 1),
        ];
        for (rows, expected) in cases {
            assert_eq!(bareiss_rank(zm(&rows)), expected);
            let mut rational = qm(&rows);
            assert_eq!(rref(&mut rational).len(), expected);
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = qm(&[&[1, 2, 3, 0], &[0, 1, 1, -1]]);
        let k = kernel_basis(m.clone(), 4);
        assert_eq!(k.vectors.len(), 2);
        for v in &k.vectors {
            for row in &m {
                let dot: BigRational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero(), "kernel vector not annihilated");
            }
        }
        // Free-column coordinates are the identity on the basis itself.
        for (i, v) in k.vectors.iter().enumerate() {
            for (j, &fc) in k.free_columns.iter().enumerate() {
                let expected = if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                assert_eq!(v[fc], expected);
            }
        }
    }

    #[test]
    fn kernel_of_injective_map_is_trivial() {
        let m = qm(&[&[1, 0], &[0, 1], &[1, 1]]);
        let k = kernel_basis(m, 2);
        assert!(k.vectors.is_empty());
    }
}
