//! Gaussian elimination over GF(2^k).

use crate::finite_field::{Fe, Field};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Fe>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let m = rows[i][c];
                for j in 0..ncols {
                    let v = rows[r][j];
                    rows[i][j] += m * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// A basis of the right kernel of the matrix with the given rows.
pub fn nullspace(rows: &[Vec<Fe>], ncols: usize, field: Field) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = m[i][free];
        }
        basis.push(v);
    }
    basis
}

pub fn rank(rows: &[Vec<Fe>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = Field::new(4).unwrap();
        let rows: Vec<Vec<Fe>> = [[1u32, 2, 3, 4], [5, 6, 7, 8], [4, 4, 4, 12]]
            .iter()
            .map(|r| r.iter().map(|&b| f.elem(b)).collect())
            .collect();
        let ker = nullspace(&rows, 4, f);
        assert_eq!(ker.len() + rank(&rows, 4), 4);
        for v in &ker {
            for r in &rows {
                let dot = r.iter().zip(v).fold(f.zero(), |acc, (&a, &b)| acc + a * b);
                assert!(dot.is_zero());
            }
        }
    }
}
