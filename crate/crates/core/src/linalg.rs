//! Dense linear algebra over prime fields.

use crate::ratfun::modp::{inv_mod, mul_mod, sub_mod};

/// Reduced row echelon form with the pivot column of each nonzero row.
#[derive(Debug, Clone)]
pub struct Rref {
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nullspace vector attached to the first free column `j`, scaled so
    /// that its `j` entry is 1. Its support lies in columns `0..=j`.
    pub fn first_null_vector(&self, p: u64) -> Option<(usize, Vec<u64>)> {
        let j = (0..self.ncols).find(|c| !self.pivots.contains(c))?;
        let mut v = vec![0u64; self.ncols];
        v[j] = 1;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if pc < j {
                v[pc] = sub_mod(0, row[j], p);
            }
        }
        Some((j, v))
    }
}

pub fn rref_mod(mut m: Vec<Vec<u64>>, ncols: usize, p: u64) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p).unwrap();
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Rref {
        rows: m,
        pivots,
        ncols,
    }
}

/// Rank by forward elimination.
pub fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p).unwrap();
        let pivot_row = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if row[c] != 0 {
                let f = mul_mod(row[c], inv, p);
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 2147483647;

    #[test]
    fn rank_of_dependent_rows() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod(m, P), 2);
    }

    #[test]
    fn null_vector_of_dependent_columns() {
        // columns: c0, c1 = 2*c0, c2
        let m = vec![vec![1, 2, 0], vec![3, 6, 1]];
        let rref = rref_mod(m, 3, P);
        let (j, v) = rref.first_null_vector(P).unwrap();
        assert_eq!(j, 1);
        assert_eq!(v, vec![P - 2, 1, 0]);
    }
}
