//! Dense exact linear algebra over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<BigRational>>;

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Basis of `{v : m v = 0}`, one vector per free column, in column order.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<BigRational>> {
    let mut m = m.clone();
    for row in &mut m {
        assert_eq!(row.len(), cols);
    }
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn nullspace_of_rank_one() {
        let m = vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let dot: BigRational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn empty_system_is_everything() {
        assert_eq!(nullspace(&Vec::new(), 2).len(), 2);
    }
}
