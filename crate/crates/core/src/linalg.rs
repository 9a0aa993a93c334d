//! Dense linear algebra over Q.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::exact::Rational;

pub type RatMatrix = Vec<Vec<Rational>>;

/// Reduced row echelon form; returns the matrix and its pivot columns.
pub fn rref(mut m: RatMatrix) -> (RatMatrix, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(m: RatMatrix) -> usize {
    rref(m).1.len()
}

/// A basis of `{v : m v = 0}`.
pub fn nullspace(m: RatMatrix, cols: usize) -> Vec<Vec<Rational>> {
    let (reduced, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = alloc::vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let aug: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (reduced, pivots) = rref(aug);
    if pivots.len() < n || pivots[..n].iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(reduced.into_iter().map(|r| r[n..].to_vec()).collect())
}
