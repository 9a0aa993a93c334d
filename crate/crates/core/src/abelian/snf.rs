//! Smith normal form over the integers, with unimodular transforms.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `left * a * right = diag`, with `diag[i][i]` dividing `diag[i+1][i+1]`
/// and all diagonal entries non-negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diag: IntMatrix,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.diag.len().min(self.diag.first().map_or(0, Vec::len));
        (0..k).map(|i| self.diag[i][i].clone()).collect()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                *x += k * y;
            }
        }
        for row in self.u_inv.iter_mut() {
            let t = &row[i] * k;
            row[j] -= t;
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -&*x;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let t = &row[j] * k;
                row[i] += t;
            }
        }
        let src = self.v_inv[i].clone();
        for (x, y) in self.v_inv[j].iter_mut().zip(&src) {
            *x -= k * y;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                row.swap(i, j);
            }
        }
        self.v_inv.swap(i, j);
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut w = Work {
        a: a.clone(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
    };

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !w.a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(w);
            };
            if bi != t {
                w.swap_rows(t, bi);
            }
            if bj != t {
                w.swap_cols(t, bj);
            }

            let mut dirty = false;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.add_row(i, t, &-q);
                    dirty |= !w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.add_col(j, t, &-q);
                    dirty |= !w.a[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&w.a[t][t])));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    finish(w)
}

fn finish(w: Work) -> SmithForm {
    SmithForm { diag: w.a, left: w.u, left_inv: w.u_inv, right: w.v, right_inv: w.v_inv }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Whether `a x = b` has a solution `x` in `Z^cols`.
pub fn has_integer_solution(a: &IntMatrix, b: &[BigInt]) -> bool {
    let s = smith_normal_form(a);
    let ub: Vec<BigInt> = s.left.iter().map(|row| row.iter().zip(b).map(|(u, x)| u * x).sum()).collect();
    let d = s.diagonal();
    ub.iter().enumerate().all(|(i, v)| match d.get(i) {
        Some(di) if !di.is_zero() => v.is_multiple_of(di),
        _ => v.is_zero(),
    })
}

pub fn to_int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(mat_mul(&mat_mul(&s.left, a), &s.right), s.diag);
        assert_eq!(mat_mul(&s.left, &s.left_inv), identity(a.len()));
        let cols = a.first().map_or(0, Vec::len);
        assert_eq!(mat_mul(&s.right, &s.right_inv), identity(cols));
        assert_eq!(determinant(&s.left).abs(), BigInt::one());
        assert_eq!(determinant(&s.right).abs(), BigInt::one());
        for (i, row) in s.diag.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    assert!(x.is_zero());
                }
            }
        }
        let d = s.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn examples() {
        let d = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(check(&to_int_matrix(&[vec![7]])).diagonal(), d(&[7]));
        assert_eq!(check(&to_int_matrix(&[vec![-7]])).diagonal(), d(&[7]));
        assert_eq!(check(&to_int_matrix(&[vec![2, 1], vec![1, 2]])).diagonal(), d(&[1, 3]));
        assert_eq!(check(&to_int_matrix(&[vec![0]])).diagonal(), d(&[0]));
        assert_eq!(
            check(&to_int_matrix(&[vec![2, 0], vec![0, 3]])).diagonal(),
            d(&[1, 6])
        );
        check(&to_int_matrix(&[vec![4, 6, 2], vec![6, 9, 3]]));
    }

    #[test]
    fn integer_solvability() {
        let a = to_int_matrix(&[vec![2, 0], vec![0, 3]]);
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(has_integer_solution(&a, &b(&[4, 9])));
        assert!(!has_integer_solution(&a, &b(&[1, 0])));
        let a = to_int_matrix(&[vec![1, 1], vec![2, 2]]);
        assert!(has_integer_solution(&a, &b(&[3, 6])));
        assert!(!has_integer_solution(&a, &b(&[3, 5])));
        assert!(has_integer_solution(&to_int_matrix(&[vec![3, 3]]), &b(&[6])));
        assert!(!has_integer_solution(&to_int_matrix(&[vec![3, 3]]), &b(&[2])));
    }

    #[test]
    fn determinant_matches_expansion() {
        assert_eq!(determinant(&to_int_matrix(&[vec![2, 1], vec![1, 2]])), BigInt::from(3));
        assert_eq!(
            determinant(&to_int_matrix(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]])),
            BigInt::from(-2)
        );
    }

    proptest! {
        #[test]
        fn transforms_are_exact(rows in 1usize..4, cols in 1usize..4, seed in proptest::collection::vec(-9i64..10, 16)) {
            let a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            let a = to_int_matrix(&a);
            let s = check(&a);
            if rows == cols {
                let prod = s.diagonal().iter().fold(BigInt::one(), |acc, x| acc * x);
                prop_assert_eq!(prod, determinant(&a).abs());
            }
        }
    }
}
