//! Echelon generating sets for subgroups of `(Z/p^n)^k`.
//!
//! Every subgroup has a unique reduced generating set `w_1, ..., w_l` with
//!
//! * a pivot entry `p^{a_i}` in column `c_i`, and `a_1 <= a_2 <= ...`
//!   (ties ordered by column);
//! * zeros of `w_i` in the pivot columns of earlier rows;
//! * every entry of `w_i` divisible by `p^{a_i}`;
//! * the entry of `w_i` in a later pivot column `c_k` reduced into `[0, p^{a_k})`;
//! * `c_i` the smallest column where the span of `w_i, w_{i+1}, ...` reaches
//!   valuation `a_i`.
//!
//! The subgroup is then the internal direct sum of the cyclic groups
//! `<w_i> = Z/p^{n - a_i}`. Permuting the pivot columns to the front gives
//! the triangular display with leading terms `p^{a_i}` on the diagonal.

use alloc::vec;
use alloc::vec::Vec;

use crate::exact::{mod_inverse, mul_mod, pow_u64, valuation};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EchelonForm {
    prime: u64,
    n: u32,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    exponents: Vec<u32>,
}

/// Leading-term data of an echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EchelonProfile {
    /// `a_1 <= ... <= a_l`.
    pub exponents: Vec<u32>,
    /// `counts[j]` = number of generators with leading term `p^j`, for
    /// `0 <= j <= n`, with the convention `counts[n] = counts[0]`.
    pub counts: Vec<u32>,
    /// Number of generators.
    pub ell: u32,
    /// `k = k_0`.
    pub k: u32,
}

impl EchelonProfile {
    pub fn new(n: u32, exponents: &[u32]) -> Self {
        let mut counts = vec![0u32; n as usize + 1];
        for &a in exponents {
            counts[a as usize] += 1;
        }
        counts[n as usize] = counts[0];
        Self {
            exponents: exponents.to_vec(),
            ell: exponents.len() as u32,
            k: counts[0],
            counts,
        }
    }

    /// First `j` with `k_j != k_{n-j}`, if any.
    pub fn asymmetry(&self) -> Option<usize> {
        let n = self.counts.len() - 1;
        (0..=n).find(|&j| self.counts[j] != self.counts[n - j])
    }
}

impl EchelonForm {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn modulus(&self) -> u64 {
        pow_u64(self.prime, self.n)
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn profile(&self) -> EchelonProfile {
        EchelonProfile::new(self.n, &self.exponents)
    }

    /// Order of row `i`, namely `p^{n - a_i}`.
    pub fn row_order(&self, i: usize) -> u64 {
        pow_u64(self.prime, self.n - self.exponents[i])
    }

    /// `log_p` of the subgroup order.
    pub fn log_order(&self) -> u32 {
        self.exponents.iter().map(|a| self.n - a).sum()
    }

    /// Column order putting pivots first (in row order), then the remaining
    /// columns ascending.
    pub fn column_permutation(&self) -> Vec<usize> {
        let mut perm = self.pivots.clone();
        perm.extend((0..self.width).filter(|c| !self.pivots.contains(c)));
        perm
    }

    /// Rows re-indexed by [`Self::column_permutation`]: row `i` then has
    /// `i` leading zeros followed by `p^{a_i}`.
    pub fn permuted_rows(&self) -> Vec<Vec<u64>> {
        let perm = self.column_permutation();
        self.rows.iter().map(|r| perm.iter().map(|&c| r[c]).collect()).collect()
    }
}

/// Reduced echelon form of the span of `gens` in `(Z/p^n)^width`.
pub fn echelonize(p: u64, n: u32, width: usize, gens: &[Vec<u64>]) -> EchelonForm {
    let modulus = pow_u64(p, n);
    let mut pending: Vec<Vec<u64>> = gens
        .iter()
        .map(|g| {
            assert_eq!(g.len(), width, "generator width mismatch");
            g.iter().map(|&x| x % modulus).collect()
        })
        .collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut pivots = Vec::new();
    let mut exponents = Vec::new();

    loop {
        // Minimal valuation over pending rows and free columns; ties go to the
        // smallest column.
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in pending.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                if pivots.contains(&c) {
                    continue;
                }
                if let Some(v) = valuation(x as u128, p) {
                    let cand = (v, c, r);
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
        let Some((a, c, r)) = best else { break };
        let mut row = pending.swap_remove(r);
        let pa = pow_u64(p, a);
        let unit = row[c] / pa;
        let inv = mod_inverse(unit as i128, modulus as u128).expect("unit part is invertible") as u64;
        for x in row.iter_mut() {
            *x = mul_mod(*x, inv, modulus);
        }
        debug_assert_eq!(row[c], pa % modulus);

        for other in pending.iter_mut() {
            let q = other[c] / pa;
            sub_multiple(other, &row, q, modulus);
            debug_assert_eq!(other[c], 0);
        }
        for earlier in rows.iter_mut() {
            let q = earlier[c] / pa;
            sub_multiple(earlier, &row, q, modulus);
        }
        rows.push(row);
        pivots.push(c);
        exponents.push(a);
        pending.retain(|r| r.iter().any(|&x| x != 0));
    }

    EchelonForm { prime: p, n, width, rows, pivots, exponents }
}

fn sub_multiple(target: &mut [u64], row: &[u64], q: u64, modulus: u64) {
    if q == 0 {
        return;
    }
    for (t, &x) in target.iter_mut().zip(row) {
        let s = mul_mod(q, x, modulus);
        *t = (*t + modulus - s) % modulus;
    }
}

/// All reduced echelon forms of subgroups of order `p^log_order` inside the
/// subgroup of `(Z/p^n)^k` whose column `j` consists of multiples of
/// `p^{floors[j]}`.
pub(crate) fn enumerate_forms(p: u64, n: u32, floors: &[u32], log_order: u32) -> Vec<EchelonForm> {
    let mut out = Vec::new();
    let mut shape = Vec::new();
    shapes(p, n, floors, log_order, &mut shape, &mut |shape| fill(p, n, floors, shape, &mut out));
    out
}

fn shapes(
    p: u64,
    n: u32,
    floors: &[u32],
    remaining: u32,
    shape: &mut Vec<(u32, usize)>,
    emit: &mut dyn FnMut(&[(u32, usize)]),
) {
    if remaining == 0 {
        emit(shape);
        return;
    }
    let last = shape.last().copied();
    for a in last.map_or(0, |l| l.0)..n {
        if n - a > remaining {
            continue;
        }
        for c in 0..floors.len() {
            if floors[c] > a || shape.iter().any(|s| s.1 == c) {
                continue;
            }
            if let Some((la, lc)) = last {
                if a == la && c <= lc {
                    continue;
                }
            }
            shape.push((a, c));
            shapes(p, n, floors, remaining - (n - a), shape, emit);
            shape.pop();
        }
    }
}

fn fill(p: u64, n: u32, floors: &[u32], shape: &[(u32, usize)], out: &mut Vec<EchelonForm>) {
    let modulus = pow_u64(p, n);
    let width = floors.len();
    // Options for every (row, column) entry, flattened row-major.
    let mut options: Vec<Vec<u64>> = Vec::with_capacity(shape.len() * width);
    for (i, &(a, c)) in shape.iter().enumerate() {
        for j in 0..width {
            let opts = if j == c {
                vec![pow_u64(p, a)]
            } else if shape[..i].iter().any(|s| s.1 == j) {
                vec![0]
            } else {
                let bound = match shape[i + 1..].iter().find(|s| s.1 == j) {
                    Some(&(ak, _)) => pow_u64(p, ak),
                    None => modulus,
                };
                let min_val = if j < c { a + 1 } else { a }.max(floors[j]);
                if min_val >= n {
                    vec![0]
                } else {
                    let step = pow_u64(p, min_val);
                    (0..bound).step_by(step as usize).collect()
                }
            };
            options.push(opts);
        }
    }
    let mut idx = vec![0usize; options.len()];
    loop {
        let rows: Vec<Vec<u64>> = (0..shape.len())
            .map(|i| (0..width).map(|j| options[i * width + j][idx[i * width + j]]).collect())
            .collect();
        out.push(EchelonForm {
            prime: p,
            n,
            width,
            rows,
            pivots: shape.iter().map(|s| s.1).collect(),
            exponents: shape.iter().map(|s| s.0).collect(),
        });
        // odometer
        let mut k = idx.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}
