//! The `k_j` profile of a metabolizer, the element `z`, the map `psi` and the
//! polynomial `h_z` of the inductive step.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::poly::{poly_gcd, Poly};
use super::Metabolizer;
use crate::abelian::{echelon_generators, EchelonProfile};
use crate::error::{Error, Result};
use crate::exact::{factorize, gcd_u64, mul_mod, pow_mod, pow_u64, Rational};

/// The admissible `r` with `n - r <= r - 1`.
pub fn r_range(n: u32) -> (u32, u32) {
    ((n + 2) / 2, n)
}

fn check_r(n: u32, r: u32) -> Result<()> {
    let (lo, hi) = r_range(n);
    if r < lo || r > hi {
        return Err(Error::RangeError { r, lo, hi });
    }
    Ok(())
}

fn homogeneous(m: &Metabolizer) -> Result<(u64, u32)> {
    m.subgroup().ambient().homogeneous_type().ok_or(Error::NotHomogeneousAmbient)
}

/// Leading-term profile of the echelon generators, with the symmetry
/// `k_j = k_{n-j}` and the count `2m = l + k` verified.
pub fn k_profile(m: &Metabolizer) -> Result<EchelonProfile> {
    let ambient = m.subgroup().ambient();
    if ambient.is_trivial() {
        return Ok(EchelonProfile::new(0, &[]));
    }
    let form = echelon_generators(m.subgroup())?;
    let profile = form.profile();
    if let Some(j) = profile.asymmetry() {
        let n = profile.counts.len() - 1;
        return Err(Error::ProfileAsymmetry {
            detail: format!("k_{j} = {} but k_{} = {}", profile.counts[j], n - j, profile.counts[n - j]),
        });
    }
    let rank = ambient.rank() as u32;
    if rank != profile.ell + profile.k {
        return Err(Error::ProfileAsymmetry {
            detail: format!("rank {rank} differs from l + k = {}", profile.ell + profile.k),
        });
    }
    Ok(profile)
}

/// `z = sum_{a_i <= r-1} c_i p^{r-1-a_i} w_i`, with unit coefficients `c_i`
/// chosen so that `z` equals `p^{r-1}` in each of the pivot columns used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZElement {
    pub prime: u64,
    pub n: u32,
    pub r: u32,
    pub vector: Vec<u64>,
    pub coefficients: Vec<u64>,
    /// Pivot columns of the generators used, in generator order.
    pub pivot_columns: Vec<usize>,
    /// The remaining `k_bar` columns, ascending.
    pub tail_columns: Vec<usize>,
}

impl ZElement {
    pub fn ell_bar(&self) -> usize {
        self.pivot_columns.len()
    }

    pub fn k_bar(&self) -> usize {
        self.tail_columns.len()
    }

    /// The entries `b_1, ..., b_kbar`.
    pub fn tail(&self) -> Vec<u64> {
        self.tail_columns.iter().map(|&c| self.vector[c]).collect()
    }

    /// `z` with the pivot columns moved to the front.
    pub fn permuted(&self) -> Vec<u64> {
        self.pivot_columns.iter().chain(&self.tail_columns).map(|&c| self.vector[c]).collect()
    }

    /// Head entries equal `p^{r-1}`, tail entries are multiples of it, and
    /// `p^{n-r+1} z = 0`.
    pub fn shape_holds(&self) -> bool {
        let step = pow_u64(self.prime, self.r - 1);
        let modulus = pow_u64(self.prime, self.n);
        let killer = pow_u64(self.prime, self.n - self.r + 1);
        self.pivot_columns.iter().all(|&c| self.vector[c] == step % modulus)
            && self.tail().iter().all(|b| b % step == 0)
            && self.vector.iter().all(|&x| mul_mod(x, killer, modulus) == 0)
    }
}

pub fn build_z(m: &Metabolizer, r: u32) -> Result<ZElement> {
    let (p, n) = homogeneous(m)?;
    check_r(n, r)?;
    let echelon = echelon_generators(m.subgroup())?;
    let modulus = pow_u64(p, n);
    let inner = pow_u64(p, n - r + 1);
    let used: Vec<usize> = (0..echelon.rows().len()).filter(|&i| echelon.exponents()[i] < r).collect();
    let rows = echelon.rows();
    let exps = echelon.exponents();
    let pivots = echelon.pivots();

    let mut coefficients: Vec<u64> = Vec::with_capacity(used.len());
    for &j in &used {
        let mut acc = 1 % inner;
        for &i in &used[..coefficients.len()] {
            let w = rows[i][pivots[j]] / pow_u64(p, exps[i]);
            let s = mul_mod(coefficients[i], w % inner, inner);
            acc = (acc + inner - s) % inner;
        }
        coefficients.push(acc);
    }

    let mut vector = alloc::vec![0u64; echelon.width()];
    for (&i, &c) in used.iter().zip(&coefficients) {
        let scale = mul_mod(c, pow_u64(p, r - 1 - exps[i]), modulus);
        for (z, &w) in vector.iter_mut().zip(&rows[i]) {
            *z = (*z + mul_mod(scale, w, modulus)) % modulus;
        }
    }
    let pivot_columns: Vec<usize> = used.iter().map(|&i| pivots[i]).collect();
    let tail_columns = (0..echelon.width()).filter(|c| !pivot_columns.contains(c)).collect();
    let z = ZElement { prime: p, n, r, vector, coefficients, pivot_columns, tail_columns };
    debug_assert!(z.shape_holds());
    Ok(z)
}

/// Smallest positive integer whose class generates `(Z/p^e)^* / {+-1}`.
pub fn unit_class_generator(p: u64, e: u32) -> u64 {
    let modulus = pow_u64(p, e);
    let q_bar = pow_u64(p, e - 1) * (p - 1) / 2;
    (1..modulus).find(|&a| generates(a, p, modulus, q_bar)).expect("the group is cyclic")
}

fn generates(a: u64, p: u64, modulus: u64, q_bar: u64) -> bool {
    if a % p == 0 {
        return false;
    }
    let pm = |x: u64| x % modulus == 1 % modulus || x % modulus == modulus - 1;
    if !pm(pow_mod(a, q_bar, modulus)) {
        return false;
    }
    factorize(q_bar).iter().all(|&(l, _)| !pm(pow_mod(a, q_bar / l, modulus)))
}

/// `psi(x)_i` counts coordinates `x_j = +-a^i p^{r-1} (mod p^n)`.
pub fn psi(p: u64, n: u32, r: u32, a: u64, x: &[u64]) -> Vec<u64> {
    let inner = pow_u64(p, n - r + 1);
    let q_bar = (pow_u64(p, n - r) * (p - 1) / 2) as usize;
    let step = pow_u64(p, r - 1);
    let mut log = BTreeMap::new();
    let mut cur = 1 % inner;
    for i in 0..q_bar {
        log.insert(cur, i);
        log.insert((inner - cur) % inner, i);
        cur = mul_mod(cur, a, inner);
    }
    let mut alpha = alloc::vec![0u64; q_bar];
    for &c in x {
        if c % step == 0 && gcd_u64(c / step, p) == 1 {
            if let Some(&i) = log.get(&(c / step)) {
                alpha[i] += 1;
            }
        }
    }
    alpha
}

/// `h_z(t) = beta_0 + beta_1 t + ... + beta_{qbar-1} t^{qbar-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolynomial {
    pub beta: Vec<u64>,
    pub q_bar: usize,
    /// The generator `a` indexing the coefficients.
    pub generator: u64,
    pub ell_bar: usize,
    pub k_bar: usize,
}

impl HPolynomial {
    /// A bare polynomial with no `z` behind it; `l_bar` and `k_bar` are zero.
    pub fn from_coefficients(beta: Vec<u64>) -> Self {
        let q_bar = beta.len();
        Self { beta, q_bar, generator: 1, ell_bar: 0, k_bar: 0 }
    }

    pub fn poly(&self) -> Poly {
        Poly::new(self.beta.iter().map(|&b| Rational::from_integer(b.into())).collect())
    }

    /// `sum_{i>=1} beta_i <= k_bar <= l_bar <= beta_0`.
    pub fn chain_holds(&self) -> bool {
        let rest: u64 = self.beta.iter().skip(1).sum();
        let b0 = self.beta.first().copied().unwrap_or(0);
        rest <= self.k_bar as u64 && self.k_bar <= self.ell_bar && self.ell_bar as u64 <= b0
    }
}

pub fn h_polynomial(z: &ZElement) -> HPolynomial {
    let a = unit_class_generator(z.prime, z.n - z.r + 1);
    let beta = psi(z.prime, z.n, z.r, a, &z.vector);
    HPolynomial { q_bar: beta.len(), beta, generator: a, ell_bar: z.ell_bar(), k_bar: z.k_bar() }
}

/// Whether `(h)` is the unit ideal of `Q[t]/(t^qbar - 1)`.
pub fn ideal_is_full(h: &HPolynomial) -> bool {
    poly_gcd(&h.poly(), &Poly::cyclic(h.q_bar)).degree() == Some(0)
}

/// `psi(a x) = shift(psi(x))` on the `p^{n-r+1}`-torsion of `M`.
pub fn tau_shift_check(m: &Metabolizer, a: u64, r: u32) -> Result<bool> {
    if m.subgroup().ambient().is_trivial() {
        return Ok(true);
    }
    let (p, n) = homogeneous(m)?;
    check_r(n, r)?;
    let inner = pow_u64(p, n - r + 1);
    let q_bar = pow_u64(p, n - r) * (p - 1) / 2;
    if !generates(a, p, inner, q_bar) {
        return Err(Error::NotAGenerator { a, modulus: inner });
    }
    let g = m.subgroup().ambient();
    let torsion = m.subgroup().torsion(inner);
    for x in torsion.elements() {
        let before = psi(p, n, r, a, x.coords());
        let ax = g.scale(&x, a as i64);
        let after = psi(p, n, r, a, ax.coords());
        let len = before.len();
        if (0..len).any(|i| after[(i + 1) % len] != before[i]) {
            return Ok(false);
        }
    }
    Ok(true)
}
