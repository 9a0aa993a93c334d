//! Exact rational arithmetic, residues in Q/Z and Q/2Z, and the small
//! number-theoretic helpers the rest of the crate leans on.
//!
//! Rationals are arbitrary precision. Residues modulo the order of a cyclic
//! factor are kept in machine integers: every factor order fits in `u64` and
//! products are formed in `u128`, so nothing here can overflow.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Build `num/den` in lowest terms.
pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(alloc::format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Target of a residue: Q/Z or Q/2Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modulus {
    One,
    Two,
}

impl Modulus {
    pub fn as_int(self) -> i64 {
        match self {
            Modulus::One => 1,
            Modulus::Two => 2,
        }
    }
}

/// A rational number reduced into `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Residue {
    value: Rational,
    modulus: Modulus,
}

/// Unique representative of `q` in `[0, modulus)`.
pub fn normalize_mod(q: &Rational, modulus: Modulus) -> Residue {
    let m = BigInt::from(modulus.as_int());
    let num = q.numer();
    let den = q.denom();
    let r = num.mod_floor(&(&m * den));
    Residue { value: Rational::new(r, den.clone()), modulus }
}

impl Residue {
    pub fn new(q: &Rational, modulus: Modulus) -> Self {
        normalize_mod(q, modulus)
    }

    pub fn zero(modulus: Modulus) -> Self {
        Residue { value: Rational::zero(), modulus }
    }

    /// `num/den` reduced mod `modulus`.
    pub fn from_ratio(num: i128, den: i128, modulus: Modulus) -> Self {
        normalize_mod(&ratio(num, den), modulus)
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn scale(&self, k: i64) -> Self {
        normalize_mod(&(&self.value * BigInt::from(k)), self.modulus)
    }

    /// Reduce a Q/2Z class to its Q/Z class.
    pub fn to_mod_one(&self) -> Self {
        normalize_mod(&self.value, Modulus::One)
    }

    /// Half of a Q/2Z class, as a well-defined Q/Z class.
    pub fn half(&self) -> Self {
        assert_eq!(self.modulus, Modulus::Two, "halving needs a Q/2Z residue");
        normalize_mod(&(&self.value / BigInt::from(2)), Modulus::One)
    }

    /// Whether `q` (any rational) is congruent to this residue.
    pub fn is_congruent(&self, q: &Rational) -> bool {
        normalize_mod(q, self.modulus) == *self
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

impl Add for &Residue {
    type Output = Residue;
    fn add(self, rhs: &Residue) -> Residue {
        assert_eq!(self.modulus, rhs.modulus, "adding residues with different moduli");
        normalize_mod(&(&self.value + &rhs.value), self.modulus)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        &self + &rhs
    }
}

impl Sub for &Residue {
    type Output = Residue;
    fn sub(self, rhs: &Residue) -> Residue {
        self + &(-rhs)
    }
}

impl Neg for &Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        normalize_mod(&-&self.value, self.modulus)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        -&self
    }
}

/// `b` in `[0, m)` with `a*b = 1 (mod m)`.
pub fn mod_inverse(a: i128, m: u128) -> Result<u128> {
    if m == 0 {
        return Err(Error::InvalidInput("modulus must be positive".to_string()));
    }
    if m == 1 {
        return Ok(0);
    }
    let m_i = m as i128;
    let (g, x, _) = ext_gcd(a.rem_euclid(m_i), m_i);
    if g != 1 {
        return Err(Error::NotInvertible { a, modulus: m });
    }
    Ok(x.rem_euclid(m_i) as u128)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// Largest `e` with `p^e | a`.
pub fn padic_valuation(a: &BigInt, p: u64) -> Result<u32> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime { value: p });
    }
    let p = BigInt::from(p);
    let mut a = a.abs();
    let mut e = 0;
    loop {
        let (q, r) = a.div_rem(&p);
        if !r.is_zero() {
            return Ok(e);
        }
        a = q;
        e += 1;
    }
}

/// Valuation of a nonzero machine integer; `None` for zero.
pub(crate) fn valuation(a: u128, p: u64) -> Option<u32> {
    if a == 0 {
        return None;
    }
    let p = p as u128;
    let (mut a, mut e) = (a, 0);
    while a % p == 0 {
        a /= p;
        e += 1;
    }
    Some(e)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization with primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub(crate) fn pow_u64(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("prime power does not fit in 64 bits")
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &num_bigint::BigUint) -> Option<num_bigint::BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}
