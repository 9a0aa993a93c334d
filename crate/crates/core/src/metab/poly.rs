//! Dense univariate polynomials over Q, enough for gcds.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::exact::Rational;

/// Coefficients, constant term first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// `t^d - 1`.
    pub fn cyclic(d: usize) -> Self {
        let mut c = vec![Rational::zero(); d + 1];
        c[0] = -Rational::one();
        c[d] = Rational::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn leading(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut r = self.0.clone();
        let lead = divisor.leading().clone();
        while r.len() > dd {
            let shift = r.len() - 1 - dd;
            let f = r.last().expect("nonempty") / &lead;
            for (i, c) in divisor.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading().clone();
        Poly(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        // (t - 1)(t + 2) and (t - 1)(t - 3)
        let a = Poly::from_integers(&[-2, 1, 1]);
        let b = Poly::from_integers(&[3, -4, 1]);
        assert_eq!(poly_gcd(&a, &b), Poly::from_integers(&[-1, 1]));
        assert_eq!(poly_gcd(&Poly::from_integers(&[1, 0, 1]), &Poly::cyclic(3)), Poly::from_integers(&[1]));
        // 1 + t + t^2 divides t^3 - 1
        assert_eq!(poly_gcd(&Poly::from_integers(&[2, 2, 2]), &Poly::cyclic(3)), Poly::from_integers(&[1, 1, 1]));
        assert_eq!(poly_gcd(&Poly::new(vec![]), &Poly::cyclic(1)), Poly::cyclic(1));
        assert!(poly_gcd(&Poly::new(vec![]), &Poly::new(vec![])).is_zero());
    }

    #[test]
    fn remainder_and_evaluation() {
        let p = Poly::from_integers(&[1, 2, 3, 4]);
        let r = p.rem(&Poly::cyclic(2));
        // t^2 = 1: 1 + 2t + 3 + 4t
        assert_eq!(r, Poly::from_integers(&[4, 6]));
        assert_eq!(p.eval(&Rational::one()), Rational::from_integer(10.into()));
        assert_eq!(p.degree(), Some(3));
    }
}
