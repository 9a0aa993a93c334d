//! Torsion linking forms and their quadratic refinements.
//!
//! A form on a group of exponent `N` takes values in `(1/N)Z/Z`, so it is
//! stored as an integer matrix `c` with `gram[i][j] = c[i][j] / N (mod 1)`.

mod presentation;
mod refinement;
mod rho;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::abelian::{FiniteAbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::exact::{gcd_u64, mul_mod, pow_u64, Modulus, Rational, Residue};

pub use presentation::{linking_from_presentation, Presentation};
pub use refinement::{polarize, quadratic_refinement, refinement_vanishes_on, QuadraticRefinement};
pub use rho::{rho_surgery, RhoMap};
pub(crate) use rho::surgery_form;

/// A symmetric bilinear pairing `G x G -> Q/Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkingForm {
    group: FiniteAbelianGroup,
    exponent: u64,
    scaled: Vec<Vec<u64>>,
}

impl LinkingForm {
    pub fn trivial() -> Self {
        Self { group: FiniteAbelianGroup::trivial(), exponent: 1, scaled: Vec::new() }
    }

    /// Build a form from its values on the cyclic generators.
    ///
    /// Entry `(i, j)` must be killed by `gcd(d_i, d_j)` and the matrix must be
    /// symmetric modulo 1.
    pub fn from_gram(group: FiniteAbelianGroup, gram: &[Vec<Rational>]) -> Result<Self> {
        let k = group.rank();
        if gram.len() != k || gram.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInput(alloc::format!("gram matrix must be {k} x {k}")));
        }
        let exponent = group.exponent();
        let orders = group.orders();
        let mut scaled = alloc::vec![alloc::vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let g = gcd_u64(orders[i], orders[j]);
                let killed = &gram[i][j] * BigInt::from(g);
                if !killed.is_integer() {
                    return Err(Error::InvalidInput(alloc::format!(
                        "gram entry ({i},{j}) = {} is not killed by {g}",
                        gram[i][j]
                    )));
                }
                let num = (&gram[i][j] * BigInt::from(exponent)).to_integer();
                scaled[i][j] = num.mod_floor(&BigInt::from(exponent)).to_u64().expect("reduced mod N");
            }
        }
        for i in 0..k {
            for j in 0..i {
                if scaled[i][j] != scaled[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Self { group, exponent, scaled })
    }

    /// Form given by numerators over the group exponent.
    pub(crate) fn from_scaled(group: FiniteAbelianGroup, scaled: Vec<Vec<u64>>) -> Self {
        let exponent = group.exponent();
        debug_assert!(scaled.iter().flatten().all(|&c| c < exponent));
        Self { group, exponent, scaled }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// Exponent `N` of the group; every value lies in `(1/N)Z/Z`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn gram(&self) -> Vec<Vec<Residue>> {
        let n = self.exponent as i128;
        self.scaled
            .iter()
            .map(|row| row.iter().map(|&c| Residue::from_ratio(c as i128, n, Modulus::One)).collect())
            .collect()
    }

    /// Numerator of `lambda(x, y)` over `N`, in `[0, N)`.
    pub fn pair_scaled(&self, x: &GroupElement, y: &GroupElement) -> u64 {
        let n = self.exponent;
        let (xs, ys) = (x.coords(), y.coords());
        let mut acc = 0u64;
        for (i, &xi) in xs.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let mut inner = 0u64;
            for (j, &yj) in ys.iter().enumerate() {
                if yj != 0 && self.scaled[i][j] != 0 {
                    inner = (inner + mul_mod(self.scaled[i][j], yj, n)) % n;
                }
            }
            acc = (acc + mul_mod(inner, xi, n)) % n;
        }
        acc
    }

    pub fn pair(&self, x: &GroupElement, y: &GroupElement) -> Residue {
        Residue::from_ratio(self.pair_scaled(x, y) as i128, self.exponent as i128, Modulus::One)
    }

    pub fn negate(&self) -> Self {
        let n = self.exponent;
        let scaled = self
            .scaled
            .iter()
            .map(|row| row.iter().map(|&c| (n - c) % n).collect())
            .collect();
        Self { group: self.group.clone(), exponent: n, scaled }
    }

    /// Block sum; coordinates are re-sorted into canonical order.
    pub fn direct_sum(forms: &[&LinkingForm]) -> Self {
        let groups: Vec<&FiniteAbelianGroup> = forms.iter().map(|f| &f.group).collect();
        let (group, layout) = FiniteAbelianGroup::direct_sum(&groups);
        let exponent = group.exponent();
        let mut scaled = alloc::vec![alloc::vec![0u64; group.rank()]; group.rank()];
        for (form, pos) in forms.iter().zip(&layout) {
            let factor = exponent / form.exponent;
            for (i, &pi) in pos.iter().enumerate() {
                for (j, &pj) in pos.iter().enumerate() {
                    scaled[pi][pj] = form.scaled[i][j] * factor;
                }
            }
        }
        Self { group, exponent, scaled }
    }

    /// Restriction to the `p`-primary summand.
    pub fn primary_part(&self, p: u64) -> Self {
        let pp = self.group.primary_part(p);
        let exponent = pp.group.exponent();
        let scaled = pp
            .indices
            .iter()
            .map(|&i| {
                pp.indices
                    .iter()
                    .map(|&j| {
                        let v = self.scaled[i][j] as u128 * exponent as u128;
                        debug_assert_eq!(v % self.exponent as u128, 0);
                        (v / self.exponent as u128) as u64
                    })
                    .collect()
            })
            .collect();
        Self { group: pp.group, exponent, scaled }
    }

    /// Whether `x -> lambda(x, -)` is injective.
    ///
    /// Checked one prime at a time on the `p`-torsion, where the pairing
    /// becomes a matrix over `F_p`.
    pub fn is_nondegenerate(&self) -> bool {
        let factors = self.group.factors();
        for p in self.group.primes() {
            let idx: Vec<usize> = (0..factors.len()).filter(|&i| factors[i].prime == p).collect();
            let step = (self.exponent / p) as u128;
            let w: Vec<Vec<u64>> = idx
                .iter()
                .map(|&i| {
                    let lift = pow_u64(p, factors[i].exponent - 1) as u128;
                    idx.iter()
                        .map(|&j| {
                            let v = self.scaled[i][j] as u128 * lift;
                            debug_assert_eq!(v % step, 0);
                            ((v / step) % p as u128) as u64
                        })
                        .collect()
                })
                .collect();
            if rank_mod_p(w, p) < idx.len() {
                return false;
            }
        }
        true
    }
}

/// `lambda_u(x, y) = u x y / p^n` on `Z/p^n`.
pub fn standard_cyclic_form(p: u64, n: u32, u: i64) -> Result<LinkingForm> {
    if p == 2 || !crate::exact::is_prime(p) {
        return Err(Error::NotOddPrime { value: p });
    }
    if n == 0 {
        return Err(Error::InvalidInput("exponent must be positive".into()));
    }
    let modulus = pow_u64(p, n);
    let c = (u as i128).rem_euclid(modulus as i128) as u64;
    if c % p == 0 {
        return Err(Error::NotAUnit { u, modulus });
    }
    let group = FiniteAbelianGroup::homogeneous(p, n, 1)?;
    Ok(LinkingForm::from_scaled(group, alloc::vec![alloc::vec![c]]))
}

/// `lambda_{u_1} + ... + lambda_{u_k}` on `(Z/p^n)^k`.
pub fn diagonal_form(p: u64, n: u32, units: &[i64]) -> Result<LinkingForm> {
    let forms = units.iter().map(|&u| standard_cyclic_form(p, n, u)).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&LinkingForm> = forms.iter().collect();
    Ok(LinkingForm::direct_sum(&refs))
}

fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] % p != 0) else { continue };
        m.swap(r, pr);
        let inv = crate::exact::mod_inverse(m[r][c] as i128, p as u128).expect("nonzero mod p") as u64;
        for i in 0..rows {
            if i != r && m[i][c] % p != 0 {
                let f = mul_mod(m[i][c], inv, p);
                for j in 0..cols {
                    let s = mul_mod(f, m[r][j], p);
                    m[i][j] = (m[i][j] % p + p - s) % p;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use alloc::vec;

    fn res(n: i128, d: i128) -> Residue {
        Residue::from_ratio(n, d, Modulus::One)
    }

    #[test]
    fn standard_forms() {
        let l1 = standard_cyclic_form(3, 1, 1).unwrap();
        let g = l1.group().clone();
        let e = |x| g.element(&[x]).unwrap();
        assert_eq!(l1.pair(&e(1), &e(1)), res(1, 3));
        assert_eq!(l1.pair(&e(1), &e(2)), res(2, 3));
        assert_eq!(l1.pair(&e(2), &e(2)), res(1, 3));
        let l2 = standard_cyclic_form(3, 1, 2).unwrap();
        assert_eq!(l2.pair(&e(1), &e(1)), res(2, 3));
        let l27 = standard_cyclic_form(3, 3, 1).unwrap();
        let x = l27.group().element(&[9]).unwrap();
        assert!(l27.pair(&x, &x).is_zero());
        assert!(matches!(standard_cyclic_form(3, 3, 6), Err(Error::NotAUnit { .. })));
        assert!(matches!(standard_cyclic_form(2, 3, 1), Err(Error::NotOddPrime { .. })));
    }

    #[test]
    fn sums_and_negation() {
        let l1 = standard_cyclic_form(3, 1, 1).unwrap();
        let l2 = standard_cyclic_form(3, 1, 2).unwrap();
        let s11 = LinkingForm::direct_sum(&[&l1, &l1]);
        let g = s11.group().clone();
        assert!(s11.pair(&g.element(&[1, 0]).unwrap(), &g.element(&[0, 1]).unwrap()).is_zero());
        let s12 = LinkingForm::direct_sum(&[&l1, &l2]);
        let d = g.element(&[1, 1]).unwrap();
        assert!(s12.pair(&d, &d).is_zero());
        assert_eq!(l1.negate(), l2);
        assert_eq!(s12.negate().negate(), s12);
        assert_eq!(LinkingForm::trivial().negate(), LinkingForm::trivial());
        assert_eq!(LinkingForm::direct_sum(&[]), LinkingForm::trivial());
        assert_eq!(LinkingForm::direct_sum(&[&LinkingForm::trivial(), &l1]), l1);
    }

    #[test]
    fn direct_sum_of_mixed_orders_reorders_blocks() {
        let l27 = standard_cyclic_form(3, 3, 1).unwrap();
        let l3 = standard_cyclic_form(3, 1, 2).unwrap();
        let s = LinkingForm::direct_sum(&[&l27, &l3]);
        assert_eq!(s.group().orders(), vec![3, 27]);
        assert_eq!(s.gram(), vec![vec![res(2, 3), res(0, 1)], vec![res(0, 1), res(1, 27)]]);
        assert_eq!(s.primary_part(3), s);
    }

    #[test]
    fn nondegeneracy() {
        assert!(standard_cyclic_form(7, 3, 5).unwrap().is_nondegenerate());
        let g = FiniteAbelianGroup::from_cyclic_orders(&[27]).unwrap();
        let degenerate = LinkingForm::from_gram(g, &[vec![ratio(3, 27)]]).unwrap();
        assert!(!degenerate.is_nondegenerate());
        assert!(LinkingForm::trivial().is_nondegenerate());
        let hyperbolic = LinkingForm::from_gram(
            FiniteAbelianGroup::from_cyclic_orders(&[3, 3]).unwrap(),
            &[vec![ratio(0, 1), ratio(1, 3)], vec![ratio(1, 3), ratio(0, 1)]],
        )
        .unwrap();
        assert!(hyperbolic.is_nondegenerate());
    }

    #[test]
    fn gram_validation() {
        let g = FiniteAbelianGroup::from_cyclic_orders(&[3, 9]).unwrap();
        // entry between Z/3 and Z/9 must be killed by 3
        assert!(LinkingForm::from_gram(
            g.clone(),
            &[vec![ratio(1, 3), ratio(1, 9)], vec![ratio(1, 9), ratio(1, 9)]]
        )
        .is_err());
        assert_eq!(
            LinkingForm::from_gram(g, &[vec![ratio(1, 3), ratio(1, 3)], vec![ratio(2, 3), ratio(1, 9)]]),
            Err(Error::NotSymmetric)
        );
    }
}
