use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LinkingForm;
use crate::abelian::{determinant, smith_normal_form, FiniteAbelianGroup, GroupElement, IntMatrix, SmithForm};
use crate::error::{Error, Result};
use crate::exact::{factorize, mod_inverse, Rational};
use crate::linalg;

/// `coker A` with the linking form `-x^T A^{-1} y`.
#[derive(Debug, Clone)]
pub struct Presentation {
    matrix: IntMatrix,
    group: FiniteAbelianGroup,
    form: LinkingForm,
    smith: SmithForm,
    /// For each group coordinate: the SNF row and the prime-power order.
    coords: Vec<(usize, u64)>,
    lifts: Vec<Vec<BigInt>>,
}

impl Presentation {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn form(&self) -> &LinkingForm {
        &self.form
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    /// Integer vector lifting the `i`-th cyclic generator of the group.
    pub fn lift(&self, i: usize) -> &[BigInt] {
        &self.lifts[i]
    }

    /// Class in `coker A` of an integer vector.
    pub fn class_of(&self, v: &[BigInt]) -> Result<GroupElement> {
        if v.len() != self.matrix.len() {
            return Err(Error::InvalidInput("vector length does not match the matrix".into()));
        }
        let coords: Vec<u64> = self
            .coords
            .iter()
            .map(|&(row, order)| {
                let w: BigInt = self.smith.left[row].iter().zip(v).map(|(a, b)| a * b).sum();
                w.mod_floor(&BigInt::from(order)).to_u64().expect("reduced")
            })
            .collect();
        self.group.element_u64(&coords)
    }
}

/// Group and linking form presented by a nondegenerate symmetric matrix,
/// such as the intersection form of a plumbing or a surgery diagram.
pub fn linking_from_presentation(a: &IntMatrix) -> Result<Presentation> {
    let k = a.len();
    if a.iter().any(|r| r.len() != k) {
        return Err(Error::NotSymmetric);
    }
    for i in 0..k {
        for j in 0..i {
            if a[i][j] != a[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    if determinant(a).is_zero() {
        return Err(Error::SingularMatrix);
    }
    let smith = smith_normal_form(a);
    let diag = smith.diagonal();

    // (prime, exponent, SNF row) sorted the way the group sorts its factors
    let mut tagged: Vec<(u64, u32, usize)> = Vec::new();
    for (row, d) in diag.iter().enumerate() {
        let d = d.to_u64().ok_or_else(|| Error::InvalidInput("determinant too large".into()))?;
        for (p, e) in factorize(d) {
            tagged.push((p, e, row));
        }
    }
    tagged.sort();
    let group = FiniteAbelianGroup::from_triples(&tagged.iter().map(|&(p, e, _)| (p, e, 1)).collect::<Vec<_>>())?;

    let mut coords = Vec::with_capacity(tagged.len());
    let mut lifts = Vec::with_capacity(tagged.len());
    for (&(p, e, row), f) in tagged.iter().zip(group.factors()) {
        debug_assert_eq!((p, e), (f.prime, f.exponent));
        let pe = f.order();
        let d = diag[row].to_u64().expect("checked above");
        let rest = d / pe;
        // u = 1 (mod p^e), u = 0 (mod d / p^e)
        let u = if rest == 1 {
            BigInt::one()
        } else {
            let inv = mod_inverse(rest as i128, pe as u128)?;
            BigInt::from(rest) * BigInt::from(inv)
        };
        lifts.push(smith.left_inv.iter().map(|r| &u * &r[row]).collect());
        coords.push((row, pe));
    }

    let rational: linalg::RatMatrix =
        a.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let inv = linalg::inverse(&rational).ok_or(Error::SingularMatrix)?;
    let gram: Vec<Vec<Rational>> = lifts
        .iter()
        .map(|x: &Vec<BigInt>| {
            lifts
                .iter()
                .map(|y| {
                    let mut acc = Rational::zero();
                    for (i, xi) in x.iter().enumerate() {
                        if xi.is_zero() {
                            continue;
                        }
                        for (j, yj) in y.iter().enumerate() {
                            acc += &inv[i][j] * Rational::from_integer(xi * yj);
                        }
                    }
                    -acc
                })
                .collect()
        })
        .collect();
    let form = LinkingForm::from_gram(group.clone(), &gram)?;
    Ok(Presentation { matrix: a.clone(), group, form, smith, coords, lifts })
}

impl Presentation {
    /// Absolute value of the determinant, the order of the group.
    pub fn order(&self) -> BigInt {
        determinant(&self.matrix).abs()
    }
}
