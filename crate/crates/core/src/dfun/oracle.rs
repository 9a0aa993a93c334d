//! Exhaustive check of the vanishing statement for functions on `Z/p^n`
//! whose sum over `2m` copies vanishes on a metabolizer.
//!
//! The unknowns are `f(1), ..., f((p^n - 1)/2)`; `f(0) = 0` and `f(-g) = f(g)`
//! are built in. Each element `x` of `M` contributes the linear constraint
//! `sum_j c_j(x) f(j) = 0`, where `c_j(x)` counts coordinates of `x` equal to
//! `+-j`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abelian::{has_integer_solution, GroupElement};
use crate::error::{Error, Result};
use crate::exact::{pow_u64, Rational};
use crate::linalg;
use crate::linking::{quadratic_refinement, LinkingForm};
use crate::metab::{enumerate_metabolizers, Metabolizer};

/// Whether some `f` with `f = q (mod 2)` on every coordinate also satisfies
/// the constraints of a metabolizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compatibility {
    /// No `f` is compatible with the form at all: the form is not an
    /// orthogonal sum of equal cyclic forms.
    EmptyCoset,
    /// A compatible solution exists.
    Solvable,
    /// Compatible functions exist, but none vanishes on this metabolizer.
    Unsolvable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintCertificate {
    pub generators: Vec<GroupElement>,
    /// Distinct nonzero constraint rows.
    pub constraints: usize,
    pub rank: usize,
    pub nullity: usize,
    /// Orbit representatives `g` with `f(g) = 0` on the whole solution space.
    pub forced_zero: Vec<u64>,
    /// Nonzero orbit representatives in the subgroup generated by `p^{(n-1)/2}`.
    pub targets: Vec<u64>,
    pub conclusion_holds: bool,
    pub compatibility: Compatibility,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropositionCertificate {
    pub p: u64,
    pub n: u32,
    /// Number of copies `2m`.
    pub copies: usize,
    pub candidates: usize,
    pub metabolizers: Vec<ConstraintCertificate>,
}

impl PropositionCertificate {
    pub fn holds(&self) -> bool {
        self.metabolizers.iter().all(|c| c.conclusion_holds)
    }

    pub fn vacuous(&self) -> bool {
        self.metabolizers.is_empty()
    }
}

/// Validate `p = 3 (mod 4)` prime, `n` odd and `form` on `(Z/p^n)^(2m)`; returns `2m`.
pub fn check_setting(p: u64, n: u32, form: &LinkingForm) -> Result<usize> {
    if p % 4 != 3 || !crate::exact::is_prime(p) {
        return Err(Error::InvalidInput(alloc::format!("p = {p} must be a prime congruent to 3 mod 4")));
    }
    if n % 2 == 0 {
        return Err(Error::NOddRequired { n });
    }
    let g = form.group();
    if g.homogeneous_type() != Some((p, n)) || g.rank() % 2 != 0 {
        return Err(Error::InvalidInput(alloc::format!("form must live on (Z/{}^{n})^(2m)", p)));
    }
    Ok(g.rank())
}

/// Representatives in `[0, 2)` of `q(1), ..., q((p^n-1)/2)` along each
/// axis, when the form is diagonal with equal entries; otherwise `None`.
pub fn compatibility_profile(form: &LinkingForm) -> Result<Option<Vec<Rational>>> {
    let k = form.group().rank();
    let gram = form.gram();
    let diagonal = (0..k).all(|i| (0..k).all(|j| i == j || gram[i][j].is_zero()));
    if k == 0 || !diagonal || (1..k).any(|i| gram[i][i] != gram[0][0]) {
        return Ok(None);
    }
    let q = quadratic_refinement(form)?;
    let g = form.group();
    let modulus = g.orders()[0];
    let axis = |x: u64| {
        let mut c = alloc::vec![0u64; k];
        c[0] = x;
        g.element_u64(&c).expect("in range")
    };
    Ok(Some((1..=(modulus - 1) / 2).map(|x| q.value(&axis(x)).value().clone()).collect()))
}

/// Constraints, solution space and conclusion for one metabolizer.
pub fn certify_metabolizer(
    p: u64,
    n: u32,
    m: &Metabolizer,
    compatible: Option<&[Rational]>,
) -> ConstraintCertificate {
    let modulus = pow_u64(p, n);
    let half = ((modulus - 1) / 2) as usize;
    let mut rows: BTreeSet<Vec<u64>> = BTreeSet::new();
    for x in m.subgroup().elements() {
        let mut row = alloc::vec![0u64; half];
        for &c in x.coords() {
            let j = c.min(modulus - c);
            if j != 0 {
                row[j as usize - 1] += 1;
            }
        }
        if row.iter().any(|&c| c != 0) {
            rows.insert(row);
        }
    }
    let matrix: linalg::RatMatrix =
        rows.iter().map(|r| r.iter().map(|&c| Rational::from_integer(c.into())).collect()).collect();
    let basis = linalg::nullspace(matrix, half);
    let rank = half - basis.len();
    let forced_zero: Vec<u64> =
        (0..half).filter(|&j| basis.iter().all(|v| v[j].is_zero())).map(|j| j as u64 + 1).collect();
    let step = pow_u64(p, (n - 1) / 2);
    let targets: Vec<u64> = (1..=half as u64).filter(|g| g % step == 0).collect();
    let conclusion_holds = targets.iter().all(|t| forced_zero.contains(t));

    let compatibility = match compatible {
        None => Compatibility::EmptyCoset,
        Some(q) => {
            // f = q + 2k with k integral; need A k = -A q / 2.
            let a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect();
            let rhs: Vec<Rational> = rows
                .iter()
                .map(|r| {
                    let s: Rational = r.iter().zip(q).map(|(&c, v)| v * Rational::from_integer(c.into())).sum();
                    -s / BigInt::from(2)
                })
                .collect();
            if rhs.iter().all(Rational::is_integer)
                && has_integer_solution(&a, &rhs.iter().map(Rational::to_integer).collect::<Vec<_>>())
            {
                Compatibility::Solvable
            } else {
                Compatibility::Unsolvable
            }
        }
    };

    ConstraintCertificate {
        generators: m.subgroup().generators().to_vec(),
        constraints: rows.len(),
        rank,
        nullity: basis.len(),
        forced_zero,
        targets,
        conclusion_holds,
        compatibility,
    }
}

/// Certify, for every metabolizer of `form`, that the solution space lies
/// inside `{f : f = 0 on <p^{(n-1)/2}>}`.
pub fn oracle_verify_proposition(p: u64, n: u32, form: &LinkingForm) -> Result<PropositionCertificate> {
    let copies = check_setting(p, n, form)?;
    let search = enumerate_metabolizers(form)?;
    let compatible = compatibility_profile(form)?;
    let metabolizers = search
        .metabolizers
        .iter()
        .map(|m| certify_metabolizer(p, n, m, compatible.as_deref()))
        .collect();
    Ok(PropositionCertificate { p, n, copies, candidates: search.candidates, metabolizers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linking::diagonal_form;
    use alloc::vec;

    #[test]
    fn four_copies_mod_three() {
        let cert = oracle_verify_proposition(3, 1, &diagonal_form(3, 1, &[1, 1, 1, 1]).unwrap()).unwrap();
        assert!(cert.holds() && !cert.vacuous());
        for c in &cert.metabolizers {
            assert_eq!(c.forced_zero, vec![1]);
            assert_eq!((c.rank, c.nullity), (1, 0));
            assert_eq!(c.compatibility, Compatibility::Unsolvable);
        }
    }

    #[test]
    fn hyperbolic_and_anisotropic() {
        let cert = oracle_verify_proposition(3, 1, &diagonal_form(3, 1, &[1, 2]).unwrap()).unwrap();
        assert_eq!(cert.metabolizers.len(), 2);
        assert!(cert.holds());
        assert!(cert.metabolizers.iter().all(|c| c.compatibility == Compatibility::EmptyCoset));

        let cert = oracle_verify_proposition(3, 1, &diagonal_form(3, 1, &[1, 1]).unwrap()).unwrap();
        assert!(cert.vacuous() && cert.holds());
    }

    #[test]
    fn higher_exponent() {
        let cert = oracle_verify_proposition(3, 3, &diagonal_form(3, 3, &[1, 26]).unwrap()).unwrap();
        assert!(!cert.vacuous() && cert.holds());
        for c in &cert.metabolizers {
            assert_eq!(c.targets, vec![3, 6, 9, 12]);
        }
    }

    #[test]
    fn setting_is_checked() {
        let f = diagonal_form(5, 1, &[1, 1]).unwrap();
        assert!(oracle_verify_proposition(5, 1, &f).is_err());
        let f = diagonal_form(3, 2, &[1, 1]).unwrap();
        assert_eq!(oracle_verify_proposition(3, 2, &f), Err(Error::NOddRequired { n: 2 }));
        let f = diagonal_form(3, 1, &[1]).unwrap();
        assert!(oracle_verify_proposition(3, 1, &f).is_err());
    }
}
