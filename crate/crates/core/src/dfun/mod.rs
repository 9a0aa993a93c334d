//! Rational functions on `Z/p^n` shaped like differences of correction terms,
//! and their sums over several copies.

mod oracle;

use alloc::vec::Vec;

use num_traits::Zero;

use crate::abelian::GroupElement;
use crate::error::{Error, Result};
use crate::exact::{pow_u64, Modulus, Rational, Residue};
use crate::linking::QuadraticRefinement;
use crate::metab::Metabolizer;

pub use oracle::{
    certify_metabolizer, check_setting, compatibility_profile, oracle_verify_proposition, Compatibility, ConstraintCertificate,
    PropositionCertificate,
};

/// A function `f: Z/p^n -> Q`, stored as its full table.
///
/// Tables read from files may break `f(0) = 0` or `f(-g) = f(g)`; such
/// functions can still be built so that [`validate`] can report them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DFunction {
    p: u64,
    n: u32,
    values: Vec<Rational>,
}

impl DFunction {
    pub fn zero(p: u64, n: u32) -> Self {
        Self { p, n, values: alloc::vec![Rational::zero(); pow_u64(p, n) as usize] }
    }

    /// `f` from `f(1), ..., f((p^n - 1)/2)`, extended by `f(0) = 0` and symmetry.
    pub fn from_orbit_values(p: u64, n: u32, orbit: &[Rational]) -> Result<Self> {
        let modulus = pow_u64(p, n);
        let half = ((modulus - 1) / 2) as usize;
        if orbit.len() != half {
            return Err(Error::InvalidInput(alloc::format!("expected {half} orbit values, got {}", orbit.len())));
        }
        let mut values = alloc::vec![Rational::zero(); modulus as usize];
        for (i, v) in orbit.iter().enumerate() {
            values[i + 1] = v.clone();
            values[modulus as usize - 1 - i] = v.clone();
        }
        Ok(Self { p, n, values })
    }

    /// Arbitrary table indexed by `0, ..., p^n - 1`.
    pub fn from_table(p: u64, n: u32, values: Vec<Rational>) -> Result<Self> {
        if values.len() as u64 != pow_u64(p, n) {
            return Err(Error::InvalidInput(alloc::format!("table needs {} entries", pow_u64(p, n))));
        }
        Ok(Self { p, n, values })
    }

    /// `f(g) = q(g)`, with values taken in `[0, 2)`.
    pub fn from_refinement(q: &QuadraticRefinement) -> Result<Self> {
        let (p, n) = cyclic_type(q)?;
        let g = q.group();
        let values = (0..pow_u64(p, n)).map(|x| q.value(&g.element_u64(&[x]).expect("in range")).value().clone()).collect();
        Ok(Self { p, n, values })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        pow_u64(self.p, self.n)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, g: u64) -> &Rational {
        &self.values[(g % self.modulus()) as usize]
    }

    /// `f(1), ..., f((p^n - 1)/2)`.
    pub fn orbit_values(&self) -> &[Rational] {
        &self.values[1..=((self.modulus() - 1) / 2) as usize]
    }

    pub fn extend(&self, copies: usize) -> Extension<'_> {
        Extension { base: self, copies }
    }
}

fn cyclic_type(q: &QuadraticRefinement) -> Result<(u64, u32)> {
    match q.group().homogeneous_type() {
        Some((p, n)) if q.group().rank() == 1 => Ok((p, n)),
        _ => Err(Error::InvalidInput("refinement must live on a cyclic group Z/p^n".into())),
    }
}

/// `f^(m)(g_1, ..., g_m) = f(g_1) + ... + f(g_m)`.
#[derive(Debug, Clone, Copy)]
pub struct Extension<'a> {
    base: &'a DFunction,
    copies: usize,
}

impl Extension<'_> {
    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn eval(&self, g: &[u64]) -> Rational {
        assert_eq!(g.len(), self.copies, "wrong number of summands");
        g.iter().map(|&x| self.base.value(x)).sum()
    }
}

/// One failed axiom of a d-function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DViolation {
    Origin { value: Rational },
    Symmetry { g: u64, value: Rational, mirror: Rational },
    Compatibility { g: u64, value: Rational, refinement: Residue },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DReport {
    pub violations: Vec<DViolation>,
}

impl DReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `f(0) = 0`, `f(-g) = f(g)` and `f(g) = q(g) (mod 2)`.
pub fn validate(f: &DFunction, q: &QuadraticRefinement) -> Result<DReport> {
    if cyclic_type(q)? != (f.p, f.n) {
        return Err(Error::InvalidInput("refinement and function live on different groups".into()));
    }
    let mut violations = Vec::new();
    if !f.values[0].is_zero() {
        violations.push(DViolation::Origin { value: f.values[0].clone() });
    }
    let modulus = f.modulus();
    for g in 1..=(modulus - 1) / 2 {
        let (a, b) = (f.value(g), f.value(modulus - g));
        if a != b {
            violations.push(DViolation::Symmetry { g, value: a.clone(), mirror: b.clone() });
        }
    }
    let group = q.group();
    for g in 0..modulus {
        let expected = q.value(&group.element_u64(&[g]).expect("in range"));
        if Residue::new(f.value(g), Modulus::Two) != expected {
            violations.push(DViolation::Compatibility { g, value: f.value(g).clone(), refinement: expected });
        }
    }
    Ok(DReport { violations })
}

fn copies_in(f: &DFunction, m: &Metabolizer) -> Result<usize> {
    let ambient = m.subgroup().ambient();
    match ambient.homogeneous_type() {
        Some(t) if t == (f.p, f.n) => Ok(ambient.rank()),
        None if ambient.is_trivial() => Ok(0),
        _ => Err(Error::InvalidInput("metabolizer does not live in a sum of copies of Z/p^n".into())),
    }
}

/// Whether `f^(2m)` vanishes on every element of `m`.
pub fn vanishes_on_metabolizer(f: &DFunction, m: &Metabolizer) -> Result<bool> {
    let ext = f.extend(copies_in(f, m)?);
    Ok(m.subgroup().elements().all(|x: GroupElement| ext.eval(x.coords()).is_zero()))
}

/// Whether `f` vanishes on the subgroup generated by `p^{(n-1)/2}`.
pub fn conclusion_holds(f: &DFunction) -> Result<bool> {
    if f.n % 2 == 0 {
        return Err(Error::NOddRequired { n: f.n });
    }
    let step = pow_u64(f.p, (f.n - 1) / 2);
    Ok((0..f.modulus()).step_by(step as usize).all(|g| f.value(g).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Subgroup;
    use crate::exact::ratio;
    use crate::linking::{diagonal_form, quadratic_refinement, standard_cyclic_form};
    use alloc::vec;

    #[test]
    fn validation() {
        let zero_form = crate::linking::LinkingForm::from_gram(
            crate::abelian::FiniteAbelianGroup::homogeneous(3, 1, 1).unwrap(),
            &[vec![ratio(0, 1)]],
        )
        .unwrap();
        let q0 = quadratic_refinement(&zero_form).unwrap();
        assert!(validate(&DFunction::zero(3, 1), &q0).unwrap().is_valid());

        let q1 = quadratic_refinement(&standard_cyclic_form(3, 1, 1).unwrap()).unwrap();
        let f = DFunction::from_orbit_values(3, 1, &[ratio(2, 3)]).unwrap();
        assert!(validate(&f, &q1).unwrap().is_valid());
        let bad = DFunction::from_orbit_values(3, 1, &[ratio(1, 3)]).unwrap();
        let report = validate(&bad, &q1).unwrap();
        assert_eq!(report.violations.len(), 2);
        assert!(matches!(report.violations[0], DViolation::Compatibility { g: 1, .. }));

        let skew = DFunction::from_table(3, 1, vec![ratio(1, 1), ratio(2, 3), ratio(8, 3)]).unwrap();
        let report = validate(&skew, &q1).unwrap();
        assert!(matches!(report.violations[0], DViolation::Origin { .. }));
        assert!(matches!(report.violations[1], DViolation::Symmetry { g: 1, .. }));
    }

    #[test]
    fn refinement_tables_are_valid() {
        for (p, n, u) in [(3u64, 3u32, 1i64), (7, 1, 3), (11, 1, 2)] {
            let q = quadratic_refinement(&standard_cyclic_form(p, n, u).unwrap()).unwrap();
            assert!(validate(&DFunction::from_refinement(&q).unwrap(), &q).unwrap().is_valid());
        }
    }

    #[test]
    fn extensions() {
        let f = DFunction::from_orbit_values(3, 1, &[ratio(2, 3)]).unwrap();
        assert_eq!(f.extend(2).eval(&[1, 2]), f.value(1) * Rational::from_integer(2.into()));
        assert_eq!(f.extend(4).eval(&[1, 1, 1, 0]), ratio(2, 1));
        assert!(f.extend(3).eval(&[0, 0, 0]).is_zero());
    }

    #[test]
    fn vanishing_on_metabolizers() {
        let f4 = diagonal_form(3, 1, &[1, 1, 1, 1]).unwrap();
        let g = f4.group();
        let gens = [g.element(&[1, 1, 1, 0]).unwrap(), g.element(&[1, 2, 0, 1]).unwrap()];
        let m = Metabolizer::new(&f4, &Subgroup::generated_by(g, &gens).unwrap()).unwrap();
        assert!(vanishes_on_metabolizer(&DFunction::zero(3, 1), &m).unwrap());
        let f = DFunction::from_orbit_values(3, 1, &[ratio(2, 3)]).unwrap();
        assert!(!vanishes_on_metabolizer(&f, &m).unwrap());

        let f12 = diagonal_form(3, 1, &[1, 2]).unwrap();
        for m in crate::metab::enumerate_metabolizers(&f12).unwrap().metabolizers {
            assert!(vanishes_on_metabolizer(&DFunction::zero(3, 1), &m).unwrap());
        }
        assert!(vanishes_on_metabolizer(&DFunction::zero(5, 1), &m).is_err());
    }

    #[test]
    fn conclusion() {
        assert!(conclusion_holds(&DFunction::zero(3, 3)).unwrap());
        let f = DFunction::from_orbit_values(3, 1, &[ratio(1, 2)]).unwrap();
        assert!(!conclusion_holds(&f).unwrap());
        // n = 3: only multiples of 3 matter
        let mut orbit = vec![Rational::zero(); 13];
        orbit[0] = ratio(5, 1);
        let f = DFunction::from_orbit_values(3, 3, &orbit).unwrap();
        assert!(conclusion_holds(&f).unwrap());
        orbit[2] = ratio(1, 1);
        assert!(!conclusion_holds(&DFunction::from_orbit_values(3, 3, &orbit).unwrap()).unwrap());
        assert_eq!(conclusion_holds(&DFunction::zero(3, 2)), Err(Error::NOddRequired { n: 2 }));
    }
}
