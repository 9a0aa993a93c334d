//! Metabolizers of linking forms and the structure of their generating sets.

mod poly;
mod structure;

use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::abelian::{enumerate_subgroups_of_order, quotient_invariants, GroupElement, Subgroup};
use crate::error::{Error, Result};
use crate::exact::{exact_sqrt, Residue};
use crate::linking::LinkingForm;

pub use poly::{poly_gcd, Poly};
pub use structure::{
    build_z, h_polynomial, ideal_is_full, k_profile, psi, r_range, tau_shift_check, unit_class_generator,
    HPolynomial, ZElement,
};

/// Groups larger than this are not searched for metabolizers.
pub const ENUMERATION_LIMIT: u64 = 100_000_000;

/// A subgroup `M` with `|M|^2 = |G|`, `lambda(M, M) = 0` and `G/M = M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metabolizer {
    subgroup: Subgroup,
    form: LinkingForm,
}

impl Metabolizer {
    /// Certify `m` against `form`.
    pub fn new(form: &LinkingForm, m: &Subgroup) -> Result<Self> {
        let cert = is_metabolizer(form, m)?;
        if cert.holds() {
            Ok(Self { subgroup: m.clone(), form: form.clone() })
        } else {
            Err(Error::InvalidInput("subgroup is not a metabolizer".into()))
        }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn form(&self) -> &LinkingForm {
        &self.form
    }
}

/// Outcome of checking the three metabolizer conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetabolizerCertificate {
    pub subgroup_order: BigUint,
    pub group_order: BigUint,
    /// First generator pair with nonzero pairing.
    pub isotropy_witness: Option<(GroupElement, GroupElement, Residue)>,
    pub subgroup_invariants: Vec<u64>,
    pub quotient_invariants: Vec<u64>,
}

impl MetabolizerCertificate {
    pub fn order_condition(&self) -> bool {
        &self.subgroup_order * &self.subgroup_order == self.group_order
    }

    pub fn isotropic(&self) -> bool {
        self.isotropy_witness.is_none()
    }

    pub fn quotient_condition(&self) -> bool {
        self.subgroup_invariants == self.quotient_invariants
    }

    pub fn holds(&self) -> bool {
        self.order_condition() && self.isotropic() && self.quotient_condition()
    }
}

/// Check all three conditions. Isotropy is tested on generator pairs, which
/// suffices by bilinearity.
pub fn is_metabolizer(form: &LinkingForm, m: &Subgroup) -> Result<MetabolizerCertificate> {
    if m.ambient() != form.group() {
        return Err(Error::NotASubgroup);
    }
    let gens = m.generators();
    let mut witness = None;
    'outer: for (i, x) in gens.iter().enumerate() {
        for y in &gens[i..] {
            let v = form.pair(x, y);
            if !v.is_zero() {
                witness = Some((x.clone(), y.clone(), v));
                break 'outer;
            }
        }
    }
    Ok(MetabolizerCertificate {
        subgroup_order: m.order(),
        group_order: form.group().order(),
        isotropy_witness: witness,
        subgroup_invariants: m.isomorphism_type().invariant_factors(),
        quotient_invariants: quotient_invariants(form.group(), m)?,
    })
}

/// Result of a metabolizer search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetabolizerSearch {
    pub metabolizers: Vec<Metabolizer>,
    /// Candidates of the right order that were examined.
    pub candidates: usize,
    /// Set when `|G|` is not a square, so no metabolizer can exist.
    pub square_obstruction: Option<BigUint>,
}

/// Every subgroup of order `sqrt|G|`; empty when `|G|` is not a square.
pub fn metabolizer_candidates(form: &LinkingForm) -> Result<Option<Vec<Subgroup>>> {
    let order = form.group().order();
    if order.to_u64().is_none_or(|o| o > ENUMERATION_LIMIT) {
        return Err(Error::CapacityError { order: order.to_string(), limit: ENUMERATION_LIMIT });
    }
    match exact_sqrt(&order) {
        Some(root) => Ok(Some(enumerate_subgroups_of_order(form.group(), &root)?)),
        None => Ok(None),
    }
}

/// Complete, sorted list of metabolizers of `form`.
pub fn enumerate_metabolizers(form: &LinkingForm) -> Result<MetabolizerSearch> {
    let Some(candidates) = metabolizer_candidates(form)? else {
        return Ok(MetabolizerSearch {
            metabolizers: Vec::new(),
            candidates: 0,
            square_obstruction: Some(form.group().order()),
        });
    };
    let mut metabolizers = Vec::new();
    for m in &candidates {
        if is_metabolizer(form, m)?.holds() {
            metabolizers.push(Metabolizer { subgroup: m.clone(), form: form.clone() });
        }
    }
    Ok(MetabolizerSearch { metabolizers, candidates: candidates.len(), square_obstruction: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FiniteAbelianGroup;
    use crate::linking::{diagonal_form, standard_cyclic_form};
    use alloc::vec;

    fn sub(g: &FiniteAbelianGroup, gens: &[&[i64]]) -> Subgroup {
        let gens: Vec<_> = gens.iter().map(|c| g.element(c).unwrap()).collect();
        Subgroup::generated_by(g, &gens).unwrap()
    }

    #[test]
    fn certificates() {
        let f = diagonal_form(3, 1, &[1, 2]).unwrap();
        let g = f.group().clone();
        assert!(is_metabolizer(&f, &sub(&g, &[&[1, 1]])).unwrap().holds());

        let f11 = diagonal_form(3, 1, &[1, 1]).unwrap();
        let cert = is_metabolizer(&f11, &sub(&g, &[&[1, 0]])).unwrap();
        assert!(!cert.holds());
        assert!(cert.order_condition());
        let (x, y, v) = cert.isotropy_witness.unwrap();
        assert_eq!((x.coords(), y.coords()), (&[1u64, 0][..], &[1u64, 0][..]));
        assert_eq!(v, Residue::from_ratio(1, 3, crate::exact::Modulus::One));

        let t = LinkingForm::trivial();
        assert!(is_metabolizer(&t, &Subgroup::trivial(t.group())).unwrap().holds());
        let other = FiniteAbelianGroup::from_cyclic_orders(&[5]).unwrap();
        assert_eq!(is_metabolizer(&f, &Subgroup::trivial(&other)), Err(Error::NotASubgroup));
    }

    #[test]
    fn small_searches() {
        let search = enumerate_metabolizers(&diagonal_form(3, 1, &[1, 1]).unwrap()).unwrap();
        assert!(search.metabolizers.is_empty());
        assert_eq!(search.candidates, 4);

        let f = diagonal_form(3, 1, &[1, 2]).unwrap();
        let g = f.group().clone();
        let found: Vec<_> =
            enumerate_metabolizers(&f).unwrap().metabolizers.into_iter().map(|m| m.subgroup).collect();
        assert_eq!(found, vec![sub(&g, &[&[1, 1]]), sub(&g, &[&[1, 2]])]);

        let f4 = diagonal_form(3, 1, &[1, 1, 1, 1]).unwrap();
        let g4 = f4.group().clone();
        let found = enumerate_metabolizers(&f4).unwrap().metabolizers;
        let target = sub(&g4, &[&[1, 1, 1, 0], &[1, 2, 0, 1]]);
        assert!(found.iter().any(|m| m.subgroup == target));

        let odd = enumerate_metabolizers(&standard_cyclic_form(3, 1, 1).unwrap()).unwrap();
        assert_eq!(odd.square_obstruction, Some(BigUint::from(3u32)));
    }

    #[test]
    fn capacity_is_enforced() {
        let f = diagonal_form(101, 2, &[1, 1, 1, 1]).unwrap();
        assert!(matches!(enumerate_metabolizers(&f), Err(Error::CapacityError { .. })));
    }

    #[test]
    fn constructor_rejects_non_metabolizers() {
        let f = diagonal_form(3, 1, &[1, 1]).unwrap();
        let g = f.group().clone();
        assert!(Metabolizer::new(&f, &sub(&g, &[&[1, 0]])).is_err());
    }
}
