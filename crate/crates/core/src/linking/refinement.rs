use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::LinkingForm;
use crate::abelian::{FiniteAbelianGroup, GroupElement, Subgroup};
use crate::error::{Error, Result};
use crate::exact::{Modulus, Rational, Residue};

/// A `Q/2Z`-valued function on an odd-order group whose polarization is a
/// linking form and with `q(x) = -lambda(x, x) (mod 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticRefinement {
    form: LinkingForm,
    table: Option<Vec<Residue>>,
}

/// The canonical refinement `q(x) = -(N + 1) lift(lambda(x, x)) mod 2`.
///
/// `N + 1` is even, so the ambiguity `x -> x + N` in the lift moves the value
/// by an even integer.
pub fn quadratic_refinement(form: &LinkingForm) -> Result<QuadraticRefinement> {
    if !form.group().is_odd_order() {
        return Err(Error::EvenOrderUnsupported);
    }
    Ok(QuadraticRefinement { form: form.clone(), table: None })
}

impl QuadraticRefinement {
    /// Refinement given by its full value table, in the order of
    /// [`FiniteAbelianGroup::elements`].
    ///
    /// The table is accepted only if it is the refinement of its own
    /// polarization.
    pub fn from_values(group: FiniteAbelianGroup, values: Vec<Residue>) -> Result<Self> {
        if !group.is_odd_order() {
            return Err(Error::EvenOrderUnsupported);
        }
        let size = group.order().to_usize().filter(|&s| s == values.len());
        if size.is_none() {
            return Err(Error::InvalidInput("value table does not match the group order".into()));
        }
        let values: Vec<Residue> = values.iter().map(|v| Residue::new(v.value(), Modulus::Two)).collect();
        let candidate = Self { form: LinkingForm::trivial(), table: Some(values) };
        let k = group.rank();
        let e: Vec<GroupElement> = (0..k).map(|i| group.basis_vector(i)).collect();
        let lookup = |x: &GroupElement| candidate.lookup(&group, x).clone();
        let mut gram: Vec<Vec<Rational>> = alloc::vec![Vec::with_capacity(k); k];
        for i in 0..k {
            for j in 0..k {
                let d = &(&lookup(&group.add(&e[i], &e[j])) - &lookup(&e[i])) - &lookup(&e[j]);
                gram[i].push((-d).half().value().clone());
            }
        }
        let form = LinkingForm::from_gram(group.clone(), &gram)?;
        let canonical = quadratic_refinement(&form)?;
        for x in group.elements() {
            if canonical.value(&x) != lookup(&x) {
                return Err(Error::InvalidInput(alloc::format!("value table is not quadratic at {x}")));
            }
        }
        Ok(Self { form, table: candidate.table })
    }

    pub fn form(&self) -> &LinkingForm {
        &self.form
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.form.group()
    }

    fn lookup(&self, group: &FiniteAbelianGroup, x: &GroupElement) -> &Residue {
        let table = self.table.as_ref().expect("table-backed refinement");
        let mut idx = 0usize;
        for (&c, d) in x.coords().iter().zip(group.orders()) {
            idx = idx * d as usize + c as usize;
        }
        &table[idx]
    }

    pub fn value(&self, x: &GroupElement) -> Residue {
        if self.table.is_some() {
            return self.lookup(self.form.group(), x).clone();
        }
        let n = self.form.exponent() as i128;
        let s = self.form.pair_scaled(x, x) as i128;
        Residue::from_ratio(-(n + 1) * s, n, Modulus::Two)
    }

    /// Pointwise negation mod 2; the refinement of the negated form.
    pub fn negate(&self) -> Self {
        Self {
            form: self.form.negate(),
            table: self.table.as_ref().map(|t| t.iter().map(|v| -v).collect()),
        }
    }
}

/// `lambda(x, y) = -(q(x + y) - q(x) - q(y)) / 2 (mod 1)`, evaluated on the
/// cyclic generators.
pub fn polarize(q: &QuadraticRefinement) -> LinkingForm {
    let group = q.group();
    let k = group.rank();
    let e: Vec<GroupElement> = (0..k).map(|i| group.basis_vector(i)).collect();
    let gram: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let d = &(&q.value(&group.add(&e[i], &e[j])) - &q.value(&e[i])) - &q.value(&e[j]);
                    (-d).half().value().clone()
                })
                .collect()
        })
        .collect();
    LinkingForm::from_gram(group.clone(), &gram).expect("polarization of a refinement is a linking form")
}

/// Whether `q` vanishes on every element of `m`.
pub fn refinement_vanishes_on(q: &QuadraticRefinement, m: &Subgroup) -> Result<bool> {
    if m.ambient() != q.group() {
        return Err(Error::NotASubgroup);
    }
    Ok(m.elements().all(|x| q.value(&x).is_zero()))
}
