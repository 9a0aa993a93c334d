use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{quadratic_refinement, LinkingForm, QuadraticRefinement};
use crate::abelian::{FiniteAbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::exact::{ratio, Modulus, Rational, Residue};

/// rho-invariants of the spin^c structures `t_x`, labelled by the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoMap {
    group: FiniteAbelianGroup,
    rho0: Residue,
    framing: Option<i64>,
    refinement: Option<QuadraticRefinement>,
}

impl RhoMap {
    /// `rho(t_x) = rho0 + q(x)`.
    pub fn from_refinement(rho0: Residue, refinement: QuadraticRefinement) -> Self {
        Self {
            group: refinement.group().clone(),
            rho0: Residue::new(rho0.value(), Modulus::Two),
            framing: None,
            refinement: Some(refinement),
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn rho0(&self) -> &Residue {
        &self.rho0
    }

    /// Surgery coefficient, when the map came from [`rho_surgery`].
    pub fn framing(&self) -> Option<i64> {
        self.framing
    }

    /// Present whenever the group has odd order.
    pub fn refinement(&self) -> Option<&QuadraticRefinement> {
        self.refinement.as_ref()
    }

    pub fn value(&self, x: &GroupElement) -> Residue {
        match self.framing {
            Some(n) => {
                let label = self.group.cyclic_label(x).expect("surgery groups are cyclic");
                surgery_value(n, label as i128)
            }
            None => {
                let q = self.refinement.as_ref().expect("refinement-backed map");
                &self.rho0 + &q.value(x)
            }
        }
    }

    /// Every value, in the order of [`FiniteAbelianGroup::elements`].
    pub fn table(&self) -> Vec<(GroupElement, Residue)> {
        self.group.elements().map(|x| {
            let v = self.value(&x);
            (x, v)
        }).collect()
    }

    /// Orientation reversal. For surgeries this is surgery on `-n`, where
    /// `t_x` is matched with `t_{-x}`.
    pub fn negate(&self) -> Self {
        match self.framing {
            Some(n) => rho_surgery(-n).expect("nonzero framing"),
            None => Self {
                group: self.group.clone(),
                rho0: -&self.rho0,
                framing: None,
                refinement: self.refinement.as_ref().map(QuadraticRefinement::negate),
            },
        }
    }
}

/// `((2x + n)^2 / n - sign(n)) / 4 mod 2`.
fn surgery_value(n: i64, x: i128) -> Residue {
    let n = n as i128;
    let t = 2 * x + n;
    let q: Rational = (ratio(t * t, n) - ratio(n.signum(), 1)) / BigInt::from(4);
    Residue::new(&q, Modulus::Two)
}

/// The form `lambda(x, y) = -xy/n` on `Z/|n|`, in primary coordinates.
pub(crate) fn surgery_form(n: i64) -> LinkingForm {
    let order = n.unsigned_abs();
    let group = FiniteAbelianGroup::from_cyclic_orders(&[order]).expect("positive order");
    let labels: Vec<i128> = (0..group.rank())
        .map(|i| group.cyclic_label(&group.basis_vector(i)).expect("cyclic") as i128)
        .collect();
    let gram: Vec<Vec<Rational>> = labels
        .iter()
        .map(|&a| labels.iter().map(|&b| ratio(-a * b, n as i128)).collect())
        .collect();
    LinkingForm::from_gram(group, &gram).expect("surgery form is well defined")
}

/// rho-invariants of `n`-surgery on the unknot, `L(n, 1)` up to orientation.
///
/// For even `n` the label `x` is the structure with `<c_1, A> = 2x + n`.
pub fn rho_surgery(n: i64) -> Result<RhoMap> {
    if n == 0 {
        return Err(Error::ZeroFraming);
    }
    let form = surgery_form(n);
    let refinement = quadratic_refinement(&form).ok();
    Ok(RhoMap {
        group: form.group().clone(),
        rho0: surgery_value(n, 0),
        framing: Some(n),
        refinement,
    })
}
