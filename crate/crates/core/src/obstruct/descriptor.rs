//! Rational homology spheres described by their homological data.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::abelian::{FiniteAbelianGroup, GroupElement, IntMatrix};
use crate::error::{Error, Result};
use crate::exact::{Modulus, Rational, Residue};
use crate::linking::{linking_from_presentation, quadratic_refinement, rho_surgery, LinkingForm};

/// How a descriptor was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// `n`-surgery on the unknot.
    Surgery(i64),
    /// Boundary of the plumbing or surgery with this intersection matrix.
    Presentation(IntMatrix),
    ConnectedSum(Vec<ManifoldDescriptor>),
    Reversed(Box<ManifoldDescriptor>),
    Abstract,
}

/// Values `d(Y, t_x)` of a correction-term style invariant, indexed by `x in H_1`.
///
/// Entries may be missing; [`validate_d_axioms`] reports them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DTable {
    group: FiniteAbelianGroup,
    values: Vec<Option<Rational>>,
}

fn index_of(group: &FiniteAbelianGroup, x: &GroupElement) -> usize {
    group.orders().iter().zip(x.coords()).fold(0usize, |acc, (&o, &c)| acc * o as usize + c as usize)
}

impl DTable {
    pub fn empty(group: FiniteAbelianGroup) -> Result<Self> {
        let size: u64 = group
            .orders()
            .iter()
            .try_fold(1u64, |acc, &o| acc.checked_mul(o))
            .filter(|&s| s <= crate::metab::ENUMERATION_LIMIT)
            .ok_or_else(|| Error::CapacityError {
                order: group.order().to_string(),
                limit: crate::metab::ENUMERATION_LIMIT,
            })?;
        Ok(Self { group, values: alloc::vec![None; size as usize] })
    }

    /// Table from `(x, d(t_x))` pairs; a repeated element is an error.
    pub fn from_entries(group: FiniteAbelianGroup, entries: Vec<(GroupElement, Rational)>) -> Result<Self> {
        let mut table = Self::empty(group)?;
        for (x, v) in entries {
            if !table.group.contains(&x) {
                return Err(Error::InvalidInput(format!("{x} is not an element of {}", table.group)));
            }
            let slot = &mut table.values[index_of(&table.group, &x)];
            if slot.is_some() {
                return Err(Error::InvalidInput(format!("duplicate entry for {x}")));
            }
            *slot = Some(v);
        }
        Ok(table)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn get(&self, x: &GroupElement) -> Option<&Rational> {
        self.values[index_of(&self.group, x)].as_ref()
    }

    /// Present entries in element order.
    pub fn entries(&self) -> impl Iterator<Item = (GroupElement, &Rational)> + '_ {
        self.group.elements().zip(&self.values).filter_map(|(x, v)| v.as_ref().map(|v| (x, v)))
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn negate(&self) -> Self {
        Self { group: self.group.clone(), values: self.values.iter().map(|v| v.as_ref().map(|v| -v)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldDescriptor {
    name: String,
    h1: FiniteAbelianGroup,
    linking: Option<LinkingForm>,
    rho0: Option<Residue>,
    d_table: Option<DTable>,
    provenance: Provenance,
}

impl ManifoldDescriptor {
    /// Only `H_1` is known.
    pub fn abstract_group(name: impl Into<String>, h1: FiniteAbelianGroup) -> Self {
        Self { name: name.into(), h1, linking: None, rho0: None, d_table: None, provenance: Provenance::Abstract }
    }

    pub fn sphere() -> Self {
        Self::abstract_group("S^3", FiniteAbelianGroup::trivial())
            .with_linking(LinkingForm::trivial())
            .expect("trivial form is nondegenerate")
            .with_rho0(Residue::zero(Modulus::Two))
    }

    /// `n`-surgery on the unknot with its linking form and `rho(t_0)`.
    pub fn surgery(name: impl Into<String>, n: i64) -> Result<Self> {
        let rho = rho_surgery(n)?;
        Ok(Self {
            name: name.into(),
            h1: rho.group().clone(),
            linking: Some(crate::linking::surgery_form(n)),
            rho0: Some(rho.rho0().clone()),
            d_table: None,
            provenance: Provenance::Surgery(n),
        })
    }

    /// Boundary of the 4-manifold with intersection matrix `a`.
    pub fn from_presentation(name: impl Into<String>, a: &IntMatrix) -> Result<Self> {
        let pres = linking_from_presentation(a)?;
        Ok(Self {
            name: name.into(),
            h1: pres.group().clone(),
            linking: Some(pres.form().clone()),
            rho0: None,
            d_table: None,
            provenance: Provenance::Presentation(a.clone()),
        })
    }

    pub fn with_linking(mut self, form: LinkingForm) -> Result<Self> {
        if form.group() != &self.h1 {
            return Err(Error::InvalidInput(format!("linking form lives on {}, not {}", form.group(), self.h1)));
        }
        if !form.is_nondegenerate() {
            return Err(Error::InvalidInput("linking form is degenerate".into()));
        }
        self.linking = Some(form);
        Ok(self)
    }

    pub fn with_rho0(mut self, rho0: Residue) -> Self {
        self.rho0 = Some(Residue::new(rho0.value(), Modulus::Two));
        self
    }

    pub fn with_d_table(mut self, table: DTable) -> Result<Self> {
        if table.group() != &self.h1 {
            return Err(Error::InvalidInput(format!("d-table lives on {}, not {}", table.group(), self.h1)));
        }
        self.d_table = Some(table);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn h1(&self) -> &FiniteAbelianGroup {
        &self.h1
    }

    pub fn linking(&self) -> Option<&LinkingForm> {
        self.linking.as_ref()
    }

    pub fn rho0(&self) -> Option<&Residue> {
        self.rho0.as_ref()
    }

    pub fn d_table(&self) -> Option<&DTable> {
        self.d_table.as_ref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Same homology, linking form, `rho(t_0)` and d-table.
    pub fn same_invariants(&self, other: &Self) -> bool {
        self.h1 == other.h1 && self.linking == other.linking && self.rho0 == other.rho0 && self.d_table == other.d_table
    }
}

fn all_or_none<T>(items: impl Iterator<Item = Option<T>>) -> Option<Vec<T>> {
    items.collect()
}

/// `Y_1 # ... # Y_k`. Each invariant is carried over when every summand has it;
/// the d-table is the additive one.
pub fn connected_sum(summands: &[ManifoldDescriptor]) -> ManifoldDescriptor {
    let groups: Vec<&FiniteAbelianGroup> = summands.iter().map(|d| &d.h1).collect();
    let (h1, layout) = FiniteAbelianGroup::direct_sum(&groups);
    let linking = all_or_none(summands.iter().map(|d| d.linking.as_ref())).map(|f| LinkingForm::direct_sum(&f));
    let rho0 = all_or_none(summands.iter().map(|d| d.rho0.clone()))
        .map(|r| r.into_iter().fold(Residue::zero(Modulus::Two), |a, b| a + b));
    let d_table = all_or_none(summands.iter().map(|d| d.d_table.as_ref()))
        .filter(|tables| !tables.is_empty() && tables.iter().all(|t| t.is_complete()))
        .and_then(|tables| {
            let mut sum = DTable::empty(h1.clone()).ok()?;
            for x in h1.elements() {
                let value: Rational = tables
                    .iter()
                    .zip(&layout)
                    .map(|(t, pos)| {
                        let part = t.group().element_u64(&pos.iter().map(|&i| x.coords()[i]).collect::<Vec<_>>());
                        t.get(&part.expect("coordinates in range")).expect("complete").clone()
                    })
                    .sum();
                let i = index_of(&h1, &x);
                sum.values[i] = Some(value);
            }
            Some(sum)
        });
    let names: Vec<&str> = summands.iter().map(|d| d.name.as_str()).collect();
    ManifoldDescriptor {
        name: if names.is_empty() { String::from("S^3") } else { names.join(" # ") },
        h1,
        linking,
        rho0,
        d_table,
        provenance: Provenance::ConnectedSum(summands.to_vec()),
    }
}

/// `mY`, with `-|m|Y = |m|(-Y)`; `0Y` is `S^3`.
pub fn multiple(y: &ManifoldDescriptor, m: i64) -> ManifoldDescriptor {
    let base = if m < 0 { reverse(y) } else { y.clone() };
    connected_sum(&alloc::vec![base; m.unsigned_abs() as usize])
}

/// `-Y`: negated linking form, `rho` and `d`.
pub fn reverse(y: &ManifoldDescriptor) -> ManifoldDescriptor {
    if let Provenance::Reversed(inner) = &y.provenance {
        return (**inner).clone();
    }
    ManifoldDescriptor {
        name: format!("-({})", y.name),
        h1: y.h1.clone(),
        linking: y.linking.as_ref().map(LinkingForm::negate),
        rho0: y.rho0.as_ref().map(|r| -r.clone()),
        d_table: y.d_table.as_ref().map(DTable::negate),
        provenance: Provenance::Reversed(Box::new(y.clone())),
    }
}

/// One failed check of a d-table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DAxiomViolation {
    MissingEntry { x: GroupElement },
    /// `d(S^3, t_0)` must vanish.
    Origin { value: Rational },
    Symmetry { x: GroupElement, value: Rational, mirror: Rational },
    /// `d(t_0) != rho(t_0) (mod 2)`.
    RhoOrigin { value: Rational, rho0: Residue },
    /// `d(t_x) - d(t_0) != q(x) (mod 2)`, where `q` refines `-lambda(x, x)`.
    ModTwo { x: GroupElement, difference: Rational, refinement: Residue },
    Additivity { x: GroupElement, value: Rational, sum: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DAxiomReport {
    pub violations: Vec<DAxiomViolation>,
    /// Checks that could not run for lack of data.
    pub skipped: Vec<String>,
}

impl DAxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check a descriptor's d-table against the formal properties of correction terms.
pub fn validate_d_axioms(y: &ManifoldDescriptor) -> Result<DAxiomReport> {
    let table = y.d_table.as_ref().ok_or_else(|| Error::MissingData(format!("{} has no d-table", y.name)))?;
    let g = &y.h1;
    let mut report = DAxiomReport::default();
    for x in g.elements() {
        if table.get(&x).is_none() {
            report.violations.push(DAxiomViolation::MissingEntry { x });
        }
    }
    let zero = g.zero();
    let d0 = table.get(&zero);

    if g.is_trivial() {
        if let Some(v) = d0.filter(|v| !v.is_zero()) {
            report.violations.push(DAxiomViolation::Origin { value: v.clone() });
        }
    }

    for x in g.elements() {
        let mirror = g.neg(&x);
        if mirror <= x {
            continue;
        }
        if let (Some(a), Some(b)) = (table.get(&x), table.get(&mirror)) {
            if a != b {
                report.violations.push(DAxiomViolation::Symmetry { x, value: a.clone(), mirror: b.clone() });
            }
        }
    }

    match (&y.rho0, d0) {
        (Some(rho0), Some(v)) => {
            if Residue::new(v, Modulus::Two) != *rho0 {
                report.violations.push(DAxiomViolation::RhoOrigin { value: v.clone(), rho0: rho0.clone() });
            }
        }
        _ => report.skipped.push("origin against rho(t_0)".into()),
    }

    match (&y.linking, d0) {
        (Some(form), Some(v0)) if g.is_odd_order() => {
            let q = quadratic_refinement(form)?;
            for x in g.elements() {
                if let Some(v) = table.get(&x) {
                    let difference = v - v0;
                    let refinement = q.value(&x);
                    if Residue::new(&difference, Modulus::Two) != refinement {
                        report.violations.push(DAxiomViolation::ModTwo { x, difference, refinement });
                    }
                }
            }
        }
        _ => report.skipped.push("mod 2 agreement with the linking form".into()),
    }

    match &y.provenance {
        Provenance::ConnectedSum(summands) => {
            let expected = connected_sum(summands);
            match expected.d_table {
                Some(sum) if expected.h1 == *g => {
                    for (x, v) in table.entries() {
                        let s = sum.get(&x).expect("complete");
                        if s != v {
                            report.violations.push(DAxiomViolation::Additivity { x, value: v.clone(), sum: s.clone() });
                        }
                    }
                }
                _ => report.skipped.push("additivity: summand tables incomplete".into()),
            }
        }
        _ => report.skipped.push("additivity: not a connected sum".into()),
    }
    Ok(report)
}
