//! Report types. Every report serializes to JSON and parses back under the
//! same schema; rationals are written as canonical `"a/b"` strings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use qcob_core::dfun::{Compatibility, ConstraintCertificate, PropositionCertificate};
use qcob_core::obstruct::{Clause, DAxiomReport, DAxiomViolation, IndependenceCertificate, Verdict};

use crate::formats::Triple;

/// How a report maps to an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Conclusive,
    Inconclusive,
}

impl Status {
    pub fn from_bool(conclusive: bool) -> Self {
        if conclusive {
            Self::Conclusive
        } else {
            Self::Inconclusive
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Self::Conclusive => 0,
            Self::Inconclusive => 2,
        }
    }
}

fn tuple_list(labels: &[String]) -> String {
    labels.iter().map(|l| format!("({l})")).collect::<Vec<_>>().join(", ")
}

pub trait Render {
    fn text(&self) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoEntry {
    pub x: u64,
    pub rho: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoSurgeryReport {
    pub n: i64,
    pub group: Vec<Triple>,
    pub rho0: String,
    pub values: Vec<RhoEntry>,
}

impl Render for RhoSurgeryReport {
    fn text(&self) -> String {
        let mut s = format!("rho-invariants of {}-surgery on the unknot (mod 2)\n", self.n);
        for e in &self.values {
            let _ = writeln!(s, "  rho(t_{}) = {}", e.x, e.rho);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefinementEntry {
    pub x: String,
    pub q: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationReport {
    pub matrix: Vec<Vec<i64>>,
    pub determinant: String,
    pub group: Vec<Triple>,
    pub invariant_factors: Vec<u64>,
    /// Linking form on the primary generators.
    pub gram: Vec<Vec<String>>,
    pub square_order: bool,
    /// Omitted for even order or large groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement: Option<Vec<RefinementEntry>>,
}

impl Render for PresentationReport {
    fn text(&self) -> String {
        let mut s = format!("det = {}\nH_1 invariant factors: {:?}\n", self.determinant, self.invariant_factors);
        s.push_str("linking matrix:\n");
        for row in &self.gram {
            let _ = writeln!(s, "  [{}]", row.join(", "));
        }
        let _ = writeln!(s, "|H_1| is {}a square", if self.square_order { "" } else { "not " });
        if let Some(q) = &self.refinement {
            s.push_str("quadratic refinement:\n");
            for e in q {
                let _ = writeln!(s, "  q({}) = {}", e.x, e.q);
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetabolizerEntry {
    pub generators: Vec<String>,
    pub invariants: Vec<u64>,
    /// `k_0, ..., k_n` for forms on `(Z/p^n)^k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_profile: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetabolizerReport {
    pub group: Vec<Triple>,
    pub candidates: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub square_obstruction: Option<String>,
    pub metabolizers: Vec<MetabolizerEntry>,
}

impl Render for MetabolizerReport {
    fn text(&self) -> String {
        let mut s = String::new();
        if let Some(order) = &self.square_obstruction {
            let _ = writeln!(s, "|G| = {order} is not a square: no metabolizers");
            return s;
        }
        let _ = writeln!(s, "{} metabolizers among {} candidates", self.metabolizers.len(), self.candidates);
        for m in &self.metabolizers {
            let _ = write!(s, "  <{}> = {:?}", tuple_list(&m.generators), m.invariants);
            if let Some(k) = &m.k_profile {
                let _ = write!(s, ", k = {k:?}");
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintEntry {
    pub generators: Vec<String>,
    pub constraints: usize,
    pub rank: usize,
    pub nullity: usize,
    pub forced_zero: Vec<u64>,
    pub targets: Vec<u64>,
    pub conclusion_holds: bool,
    pub compatibility: String,
}

impl From<&ConstraintCertificate> for ConstraintEntry {
    fn from(c: &ConstraintCertificate) -> Self {
        Self {
            generators: c.generators.iter().map(|g| g.label()).collect(),
            constraints: c.constraints,
            rank: c.rank,
            nullity: c.nullity,
            forced_zero: c.forced_zero.clone(),
            targets: c.targets.clone(),
            conclusion_holds: c.conclusion_holds,
            compatibility: match c.compatibility {
                Compatibility::EmptyCoset => "empty_coset",
                Compatibility::Solvable => "solvable",
                Compatibility::Unsolvable => "unsolvable",
            }
            .to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropositionReport {
    pub p: u64,
    pub n: u32,
    pub copies: usize,
    pub units: Vec<i64>,
    pub candidates: usize,
    pub holds: bool,
    pub vacuous: bool,
    pub metabolizers: Vec<ConstraintEntry>,
}

impl PropositionReport {
    pub fn new(cert: &PropositionCertificate, units: Vec<i64>) -> Self {
        Self {
            p: cert.p,
            n: cert.n,
            copies: cert.copies,
            units,
            candidates: cert.candidates,
            holds: cert.holds(),
            vacuous: cert.vacuous(),
            metabolizers: cert.metabolizers.iter().map(ConstraintEntry::from).collect(),
        }
    }
}

impl Render for PropositionReport {
    fn text(&self) -> String {
        let mut s = format!(
            "p = {}, n = {}, 2m = {}, units {:?}: {} metabolizers among {} candidates\n",
            self.p,
            self.n,
            self.copies,
            self.units,
            self.metabolizers.len(),
            self.candidates
        );
        for c in &self.metabolizers {
            let _ = writeln!(
                s,
                "  <{}>: {} constraints, rank {}, nullity {}, forced zero {:?}, targets {:?}, {} [{}]",
                tuple_list(&c.generators),
                c.constraints,
                c.rank,
                c.nullity,
                c.forced_zero,
                c.targets,
                if c.conclusion_holds { "holds" } else { "FAILS" },
                c.compatibility
            );
        }
        let _ = writeln!(
            s,
            "{}",
            match (self.holds, self.vacuous) {
                (true, true) => "holds vacuously: no metabolizers",
                (true, false) => "holds for every metabolizer",
                _ => "fails",
            }
        );
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClauseEntry {
    pub kind: String,
    pub subject: String,
    pub holds: bool,
    pub detail: String,
}

impl From<&Clause> for ClauseEntry {
    fn from(c: &Clause) -> Self {
        Self { kind: c.kind.as_str().into(), subject: c.subject.clone(), holds: c.holds, detail: c.detail.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictReport {
    pub conclusion: String,
    pub criterion: String,
    pub statement: String,
    pub clauses: Vec<ClauseEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<String>,
}

impl From<&Verdict> for VerdictReport {
    fn from(v: &Verdict) -> Self {
        Self {
            conclusion: v.conclusion.as_str().into(),
            criterion: v.criterion.as_str().into(),
            statement: v.criterion.statement().into(),
            clauses: v.clauses.iter().map(ClauseEntry::from).collect(),
            rho0: v.rho0.as_ref().map(ToString::to_string),
        }
    }
}

impl Render for VerdictReport {
    fn text(&self) -> String {
        let mut s = self.conclusion.replace('_', " ");
        if let Some(r) = &self.rho0 {
            let _ = write!(s, ", ρ(t₀)={r}");
        }
        let _ = writeln!(s, " [{}]", self.criterion);
        for c in &self.clauses {
            let mark = if c.holds { "ok" } else { "FAILED" };
            let _ = writeln!(s, "  [{mark}] {} ({}): {}", c.kind, c.subject, c.detail);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentEntry {
    pub index: usize,
    pub name: String,
    pub prime: u64,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndependenceReport {
    pub independent: bool,
    pub assignment: Vec<AssignmentEntry>,
    pub verdict: VerdictReport,
    /// Verdict for the first member against the sum of the others, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub main: Option<VerdictReport>,
}

impl IndependenceReport {
    pub fn new(cert: &IndependenceCertificate, main: Option<&Verdict>) -> Self {
        Self {
            independent: cert.is_independent(),
            assignment: cert
                .assignment
                .iter()
                .map(|a| AssignmentEntry { index: a.index, name: a.name.clone(), prime: a.prime, exponent: a.exponent })
                .collect(),
            verdict: (&cert.verdict).into(),
            main: main.map(VerdictReport::from),
        }
    }
}

impl Render for IndependenceReport {
    fn text(&self) -> String {
        let mut s = self.verdict.text();
        for a in &self.assignment {
            let _ = writeln!(s, "  {} -> Z/{}^{}", a.name, a.prime, a.exponent);
        }
        if let Some(m) = &self.main {
            s.push_str(&m.text());
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationEntry {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    pub detail: String,
}

impl From<&DAxiomViolation> for ViolationEntry {
    fn from(v: &DAxiomViolation) -> Self {
        let (kind, element, detail) = match v {
            DAxiomViolation::MissingEntry { x } => ("missing_entry", Some(x), "no value".to_string()),
            DAxiomViolation::Origin { value } => ("origin", None, format!("d(S^3, t_0) = {value}, expected 0")),
            DAxiomViolation::Symmetry { x, value, mirror } => {
                ("symmetry", Some(x), format!("d(t_x) = {value} but d(t_-x) = {mirror}"))
            }
            DAxiomViolation::RhoOrigin { value, rho0 } => {
                ("rho_origin", None, format!("d(t_0) = {value} is not rho(t_0) = {rho0} (mod 2)"))
            }
            DAxiomViolation::ModTwo { x, difference, refinement } => (
                "mod_two",
                Some(x),
                format!("d(t_x) - d(t_0) = {difference} is not q(x) = {refinement} (mod 2)"),
            ),
            DAxiomViolation::Additivity { x, value, sum } => {
                ("additivity", Some(x), format!("d(t_x) = {value} but the summands give {sum}"))
            }
        };
        Self { kind: kind.into(), element: element.map(|x| x.label()), detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DTableReport {
    pub name: String,
    pub valid: bool,
    pub violations: Vec<ViolationEntry>,
    pub skipped: Vec<String>,
}

impl DTableReport {
    pub fn new(name: &str, r: &DAxiomReport) -> Self {
        Self {
            name: name.into(),
            valid: r.is_valid(),
            violations: r.violations.iter().map(ViolationEntry::from).collect(),
            skipped: r.skipped.clone(),
        }
    }
}

impl Render for DTableReport {
    fn text(&self) -> String {
        let mut s = format!("{}: {}\n", self.name, if self.valid { "valid" } else { "INVALID" });
        for v in &self.violations {
            match &v.element {
                Some(x) => {
                    let _ = writeln!(s, "  {} at ({x}): {}", v.kind, v.detail);
                }
                None => {
                    let _ = writeln!(s, "  {}: {}", v.kind, v.detail);
                }
            }
        }
        for k in &self.skipped {
            let _ = writeln!(s, "  skipped: {k}");
        }
        s
    }
}

impl Render for Vec<DTableReport> {
    fn text(&self) -> String {
        self.iter().map(Render::text).collect()
    }
}
