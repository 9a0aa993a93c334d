//! Hypothesis checkers that decide when a homological obstruction applies.
//!
//! Every checker only certifies that an obstruction fires. An inconclusive
//! verdict says nothing about the manifold or knot being torsion or trivial.

mod descriptor;
mod independence;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::abelian::FiniteAbelianGroup;
use crate::error::{Error, Result};
use crate::exact::{exact_sqrt, is_prime, Residue};
use crate::linking::rho_surgery;

pub use descriptor::{
    connected_sum, multiple, reverse, validate_d_axioms, DAxiomReport, DAxiomViolation, DTable, ManifoldDescriptor,
    Provenance,
};
pub use independence::{
    check_independence, check_knot_family, check_knot_main, check_theorem_main, IndependenceCertificate, KnotRecord,
    PrimeAssignment,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Conclusion {
    /// Infinite order in the rational homology cobordism group.
    InfiniteOrder,
    /// Nonzero in the rational homology cobordism group (or, for knots, not slice).
    Nonzero,
    /// Linearly independent modulo integral homology spheres (or, for knots,
    /// in the concordance group).
    Independent,
    /// `|H_1|` is not a square, so there is no rational homology ball filling.
    ObstructedSquare,
    Inconclusive,
}

impl Conclusion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::InfiniteOrder => "infinite_order",
            Self::Nonzero => "nonzero",
            Self::Independent => "independent",
            Self::ObstructedSquare => "obstructed_square",
            Self::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The result a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    SquareOrder,
    SurgeryRho,
    PrimaryPart,
    Independence,
    KnotPrimaryPart,
    KnotIndependence,
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::SquareOrder => "square_order",
            Self::SurgeryRho => "surgery_rho",
            Self::PrimaryPart => "primary_part",
            Self::Independence => "independence",
            Self::KnotPrimaryPart => "knot_primary_part",
            Self::KnotIndependence => "knot_independence",
        }
    }

    pub fn statement(&self) -> &'static str {
        match self {
            Self::SquareOrder => "a rational homology sphere bounding a rational homology ball has |H_1| a square",
            Self::SurgeryRho => "odd n-surgery on a knot in S^3 with |n| != 1 (mod 8) has infinite order in Theta_Q",
            Self::PrimaryPart => {
                "if the p-part of H_1(Y) is Z/p^n with p = 3 (mod 4) and n odd, and H_1(N; Z/p) = 0, \
                 then mY # N is nonzero in Theta_Q for m != 0"
            }
            Self::Independence => {
                "Z/2-homology spheres with distinct primes p_i = 3 (mod 4), cyclic p_i-parts of odd exponent \
                 and no p_j-part for j != i are linearly independent in Theta_Q/Theta_Z"
            }
            Self::KnotPrimaryPart => {
                "if the p-part of H_1(Y_K) is Z/p^n with p = 3 (mod 4) and n odd, and p does not divide det J, \
                 then mK # J is not slice for m != 0"
            }
            Self::KnotIndependence => {
                "knots whose branched double covers satisfy the independence hypotheses are linearly \
                 independent in the concordance group"
            }
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClauseKind {
    NonzeroMultiple,
    OddOrder,
    PrimeThreeModFour,
    CyclicPrimaryPart,
    OddExponent,
    /// The relevant primary part of another manifold vanishes.
    TrivialPrimaryPart,
    OddFraming,
    RhoNonzero,
    SquareOrder,
}

impl ClauseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::NonzeroMultiple => "nonzero_multiple",
            Self::OddOrder => "odd_order",
            Self::PrimeThreeModFour => "prime_3_mod_4",
            Self::CyclicPrimaryPart => "cyclic_primary_part",
            Self::OddExponent => "odd_exponent",
            Self::TrivialPrimaryPart => "trivial_primary_part",
            Self::OddFraming => "odd_framing",
            Self::RhoNonzero => "rho_nonzero",
            Self::SquareOrder => "square_order",
        }
    }
}

impl fmt::Display for ClauseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One hypothesis and whether it held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub kind: ClauseKind,
    /// What the clause is about, e.g. a manifold name.
    pub subject: String,
    pub holds: bool,
    pub detail: String,
}

impl Clause {
    pub fn new(kind: ClauseKind, subject: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Self { kind, subject: subject.into(), holds, detail: detail.into() }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.holds { "ok" } else { "FAILED" };
        write!(f, "[{mark}] {} ({}): {}", self.kind, self.subject, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub conclusion: Conclusion,
    pub criterion: Criterion,
    /// Hypotheses checked, in order; an inconclusive verdict ends with a failed one.
    pub clauses: Vec<Clause>,
    /// `rho(t_0)`, for surgery verdicts.
    pub rho0: Option<Residue>,
}

impl Verdict {
    /// `success` when every clause holds, otherwise inconclusive.
    pub(crate) fn from_clauses(success: Conclusion, criterion: Criterion, clauses: Vec<Clause>) -> Self {
        let conclusion = if clauses.iter().all(|c| c.holds) { success } else { Conclusion::Inconclusive };
        Self { conclusion, criterion, clauses, rho0: None }
    }

    pub fn is_conclusive(&self) -> bool {
        self.conclusion != Conclusion::Inconclusive
    }

    pub fn failed_clause(&self) -> Option<&Clause> {
        self.clauses.iter().find(|c| !c.holds)
    }
}

/// Whether `|G|` is a perfect square.
pub fn square_order_test(g: &FiniteAbelianGroup) -> bool {
    exact_sqrt(&g.order()).is_some()
}

/// Obstructed when `|H_1(Y)|` is not a square.
pub fn check_square_order(y: &ManifoldDescriptor) -> Verdict {
    let order = y.h1().order();
    let square = square_order_test(y.h1());
    let clause = Clause::new(
        ClauseKind::SquareOrder,
        y.name(),
        !square,
        if square { format!("|H_1| = {order} is a square") } else { format!("|H_1| = {order} is not a square") },
    );
    Verdict::from_clauses(Conclusion::ObstructedSquare, Criterion::SquareOrder, alloc::vec![clause])
}

/// Infinite order of `n`-surgery on a knot, from `rho(t_0) != 0`.
pub fn check_surgery_infinite_order(n: i64) -> Result<Verdict> {
    if n % 2 == 0 {
        return Err(Error::EvenFraming { n });
    }
    let rho0 = rho_surgery(n)?.rho0().clone();
    let residue8 = n.unsigned_abs() % 8;
    debug_assert_eq!(rho0.is_zero(), residue8 == 1);
    let mut detail = format!("rho(t_0) = {rho0} (mod 2); |n| = {residue8} (mod 8)");
    if n.unsigned_abs() == 1 {
        detail.push_str("; the surgery is an integral homology sphere");
    }
    let clauses = alloc::vec![
        Clause::new(ClauseKind::OddFraming, n.to_string(), true, format!("n = {n} is odd")),
        Clause::new(ClauseKind::RhoNonzero, n.to_string(), !rho0.is_zero(), detail),
    ];
    let mut verdict = Verdict::from_clauses(Conclusion::InfiniteOrder, Criterion::SurgeryRho, clauses);
    verdict.rho0 = Some(rho0);
    Ok(verdict)
}

pub(crate) fn three_mod_four_clause(p: u64) -> Clause {
    let holds = is_prime(p) && p % 4 == 3;
    let detail = if !is_prime(p) {
        format!("{p} is not prime")
    } else {
        format!("{p} = {} (mod 4)", p % 4)
    };
    Clause::new(ClauseKind::PrimeThreeModFour, format!("p = {p}"), holds, detail)
}
