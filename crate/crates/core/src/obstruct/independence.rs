//! Prime-assignment search for families and the single-manifold criterion,
//! for manifolds and for knots through their branched double covers.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;

use super::{three_mod_four_clause, Clause, ClauseKind, Conclusion, Criterion, ManifoldDescriptor, Verdict};
use crate::abelian::IntMatrix;
use crate::error::{Error, Result};
use crate::exact::factorize;

/// What is known about one primary part.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Primary {
    /// Exponents of the cyclic factors.
    Known(Vec<u32>),
    /// Only the order `p^log_order` is known.
    Unknown { log_order: u32 },
}

/// Primary decomposition of `H_1`, possibly with undetermined parts.
#[derive(Debug, Clone)]
struct Profile {
    name: String,
    even: bool,
    parts: BTreeMap<u64, Primary>,
}

impl Profile {
    fn of_descriptor(y: &ManifoldDescriptor) -> Self {
        let mut parts: BTreeMap<u64, Primary> = BTreeMap::new();
        for f in y.h1().factors() {
            match parts.entry(f.prime).or_insert_with(|| Primary::Known(Vec::new())) {
                Primary::Known(e) => e.push(f.exponent),
                Primary::Unknown { .. } => unreachable!(),
            }
        }
        Self { name: y.name().into(), even: parts.contains_key(&2), parts }
    }

    /// Clause "the p-part is Z/p^e with e odd"; `want` pins `e` when given.
    fn cyclic_clauses(&self, p: u64, want: Option<u32>) -> Vec<Clause> {
        let subject = self.name.clone();
        match self.parts.get(&p) {
            None => alloc::vec![Clause::new(
                ClauseKind::CyclicPrimaryPart,
                subject,
                false,
                format!("{p}-primary part of H_1 is trivial"),
            )],
            Some(Primary::Unknown { log_order }) => alloc::vec![Clause::new(
                ClauseKind::CyclicPrimaryPart,
                subject,
                false,
                format!("{p}-primary part has order {p}^{log_order} but is not known to be cyclic"),
            )],
            Some(Primary::Known(e)) if e.len() != 1 => alloc::vec![Clause::new(
                ClauseKind::CyclicPrimaryPart,
                subject,
                false,
                format!("{p}-primary part has {} cyclic factors", e.len()),
            )],
            Some(Primary::Known(e)) => {
                let e = e[0];
                let mut out = alloc::vec![Clause::new(
                    ClauseKind::CyclicPrimaryPart,
                    subject.clone(),
                    want.is_none_or(|n| n == e),
                    match want {
                        Some(n) if n != e => format!("{p}-primary part is Z/{p}^{e}, not Z/{p}^{n}"),
                        _ => format!("{p}-primary part is Z/{p}^{e}"),
                    },
                )];
                if out[0].holds {
                    let detail = if e % 2 == 1 { format!("exponent {e} is odd") } else { format!("exponent {e} is even") };
                    out.push(Clause::new(ClauseKind::OddExponent, subject, e % 2 == 1, detail));
                }
                out
            }
        }
    }

    fn odd_clause(&self) -> Clause {
        let detail = if self.even { "|H_1| is even" } else { "|H_1| is odd" };
        Clause::new(ClauseKind::OddOrder, self.name.clone(), !self.even, detail)
    }

    fn trivial_part_clause(&self, p: u64) -> Clause {
        let holds = !self.parts.contains_key(&p);
        let detail =
            if holds { format!("{p}-primary part of H_1 is trivial") } else { format!("{p}-primary part of H_1 is nonzero") };
        Clause::new(ClauseKind::TrivialPrimaryPart, self.name.clone(), holds, detail)
    }
}

/// Hypotheses of the single-manifold criterion, all evaluated.
fn main_clauses(y: &Profile, n_prof: &Profile, m: i64, p: u64, n: u32) -> Vec<Clause> {
    let mut clauses = alloc::vec![
        Clause::new(ClauseKind::NonzeroMultiple, "m", m != 0, format!("m = {m}")),
        y.odd_clause(),
        n_prof.odd_clause(),
        three_mod_four_clause(p),
    ];
    let exponent_ok = n % 2 == 1;
    let detail = if exponent_ok { format!("n = {n} is odd") } else { format!("n = {n} is not odd and positive") };
    clauses.push(Clause::new(ClauseKind::OddExponent, "n", exponent_ok, detail));
    clauses.extend(y.cyclic_clauses(p, Some(n)).into_iter().filter(|c| c.kind == ClauseKind::CyclicPrimaryPart));
    clauses.push(n_prof.trivial_part_clause(p));
    clauses
}

fn verdict_main(y: &Profile, n_prof: &Profile, m: i64, p: u64, n: u32, criterion: Criterion) -> Verdict {
    Verdict::from_clauses(Conclusion::Nonzero, criterion, main_clauses(y, n_prof, m, p, n))
}

/// Whether `mY # N` is certified nonzero in the rational homology cobordism group.
pub fn check_theorem_main(y: &ManifoldDescriptor, n_summand: &ManifoldDescriptor, m: i64, p: u64, n: u32) -> Verdict {
    verdict_main(&Profile::of_descriptor(y), &Profile::of_descriptor(n_summand), m, p, n, Criterion::PrimaryPart)
}

/// Member `index` of the family is matched with `Z/prime^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeAssignment {
    pub index: usize,
    pub name: String,
    pub prime: u64,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceCertificate {
    /// One entry per member when the search succeeds, otherwise empty.
    pub assignment: Vec<PrimeAssignment>,
    pub verdict: Verdict,
}

impl IndependenceCertificate {
    pub fn is_independent(&self) -> bool {
        self.verdict.conclusion == Conclusion::Independent
    }
}

/// Clauses for `p` as the prime of member `i`; the last one fails if `p` is unusable.
fn prime_clauses(family: &[Profile], i: usize, p: u64) -> Vec<Clause> {
    let mut clauses = family[i].cyclic_clauses(p, None);
    if clauses.iter().all(|c| c.holds) {
        for (j, other) in family.iter().enumerate() {
            if j != i {
                let c = other.trivial_part_clause(p);
                let stop = !c.holds;
                clauses.push(c);
                if stop {
                    break;
                }
            }
        }
    }
    clauses
}

/// The smallest usable prime of each member is its own, since a usable
/// prime divides the order of no other member; so members are independent
/// of each other and the search is exhaustive per member.
fn search(family: &[Profile], criterion: Criterion) -> IndependenceCertificate {
    let mut clauses: Vec<Clause> = family.iter().map(Profile::odd_clause).collect();
    if let Some(bad) = clauses.iter().position(|c| !c.holds) {
        clauses.truncate(bad + 1);
        return IndependenceCertificate {
            assignment: Vec::new(),
            verdict: Verdict::from_clauses(Conclusion::Independent, criterion, clauses),
        };
    }
    let mut assignment = Vec::new();
    for (i, member) in family.iter().enumerate() {
        let candidates: Vec<u64> = member.parts.keys().copied().filter(|p| p % 4 == 3).collect();
        let mut first_failure: Option<Vec<Clause>> = None;
        let mut found = None;
        for &p in &candidates {
            let trial = prime_clauses(family, i, p);
            if trial.iter().all(|c| c.holds) {
                found = Some((p, trial));
                break;
            }
            first_failure.get_or_insert(trial);
        }
        match found {
            Some((p, trial)) => {
                let exponent = match &member.parts[&p] {
                    Primary::Known(e) => e[0],
                    Primary::Unknown { .. } => unreachable!("unknown parts are never usable"),
                };
                clauses.push(three_mod_four_clause(p));
                clauses.extend(trial);
                assignment.push(PrimeAssignment { index: i, name: member.name.clone(), prime: p, exponent });
            }
            None => {
                match first_failure {
                    Some(trial) => {
                        clauses.push(three_mod_four_clause(candidates[0]));
                        clauses.extend(trial);
                    }
                    None => {
                        let primes: Vec<String> = member.parts.keys().map(|p| format!("{p} = {} (mod 4)", p % 4)).collect();
                        let detail = if primes.is_empty() {
                            String::from("H_1 is trivial")
                        } else {
                            format!("no prime congruent to 3 mod 4 divides |H_1|: {}", primes.join(", "))
                        };
                        clauses.push(Clause::new(ClauseKind::PrimeThreeModFour, member.name.clone(), false, detail));
                    }
                }
                return IndependenceCertificate {
                    assignment: Vec::new(),
                    verdict: Verdict::from_clauses(Conclusion::Independent, criterion, clauses),
                };
            }
        }
    }
    IndependenceCertificate { assignment, verdict: Verdict::from_clauses(Conclusion::Independent, criterion, clauses) }
}

/// Search for primes witnessing linear independence modulo integral homology spheres.
pub fn check_independence(family: &[ManifoldDescriptor]) -> IndependenceCertificate {
    let profiles: Vec<Profile> = family.iter().map(Profile::of_descriptor).collect();
    search(&profiles, Criterion::Independence)
}

/// A knot given by its determinant and, optionally, more data on its branched double cover.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnotRecord {
    pub name: String,
    pub determinant: Option<i64>,
    /// Asserts that `H_1` of the branched double cover is cyclic.
    pub cyclic: bool,
    /// A Goeritz matrix, presenting `H_1` of the branched double cover.
    pub goeritz: Option<IntMatrix>,
    pub branched_cover: Option<ManifoldDescriptor>,
}

impl KnotRecord {
    pub fn from_determinant(name: impl Into<String>, determinant: i64, cyclic: bool) -> Self {
        Self { name: name.into(), determinant: Some(determinant), cyclic, ..Self::default() }
    }

    /// Branched double cover from the explicit descriptor or the Goeritz matrix.
    pub fn cover(&self) -> Result<Option<ManifoldDescriptor>> {
        let cover = match (&self.branched_cover, &self.goeritz) {
            (Some(c), _) => Some(c.clone()),
            (None, Some(g)) => Some(ManifoldDescriptor::from_presentation(format!("Y_{}", self.name), g)?),
            (None, None) => None,
        };
        if let (Some(c), Some(det)) = (&cover, self.determinant) {
            if c.h1().order() != BigUint::from(det.unsigned_abs()) {
                return Err(Error::InvalidInput(format!(
                    "|det {}| = {} but |H_1| of the branched cover is {}",
                    self.name,
                    det.unsigned_abs(),
                    c.h1().order()
                )));
            }
        }
        Ok(cover)
    }

    fn profile(&self) -> Result<Profile> {
        if let Some(det) = self.determinant {
            if det % 2 == 0 {
                return Err(Error::InvalidInput(format!("determinant {det} of {} must be odd", self.name)));
            }
        }
        if let Some(cover) = self.cover()? {
            let mut profile = Profile::of_descriptor(&cover);
            profile.name = self.name.clone();
            return Ok(profile);
        }
        let det = self
            .determinant
            .ok_or_else(|| Error::MissingData(format!("{} has neither a determinant nor branched cover homology", self.name)))?;
        let parts = factorize(det.unsigned_abs())
            .into_iter()
            .map(|(p, e)| {
                let part = if e == 1 || self.cyclic { Primary::Known(alloc::vec![e]) } else { Primary::Unknown { log_order: e } };
                (p, part)
            })
            .collect();
        Ok(Profile { name: self.name.clone(), even: false, parts })
    }
}

/// Linear independence in the concordance group through branched double covers.
pub fn check_knot_family(knots: &[KnotRecord]) -> Result<IndependenceCertificate> {
    let profiles = knots.iter().map(KnotRecord::profile).collect::<Result<Vec<_>>>()?;
    Ok(search(&profiles, Criterion::KnotIndependence))
}

/// Whether `mK # J` is certified not slice.
pub fn check_knot_main(k: &KnotRecord, j: &KnotRecord, m: i64, p: u64, n: u32) -> Result<Verdict> {
    Ok(verdict_main(&k.profile()?, &j.profile()?, m, p, n, Criterion::KnotPrimaryPart))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{to_int_matrix, FiniteAbelianGroup};
    use alloc::vec;

    fn y(name: &str, orders: &[u64]) -> ManifoldDescriptor {
        ManifoldDescriptor::abstract_group(name, FiniteAbelianGroup::from_cyclic_orders(orders).unwrap())
    }

    fn failed(c: &IndependenceCertificate) -> &Clause {
        c.verdict.failed_clause().expect("a failed clause")
    }

    #[test]
    fn main_examples() {
        let v = check_theorem_main(&y("Y", &[3]), &y("N", &[49]), 2, 3, 1);
        assert_eq!(v.conclusion, Conclusion::Nonzero);
        let v = check_theorem_main(&y("Y", &[27]), &ManifoldDescriptor::sphere(), -4, 3, 3);
        assert_eq!(v.conclusion, Conclusion::Nonzero);
        let v = check_theorem_main(&y("Y", &[3]), &y("N", &[15]), 2, 3, 1);
        assert_eq!(v.conclusion, Conclusion::Inconclusive);
        let c = v.failed_clause().unwrap();
        assert_eq!((c.kind, c.subject.as_str()), (ClauseKind::TrivialPrimaryPart, "N"));
    }

    #[test]
    fn main_clause_failures() {
        let good = (y("Y", &[3 * 5]), y("N", &[7]));
        assert!(check_theorem_main(&good.0, &good.1, 1, 3, 1).is_conclusive());
        let cases: Vec<(ManifoldDescriptor, ManifoldDescriptor, i64, u64, u32, ClauseKind)> = vec![
            (good.0.clone(), good.1.clone(), 0, 3, 1, ClauseKind::NonzeroMultiple),
            (y("Y", &[6]), good.1.clone(), 1, 3, 1, ClauseKind::OddOrder),
            (good.0.clone(), y("N", &[14]), 1, 3, 1, ClauseKind::OddOrder),
            (y("Y", &[5]), good.1.clone(), 1, 5, 1, ClauseKind::PrimeThreeModFour),
            (y("Y", &[9]), good.1.clone(), 1, 3, 2, ClauseKind::OddExponent),
            (y("Y", &[27]), good.1.clone(), 1, 3, 1, ClauseKind::CyclicPrimaryPart),
            (y("Y", &[3, 3]), good.1.clone(), 1, 3, 1, ClauseKind::CyclicPrimaryPart),
            (good.0.clone(), y("N", &[21]), 1, 3, 1, ClauseKind::TrivialPrimaryPart),
        ];
        for (a, b, m, p, n, kind) in cases {
            let v = check_theorem_main(&a, &b, m, p, n);
            assert_eq!(v.conclusion, Conclusion::Inconclusive);
            assert_eq!(v.failed_clause().unwrap().kind, kind);
        }
    }

    #[test]
    fn independence_examples() {
        let c = check_independence(&[y("A", &[3]), y("B", &[7]), y("C", &[11])]);
        assert!(c.is_independent());
        let pairs: Vec<_> = c.assignment.iter().map(|a| (a.prime, a.exponent)).collect();
        assert_eq!(pairs, vec![(3, 1), (7, 1), (11, 1)]);

        let c = check_independence(&[y("A", &[3]), y("B", &[21])]);
        assert!(!c.is_independent() && c.assignment.is_empty());
        let f = failed(&c);
        assert_eq!((f.kind, f.subject.as_str()), (ClauseKind::TrivialPrimaryPart, "B"));
        assert!(f.detail.starts_with("3-primary"));

        let f = failed(&check_independence(&[y("A", &[9])])).clone();
        assert_eq!(f.kind, ClauseKind::OddExponent);
        assert!(f.detail.contains("exponent 2"));

        assert_eq!(failed(&check_independence(&[y("A", &[6])])).kind, ClauseKind::OddOrder);
        assert_eq!(failed(&check_independence(&[y("A", &[5])])).kind, ClauseKind::PrimeThreeModFour);
        assert_eq!(failed(&check_independence(&[y("A", &[3, 3])])).kind, ClauseKind::CyclicPrimaryPart);
    }

    #[test]
    fn later_primes_are_tried() {
        // 3 is shared, 7 and 11 are private
        let c = check_independence(&[y("A", &[3 * 7]), y("B", &[3 * 11 * 11 * 11])]);
        assert!(c.is_independent());
        let pairs: Vec<_> = c.assignment.iter().map(|a| (a.prime, a.exponent)).collect();
        assert_eq!(pairs, vec![(7, 1), (11, 3)]);
        assert!(check_independence(&[]).is_independent());
    }

    #[test]
    fn knots() {
        let family: Vec<_> = [3, 7, 11].iter().map(|&d| KnotRecord::from_determinant(format!("K{d}"), d, true)).collect();
        assert!(check_knot_family(&family).unwrap().is_independent());

        let c = check_knot_family(&[KnotRecord::from_determinant("4_1", 5, true)]).unwrap();
        assert_eq!(c.verdict.conclusion, Conclusion::Inconclusive);
        assert_eq!(failed(&c).kind, ClauseKind::PrimeThreeModFour);

        // 27 without a cyclicity assertion: the 3-part is undetermined
        let c = check_knot_family(&[KnotRecord::from_determinant("K", 27, false)]).unwrap();
        assert_eq!(failed(&c).kind, ClauseKind::CyclicPrimaryPart);
        assert!(check_knot_family(&[KnotRecord::from_determinant("K", 27, true)]).unwrap().is_independent());

        let missing = KnotRecord { name: "K".into(), ..KnotRecord::default() };
        assert!(matches!(check_knot_family(&[missing]), Err(Error::MissingData(_))));
        assert!(check_knot_family(&[KnotRecord::from_determinant("K", 4, true)]).is_err());
    }

    #[test]
    fn knot_covers() {
        // Goeritz matrix [[3]] for the trefoil
        let trefoil = KnotRecord { name: "3_1".into(), determinant: Some(3), goeritz: Some(to_int_matrix(&[vec![3]])), ..KnotRecord::default() };
        assert_eq!(trefoil.cover().unwrap().unwrap().h1(), &FiniteAbelianGroup::from_cyclic_orders(&[3]).unwrap());
        assert!(check_knot_family(&[trefoil.clone()]).unwrap().is_independent());
        let wrong = KnotRecord { determinant: Some(5), ..trefoil.clone() };
        assert!(wrong.cover().is_err());

        let j = KnotRecord::from_determinant("J", 25, false);
        let v = check_knot_main(&trefoil, &j, 3, 3, 1).unwrap();
        assert_eq!((v.conclusion, v.criterion), (Conclusion::Nonzero, Criterion::KnotPrimaryPart));
        let j = KnotRecord::from_determinant("J", 15, false);
        assert_eq!(check_knot_main(&trefoil, &j, 3, 3, 1).unwrap().conclusion, Conclusion::Inconclusive);
    }

    #[test]
    fn permutation_invariance() {
        let family = [y("A", &[3 * 5]), y("B", &[7]), y("C", &[11 * 11 * 11 * 13])];
        let base = check_independence(&family);
        let perm = [2usize, 0, 1];
        let shuffled: Vec<_> = perm.iter().map(|&i| family[i].clone()).collect();
        let c = check_independence(&shuffled);
        for (k, &i) in perm.iter().enumerate() {
            let (a, b) = (&c.assignment[k], &base.assignment[i]);
            assert_eq!((&a.name, a.prime, a.exponent), (&b.name, b.prime, b.exponent));
        }
    }
}
