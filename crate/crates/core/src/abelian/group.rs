use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{factorize, gcd_u64, is_prime, pow_u64};

/// A cyclic factor `Z/p^e` of a primary decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicFactor {
    pub prime: u64,
    pub exponent: u32,
}

impl CyclicFactor {
    pub fn order(&self) -> u64 {
        pow_u64(self.prime, self.exponent)
    }
}

/// A finite abelian group in primary decomposition.
///
/// Factors are sorted by prime, then exponent; coordinates of a
/// [`GroupElement`] follow the same order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FiniteAbelianGroup {
    factors: Vec<CyclicFactor>,
}

/// An element, coordinate `i` reduced modulo the `i`-th factor order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Comma separated coordinates, used as table keys in file formats.
    pub fn label(&self) -> alloc::string::String {
        let parts: Vec<_> = self.0.iter().map(|c| c.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

/// The `p`-primary summand of a group and where it sits in the ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryPart {
    pub prime: u64,
    pub group: FiniteAbelianGroup,
    /// Ambient coordinate index of each coordinate of `group`.
    pub indices: Vec<usize>,
}

impl PrimaryPart {
    pub fn project(&self, x: &GroupElement) -> GroupElement {
        GroupElement(self.indices.iter().map(|&i| x.0[i]).collect())
    }

    pub fn include(&self, ambient: &FiniteAbelianGroup, x: &GroupElement) -> GroupElement {
        let mut coords = vec![0; ambient.rank()];
        for (&i, &c) in self.indices.iter().zip(&x.0) {
            coords[i] = c;
        }
        GroupElement(coords)
    }
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Canonical group from prime-power factors given in any order.
    pub fn from_factors(factors: impl IntoIterator<Item = CyclicFactor>) -> Result<Self> {
        let mut factors: Vec<_> = factors.into_iter().collect();
        for f in &factors {
            if !is_prime(f.prime) {
                return Err(Error::NotPrime { value: f.prime });
            }
            if f.exponent == 0 {
                return Err(Error::InvalidInput("factor exponent must be positive".into()));
            }
            if f.prime.checked_pow(f.exponent).is_none() {
                return Err(Error::InvalidInput("factor order does not fit in 64 bits".into()));
            }
        }
        factors.sort();
        Ok(Self { factors })
    }

    /// `[prime, exponent, multiplicity]` triples, as used in the file formats.
    pub fn from_triples(triples: &[(u64, u32, u32)]) -> Result<Self> {
        Self::from_factors(triples.iter().flat_map(|&(prime, exponent, mult)| {
            core::iter::repeat_n(CyclicFactor { prime, exponent }, mult as usize)
        }))
    }

    pub fn triples(&self) -> Vec<(u64, u32, u32)> {
        let mut out: Vec<(u64, u32, u32)> = Vec::new();
        for f in &self.factors {
            match out.last_mut() {
                Some(last) if last.0 == f.prime && last.1 == f.exponent => last.2 += 1,
                _ => out.push((f.prime, f.exponent, 1)),
            }
        }
        out
    }

    /// Primary decomposition of `Z/d_1 + ... + Z/d_k`.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidInput("cyclic orders must be positive".into()));
        }
        Self::from_factors(orders.iter().flat_map(|&d| {
            factorize(d).into_iter().map(|(prime, exponent)| CyclicFactor { prime, exponent })
        }))
    }

    /// `(Z/p^n)^k`.
    pub fn homogeneous(p: u64, n: u32, k: usize) -> Result<Self> {
        Self::from_factors(core::iter::repeat_n(CyclicFactor { prime: p, exponent: n }, k))
    }

    pub fn factors(&self) -> &[CyclicFactor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn orders(&self) -> Vec<u64> {
        self.factors.iter().map(CyclicFactor::order).collect()
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, f| acc * f.order())
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_odd_order(&self) -> bool {
        self.factors.iter().all(|f| f.prime != 2)
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1u64, |acc, f| {
            let d = f.order();
            (acc / gcd_u64(acc, d)).checked_mul(d).expect("group exponent overflows u64")
        })
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.factors.iter().map(|f| f.prime).collect();
        ps.dedup();
        ps
    }

    pub fn primary_part(&self, p: u64) -> PrimaryPart {
        let indices: Vec<usize> =
            (0..self.rank()).filter(|&i| self.factors[i].prime == p).collect();
        let group = Self { factors: indices.iter().map(|&i| self.factors[i]).collect() };
        PrimaryPart { prime: p, group, indices }
    }

    /// `Some((p, n))` when the group is `(Z/p^n)^k` with `k >= 1`.
    pub fn homogeneous_type(&self) -> Option<(u64, u32)> {
        let first = *self.factors.first()?;
        self.factors.iter().all(|f| *f == first).then_some((first.prime, first.exponent))
    }

    /// Cyclic iff no prime occurs twice.
    pub fn is_cyclic(&self) -> bool {
        self.factors.windows(2).all(|w| w[0].prime != w[1].prime)
    }

    /// Invariant factors `d_1 | d_2 | ...`, all greater than one.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut by_prime: Vec<Vec<u64>> = Vec::new();
        for p in self.primes() {
            let mut orders: Vec<u64> =
                self.factors.iter().filter(|f| f.prime == p).map(CyclicFactor::order).collect();
            orders.reverse();
            by_prime.push(orders);
        }
        let len = by_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut out: Vec<u64> = (0..len)
            .map(|i| by_prime.iter().filter_map(|v| v.get(i)).product())
            .collect();
        out.reverse();
        out
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self == other
    }

    /// Direct sum in canonical order, with the coordinate positions of each summand.
    pub fn direct_sum(groups: &[&Self]) -> (Self, Vec<Vec<usize>>) {
        let mut tagged: Vec<(CyclicFactor, usize, usize)> = Vec::new();
        for (s, g) in groups.iter().enumerate() {
            for (i, f) in g.factors.iter().enumerate() {
                tagged.push((*f, s, i));
            }
        }
        tagged.sort();
        let mut layout: Vec<Vec<usize>> = groups.iter().map(|g| vec![0; g.rank()]).collect();
        for (pos, &(_, s, i)) in tagged.iter().enumerate() {
            layout[s][i] = pos;
        }
        (Self { factors: tagged.into_iter().map(|t| t.0).collect() }, layout)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Reduce integer coordinates into canonical form.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidInput(alloc::format!(
                "element has {} coordinates, group has rank {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, f)| (c as i128).rem_euclid(f.order() as i128) as u64)
                .collect(),
        ))
    }

    pub fn element_u64(&self, coords: &[u64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidInput("coordinate count does not match rank".into()));
        }
        Ok(GroupElement(coords.iter().zip(&self.factors).map(|(&c, f)| c % f.order()).collect()))
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.0.len() == self.rank() && x.0.iter().zip(&self.factors).all(|(&c, f)| c < f.order())
    }

    pub fn basis_vector(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1 % self.factors[i].order();
        GroupElement(coords)
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement(
            self.factors
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let d = f.order();
                    ((x.0[i] as u128 + y.0[i] as u128) % d as u128) as u64
                })
                .collect(),
        )
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        GroupElement(
            self.factors
                .iter()
                .zip(&x.0)
                .map(|(f, &c)| if c == 0 { 0 } else { f.order() - c })
                .collect(),
        )
    }

    pub fn scale(&self, x: &GroupElement, k: i64) -> GroupElement {
        GroupElement(
            self.factors
                .iter()
                .zip(&x.0)
                .map(|(f, &c)| {
                    let d = f.order() as i128;
                    ((c as i128 * (k as i128).rem_euclid(d)).rem_euclid(d)) as u64
                })
                .collect(),
        )
    }

    pub fn element_order(&self, x: &GroupElement) -> u64 {
        self.factors.iter().zip(&x.0).fold(1u64, |acc, (f, &c)| {
            let d = f.order();
            let o = d / gcd_u64(d, c);
            acc / gcd_u64(acc, o) * o
        })
    }

    /// Every element, last coordinate varying fastest.
    pub fn elements(&self) -> Elements {
        Elements::new(self.orders())
    }

    /// Whether the group is cyclic of order `N` and `x` lies in `Z/N`.
    fn cyclic_moduli(&self) -> Result<()> {
        if self.is_cyclic() {
            Ok(())
        } else {
            Err(Error::InvalidInput("group is not cyclic".into()))
        }
    }

    /// Image of `x in Z/N` under the canonical identification with a cyclic group.
    pub fn cyclic_element(&self, x: i64) -> Result<GroupElement> {
        self.cyclic_moduli()?;
        self.element(&vec![x; self.rank()])
    }

    /// Inverse of [`Self::cyclic_element`], by the Chinese remainder theorem.
    pub fn cyclic_label(&self, x: &GroupElement) -> Result<u64> {
        self.cyclic_moduli()?;
        let mut value: u128 = 0;
        let mut modulus: u128 = 1;
        for (f, &c) in self.factors.iter().zip(&x.0) {
            let d = f.order() as u128;
            // value + modulus * t = c (mod d)
            let inv = crate::exact::mod_inverse((modulus % d) as i128, d)?;
            let diff = (c as u128 + d - value % d) % d;
            let t = diff * inv % d;
            value += modulus * t;
            modulus *= d;
        }
        Ok(value as u64)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "Z/{}", c.order())?;
        }
        Ok(())
    }
}

/// Mixed-radix counter over a box of coordinates.
#[derive(Debug, Clone)]
pub struct Elements {
    radices: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Elements {
    pub(crate) fn new(radices: Vec<u64>) -> Self {
        let next = if radices.contains(&0) { None } else { Some(vec![0; radices.len()]) };
        Self { radices, next }
    }
}

impl Iterator for Elements {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.radices[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(GroupElement(current))
    }
}

/// Unchecked constructor for crate-internal use.
pub(crate) fn raw_element(coords: Vec<u64>) -> GroupElement {
    GroupElement(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::from_cyclic_orders(orders).unwrap()
    }

    #[test]
    fn cyclic_orders_decompose() {
        assert!(g(&[1]).is_trivial());
        assert_eq!(g(&[45]).triples(), vec![(3, 2, 1), (5, 1, 1)]);
        assert_eq!(g(&[3, 3]).triples(), vec![(3, 1, 2)]);
        assert_eq!(g(&[45]).order(), BigUint::from(45u32));
        assert_eq!(g(&[9, 3, 5]).orders(), vec![3, 9, 5]);
    }

    #[test]
    fn primary_parts() {
        let z45 = g(&[45]);
        assert_eq!(z45.primary_part(3).group, g(&[9]));
        assert_eq!(z45.primary_part(5).group, g(&[5]));
        assert!(z45.primary_part(7).group.is_trivial());
        let pp = z45.primary_part(5);
        let x = z45.cyclic_element(7).unwrap();
        assert_eq!(pp.project(&x).coords(), &[2]);
    }

    #[test]
    fn isomorphism_is_structural() {
        assert!(!g(&[3, 3]).is_isomorphic(&g(&[9])));
        assert!(g(&[9, 3]).is_isomorphic(&g(&[3, 9])));
        assert!(g(&[45]).is_isomorphic(&g(&[9, 5])));
    }

    #[test]
    fn invariant_factors_recombine() {
        assert_eq!(g(&[45]).invariant_factors(), vec![45]);
        assert_eq!(g(&[3, 9, 5]).invariant_factors(), vec![3, 45]);
        assert!(g(&[1]).invariant_factors().is_empty());
    }

    #[test]
    fn cyclic_labels_roundtrip() {
        let z = g(&[15]);
        for x in 0..15 {
            let e = z.cyclic_element(x).unwrap();
            assert_eq!(z.cyclic_label(&e).unwrap(), x as u64);
        }
        assert!(g(&[3, 3]).cyclic_element(1).is_err());
    }

    #[test]
    fn element_enumeration_and_arithmetic() {
        let grp = g(&[3, 9]);
        let all: Vec<_> = grp.elements().collect();
        assert_eq!(all.len(), 27);
        assert_eq!(all[1].coords(), &[0, 1]);
        let x = grp.element(&[2, 7]).unwrap();
        assert!(grp.add(&x, &grp.neg(&x)).is_zero());
        assert_eq!(grp.element_order(&x), 9);
        assert_eq!(grp.scale(&x, -1), grp.neg(&x));
        assert_eq!(g(&[1]).elements().count(), 1);
    }

    #[test]
    fn direct_sum_layout() {
        let (sum, layout) = FiniteAbelianGroup::direct_sum(&[&g(&[9]), &g(&[3])]);
        assert_eq!(sum.orders(), vec![3, 9]);
        assert_eq!(layout, vec![vec![1], vec![0]]);
    }
}
