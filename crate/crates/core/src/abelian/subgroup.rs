use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::echelon::{echelonize, enumerate_forms, EchelonForm};
use super::group::{raw_element, Elements, FiniteAbelianGroup, GroupElement};
use super::snf::smith_normal_form;
use crate::error::{Error, Result};
use crate::exact::{gcd_u64, pow_u64};

/// A subgroup in canonical form.
///
/// Generators are the reduced echelon rows of each primary component
/// (primes ascending), written in ambient coordinates, so the subgroup is the
/// internal direct sum of the cyclic groups they generate and two subgroups
/// are equal iff their generator lists are.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    ambient: FiniteAbelianGroup,
    generators: Vec<GroupElement>,
    orders: Vec<u64>,
}

/// Layout of one primary component inside the homogeneous group
/// `(Z/p^n)^k` with `n` the largest exponent.
#[derive(Clone)]
struct Embedding {
    prime: u64,
    n: u32,
    indices: Vec<usize>,
    floors: Vec<u32>,
}

impl Embedding {
    fn of(g: &FiniteAbelianGroup, p: u64) -> Self {
        let pp = g.primary_part(p);
        let n = pp.group.factors().iter().map(|f| f.exponent).max().unwrap_or(0);
        let floors = pp.group.factors().iter().map(|f| n - f.exponent).collect();
        Self { prime: p, n, indices: pp.indices, floors }
    }

    fn embed(&self, x: &GroupElement) -> Vec<u64> {
        let modulus = pow_u64(self.prime, self.n);
        self.indices
            .iter()
            .zip(&self.floors)
            .map(|(&i, &f)| {
                ((x.coords()[i] as u128 * pow_u64(self.prime, f) as u128) % modulus as u128) as u64
            })
            .collect()
    }

    fn unembed(&self, ambient: &FiniteAbelianGroup, row: &[u64]) -> GroupElement {
        let mut coords = vec![0; ambient.rank()];
        for ((&i, &f), &x) in self.indices.iter().zip(&self.floors).zip(row) {
            let scale = pow_u64(self.prime, f);
            debug_assert_eq!(x % scale, 0);
            coords[i] = x / scale;
        }
        raw_element(coords)
    }
}

impl Subgroup {
    pub fn trivial(ambient: &FiniteAbelianGroup) -> Self {
        Self { ambient: ambient.clone(), generators: Vec::new(), orders: Vec::new() }
    }

    pub fn whole(ambient: &FiniteAbelianGroup) -> Self {
        let gens: Vec<_> = (0..ambient.rank()).map(|i| ambient.basis_vector(i)).collect();
        Self::generated_by(ambient, &gens).expect("basis vectors lie in the group")
    }

    /// Canonical form of the subgroup generated by `gens`.
    pub fn generated_by(ambient: &FiniteAbelianGroup, gens: &[GroupElement]) -> Result<Self> {
        if let Some(bad) = gens.iter().find(|g| !ambient.contains(g)) {
            return Err(Error::InvalidInput(alloc::format!("{bad} is not an element of {ambient}")));
        }
        let mut forms = Vec::new();
        for p in ambient.primes() {
            let emb = Embedding::of(ambient, p);
            let rows: Vec<Vec<u64>> = gens.iter().map(|g| emb.embed(g)).collect();
            forms.push((echelonize(p, emb.n, emb.indices.len(), &rows), emb));
        }
        Ok(Self::from_forms(ambient, &forms))
    }

    fn from_forms(ambient: &FiniteAbelianGroup, forms: &[(EchelonForm, Embedding)]) -> Self {
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        for (form, emb) in forms {
            for (i, row) in form.rows().iter().enumerate() {
                generators.push(emb.unembed(ambient, row));
                orders.push(form.row_order(i));
            }
        }
        Self { ambient: ambient.clone(), generators, orders }
    }

    pub fn ambient(&self) -> &FiniteAbelianGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Order of each generator; the subgroup is the direct sum of these cyclic groups.
    pub fn generator_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> BigUint {
        self.orders.iter().fold(BigUint::one(), |acc, &o| acc * o)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// The abstract group `M`, in primary decomposition.
    pub fn isomorphism_type(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::from_cyclic_orders(&self.orders).expect("generator orders are prime powers")
    }

    /// Every element exactly once.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        Elements::new(self.orders.clone()).map(move |coeffs| self.combination(coeffs.coords()))
    }

    /// `sum_i coeffs[i] * generators[i]`.
    pub fn combination(&self, coeffs: &[u64]) -> GroupElement {
        let mut acc = self.ambient.zero();
        for (g, &t) in self.generators.iter().zip(coeffs) {
            if t != 0 {
                acc = self.ambient.add(&acc, &self.ambient.scale(g, t as i64));
            }
        }
        acc
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        if !self.ambient.contains(x) {
            return false;
        }
        let mut gens = self.generators.clone();
        gens.push(x.clone());
        Self::generated_by(&self.ambient, &gens).is_ok_and(|s| s == *self)
    }

    /// `{x in M : k x = 0}`.
    pub fn torsion(&self, k: u64) -> Self {
        let gens: Vec<_> = self
            .generators
            .iter()
            .zip(&self.orders)
            .map(|(g, &o)| self.ambient.scale(g, (o / gcd_u64(o, k)) as i64))
            .collect();
        Self::generated_by(&self.ambient, &gens).expect("multiples stay in the group")
    }

    /// Whether `other` is contained in `self` (same ambient group).
    pub fn includes(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && other.generators.iter().all(|g| self.contains(g))
    }
}

/// Reduced echelon generators of a subgroup of `(Z/p^n)^k`.
pub fn echelon_generators(m: &Subgroup) -> Result<EchelonForm> {
    let (p, n) = m.ambient.homogeneous_type().ok_or(Error::NotHomogeneousAmbient)?;
    let rows: Vec<Vec<u64>> = m.generators.iter().map(|g| g.coords().to_vec()).collect();
    Ok(echelonize(p, n, m.ambient.rank(), &rows))
}

/// Complete list of subgroups of order `order`, sorted.
pub fn enumerate_subgroups_of_order(g: &FiniteAbelianGroup, order: &BigUint) -> Result<Vec<Subgroup>> {
    let group_order = g.order();
    if order.is_zero() || !group_order.is_multiple_of(order) {
        return Err(Error::OrderNotDividing {
            order: order.to_string(),
            group_order: group_order.to_string(),
        });
    }
    let mut per_prime: Vec<Vec<(EchelonForm, Embedding)>> = Vec::new();
    for p in g.primes() {
        let mut remaining = order.clone();
        let mut s = 0u32;
        let bp = BigUint::from(p);
        while remaining.is_multiple_of(&bp) {
            remaining /= &bp;
            s += 1;
        }
        let emb = Embedding::of(g, p);
        let forms = enumerate_forms(p, emb.n, &emb.floors, s);
        per_prime.push(forms.into_iter().map(|f| (f, emb.clone())).collect());
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_prime.len()];
    'outer: loop {
        if per_prime.iter().any(Vec::is_empty) {
            break;
        }
        let chosen: Vec<_> = per_prime.iter().zip(&idx).map(|(list, &i)| list[i].clone()).collect();
        out.push(Subgroup::from_forms(g, &chosen));
        let mut k = idx.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_prime[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    out.sort();
    Ok(out)
}

/// Invariant factors of `G/M`, ascending, each dividing the next.
pub fn quotient_invariants(g: &FiniteAbelianGroup, m: &Subgroup) -> Result<Vec<u64>> {
    if m.ambient != *g {
        return Err(Error::NotASubgroup);
    }
    let rank = g.rank();
    let mut rel: Vec<Vec<BigInt>> = Vec::new();
    for (i, f) in g.factors().iter().enumerate() {
        let mut row = vec![BigInt::zero(); rank];
        row[i] = BigInt::from(f.order());
        rel.push(row);
    }
    for gen in &m.generators {
        rel.push(gen.coords().iter().map(|&c| BigInt::from(c)).collect());
    }
    if rank == 0 {
        return Ok(Vec::new());
    }
    let snf = smith_normal_form(&rel);
    Ok(snf
        .diagonal()
        .into_iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().expect("invariant factor divides a factor order"))
        .collect())
}

/// The quotient as a group in primary decomposition.
pub fn quotient_group(g: &FiniteAbelianGroup, m: &Subgroup) -> Result<FiniteAbelianGroup> {
    FiniteAbelianGroup::from_cyclic_orders(&quotient_invariants(g, m)?)
}
