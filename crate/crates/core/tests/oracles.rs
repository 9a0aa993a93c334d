//! Library results against brute-force or closed-form oracles.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcob_core::abelian::{enumerate_subgroups_of_order, to_int_matrix, FiniteAbelianGroup, GroupElement, Subgroup};
use qcob_core::exact::{exact_sqrt, Rational};
use qcob_core::linking::{diagonal_form, linking_from_presentation, quadratic_refinement};
use qcob_core::metab::enumerate_metabolizers;

type ElementSet = BTreeSet<Vec<u64>>;

fn closure(g: &FiniteAbelianGroup, gens: &[GroupElement]) -> ElementSet {
    let mut set: ElementSet = BTreeSet::from([g.zero().into_coords()]);
    let mut frontier = vec![g.zero()];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = g.add(&x, s);
            if set.insert(y.coords().to_vec()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Every subgroup, as the closure of every generating set of size at most `rank`.
fn all_subgroups(g: &FiniteAbelianGroup) -> BTreeSet<ElementSet> {
    let elements: Vec<GroupElement> = g.elements().collect();
    let mut found: BTreeSet<ElementSet> = BTreeSet::new();
    let mut layer: BTreeSet<ElementSet> = BTreeSet::from([closure(g, &[])]);
    for _ in 0..g.rank() {
        let mut next = BTreeSet::new();
        for h in &layer {
            let gens: Vec<GroupElement> = h.iter().map(|c| g.element_u64(c).unwrap()).collect();
            for x in &elements {
                let mut with = gens.clone();
                with.push(x.clone());
                next.insert(closure(g, &with));
            }
        }
        found.extend(layer);
        layer = next;
    }
    found.extend(layer);
    found
}

fn element_set(s: &Subgroup) -> ElementSet {
    s.elements().map(GroupElement::into_coords).collect()
}

#[test]
fn subgroup_enumeration_matches_closure() {
    for orders in [vec![9, 3], vec![3, 3, 3], vec![27], vec![5, 5], vec![9, 9], vec![15, 3], vec![4, 2]] {
        let g = FiniteAbelianGroup::from_cyclic_orders(&orders).unwrap();
        let mut by_order: BTreeMap<usize, BTreeSet<ElementSet>> = BTreeMap::new();
        for h in all_subgroups(&g) {
            by_order.entry(h.len()).or_default().insert(h);
        }
        for (order, expected) in by_order {
            let got = enumerate_subgroups_of_order(&g, &BigUint::from(order)).unwrap();
            let sets: BTreeSet<ElementSet> = got.iter().map(element_set).collect();
            assert_eq!(sets.len(), got.len(), "duplicates for {orders:?}, order {order}");
            assert_eq!(sets, expected, "{orders:?}, order {order}");
        }
    }
}

fn gaussian_binomial(n: u32, k: u32, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= p.pow(n - i) - 1;
        den *= p.pow(i + 1) - 1;
    }
    num / den
}

#[test]
fn subspace_counts_are_gaussian_binomials() {
    for (p, n) in [(3u64, 2u32), (3, 3), (3, 4), (5, 3), (7, 2), (7, 3)] {
        let g = FiniteAbelianGroup::homogeneous(p, 1, n as usize).unwrap();
        for k in 0..=n {
            let count = enumerate_subgroups_of_order(&g, &BigUint::from(p.pow(k))).unwrap().len() as u64;
            assert_eq!(count, gaussian_binomial(n, k, p), "p = {p}, n = {n}, k = {k}");
        }
    }
}

#[test]
fn lagrangian_counts_of_split_forms() {
    // a split form on F_p^{2k} has prod_{i<k} (p^i + 1) Lagrangians
    let split = |p: u64, k: u32| (0..k).map(|i| p.pow(i) + 1).product::<u64>();
    let cases: [(u64, &[i64], u32); 5] =
        [(3, &[1, 2], 1), (7, &[1, 6], 1), (3, &[1, 1, 1, 1], 2), (5, &[1, 4, 1, 4], 2), (7, &[1, 6, 1, 6], 2)];
    for (p, units, k) in cases {
        let found = enumerate_metabolizers(&diagonal_form(p, 1, units).unwrap()).unwrap();
        assert_eq!(found.metabolizers.len() as u64, split(p, k), "p = {p}, units {units:?}");
    }
}

/// Brute-force metabolizer search through closures and all element pairs.
#[test]
fn metabolizers_by_brute_force() {
    for (p, n, units) in [(3u64, 2u32, vec![1i64, 8]), (3, 1, vec![1, 1, 2, 2]), (5, 1, vec![1, 1])] {
        let form = diagonal_form(p, n, &units).unwrap();
        let g = form.group().clone();
        let target = usize::try_from(exact_sqrt(&g.order()).unwrap()).unwrap();
        let mut expected: BTreeSet<ElementSet> = BTreeSet::new();
        for h in all_subgroups(&g).into_iter().filter(|h| h.len() == target) {
            let elements: Vec<GroupElement> = h.iter().map(|c| g.element_u64(c).unwrap()).collect();
            let isotropic = elements.iter().all(|x| elements.iter().all(|y| form.pair(x, y).is_zero()));
            // G/M is isomorphic to M iff they have the same number of elements of each order
            let orders_m: Vec<u64> = elements.iter().map(|x| g.element_order(x)).collect();
            let quotient_orders: Vec<u64> = g
                .elements()
                .map(|x| (1..).find(|&k| h.contains(g.scale(&x, k as i64).coords())).unwrap())
                .collect();
            let hist = |v: &[u64]| v.iter().fold(BTreeMap::<u64, usize>::new(), |mut m, &o| {
                *m.entry(o).or_default() += 1;
                m
            });
            let qh: BTreeMap<u64, usize> = hist(&quotient_orders).into_iter().map(|(o, c)| (o, c / h.len())).collect();
            if isotropic && hist(&orders_m) == qh {
                expected.insert(h);
            }
        }
        let got: BTreeSet<ElementSet> =
            enumerate_metabolizers(&form).unwrap().metabolizers.iter().map(|m| element_set(m.subgroup())).collect();
        assert_eq!(got, expected, "p = {p}, n = {n}, units {units:?}");
    }
}

fn rational_inverse(a: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let k = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            r.extend((0..k).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let lead = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = &*x / &lead;
        }
        for i in (0..k).filter(|&i| i != c) {
            let f = m[i][c].clone();
            for j in 0..2 * k {
                let v = &m[c][j] * &f;
                m[i][j] -= v;
            }
        }
    }
    Some(m.into_iter().map(|r| r[k..].to_vec()).collect())
}

fn frac_mod_one(x: &BigRational) -> BigRational {
    x - x.floor()
}

#[test]
fn presentations_against_rational_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0;
    while tested < 60 {
        let k = rng.gen_range(1..=3usize);
        let mut a = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in i..k {
                let v = rng.gen_range(-6..=6);
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        let Some(inv) = rational_inverse(&a) else { continue };
        tested += 1;
        let pres = linking_from_presentation(&to_int_matrix(&a)).unwrap();
        // the exponent of coker A is the common denominator of A^{-1}
        let denom = inv.iter().flatten().fold(BigInt::one(), |l, x| num_integer::lcm(l, x.denom().clone()));
        assert_eq!(denom, BigInt::from(pres.group().exponent()), "A = {a:?}");
        let basis = |i: usize| (0..k).map(|j| BigInt::from(i64::from(i == j))).collect::<Vec<_>>();
        for i in 0..k {
            for j in 0..k {
                let x = pres.class_of(&basis(i)).unwrap();
                let y = pres.class_of(&basis(j)).unwrap();
                let expected = frac_mod_one(&-inv[i][j].clone());
                assert_eq!(pres.form().pair(&x, &y).value(), &expected, "A = {a:?}, ({i}, {j})");
            }
        }
        assert_eq!(BigInt::from(pres.group().order()), pres.order(), "A = {a:?}");
    }
}

#[test]
fn refinement_axioms_by_brute_force() {
    for (p, n, units) in [(3u64, 2u32, vec![1i64, 2]), (5, 1, vec![1, 2, 3]), (7, 1, vec![3])] {
        let form = diagonal_form(p, n, &units).unwrap();
        let q = quadratic_refinement(&form).unwrap();
        let g = form.group();
        for x in g.elements() {
            assert_eq!(q.value(&x).to_mod_one(), (-form.pair(&x, &x)).to_mod_one());
            assert_eq!(q.value(&g.neg(&x)), q.value(&x));
            for y in g.elements() {
                let lhs = &(&q.value(&g.add(&x, &y)) - &q.value(&x)) - &q.value(&y);
                let two_lambda: Rational = form.pair(&x, &y).value() * BigInt::from(-2);
                assert!(lhs.is_congruent(&two_lambda), "x = {x}, y = {y}");
            }
        }
    }
}
