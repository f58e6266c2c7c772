//! Shared oracles for the integration suites: exhaustive element
//! enumeration (p = 2, small dimensions) and monomial-counting helpers.
//! Everything here is deliberately independent of the subgroup/product
//! machinery it cross-checks: sets of explicit vectors, closed by walking.

#![allow(dead_code)]

use std::collections::BTreeSet;

use clf_core::space::FilteredSpace;
use clf_core::subgroup::Subgroup;

pub fn named(space: &FilteredSpace, name: &str) -> Vec<u32> {
    let mut v = vec![0u32; space.dim()];
    v[space.basis_index(name).unwrap()] = 1;
    v
}

pub fn named_in_alg(alg: &std::sync::Arc<clf_core::FilteredAlgebra>, name: &str) -> Vec<u32> {
    let mut v = vec![0u32; alg.dim()];
    v[alg.basis_index(name).unwrap()] = 1;
    v
}

pub fn add_vec(space: &FilteredSpace, a: &[u32], b: &[u32]) -> Vec<u32> {
    let f = space.field();
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

/// All p^k field-coefficient combinations of the given generators, as a set.
pub fn enumerate_span(space: &FilteredSpace, gens: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    let p = space.field().modulus() as u64;
    let count = p.pow(gens.len() as u32);
    assert!(count <= 1 << 14, "enumeration limited to small spans");
    let mut out = BTreeSet::new();
    for code in 0..count {
        let mut v = vec![0u32; space.dim()];
        let mut c = code;
        for g in gens {
            let coef = (c % p) as u32;
            c /= p;
            space.field().vec_add_scaled(&mut v, g, coef);
        }
        out.insert(v);
    }
    out
}

/// Every element of a subgroup, by enumerating coefficient combinations of
/// its canonical basis.
pub fn subgroup_elements(space: &FilteredSpace, s: &Subgroup) -> BTreeSet<Vec<u32>> {
    enumerate_span(space, &s.basis_rows())
}

/// Additive closure of a set of vectors (the abelian group they generate).
pub fn additive_closure(space: &FilteredSpace, seed: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    let f = space.field();
    let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
    set.insert(vec![0u32; space.dim()]);
    let mut frontier: Vec<Vec<u32>> = seed.to_vec();
    while let Some(v) = frontier.pop() {
        if set.contains(&v) {
            continue;
        }
        let mut new: Vec<Vec<u32>> = Vec::new();
        for existing in &set {
            let sum: Vec<u32> = existing.iter().zip(&v).map(|(&a, &b)| f.add(a, b)).collect();
            if !set.contains(&sum) {
                new.push(sum);
            }
        }
        set.insert(v);
        frontier.extend(new);
        assert!(set.len() <= 1 << 14, "closure exploded past the oracle limit");
    }
    set
}

/// Brute-force product set `A·Δ`: all literal products of all elements,
/// then the additive closure.
pub fn brute_product(
    space: &FilteredSpace,
    a_elems: &BTreeSet<Vec<u32>>,
    d_elems: &BTreeSet<Vec<u32>>,
) -> BTreeSet<Vec<u32>> {
    let mut products = Vec::new();
    for a in a_elems {
        for d in d_elems {
            products.push(space.apply(a, d));
        }
    }
    additive_closure(space, &products)
}

/// Brute-force R-span of an element list: products r·x for every ring
/// element r, additively closed.
pub fn brute_span(
    space: &FilteredSpace,
    ring_elems: &BTreeSet<Vec<u32>>,
    xs: &[Vec<u32>],
) -> BTreeSet<Vec<u32>> {
    let mut products = Vec::new();
    for r in ring_elems {
        for x in xs {
            products.push(space.apply(r, x));
        }
    }
    additive_closure(space, &products)
}

/// Brute-force smallest R-subspace containing `xs`: iterate the span
/// operator on element sets until stable.
pub fn brute_generated(
    space: &FilteredSpace,
    ring_elems: &BTreeSet<Vec<u32>>,
    xs: &[Vec<u32>],
) -> BTreeSet<Vec<u32>> {
    let mut current = additive_closure(space, xs);
    loop {
        let basis: Vec<Vec<u32>> = current.iter().cloned().collect();
        let next = brute_span(space, ring_elems, &basis);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Brute-force annihilator of `x`: every ring element killing it.
pub fn brute_annihilator(
    space: &FilteredSpace,
    ring_elems: &BTreeSet<Vec<u32>>,
    x: &[u32],
) -> BTreeSet<Vec<u32>> {
    ring_elems
        .iter()
        .filter(|r| space.field().vec_is_zero(&space.apply(r, x)))
        .cloned()
        .collect()
}

/// Set equality between a computed subgroup and an explicit element set.
pub fn subgroup_equals_set(
    space: &FilteredSpace,
    s: &Subgroup,
    set: &BTreeSet<Vec<u32>>,
) -> bool {
    subgroup_elements(space, s) == *set
}

/// Count of monomials in `vars` variables of total degree exactly `d`.
pub fn monomials_of_degree(vars: usize, d: usize) -> usize {
    // C(d + vars - 1, vars - 1)
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..vars - 1 {
        num *= d + 1 + i;
        den *= i + 1;
    }
    num / den
}
