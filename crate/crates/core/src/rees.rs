//! Rees objects, leading monomial parts, leading-coefficient chains, and the
//! Artin-Rees constant search.
//!
//! A Rees element over a filtered space is a polynomial whose `X^j`
//! coefficient has valuation at least `j`; the object is never materialized
//! as a polynomial ring, only as degree-tagged coefficient lists. The
//! spanning-set extraction realizes the constructive content of the
//! filtration theory: homogeneous generators of the graded module lift to
//! monomial generators whose ring-multiples reproduce every filtration step,
//! and that slice identity is re-verified before anything is returned.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::Val;
use crate::space::{FilteredSpace, GradedGenerator};
use crate::subgroup::Subgroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReesError {
    #[error("coefficient of X^{idx} has valuation {val} < {idx}")]
    ReesCondition { idx: usize, val: usize },
    #[error("coefficient length mismatch against the space")]
    Shape,
    #[error("leading-coefficient chain still growing at the degree cap {0}")]
    CapTooLow(usize),
    #[error("spanning-set slice identity fails at filtration level {0}")]
    VerificationFailed(usize),
    #[error("space is not permissible: {0}")]
    NotPermissible(String),
}

/// An element of the Rees space of `M`: `a_0 + a_1 X + … + a_d X^d` with
/// `v(a_j) >= j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReesElement {
    coeffs: Vec<Vec<u32>>,
}

impl ReesElement {
    pub fn new(space: &FilteredSpace, coeffs: Vec<Vec<u32>>) -> Result<Self, ReesError> {
        for (j, c) in coeffs.iter().enumerate() {
            if c.len() != space.dim() {
                return Err(ReesError::Shape);
            }
            let v = space.valuation(c);
            if v < j {
                return Err(ReesError::ReesCondition { idx: j, val: v });
            }
        }
        Ok(ReesElement { coeffs })
    }

    pub fn coeffs(&self) -> &[Vec<u32>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Option<&Vec<u32>> {
        self.coeffs.get(j)
    }

    /// Polynomial degree; `None` for the zero element.
    pub fn degree(&self, space: &FilteredSpace) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .find(|(_, c)| !space.field().vec_is_zero(c))
            .map(|(j, _)| j)
    }

    pub fn is_zero(&self, space: &FilteredSpace) -> bool {
        self.degree(space).is_none()
    }
}

/// Product of a Rees element over the ring with one over the space. The
/// bigrading is respected automatically: the `X^k` coefficient is a sum of
/// products `a_i·b_j` with `i + j = k`, each of valuation at least `k`.
pub fn rees_mul(space: &FilteredSpace, a: &ReesElement, b: &ReesElement) -> ReesElement {
    let f = space.field();
    let out_len = (a.coeffs.len() + b.coeffs.len()).saturating_sub(1).max(1);
    let mut coeffs = vec![vec![0u32; space.dim()]; out_len];
    for (i, ai) in a.coeffs.iter().enumerate() {
        if f.vec_is_zero(ai) {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            if f.vec_is_zero(bj) {
                continue;
            }
            let term = space.apply(ai, bj);
            for (dst, src) in coeffs[i + j].iter_mut().zip(term) {
                *dst = f.add(*dst, src);
            }
        }
    }
    ReesElement::new(space, coeffs).expect("products preserve the Rees condition")
}

/// Leading monomial data of a nonzero Rees element: degree `n`, leading
/// coefficient `a_n`, and its principal part, i.e. the map
/// `alpha -> sigma(a_n) X^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingData {
    pub degree: usize,
    pub coeff: Vec<u32>,
    pub principal: Vec<u32>,
}

pub fn leading_monomial(space: &FilteredSpace, el: &ReesElement) -> Option<LeadingData> {
    let degree = el.degree(space)?;
    let coeff = el.coeffs[degree].clone();
    let principal = space.principal_part(&coeff);
    Some(LeadingData {
        degree,
        coeff,
        principal,
    })
}

/// The increasing chain `N(0) ⊆ N(1) ⊆ … ⊆ N(cap)` of leading-coefficient
/// spaces of a polynomial subspace of `M[X]`, with the index from which the
/// chain is constant.
///
/// Stabilization of this chain is the finite-precision observable of the
/// basis-theorem machinery; at a truncation it carries no separate witness
/// for the plain chain-condition statement, which has no finite observable
/// distinct from this one.
#[derive(Debug, Clone)]
pub struct LeadingChain {
    pub spaces: Vec<Subgroup>,
    pub stabilized_at: usize,
}

/// Computes the leading-coefficient chain of the `R[X]`-subspace of `M[X]`
/// generated by `gens` (each a coefficient list, no valuation constraint).
/// The closure under multiplication by `r X^e` is computed degreewise up to
/// `cap`; products that would exceed the cap are not tracked.
pub fn leading_coefficient_spaces(
    space: &FilteredSpace,
    gens: &[Vec<Vec<u32>>],
    cap: usize,
) -> Result<LeadingChain, ReesError> {
    assert!(cap >= 1, "degree cap must be positive");
    let f = space.field();
    let dim = space.dim();
    let rd = space.algebra().dim();
    let width = (cap + 1) * dim;
    let flat_vals: Arc<Vec<Val>> = Arc::new(vec![0; width]);
    let flatten = |coeffs: &[Vec<u32>]| -> Vec<u32> {
        let mut v = vec![0u32; width];
        for (j, c) in coeffs.iter().enumerate() {
            v[j * dim..(j + 1) * dim].copy_from_slice(c);
        }
        v
    };
    let poly_degree = |flat: &[u32]| -> Option<usize> {
        (0..=cap).rev().find(|&j| !f.vec_is_zero(&flat[j * dim..(j + 1) * dim]))
    };

    let mut rows: Vec<Vec<u32>> = Vec::new();
    for g in gens {
        if g.len() > cap + 1 || g.iter().any(|c| c.len() != dim) {
            return Err(ReesError::Shape);
        }
        rows.push(flatten(g));
    }
    let mut closure = Subgroup::from_rows(f, flat_vals.clone(), 0, &rows);
    loop {
        let mut new_rows = closure.basis_rows();
        let before = closure.dim();
        for row in closure.basis_rows() {
            let Some(d) = poly_degree(&row) else { continue };
            for rho in 0..rd {
                let mut r = vec![0u32; rd];
                r[rho] = 1;
                for e in 0..=cap.saturating_sub(d) {
                    // (r X^e) · row: act on each coefficient, shift by e.
                    let mut prod = vec![0u32; width];
                    for j in 0..=d {
                        let cj = &row[j * dim..(j + 1) * dim];
                        if f.vec_is_zero(cj) {
                            continue;
                        }
                        let term = space.apply(&r, cj);
                        let dst = &mut prod[(j + e) * dim..(j + e + 1) * dim];
                        for (a, b) in dst.iter_mut().zip(term) {
                            *a = f.add(*a, b);
                        }
                    }
                    new_rows.push(prod);
                }
            }
        }
        closure = Subgroup::from_rows(f, flat_vals.clone(), 0, &new_rows);
        if closure.dim() == before {
            break;
        }
    }

    // N(j): elements with no component beyond X^j, projected to the X^j slot.
    let mut spaces = Vec::with_capacity(cap + 1);
    for j in 0..=cap {
        let high: Vec<usize> = ((j + 1) * dim..width).collect();
        let mut restriction =
            crate::matrix::Matrix::zero(f, high.len(), closure.dim().max(1));
        for k in 0..closure.dim() {
            let row = closure.row(k);
            for (ri, &c) in high.iter().enumerate() {
                restriction.set(ri, k, row[c]);
            }
        }
        let kernel = if closure.dim() == 0 {
            Vec::new()
        } else {
            restriction.kernel()
        };
        let members: Vec<Vec<u32>> = kernel
            .iter()
            .map(|rel| {
                let mut v = vec![0u32; width];
                for (k, &c) in rel.iter().enumerate() {
                    f.vec_add_scaled(&mut v, closure.row(k), c);
                }
                v[j * dim..(j + 1) * dim].to_vec()
            })
            .collect();
        spaces.push(space.subgroup(&members));
    }
    debug_assert!(
        spaces.windows(2).all(|w| w[0].is_subset_of(&w[1])),
        "leading-coefficient chain must be increasing"
    );
    let mut stabilized_at = cap;
    while stabilized_at > 0 && spaces[stabilized_at - 1] == spaces[cap] {
        stabilized_at -= 1;
    }
    if stabilized_at == cap {
        return Err(ReesError::CapTooLow(cap));
    }
    Ok(LeadingChain {
        spaces,
        stabilized_at,
    })
}

/// Monomial generators `m_i X^(d_i)` of the Rees space of `M`, verified to
/// reproduce every filtration step:
/// `F^n(M) = F^(n-d_1)(R)m_1 + … + F^(n-d_k)(R)m_k` for all `n` within
/// precision (terms with `n < d_i` drop out).
///
/// Each graded generator of degree `d` contributes its whole monomial ladder
/// `m X^0, …, m X^d`: a spanning element of the Rees space decomposes into
/// monomial parts of every lower degree, and the low-degree parts are what
/// reproduce the steps `F^n(M)` with `n < d` (a generator found in degree 1
/// still has to span `F^0`).
#[derive(Debug, Clone)]
pub struct SpanningSet {
    pub degrees: Vec<usize>,
    pub elements: Vec<Vec<u32>>,
}

pub fn extract_spanning_set(space: &FilteredSpace, window: usize) -> Result<SpanningSet, ReesError> {
    let perm = space.permissible(window);
    if let Some(w) = &perm.module_failure {
        return Err(ReesError::NotPermissible(w.clone()));
    }
    if !perm.stable {
        return Err(ReesError::NotPermissible(
            "generator degrees not stable below the precision horizon".into(),
        ));
    }
    let mut degrees: Vec<usize> = Vec::new();
    let mut elements: Vec<Vec<u32>> = Vec::new();
    for g in perm.generators.iter() {
        let g: &GradedGenerator = g;
        for j in 0..=g.degree {
            degrees.push(j);
            elements.push(g.element.clone());
        }
    }
    for n in 0..=space.precision() {
        let mut rhs = space.zero_subgroup();
        for (d, m) in degrees.iter().zip(&elements) {
            if *d > n {
                continue;
            }
            let fr = space.ring_filtration(n - d);
            rhs = rhs.sum(&space.product_elems(&fr, std::slice::from_ref(m)));
        }
        if rhs != space.filtration(n) {
            return Err(ReesError::VerificationFailed(n));
        }
    }
    Ok(SpanningSet { degrees, elements })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArCell {
    pub n: usize,
    pub d: usize,
    pub ok: bool,
}

/// Outcome of the Artin-Rees search: the smallest `D` such that
/// `F^(n+d)(M) = F^n(R) F^d(M)` for every `d in [D, N]` and every admissible
/// `n`, or `None` when no such `D` exists at this precision.
#[derive(Debug, Clone)]
pub struct ArtinReesReport {
    pub constant: Option<usize>,
    pub cells: Vec<ArCell>,
    pub precision: usize,
}

impl ArtinReesReport {
    pub fn verified_pairs(&self) -> usize {
        self.cells.iter().filter(|c| c.ok).count()
    }
}

pub fn artin_rees_constant(space: &FilteredSpace) -> ArtinReesReport {
    let n_max = space.precision();
    let mut cells = Vec::new();
    let mut ok_for_d = vec![true; n_max + 1];
    for d in 0..=n_max {
        let fd = space.filtration(d);
        for n in 0..=(n_max - d) {
            let lhs = space.filtration(n + d);
            let rhs = space.product(&space.ring_filtration(n), &fd);
            let ok = lhs == rhs;
            if !ok {
                ok_for_d[d] = false;
            }
            cells.push(ArCell { n, d, ok });
        }
    }
    let mut constant = None;
    for d in (0..=n_max).rev() {
        if ok_for_d[d] {
            constant = Some(d);
        } else {
            break;
        }
    }
    ArtinReesReport {
        constant,
        cells,
        precision: n_max,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{ideal_space, power_series};
    use crate::space::FilteredSpace;

    fn named(space: &FilteredSpace, name: &str) -> Vec<u32> {
        let mut v = vec![0u32; space.dim()];
        v[space.basis_index(name).unwrap()] = 1;
        v
    }

    #[test]
    fn leading_monomial_of_zero_and_of_mixed_element() {
        let alg = power_series(2, 2, &[], 4).unwrap();
        let ring = FilteredSpace::regular(&alg);
        let zero = ReesElement::new(&ring, vec![vec![0; ring.dim()]]).unwrap();
        assert!(leading_monomial(&ring, &zero).is_none());
        // x + x^2 X: degree 1 in X, leading coefficient x^2.
        let el = ReesElement::new(&ring, vec![named(&ring, "x"), named(&ring, "x2")]).unwrap();
        let lead = leading_monomial(&ring, &el).unwrap();
        assert_eq!(lead.degree, 1);
        assert_eq!(lead.coeff, named(&ring, "x2"));
        assert_eq!(lead.principal, named(&ring, "x2"));
    }

    #[test]
    fn rees_condition_is_enforced() {
        let alg = power_series(2, 2, &[], 4).unwrap();
        let ring = FilteredSpace::regular(&alg);
        // e has valuation 0, cannot sit at X^1.
        let bad = ReesElement::new(&ring, vec![vec![0; ring.dim()], named(&ring, "e")]);
        assert_eq!(bad, Err(ReesError::ReesCondition { idx: 1, val: 0 }));
    }

    #[test]
    fn leading_chain_of_x_times_rees_variable() {
        let alg = power_series(2, 2, &[], 4).unwrap();
        let ring = FilteredSpace::regular(&alg);
        // Generator x·X: N(0) = 0 and N(j) contains the x-multiples for j >= 1.
        let gen = vec![vec![0; ring.dim()], named(&ring, "x")];
        let chain = leading_coefficient_spaces(&ring, &[gen], 3).unwrap();
        assert_eq!(chain.spaces[0].dim(), 0);
        let x_multiples = ring.generated_subspace(&[named(&ring, "x")]);
        for j in 1..=3 {
            assert_eq!(chain.spaces[j], x_multiples);
        }
        assert_eq!(chain.stabilized_at, 1);
    }

    #[test]
    fn leading_chain_of_constant_generator() {
        let alg = power_series(2, 2, &[], 3).unwrap();
        let ring = FilteredSpace::regular(&alg);
        let m = named(&ring, "y");
        let closure = ring.generated_subspace(std::slice::from_ref(&m));
        let chain = leading_coefficient_spaces(&ring, &[vec![m]], 3).unwrap();
        for j in 0..3 {
            assert_eq!(chain.spaces[j], closure, "N({j}) is the closure of m");
        }
        assert_eq!(chain.stabilized_at, 0);
    }

    #[test]
    fn leading_chain_of_zero() {
        let alg = power_series(2, 1, &[], 3).unwrap();
        let ring = FilteredSpace::regular(&alg);
        let chain = leading_coefficient_spaces(&ring, &[], 2).unwrap();
        assert!(chain.spaces.iter().all(|s| s.dim() == 0));
        assert_eq!(chain.stabilized_at, 0);
    }

    #[test]
    fn spanning_set_of_the_ring_is_the_unit() {
        let alg = power_series(2, 2, &[], 6).unwrap();
        let ring = FilteredSpace::regular(&alg);
        let set = extract_spanning_set(&ring, 3).unwrap();
        assert_eq!(set.degrees, vec![0]);
        assert_eq!(set.elements[0], named(&ring, "e"));
    }

    #[test]
    fn spanning_set_of_principal_ideal() {
        // The generator x of graded degree 1 appears with its degree-0
        // monomial part as well: F^0(I) = R·x, F^n(I) = F^(n-1)(R)·x.
        let alg = power_series(2, 2, &[], 8).unwrap();
        let ideal = ideal_space(&alg, &[named_in(&alg, "x")]).unwrap();
        let set = extract_spanning_set(&ideal, 3).unwrap();
        assert_eq!(set.degrees, vec![0, 1]);
        assert_eq!(set.elements[0], set.elements[1]);
    }

    #[test]
    fn spanning_set_of_two_generator_ideal() {
        let alg = power_series(2, 2, &[], 6).unwrap();
        let ideal = ideal_space(&alg, &[named_in(&alg, "x"), named_in(&alg, "y")]).unwrap();
        let set = extract_spanning_set(&ideal, 3).unwrap();
        let mut degs = set.degrees.clone();
        degs.sort();
        assert_eq!(degs, vec![0, 0, 1, 1]);
    }

    fn named_in(alg: &std::sync::Arc<crate::algebra::FilteredAlgebra>, name: &str) -> Vec<u32> {
        let mut v = vec![0u32; alg.dim()];
        v[alg.basis_index(name).unwrap()] = 1;
        v
    }

    #[test]
    fn artin_rees_on_the_ring_itself_is_zero() {
        let alg = power_series(2, 2, &[], 6).unwrap();
        let ring = FilteredSpace::regular(&alg);
        let report = artin_rees_constant(&ring);
        assert_eq!(report.constant, Some(0));
        assert!(report.cells.iter().all(|c| c.ok));
    }

    #[test]
    fn artin_rees_on_principal_ideal_is_one() {
        // d = 0 fails: m^n ∩ (x) = x m^(n-1) strictly contains m^n (x).
        let alg = power_series(2, 2, &[], 8).unwrap();
        let ideal = ideal_space(&alg, &[named_in(&alg, "x")]).unwrap();
        let report = artin_rees_constant(&ideal);
        assert_eq!(report.constant, Some(1));
        assert!(report
            .cells
            .iter()
            .any(|c| c.d == 0 && !c.ok));
    }

    #[test]
    fn artin_rees_on_degree_two_principal_ideal_is_two() {
        // I = (x^2 + xy) = g R with deg g = 2, so I ∩ m^d = g m^(d-2):
        // d = 1 fails because m^n (I ∩ m) = g m^n sits strictly inside
        // I ∩ m^(n+1) = g m^(n-1); from d = 2 on, both sides are g m^(n+d-2).
        let alg = power_series(2, 2, &[], 8).unwrap();
        let f = alg.field();
        let mut g = named_in(&alg, "x2");
        let xy = named_in(&alg, "xy");
        for (dst, src) in g.iter_mut().zip(&xy) {
            *dst = f.add(*dst, *src);
        }
        let ideal = ideal_space(&alg, &[g]).unwrap();
        let report = artin_rees_constant(&ideal);
        assert_eq!(report.constant, Some(2));
    }
}
