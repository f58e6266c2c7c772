//! The associated graded ring and graded modules of a truncated filtered
//! object, Hilbert data, and the dimension-based pseudo-nullity test.
//!
//! With a valuation-adapted basis the homogeneous component of degree `d` is
//! the coordinate slice of tag `d`, and the graded product of homogeneous
//! elements of degrees `a`, `b` is the full product projected onto the slice
//! of degree `a + b`; higher-valuation terms of the factors cannot reach that
//! slice, so this is exactly the induced multiplication.

use num_rational::Ratio;

use crate::fit::{fit_sequence, FitError, PolynomialFit};
use crate::space::FilteredSpace;

/// Graded product of two homogeneous elements (degrees `a` and `b`) of the
/// ring acting on a space; inputs must be pure slice vectors.
pub fn graded_act(space: &FilteredSpace, a: usize, r: &[u32], b: usize, m: &[u32]) -> Vec<u32> {
    let target = a + b;
    if target > space.precision() {
        return vec![0u32; space.dim()];
    }
    space.slice_of(&space.apply(r, m), target)
}

#[derive(Debug, Clone)]
pub struct GradedRingReport {
    /// `Err((i, j))`: basis pair whose principal parts do not commute.
    pub commutative: Result<(), (usize, usize)>,
    /// `Err((i, j, k))`: basis triple where the induced product fails to
    /// associate.
    pub associative: Result<(), (usize, usize, usize)>,
    /// `Err(d)`: first degree `d` where `component_1 · component_(d-1)` does
    /// not span `component_d`.
    pub degree_one_generated: Result<(), usize>,
}

impl GradedRingReport {
    pub fn ok(&self) -> bool {
        self.commutative.is_ok() && self.associative.is_ok() && self.degree_one_generated.is_ok()
    }
}

/// Checks the graded conditions of a complete local-filtered ring on the
/// regular representation: graded commutativity and associativity for all
/// homogeneous basis tuples with degree sum within precision, and generation
/// in degree 1.
pub fn check_clf_graded(ring: &FilteredSpace) -> GradedRingReport {
    assert!(ring.is_regular(), "graded ring checks run on the regular representation");
    let n = ring.precision();
    let dim = ring.dim();
    let unit_vec = |i: usize| {
        let mut v = vec![0u32; dim];
        v[i] = 1;
        v
    };
    let val = |i: usize| ring.basis()[i].val;

    let mut commutative = Ok(());
    'comm: for i in 0..dim {
        for j in i..dim {
            let (a, b) = (val(i), val(j));
            if a + b > n {
                continue;
            }
            let lhs = graded_act(ring, a, &unit_vec(i), b, &unit_vec(j));
            let rhs = graded_act(ring, b, &unit_vec(j), a, &unit_vec(i));
            if lhs != rhs {
                commutative = Err((i, j));
                break 'comm;
            }
        }
    }

    let mut associative = Ok(());
    'assoc: for i in 0..dim {
        for j in 0..dim {
            let ab = val(i) + val(j);
            if ab > n {
                continue;
            }
            let ij = graded_act(ring, val(i), &unit_vec(i), val(j), &unit_vec(j));
            for k in 0..dim {
                if ab + val(k) > n {
                    continue;
                }
                let lhs = graded_act(ring, ab, &ij, val(k), &unit_vec(k));
                let jk = graded_act(ring, val(j), &unit_vec(j), val(k), &unit_vec(k));
                let rhs = graded_act(ring, val(i), &unit_vec(i), val(j) + val(k), &jk);
                if lhs != rhs {
                    associative = Err((i, j, k));
                    break 'assoc;
                }
            }
        }
    }

    let mut degree_one_generated = Ok(());
    for d in 1..=n {
        if ring.h(d) == 0 {
            continue;
        }
        let mut rows = Vec::new();
        for i in 0..dim {
            if val(i) != 1 {
                continue;
            }
            for j in ring.slice_range(d - 1) {
                rows.push(graded_act(ring, 1, &unit_vec(i), d - 1, &unit_vec(j)));
            }
        }
        let span = ring.subgroup(&rows);
        if span.dim() < ring.h(d) {
            degree_one_generated = Err(d);
            break;
        }
    }

    GradedRingReport {
        commutative,
        associative,
        degree_one_generated,
    }
}

/// Returns a witness when the graded action of the graded ring on the graded
/// module fails to be a module action (associativity over homogeneous
/// elements), or `None` when it is one.
pub fn graded_module_failure(space: &FilteredSpace) -> Option<String> {
    let alg = space.algebra();
    let rd = alg.dim();
    let n = space.precision();
    let runit = |i: usize| {
        let mut v = vec![0u32; rd];
        v[i] = 1;
        v
    };
    for i in 0..rd {
        for j in 0..rd {
            let ab = alg.val(i) + alg.val(j);
            if ab > n {
                continue;
            }
            // Principal slice of the ring product b_i b_j.
            let prod = alg.mul_elem(&runit(i), &runit(j));
            let prod_slice: Vec<u32> = {
                let mut v = vec![0u32; rd];
                for (t, &c) in prod.iter().enumerate() {
                    if alg.val(t) == ab {
                        v[t] = c;
                    }
                }
                v
            };
            for k in 0..space.dim() {
                let c = space.basis()[k].val;
                if ab + c > n {
                    continue;
                }
                let mut m = vec![0u32; space.dim()];
                m[k] = 1;
                let lhs = graded_act(space, ab, &prod_slice, c, &m);
                let inner = graded_act(space, alg.val(j), &runit(j), c, &m);
                let rhs = graded_act(space, alg.val(i), &runit(i), alg.val(j) + c, &inner);
                if lhs != rhs {
                    return Some(format!(
                        "sigma({}) (sigma({}) m_{}) differs from (sigma({}) sigma({})) m_{}",
                        alg.basis()[i].name,
                        alg.basis()[j].name,
                        space.basis()[k].name,
                        alg.basis()[i].name,
                        alg.basis()[j].name,
                        space.basis()[k].name,
                    ));
                }
            }
        }
    }
    None
}

/// Hilbert data of a filtered space: component dimensions `h`, cumulative
/// lengths `ell(n) = sum_(k<n) h(k)`, and the finite-difference fit.
///
/// Lengths are `F_p`-dimensions. That identification needs a word: in a
/// validated algebra the residue field is `F_p` itself, so the greedy chain
/// of subgroups through `F_p`-hyperplanes refines any chain of subspaces and
/// every simple subquotient is one-dimensional. A simple space of higher
/// `F_p`-dimension would break the equality, but cannot occur over a
/// residue-field quotient of this shape.
#[derive(Debug, Clone)]
pub struct HilbertReport {
    pub h: Vec<usize>,
    pub ell: Vec<i64>,
    pub fit: Result<PolynomialFit, FitError>,
    pub window: usize,
    pub precision: usize,
}

impl HilbertReport {
    pub fn stable(&self) -> bool {
        self.fit.is_ok()
    }

    pub fn delta(&self) -> Option<usize> {
        self.fit.as_ref().ok().map(|f| f.degree)
    }

    pub fn alpha(&self) -> Option<Ratio<i64>> {
        self.fit.as_ref().ok().map(|f| f.leading)
    }
}

pub fn hilbert(space: &FilteredSpace, window: usize) -> HilbertReport {
    let h = space.h_vector();
    let mut ell = Vec::with_capacity(h.len() + 1);
    let mut acc = 0i64;
    ell.push(0);
    for &hk in &h {
        acc += hk as i64;
        ell.push(acc);
    }
    let fit = fit_sequence(&ell, window);
    HilbertReport {
        h,
        ell,
        fit,
        window,
        precision: space.precision(),
    }
}

/// Krull dimension candidate: degree of the fitted Hilbert-Samuel polynomial.
pub fn krull_dim(space: &FilteredSpace, window: usize) -> Result<usize, FitError> {
    hilbert(space, window).fit.map(|f| f.degree)
}

/// Dimension form of pseudo-nullity over an affine domain:
/// `dim(A) - dim(N) >= 2`.
pub fn pseudo_null_dim_test(ring_dim: usize, module_dim: usize) -> bool {
    ring_dim >= module_dim + 2
}

#[derive(Debug, Clone)]
pub struct DomainSearch {
    /// `(deg_a, x, deg_b, y)` with `x`, `y` nonzero homogeneous and `x·y = 0`
    /// within precision.
    pub witness: Option<(usize, Vec<u32>, usize, Vec<u32>)>,
    pub pairs_searched: usize,
}

impl DomainSearch {
    pub fn refuted(&self) -> bool {
        self.witness.is_some()
    }
}

/// Sound refuter for the integral-domain hypothesis on the graded ring: it
/// searches homogeneous pairs up to `degree_bound` for a vanishing product.
/// Finding nothing is evidence only, never a proof of domain-ness. Components
/// with at most `enum_limit` elements are enumerated exhaustively; larger
/// ones contribute their basis vectors only.
pub fn domain_refute(ring: &FilteredSpace, degree_bound: usize, enum_limit: u64) -> DomainSearch {
    assert!(ring.is_regular());
    let n = ring.precision();
    let bound = degree_bound.min(n);
    let p = u64::from(ring.field().modulus());
    let mut pairs = 0usize;
    for a in 1..=bound {
        if ring.h(a) == 0 {
            continue;
        }
        for b in a..=bound {
            if a + b > bound || ring.h(b) == 0 {
                continue;
            }
            for x in homogeneous_candidates(ring, a, p, enum_limit) {
                pairs += 1;
                // Kernel of y -> x·y restricted to degree b.
                let cols: Vec<usize> = ring.slice_range(b).collect();
                let target: Vec<usize> = ring.slice_range(a + b).collect();
                let mut mat =
                    crate::matrix::Matrix::zero(ring.field(), target.len(), cols.len());
                for (cj, &j) in cols.iter().enumerate() {
                    let mut e = vec![0u32; ring.dim()];
                    e[j] = 1;
                    let prod = graded_act(ring, a, &x, b, &e);
                    for (ri, &t) in target.iter().enumerate() {
                        mat.set(ri, cj, prod[t]);
                    }
                }
                if let Some(kv) = mat.kernel().into_iter().next() {
                    let mut y = vec![0u32; ring.dim()];
                    for (cj, &j) in cols.iter().enumerate() {
                        y[j] = kv[cj];
                    }
                    return DomainSearch {
                        witness: Some((a, x, b, y)),
                        pairs_searched: pairs,
                    };
                }
            }
        }
    }
    DomainSearch {
        witness: None,
        pairs_searched: pairs,
    }
}

fn homogeneous_candidates(
    ring: &FilteredSpace,
    degree: usize,
    p: u64,
    enum_limit: u64,
) -> Vec<Vec<u32>> {
    let coords: Vec<usize> = ring.slice_range(degree).collect();
    let count = p.checked_pow(coords.len() as u32).unwrap_or(u64::MAX);
    let mut out = Vec::new();
    if count <= enum_limit {
        for code in 1..count {
            let mut v = vec![0u32; ring.dim()];
            let mut c = code;
            for &j in &coords {
                v[j] = (c % p) as u32;
                c /= p;
            }
            out.push(v);
        }
    } else {
        for &j in &coords {
            let mut v = vec![0u32; ring.dim()];
            v[j] = 1;
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{power_series, Family};
    use crate::space::FilteredSpace;
    use num_rational::Ratio;

    #[test]
    fn two_variable_power_series_graded_checks() {
        let alg = power_series(2, 2, &[], 6).unwrap();
        let ring = FilteredSpace::regular(&alg);
        let report = check_clf_graded(&ring);
        assert!(report.ok());
    }

    #[test]
    fn deformation_has_commutative_associated_graded() {
        // Corrections sit in strictly higher valuation, so the induced graded
        // products agree with the commutative model even though the ring is
        // neither commutative nor associative.
        let alg = Family::deformation(3).algebra_at(5).unwrap();
        let ring = FilteredSpace::regular(&alg);
        assert!(check_clf_graded(&ring).ok());
    }

    #[test]
    fn hilbert_data_of_power_series_line() {
        // One basis monomial per degree: h = (1,1,...), ell(n) = n.
        let alg = power_series(3, 1, &[], 6).unwrap();
        let ring = FilteredSpace::regular(&alg);
        let rep = hilbert(&ring, 3);
        assert_eq!(rep.h, vec![1; 7]);
        assert_eq!(rep.ell, (0..=7).collect::<Vec<i64>>());
        let fit = rep.fit.unwrap();
        assert_eq!(fit.degree, 1);
        assert_eq!(fit.leading, Ratio::new(1, 1));
    }

    #[test]
    fn hilbert_data_of_plane() {
        // Monomial count oracle: h(n) = n + 1, ell(n) = n(n+1)/2.
        let alg = power_series(2, 2, &[], 8).unwrap();
        let ring = FilteredSpace::regular(&alg);
        let rep = hilbert(&ring, 3);
        for (n, &hn) in rep.h.iter().enumerate() {
            assert_eq!(hn, n + 1);
        }
        for (n, &e) in rep.ell.iter().enumerate() {
            assert_eq!(e, (n * (n + 1) / 2) as i64);
        }
        let fit = rep.fit.unwrap();
        assert_eq!(fit.degree, 2);
        assert_eq!(fit.leading, Ratio::new(1, 2));
        assert_eq!(krull_dim(&ring, 3).unwrap(), 2);
    }

    #[test]
    fn nilpotent_algebra_has_dimension_zero() {
        // F_2[x, y] with everything of degree >= 3 killed; h = (1, 2, 3, 0, 0, 0).
        let alg = power_series_mcap();
        let ring = FilteredSpace::regular(&alg);
        let rep = hilbert(&ring, 3);
        assert_eq!(rep.h, vec![1, 2, 3, 0, 0, 0]);
        let fit = rep.fit.unwrap();
        assert_eq!(fit.degree, 0);
        assert_eq!(fit.leading, Ratio::new(6, 1));
    }

    fn power_series_mcap() -> std::sync::Arc<crate::algebra::FilteredAlgebra> {
        crate::families::Family::power_series_mcap(2, 2, 3)
            .algebra_at(5)
            .unwrap()
    }

    #[test]
    fn pseudo_null_dimension_arithmetic() {
        assert!(pseudo_null_dim_test(3, 0));
        assert!(!pseudo_null_dim_test(3, 2));
        assert!(!pseudo_null_dim_test(2, 2));
    }

    #[test]
    fn domain_refuter_on_plane_and_on_quotient() {
        let alg = power_series(2, 2, &[], 6).unwrap();
        let ring = FilteredSpace::regular(&alg);
        assert!(!domain_refute(&ring, 4, 4096).refuted());

        // x·y = 0 introduces an obvious homogeneous zero divisor.
        let q = power_series(2, 2, &[vec![1, 1]], 6).unwrap();
        let qring = FilteredSpace::regular(&q);
        let search = domain_refute(&qring, 2, 4096);
        let (a, x, b, y) = search.witness.expect("zero divisor must be found");
        assert_eq!((a, b), (1, 1));
        let prod = graded_act(&qring, a, &x, b, &y);
        assert!(prod.iter().all(|&c| c == 0));
    }

    #[test]
    fn dead_degree_yields_witness() {
        // Quotient by both degree-2 pure powers and the mixed monomial: all
        // of degree 2 dies while degree 1 is alive, so any degree-1 pair is a
        // witness.
        let q = power_series(2, 2, &[vec![2, 0], vec![1, 1], vec![0, 2]], 4).unwrap();
        let qring = FilteredSpace::regular(&q);
        let search = domain_refute(&qring, 2, 4096);
        assert!(search.refuted());
    }
}
