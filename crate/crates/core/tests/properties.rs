//! Randomized and property-based invariants across the kernel, on top of the
//! example battery. Linear-algebra laws run under proptest; the filtered and
//! graded invariants run on seeded samples per battery algebra so failures
//! reproduce byte-for-byte.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clf_core::central::{build_extension, extension_torsion, TorsionConfig};
use clf_core::families::{power_series, Family};
use clf_core::field::PrimeField;
use clf_core::graded;
use clf_core::lift::{invert, lift_solve};
use clf_core::matrix::Matrix;
use clf_core::presentation::{format_expr, parse_expr};
use clf_core::rees::{artin_rees_constant, leading_monomial, rees_mul, ReesElement};
use clf_core::space::{DistinguishedMode, FilteredSpace};
use clf_core::subgroup::Subgroup;
use clf_core::FilteredAlgebra;

use common::named;

fn battery() -> Vec<(&'static str, Arc<FilteredAlgebra>)> {
    vec![
        ("f2-t-n6", power_series(2, 1, &[], 6).unwrap()),
        ("f3-t-n5", power_series(3, 1, &[], 5).unwrap()),
        ("f2-xy-n8", power_series(2, 2, &[], 8).unwrap()),
        ("f2-xy-mod-xy-n6", power_series(2, 2, &[vec![1, 1]], 6).unwrap()),
        ("f5-xy-n5", power_series(5, 2, &[], 5).unwrap()),
        ("f2-xyz-n5", power_series(2, 3, &[], 5).unwrap()),
        ("d2-n5", Family::deformation(2).algebra_at(5).unwrap()),
        ("d3-n5", Family::deformation(3).algebra_at(5).unwrap()),
    ]
}

fn random_elem(rng: &mut ChaCha8Rng, space: &FilteredSpace) -> Vec<u32> {
    let p = space.field().modulus();
    (0..space.dim()).map(|_| rng.gen_range(0..p)).collect()
}

fn arb_matrix() -> impl Strategy<Value = Matrix> {
    (prop_oneof![Just(2u64), Just(3), Just(5)], 1usize..6, 1usize..6).prop_flat_map(
        |(p, rows, cols)| {
            prop::collection::vec(prop::collection::vec(0u32..8, cols), rows).prop_map(
                move |data| {
                    let field = PrimeField::new(p).unwrap();
                    Matrix::from_rows(field, cols, &data)
                },
            )
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rref_is_idempotent(m in arb_matrix()) {
        let e = m.rref();
        prop_assert_eq!(e.matrix.rref(), e.clone());
        prop_assert!(e.pivots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rank_nullity(m in arb_matrix()) {
        let e = m.rref();
        let kernel = m.kernel();
        prop_assert_eq!(e.rank + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.apply(v).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn solve_results_substitute_exactly(m in arb_matrix(), seed in 0u64..1000) {
        // Manufacture a consistent rhs from a random x, then check solve.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<u32> = (0..m.cols()).map(|_| rng.gen_range(0..m.field().modulus())).collect();
        let b = m.apply(&x);
        let sol = m.solve(&b).expect("constructed rhs is consistent");
        prop_assert_eq!(m.apply(&sol), b);
    }

    #[test]
    fn expression_grammar_roundtrips(terms in prop::collection::vec((1u64..9, "[a-z][a-z0-9]{0,3}"), 1..5)) {
        let expr: Vec<(u64, String)> = terms;
        let text = format_expr(&expr);
        prop_assert_eq!(parse_expr(&text).unwrap(), expr);
    }
}

#[test]
fn product_valuation_bound_and_principal_part_multiplicativity() {
    // v(rm) >= v(r) + v(m) always; when the graded product of the principal
    // parts is nonzero and within precision, equality holds and the
    // principal part is multiplicative.
    for (name, alg) in battery() {
        let ring = FilteredSpace::regular(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(0x11);
        for _ in 0..60 {
            let r = random_elem(&mut rng, &ring);
            let m = random_elem(&mut rng, &ring);
            let (vr, vm) = (ring.valuation(&r), ring.valuation(&m));
            let prod = alg.mul_elem(&r, &m);
            let bound = (vr + vm).min(ring.precision() + 1);
            assert!(
                ring.valuation(&prod) >= bound,
                "{name}: v(rm) < v(r)+v(m)"
            );
            if vr + vm > ring.precision() {
                continue;
            }
            let graded = graded::graded_act(
                &ring,
                vr,
                &ring.slice_of(&r, vr),
                vm,
                &ring.slice_of(&m, vm),
            );
            if !ring.field().vec_is_zero(&graded) {
                assert_eq!(ring.valuation(&prod), vr + vm, "{name}: valuation equality");
                assert_eq!(
                    ring.slice_of(&prod, vr + vm),
                    graded,
                    "{name}: sigma(rm) = sigma(r)sigma(m)"
                );
            }
        }
    }
}

#[test]
fn product_is_monotone_in_both_arguments() {
    for (name, alg) in battery() {
        let ring = FilteredSpace::regular(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(0x22);
        for _ in 0..10 {
            let rows_a: Vec<Vec<u32>> = (0..2).map(|_| random_elem(&mut rng, &ring)).collect();
            let rows_a2: Vec<Vec<u32>> = rows_a
                .iter()
                .cloned()
                .chain(std::iter::once(random_elem(&mut rng, &ring)))
                .collect();
            let rows_d: Vec<Vec<u32>> = (0..2).map(|_| random_elem(&mut rng, &ring)).collect();
            let rows_d2: Vec<Vec<u32>> = rows_d
                .iter()
                .cloned()
                .chain(std::iter::once(random_elem(&mut rng, &ring)))
                .collect();
            let a = ring.subgroup(&rows_a);
            let a2 = ring.subgroup(&rows_a2);
            let d = ring.subgroup(&rows_d);
            let d2 = ring.subgroup(&rows_d2);
            let small = ring.product(&a, &d);
            let big = ring.product(&a2, &d2);
            assert!(small.is_subset_of(&big), "{name}: product not monotone");
        }
    }
}

#[test]
fn proper_sampled_ideals_lie_in_the_maximal_ideal() {
    for (name, alg) in battery() {
        let ring = FilteredSpace::regular(&alg);
        let f1 = ring.filtration(1);
        let mut rng = ChaCha8Rng::seed_from_u64(0x33);
        for _ in 0..12 {
            let k = rng.gen_range(1..3);
            let gens: Vec<Vec<u32>> = (0..k).map(|_| random_elem(&mut rng, &ring)).collect();
            let closure = ring.generated_subspace(&gens);
            if closure.dim() < ring.dim() {
                assert!(
                    closure.is_subset_of(&f1),
                    "{name}: proper left ideal escapes F^1"
                );
            } else {
                // The closure is everything: some generator must be a unit.
                assert!(
                    gens.iter().any(|g| ring.valuation(g) == 0),
                    "{name}: full closure from non-units"
                );
            }
        }
    }
}

#[test]
fn every_valuation_zero_element_has_a_left_inverse() {
    for (name, alg) in battery() {
        let ring = FilteredSpace::regular(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(0x44);
        let one = alg.unit_elem();
        for _ in 0..25 {
            let mut a = random_elem(&mut rng, &ring);
            a[alg.unit_index()] = rng.gen_range(1..alg.field().modulus());
            let inv = invert(&ring, &a).unwrap();
            assert_eq!(
                alg.mul_elem(&inv.left_inverse, &a),
                one,
                "{name}: x·a != 1"
            );
        }
    }
}

#[test]
fn power_ideals_match_filtration_under_random_parenthesization() {
    // m^n = F^n under every way of bracketing the n-fold product.
    fn random_power(
        ring: &FilteredSpace,
        rng: &mut ChaCha8Rng,
        n: usize,
    ) -> Subgroup {
        if n == 1 {
            return ring.filtration(1);
        }
        let k = rng.gen_range(1..n);
        let left = random_power(ring, rng, k);
        let right = random_power(ring, rng, n - k);
        ring.product(&left, &right)
    }
    for (name, alg) in battery() {
        let ring = FilteredSpace::regular(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(0x55);
        for n in 1..=ring.precision().min(6) {
            for _ in 0..3 {
                let s = random_power(&ring, &mut rng, n);
                assert_eq!(
                    s,
                    ring.filtration(n),
                    "{name}: bracketing changed m^{n}"
                );
            }
        }
    }
}

#[test]
fn hilbert_invariants_on_battery() {
    for (name, alg) in battery() {
        let ring = FilteredSpace::regular(&alg);
        let rep = graded::hilbert(&ring, 3);
        assert_eq!(rep.h[0], 1, "{name}: residue field condition h(0) = 1");
        let h1 = rep.h[1];
        for i in 1..ring.precision() {
            assert!(
                rep.h[i + 1] <= h1 * rep.h[i],
                "{name}: span bound h(i+1) <= h(1)h(i) fails at {i}"
            );
        }
        // The Newton fit reproduces ell on its stability window exactly.
        if let Ok(fit) = &rep.fit {
            for n in fit.base..rep.ell.len() {
                assert_eq!(fit.eval(n), rep.ell[n], "{name}: fit mismatch at {n}");
            }
        }
    }
}

#[test]
fn dimension_of_subspace_and_quotient() {
    // dim(L) <= dim(M) and dim(M) = max(dim(L), dim(M/L)) on sampled
    // monomial subspaces of the commutative battery members.
    let alg = power_series(2, 2, &[], 8).unwrap();
    let ring = FilteredSpace::regular(&alg);
    let picks: Vec<Vec<&str>> = vec![vec!["x"], vec!["y"], vec!["x", "y"], vec!["x2"], vec!["xy"]];
    let dm = ring.dimension(3).unwrap().delta;
    for names in picks {
        let gens: Vec<Vec<u32>> = names.iter().map(|n| named(&ring, n)).collect();
        let sub = ring.generated_subspace(&gens);
        let l = ring.subspace(&sub).unwrap();
        let q = ring.quotient(&sub).unwrap();
        let dl = l.dimension(3).unwrap().delta;
        let dq = q.dimension(3).unwrap().delta;
        assert!(dl <= dm, "dim(L) <= dim(M) for {names:?}");
        assert_eq!(dm, dl.max(dq), "dim(M) = max(dim L, dim M/L) for {names:?}");
    }
}

#[test]
fn intersection_of_permissible_filtrations_has_same_dimension() {
    // G = stored filtration, H = delayed filtration, F = G ∩ H; all three
    // fits agree where they stabilize.
    for (name, alg) in battery() {
        let ring = FilteredSpace::regular(&alg);
        let shifted = ring.shift_filtration(1);
        let n = ring.precision();
        let mut chain = Vec::new();
        for i in 0..=n + 1 {
            let g = ring.filtration(i);
            let h = if i == 0 {
                ring.filtration(0)
            } else {
                ring.filtration(i - 1) // shifted filtration step H^i = F^(i-1)
            };
            chain.push(g.intersect(&h));
        }
        // G^i ∩ H^i = F^i here; the refiltered space must fit identically.
        let refiltered = ring.refilter(&chain).unwrap();
        let d0 = ring.dimension(3).unwrap();
        let d1 = shifted.dimension(3).unwrap();
        let d2 = refiltered.dimension(3).unwrap();
        assert_eq!(d0.delta, d1.delta, "{name}: shifted filtration dimension");
        assert_eq!(d0.delta, d2.delta, "{name}: intersection filtration dimension");
    }
}

#[test]
fn m_adic_distinguished_implies_plain() {
    for (name, alg) in battery() {
        let ring = FilteredSpace::regular(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(0x66);
        for _ in 0..8 {
            let x = random_elem(&mut rng, &ring);
            if ring.distinguished(&x, DistinguishedMode::MAdic).is_ok() {
                assert!(
                    ring.distinguished(&x, DistinguishedMode::Plain).is_ok(),
                    "{name}: m-adic but not plain distinguished"
                );
            }
        }
    }
}

#[test]
fn rees_products_respect_the_bigrading_and_leading_parts_multiply() {
    for (name, alg) in battery() {
        let ring = FilteredSpace::regular(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(0x77);
        let n = ring.precision();
        for _ in 0..20 {
            // Random Rees elements: coefficient j drawn from F^j.
            let mk = |rng: &mut ChaCha8Rng| {
                let deg = rng.gen_range(0..=2usize);
                let coeffs: Vec<Vec<u32>> = (0..=deg)
                    .map(|j| {
                        let mut v = vec![0u32; ring.dim()];
                        for i in 0..ring.dim() {
                            if ring.basis()[i].val >= j {
                                v[i] = rng.gen_range(0..ring.field().modulus());
                            }
                        }
                        v
                    })
                    .collect();
                ReesElement::new(&ring, coeffs).unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let prod = rees_mul(&ring, &a, &b);
            // Bigrading: X^k coefficient has valuation >= k (checked by the
            // constructor inside rees_mul; verify independently).
            for (k, c) in prod.coeffs().iter().enumerate() {
                assert!(
                    ring.valuation(c) >= k.min(n + 1),
                    "{name}: bigrading violated at X^{k}"
                );
            }
            // Leading-part multiplicativity when the graded product survives.
            let (Some(la), Some(lb)) = (leading_monomial(&ring, &a), leading_monomial(&ring, &b))
            else {
                continue;
            };
            let (va, vb) = (ring.valuation(&la.coeff), ring.valuation(&lb.coeff));
            if va + vb > n {
                continue;
            }
            let g = graded::graded_act(&ring, va, &la.principal, vb, &lb.principal);
            if ring.field().vec_is_zero(&g) {
                continue;
            }
            let lp = leading_monomial(&ring, &prod).expect("nonzero leading parts");
            assert_eq!(lp.degree, la.degree + lb.degree, "{name}: degrees add");
            assert_eq!(lp.principal, g, "{name}: phi(ab) = phi(a)phi(b)");
        }
    }
}

#[test]
fn artin_rees_ideal_form_on_random_monomial_ideals() {
    // m^(n+d) ∩ I = m^n (m^d ∩ I) for d past the found constant: the same
    // equality as the filtered statement under F^d(I) = I ∩ m^d.
    let alg = power_series(2, 2, &[], 8).unwrap();
    let ring = FilteredSpace::regular(&alg);
    let mut rng = ChaCha8Rng::seed_from_u64(0x88);
    let monos: Vec<&str> = vec!["x", "y", "x2", "xy", "y2", "x3", "x2y", "xy2", "y3"];
    for _ in 0..6 {
        let k = rng.gen_range(1..3usize);
        let gens: Vec<Vec<u32>> = (0..k)
            .map(|_| named(&ring, monos[rng.gen_range(0..monos.len())]))
            .collect();
        let ideal_sub = ring.generated_subspace(&gens);
        let ideal = ring.subspace(&ideal_sub).unwrap();
        let report = artin_rees_constant(&ideal);
        let d0 = report.constant.expect("monomial ideals have an AR constant here");
        for d in d0..=ideal.precision() {
            for n in 0..=(ideal.precision() - d) {
                let lhs = ideal.filtration(n + d);
                let rhs = ideal.product(&ideal.ring_filtration(n), &ideal.filtration(d));
                assert_eq!(lhs, rhs, "ideal form fails at (n={n}, d={d})");
            }
        }
    }
}

#[test]
fn nested_ring_products_on_spaces_are_parenthesization_free() {
    // product(F^a, product(F^b, M)) = product(F^(a+b), M) on sampled pairs.
    let alg = power_series(2, 2, &[], 6).unwrap();
    let ring = FilteredSpace::regular(&alg);
    let x = named(&ring, "x");
    let ideal_sub = ring.generated_subspace(&[x]);
    for space in [ring.clone(), ring.subspace(&ideal_sub).unwrap()] {
        let full = space.full_subgroup();
        for a in 0..=3usize {
            for b in 0..=3usize {
                if a + b > space.precision() {
                    continue;
                }
                let inner = space.product(&space.ring_filtration(b), &full);
                let nested = space.product(&space.ring_filtration(a), &inner);
                let flat = space.product(&space.ring_filtration(a + b), &full);
                assert_eq!(nested, flat, "(a,b) = ({a},{b})");
            }
        }
    }
}

#[test]
fn extension_operator_laws_on_battery() {
    // k_j membership, nilpotence bound n^(k·k1) M ⊆ m^k M, and bijectivity
    // of 1 - T^n on the truncation.
    let alg = power_series(2, 2, &[], 6).unwrap();
    let ring = FilteredSpace::regular(&alg);
    let x = named(&ring, "x");
    let mut t = Matrix::zero(ring.field(), ring.dim(), ring.dim());
    for j in 0..ring.dim() {
        let mut e = vec![0u32; ring.dim()];
        e[j] = 1;
        let col = ring.apply(&x, &e);
        for (i, &c) in col.iter().enumerate() {
            t.set(i, j, c);
        }
    }
    let ext = build_extension(ring.clone(), t.clone(), 3).unwrap();
    let full = ring.full_subgroup();
    for j in 0..=ring.precision() {
        let kj = ext.k_table()[j];
        let mj = ring.product(&ring.ring_filtration(j), &full);
        // T^(k_j) of every basis element lands in m^j M.
        let mut img = full.clone();
        for _ in 0..kj {
            img = ext.t_image_of(&img);
        }
        assert!(img.is_subset_of(&mj), "T^k_j M ⊆ m^{j} M fails");
        if kj > 0 {
            let mut prev = full.clone();
            for _ in 0..kj - 1 {
                prev = ext.t_image_of(&prev);
            }
            assert!(!prev.is_subset_of(&mj), "k_{j} is not minimal");
        }
    }
    // Re-association guard for the n-adic operator: centrality makes T
    // commute with ring products on subgroups, T(m^a S) = m^a T(S).
    for a in 0..=2usize {
        let fa = ring.ring_filtration(a);
        for s in [full.clone(), ring.filtration(2)] {
            let lhs = ext.t_image_of(&ring.product(&fa, &s));
            let rhs = ring.product(&fa, &ext.t_image_of(&s));
            assert_eq!(lhs, rhs, "T(m^{a} S) != m^{a} T(S)");
        }
    }
    // n^(k·k1)M ⊆ m^k M for the computed k1 bound.
    let k1 = ext.k_table()[1];
    let chain = ext.n_adic_chain(ring.precision() * k1);
    for k in 1..=ring.precision().min(3) {
        let mk = ring.product(&ring.ring_filtration(k), &full);
        assert!(
            chain[k * k1].is_subset_of(&mk),
            "n-adic chain misses m^{k} at step {}",
            k * k1
        );
    }
    // 1 - T^n acts bijectively for n >= 1.
    for n in 1..=3usize {
        let mut pow = Matrix::identity(ring.field(), ring.dim());
        for _ in 0..n {
            pow = t.matmul(&pow);
        }
        let mut one_minus = Matrix::identity(ring.field(), ring.dim());
        for i in 0..ring.dim() {
            for j in 0..ring.dim() {
                let v = ring.field().sub(one_minus.at(i, j), pow.at(i, j));
                one_minus.set(i, j, v);
            }
        }
        assert!(one_minus.kernel().is_empty(), "1 - T^{n} has a kernel");
    }
}

#[test]
fn lift_solver_residuals_vanish_on_random_problems() {
    for (name, alg) in battery() {
        let ring = FilteredSpace::regular(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(0x99);
        for _ in 0..10 {
            // Spanners: the unit plus a random element; every target lifts.
            let spanners = vec![alg.unit_elem(), random_elem(&mut rng, &ring)];
            let target = random_elem(&mut rng, &ring);
            let sol = lift_solve(&ring, &target, &spanners).unwrap();
            let f = ring.field();
            let mut acc = vec![0u32; ring.dim()];
            for (c, y) in sol.coefficients.iter().zip(&spanners) {
                let term = ring.apply(c, y);
                for (a, b) in acc.iter_mut().zip(term) {
                    *a = f.add(*a, b);
                }
            }
            assert_eq!(acc, target, "{name}: substitution fails");
        }
    }
}

#[test]
fn deformation_torsion_battery_agrees_without_domain_hypothesis() {
    // The graded ring of the deformation is not a domain, yet the three
    // torsion booleans still agree on its standard spaces; agreement is
    // checked, never derived.
    let alg = Family::deformation(2).algebra_at(6).unwrap();
    let ring = FilteredSpace::regular(&alg);
    let one = named(&ring, "e");
    let rep = clf_core::central::torsion_equivalence(
        &ring,
        std::slice::from_ref(&one),
        &TorsionConfig::default(),
    )
    .unwrap();
    assert!(rep.agree(), "deformation ring: S-booleans disagree");
    assert!(!rep.s1);

    let x = named(&ring, "x");
    let q = clf_core::families::quotient_space(&alg, &[x]).unwrap();
    let qone = named(&q, "e");
    let rep = clf_core::central::torsion_equivalence(&q, &[qone], &TorsionConfig::default())
        .unwrap();
    assert!(rep.agree(), "deformation quotient: S-booleans disagree");
    assert!(rep.s1);

    // T-side on the quotient with T = 0.
    let qx = clf_core::families::quotient_space(&alg, &[named(&ring, "x")]).unwrap();
    let zero = Matrix::zero(qx.field(), qx.dim(), qx.dim());
    let ext = build_extension(qx.clone(), zero, 3).unwrap();
    let qone = named(&qx, "e");
    let rep = extension_torsion(&ext, &[qone], &TorsionConfig::default()).unwrap();
    assert!(rep.agree(), "deformation extension: T-booleans disagree");
}

#[test]
fn leading_chain_matches_hand_computation_on_shifted_generator() {
    // N(j) of the subspace generated by {x·X} stabilizes to the x-multiples;
    // the degree-0 space stays zero. Cross-checked against products by hand
    // in the rees module tests; here we check stabilization bookkeeping.
    let alg = power_series(2, 2, &[], 5).unwrap();
    let ring = FilteredSpace::regular(&alg);
    let gen = vec![vec![0u32; ring.dim()], named(&ring, "x")];
    let chain = clf_core::rees::leading_coefficient_spaces(&ring, &[gen], 4).unwrap();
    assert_eq!(chain.stabilized_at, 1);
    for w in chain.spaces.windows(2) {
        assert!(w[0].is_subset_of(&w[1]), "chain must increase");
    }
}

#[test]
fn validation_reports_are_complete_for_the_battery() {
    let mut seen = BTreeMap::new();
    for (name, alg) in battery() {
        let report = alg.validate();
        assert!(report.is_clf(), "{name} must validate");
        seen.insert(name, report.entries.len());
    }
    // Every axiom is reported even when everything passes.
    assert!(seen.values().all(|&n| n == 7));
}

#[test]
fn values_are_shareable_across_threads() {
    // Everything is immutable after construction and operations are pure,
    // so independent problems may run on shared instances in parallel.
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<clf_core::FilteredAlgebra>();
    assert_send_sync::<FilteredSpace>();
    assert_send_sync::<clf_core::Subgroup>();
    assert_send_sync::<Matrix>();

    let alg = power_series(2, 2, &[], 6).unwrap();
    let ring = std::sync::Arc::new(FilteredSpace::regular(&alg));
    let handles: Vec<_> = (0..4)
        .map(|i| {
            let ring = ring.clone();
            std::thread::spawn(move || {
                let a = ring.ring_filtration(i % 3);
                let d = ring.filtration((i + 1) % 3);
                ring.product(&a, &d).dim()
            })
        })
        .collect();
    let dims: Vec<usize> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    for (i, dim) in dims.iter().enumerate() {
        let expected = ring
            .product(&ring.ring_filtration(i % 3), &ring.filtration((i + 1) % 3))
            .dim();
        assert_eq!(*dim, expected);
    }
}

#[test]
fn monomial_quotient_dimension_matches_combinatorial_oracle() {
    // For F_p[[x_1..x_v]]/(monomial ideal) the Krull dimension is the
    // largest size of a variable subset S such that no ideal generator is
    // supported inside S (the corresponding coordinate subring survives).
    // The fitted degree must reproduce that count exactly.
    fn dim_oracle(vars: usize, gens: &[Vec<usize>]) -> usize {
        let mut best = 0usize;
        for mask in 0u32..(1 << vars) {
            let inside = |g: &Vec<usize>| {
                g.iter()
                    .enumerate()
                    .all(|(i, &e)| e == 0 || mask & (1 << i) != 0)
            };
            if gens.iter().any(inside) {
                continue;
            }
            best = best.max(mask.count_ones() as usize);
        }
        best
    }
    let cases: Vec<(usize, Vec<Vec<usize>>)> = vec![
        (1, vec![]),
        (1, vec![vec![3]]),
        (2, vec![]),
        (2, vec![vec![1, 1]]),
        (2, vec![vec![2, 0]]),
        (2, vec![vec![2, 0], vec![1, 1]]),
        (2, vec![vec![1, 0], vec![0, 1]]),
        (2, vec![vec![2, 1], vec![1, 2]]),
        (3, vec![vec![1, 1, 1]]),
        (3, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]),
        (3, vec![vec![1, 1, 0]]),
    ];
    for (vars, gens) in cases {
        let alg = power_series(2, vars, &gens, 6).unwrap();
        let ring = FilteredSpace::regular(&alg);
        let fitted = clf_core::graded::krull_dim(&ring, 3).unwrap();
        let expected = dim_oracle(vars, &gens);
        assert_eq!(
            fitted, expected,
            "dimension mismatch for {vars} vars, ideal {gens:?}"
        );
    }
}

#[test]
fn deformation_hilbert_data_is_frozen() {
    // Basis e; x, y; z_2..z_5: h = (1, 2, 1, 1, 1), so ell grows linearly
    // with slope 1 and the fit is delta = 1, alpha = 1.
    let alg = Family::deformation(2).algebra_at(5).unwrap();
    let ring = FilteredSpace::regular(&alg);
    let rep = clf_core::graded::hilbert(&ring, 3);
    assert_eq!(rep.h, vec![1, 2, 1, 1, 1, 1]);
    assert_eq!(rep.ell, vec![0, 1, 3, 4, 5, 6, 7]);
    let fit = rep.fit.unwrap();
    assert_eq!(fit.degree, 1);
    assert_eq!(fit.leading, num_rational::Ratio::new(1, 1));
}
