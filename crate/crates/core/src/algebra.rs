//! Truncated complete local-filtered algebras.
//!
//! An algebra here is the finite quotient `R / m^(N+1)` of a filtered ring,
//! presented by structure constants on a valuation-adapted basis: every basis
//! element carries a tag `v` in `0..=N`, the span of the tags `>= i` is the
//! filtration step `F^i(R)`, and the product of two basis elements is stored
//! as a sparse `F_p`-combination. Basis order is normalized to weakly
//! increasing valuation so that filtration steps are coordinate suffixes.
//!
//! Multiplication is bilinear and unital but deliberately not assumed
//! associative or commutative; every theorem-level consequence of those
//! failures is checked downstream, never silently assumed.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::PrimeField;
use crate::graded;
use crate::space::FilteredSpace;

pub type Val = usize;

/// Sparse coefficient vector: strictly increasing indices, nonzero entries.
pub type SparseVec = Vec<(usize, u32)>;

/// Action table `t[i][j]` giving the product of basis `i` (ring side) with
/// basis `j` (module side) as a sparse combination of module basis elements.
pub type ActionTable = Vec<Vec<SparseVec>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElem {
    pub name: String,
    pub val: Val,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("basis is empty")]
    EmptyBasis,
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("unknown unit name {0:?}")]
    UnknownUnit(String),
    #[error("valuation tag {val} of basis {name:?} exceeds precision {precision}")]
    ValuationOutOfRange {
        name: String,
        val: Val,
        precision: usize,
    },
    #[error("product entry references basis index {0} out of range")]
    IndexOutOfRange(usize),
}

/// `R / m^(N+1)` with residue field `F_p`: a structure-constant tensor over a
/// valuation-adapted basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredAlgebra {
    field: PrimeField,
    precision: usize,
    basis: Vec<BasisElem>,
    unit: usize,
    mul: Arc<ActionTable>,
}

impl FilteredAlgebra {
    /// Builds the algebra from a basis, a unit name and a sparse product map
    /// keyed by pairs of input basis indices. The basis is re-sorted stably by
    /// valuation and all indices remapped, so callers may declare elements in
    /// any order. Missing product entries default to zero.
    pub fn new(
        field: PrimeField,
        precision: usize,
        basis: Vec<BasisElem>,
        unit_name: &str,
        products: BTreeMap<(usize, usize), SparseVec>,
    ) -> Result<Self, AlgebraError> {
        if basis.is_empty() {
            return Err(AlgebraError::EmptyBasis);
        }
        let n = basis.len();
        for (i, b) in basis.iter().enumerate() {
            if basis[..i].iter().any(|o| o.name == b.name) {
                return Err(AlgebraError::DuplicateName(b.name.clone()));
            }
            if b.val > precision {
                return Err(AlgebraError::ValuationOutOfRange {
                    name: b.name.clone(),
                    val: b.val,
                    precision,
                });
            }
        }
        // Stable sort by valuation; old index -> new index.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| basis[i].val);
        let mut new_index = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let sorted: Vec<BasisElem> = order.iter().map(|&i| basis[i].clone()).collect();
        let unit_old = basis
            .iter()
            .position(|b| b.name == unit_name)
            .ok_or_else(|| AlgebraError::UnknownUnit(unit_name.to_string()))?;
        let unit = new_index[unit_old];

        let mut mul: ActionTable = vec![vec![Vec::new(); n]; n];
        for ((i, j), entries) in products {
            if i >= n || j >= n {
                return Err(AlgebraError::IndexOutOfRange(i.max(j)));
            }
            let mut dense = vec![0u32; n];
            for &(k, c) in &entries {
                if k >= n {
                    return Err(AlgebraError::IndexOutOfRange(k));
                }
                dense[new_index[k]] = field.add(dense[new_index[k]], field.reduce(u64::from(c)));
            }
            mul[new_index[i]][new_index[j]] = sparse_from_dense(&dense);
        }
        // Unit rows and columns are forced; declared entries for the unit are
        // ignored in favour of the unit law.
        for k in 0..n {
            mul[unit][k] = vec![(k, 1)];
            mul[k][unit] = vec![(k, 1)];
        }
        Ok(FilteredAlgebra {
            field,
            precision,
            basis: sorted,
            unit,
            mul: Arc::new(mul),
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn mul_table(&self) -> &Arc<ActionTable> {
        &self.mul
    }

    pub fn val(&self, i: usize) -> Val {
        self.basis[i].val
    }

    pub fn vals(&self) -> Vec<Val> {
        self.basis.iter().map(|b| b.val).collect()
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn unit_elem(&self) -> Vec<u32> {
        let mut e = vec![0u32; self.dim()];
        e[self.unit] = 1;
        e
    }

    /// Ring product of two coefficient vectors.
    pub fn mul_elem(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        bilinear_apply(self.field, &self.mul, self.dim(), a, b)
    }

    /// Valuation of an element; the zero element gets `precision + 1`.
    pub fn valuation(&self, a: &[u32]) -> Val {
        valuation_of(&self.basis, self.precision, a)
    }

    /// Regular representation: the ring as a left space over itself.
    pub fn regular(self: &Arc<Self>) -> FilteredSpace {
        FilteredSpace::regular(self)
    }

    /// Truncation map to a lower precision: drops basis elements of valuation
    /// beyond `n` and the corresponding product terms.
    pub fn truncate(&self, n: usize) -> FilteredAlgebra {
        assert!(n <= self.precision);
        let keep: Vec<usize> = (0..self.dim()).filter(|&i| self.val(i) <= n).collect();
        let mut remap = vec![usize::MAX; self.dim()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let basis: Vec<BasisElem> = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let mul: ActionTable = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| {
                        self.mul[i][j]
                            .iter()
                            .filter(|&&(k, _)| remap[k] != usize::MAX)
                            .map(|&(k, c)| (remap[k], c))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FilteredAlgebra {
            field: self.field,
            precision: n,
            basis,
            unit: remap[self.unit],
            mul: Arc::new(mul),
        }
    }

    /// Runs the full axiom battery. Failures are data in the report, not
    /// errors; `is_clf()` on the result is the validity verdict.
    pub fn validate(self: &Arc<Self>) -> ValidationReport {
        let mut entries = Vec::new();

        let zero_vals: Vec<usize> = (0..self.dim()).filter(|&i| self.val(i) == 0).collect();
        entries.push(AxiomCheck {
            axiom: Axiom::UniqueValuationZero,
            witness: if zero_vals.len() == 1 && zero_vals[0] == self.unit {
                None
            } else {
                Some(format!(
                    "valuation-0 basis elements: {:?}",
                    zero_vals
                        .iter()
                        .map(|&i| self.basis[i].name.as_str())
                        .collect::<Vec<_>>()
                ))
            },
        });

        // Unit laws hold by construction of the table; re-check anyway.
        let unit = self.unit_elem();
        let unit_witness = (0..self.dim()).find_map(|i| {
            let mut b = vec![0u32; self.dim()];
            b[i] = 1;
            if self.mul_elem(&unit, &b) != b || self.mul_elem(&b, &unit) != b {
                Some(format!("unit law fails at basis {:?}", self.basis[i].name))
            } else {
                None
            }
        });
        entries.push(AxiomCheck {
            axiom: Axiom::UnitLaws,
            witness: unit_witness,
        });

        // F^i(R) F^j(R) subset of F^(i+j)(R): every product term of basis
        // (i, j) must have valuation >= val(i) + val(j).
        let mut compat_witness = None;
        'outer: for i in 0..self.dim() {
            for j in 0..self.dim() {
                let floor = self.val(i) + self.val(j);
                for &(k, _) in &self.mul[i][j] {
                    if self.val(k) < floor {
                        compat_witness = Some(format!(
                            "{} * {} contains {} of valuation {} < {}",
                            self.basis[i].name,
                            self.basis[j].name,
                            self.basis[k].name,
                            self.val(k),
                            floor
                        ));
                        break 'outer;
                    }
                }
            }
        }
        entries.push(AxiomCheck {
            axiom: Axiom::FiltrationCompatible,
            witness: compat_witness,
        });

        // Each F^i must be a two-sided ideal. With an adapted basis this
        // follows from compatibility; checked directly by products against
        // the full basis.
        let mut ideal_witness = None;
        'ideal: for i in 0..self.dim() {
            for j in 0..self.dim() {
                let floor = self.val(i).max(self.val(j));
                for &(k, _) in &self.mul[i][j] {
                    if self.val(k) < floor {
                        ideal_witness = Some(format!(
                            "{} * {} escapes F^{}",
                            self.basis[i].name, self.basis[j].name, floor
                        ));
                        break 'ideal;
                    }
                }
            }
        }
        entries.push(AxiomCheck {
            axiom: Axiom::IdealStability,
            witness: ideal_witness,
        });

        // Graded conditions: commutativity, associativity, degree-1
        // generation of the associated graded ring.
        let reg = self.regular();
        let g = graded::check_clf_graded(&reg);
        entries.push(AxiomCheck {
            axiom: Axiom::GradedCommutative,
            witness: g
                .commutative
                .err()
                .map(|(i, j)| format!("{} and {}", self.basis[i].name, self.basis[j].name)),
        });
        entries.push(AxiomCheck {
            axiom: Axiom::GradedAssociative,
            witness: g.associative.err().map(|(i, j, k)| {
                format!(
                    "({}, {}, {})",
                    self.basis[i].name, self.basis[j].name, self.basis[k].name
                )
            }),
        });
        entries.push(AxiomCheck {
            axiom: Axiom::DegreeOneGeneration,
            witness: g
                .degree_one_generated
                .err()
                .map(|d| format!("component_1 * component_{} does not span component_{}", d - 1, d)),
        });

        ValidationReport { entries }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    UniqueValuationZero,
    UnitLaws,
    FiltrationCompatible,
    IdealStability,
    GradedCommutative,
    GradedAssociative,
    DegreeOneGeneration,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::UniqueValuationZero => "unique-valuation-zero",
            Axiom::UnitLaws => "unit-laws",
            Axiom::FiltrationCompatible => "filtration-compatible",
            Axiom::IdealStability => "ideal-stability",
            Axiom::GradedCommutative => "graded-commutative",
            Axiom::GradedAssociative => "graded-associative",
            Axiom::DegreeOneGeneration => "degree-one-generation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    /// `None` means the axiom holds; otherwise a human-readable witness.
    pub witness: Option<String>,
}

impl AxiomCheck {
    pub fn ok(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub entries: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn is_clf(&self) -> bool {
        self.entries.iter().all(|e| e.ok())
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.entries.iter().filter(|e| !e.ok()).collect()
    }
}

// Shared element-level helpers, used by both the algebra and spaces over it.

pub(crate) fn sparse_from_dense(dense: &[u32]) -> SparseVec {
    dense
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(k, &c)| (k, c))
        .collect()
}

pub(crate) fn bilinear_apply(
    field: PrimeField,
    table: &ActionTable,
    out_dim: usize,
    a: &[u32],
    b: &[u32],
) -> Vec<u32> {
    let mut out = vec![0u32; out_dim];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        let row = &table[i];
        for (j, &cb) in b.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            let scale = field.mul(ca, cb);
            for &(k, c) in &row[j] {
                out[k] = field.add(out[k], field.mul(scale, c));
            }
        }
    }
    out
}

pub(crate) fn valuation_of(basis: &[BasisElem], precision: usize, a: &[u32]) -> Val {
    a.iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(i, _)| basis[i].val)
        .min()
        .unwrap_or(precision + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{power_series, Family};

    #[test]
    fn power_series_truncation_validates() {
        // F_2[[t]] at N = 5.
        let alg = power_series(2, 1, &[], 5).unwrap();
        assert!(alg.validate().is_clf());
        assert_eq!(alg.dim(), 6);
        assert_eq!(alg.val(0), 0);
    }

    #[test]
    fn retagged_valuation_fails_uniqueness() {
        // Same shape as F_2[[t]] at N = 5 but with v(t) forced to 0.
        let mut basis = vec![BasisElem {
            name: "e".into(),
            val: 0,
        }];
        basis.push(BasisElem {
            name: "t".into(),
            val: 0,
        });
        for k in 2..=5 {
            basis.push(BasisElem {
                name: format!("t{k}"),
                val: k,
            });
        }
        let mut products = BTreeMap::new();
        products.insert((1, 1), vec![(2, 1)]);
        let alg = Arc::new(
            FilteredAlgebra::new(PrimeField::new(2).unwrap(), 5, basis, "e", products).unwrap(),
        );
        let report = alg.validate();
        assert!(!report.is_clf());
        assert!(report
            .failures()
            .iter()
            .any(|c| c.axiom == Axiom::UniqueValuationZero));
    }

    #[test]
    fn deformation_validates_but_is_not_associative() {
        let alg = Family::deformation(2).algebra_at(5).unwrap();
        assert!(alg.validate().is_clf());
        // Evaluate both parenthesizations of x, x, x from the tensor.
        let x = elem(&alg, "x");
        let xx = alg.mul_elem(&x, &x);
        let left = alg.mul_elem(&xx, &x);
        let right = alg.mul_elem(&x, &xx);
        assert_ne!(left, right);
    }

    #[test]
    fn basis_is_sorted_and_products_remapped() {
        // Declare out of order: t2 before t.
        let basis = vec![
            BasisElem {
                name: "t2".into(),
                val: 2,
            },
            BasisElem {
                name: "e".into(),
                val: 0,
            },
            BasisElem {
                name: "t".into(),
                val: 1,
            },
        ];
        let mut products = BTreeMap::new();
        products.insert((2, 2), vec![(0, 1)]); // t * t = t2 in input indices
        let alg = Arc::new(
            FilteredAlgebra::new(PrimeField::new(3).unwrap(), 2, basis, "e", products).unwrap(),
        );
        assert_eq!(
            alg.basis().iter().map(|b| b.name.as_str()).collect::<Vec<_>>(),
            vec!["e", "t", "t2"]
        );
        let t = elem(&alg, "t");
        let t2 = elem(&alg, "t2");
        assert_eq!(alg.mul_elem(&t, &t), t2);
        assert!(alg.validate().is_clf());
    }

    #[test]
    fn isolated_degree_two_generator_fails_generation() {
        let basis = vec![
            BasisElem {
                name: "e".into(),
                val: 0,
            },
            BasisElem {
                name: "x".into(),
                val: 1,
            },
            BasisElem {
                name: "y".into(),
                val: 1,
            },
            BasisElem {
                name: "z".into(),
                val: 2,
            },
        ];
        // All products of x, y vanish; z is not reachable from degree 1.
        let alg = Arc::new(
            FilteredAlgebra::new(PrimeField::new(2).unwrap(), 2, basis, "e", BTreeMap::new())
                .unwrap(),
        );
        let report = alg.validate();
        assert!(!report.is_clf());
        assert!(report
            .failures()
            .iter()
            .any(|c| c.axiom == Axiom::DegreeOneGeneration));
    }

    fn elem(alg: &FilteredAlgebra, name: &str) -> Vec<u32> {
        let mut v = vec![0u32; alg.dim()];
        v[alg.basis_index(name).unwrap()] = 1;
        v
    }
}
