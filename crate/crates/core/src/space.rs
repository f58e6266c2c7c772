//! Filtered spaces over a truncated filtered algebra.
//!
//! A space is an abelian group with a bilinear unital pairing from the ring;
//! nothing about the pairing is assumed associative. The representation
//! mirrors the algebra: a valuation-adapted basis plus an action tensor
//! `a[i][j]` for (ring basis i) applied to (space basis j). A space carries
//! its own precision, which may differ from the ring's after re-indexing.
//!
//! Subgroup products `A·Δ`, spans, generated subspaces, induced filtrations
//! on subspaces and quotients, permissibility, annihilators and distinguished
//! elements all live here.

use std::sync::Arc;

use num_rational::Ratio;
use thiserror::Error;

use crate::algebra::{
    bilinear_apply, sparse_from_dense, valuation_of, ActionTable, BasisElem, FilteredAlgebra,
    SparseVec, Val,
};
use crate::field::PrimeField;
use crate::fit::FitError;
use crate::graded;
use crate::matrix::Matrix;
use crate::subgroup::Subgroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("action table shape does not match (ring dim, space dim)")]
    ActionShape,
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("action is not filtration-compatible: {0}")]
    Incompatible(String),
    #[error("not an R-subspace: {0}")]
    NotSubspace(String),
    #[error("invalid filtration chain: {0}")]
    BadChain(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("space is not permissible: {0}")]
    NotPermissible(String),
    #[error(transparent)]
    Precision(#[from] FitError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredSpace {
    algebra: Arc<FilteredAlgebra>,
    basis: Vec<BasisElem>,
    precision: usize,
    vals: Arc<Vec<Val>>,
    val_starts: Vec<usize>,
    action: Arc<ActionTable>,
}

impl FilteredSpace {
    /// Builds a space from a basis and action entries keyed by (ring index,
    /// space index), both in declaration order. The space basis is stably
    /// sorted by valuation; the unit's action rows are forced to the identity.
    pub fn new(
        algebra: Arc<FilteredAlgebra>,
        basis: Vec<BasisElem>,
        precision: usize,
        entries: impl IntoIterator<Item = ((usize, usize), SparseVec)>,
    ) -> Result<Self, SpaceError> {
        let field = algebra.field();
        let m = basis.len();
        for (i, b) in basis.iter().enumerate() {
            if basis[..i].iter().any(|o| o.name == b.name) {
                return Err(SpaceError::DuplicateName(b.name.clone()));
            }
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| basis[i].val);
        let mut new_index = vec![0usize; m];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let sorted: Vec<BasisElem> = order.iter().map(|&i| basis[i].clone()).collect();

        let rd = algebra.dim();
        let mut action: ActionTable = vec![vec![Vec::new(); m]; rd];
        for ((i, j), entry) in entries {
            if i >= rd || j >= m || entry.iter().any(|&(k, _)| k >= m) {
                return Err(SpaceError::ActionShape);
            }
            let mut dense = vec![0u32; m];
            for &(k, c) in &entry {
                dense[new_index[k]] = field.add(dense[new_index[k]], field.reduce(u64::from(c)));
            }
            action[i][new_index[j]] = sparse_from_dense(&dense);
        }
        let unit = algebra.unit_index();
        for (j, row) in action[unit].iter_mut().enumerate() {
            *row = vec![(j, 1)];
        }
        Self::from_parts(algebra, sorted, precision, Arc::new(action))
    }

    /// The ring as a left space over itself.
    pub fn regular(algebra: &Arc<FilteredAlgebra>) -> Self {
        let basis = algebra.basis().to_vec();
        let action = algebra.mul_table().clone();
        let precision = algebra.precision();
        Self::from_parts(algebra.clone(), basis, precision, action)
            .expect("regular representation of a constructed algebra is always valid")
    }

    fn from_parts(
        algebra: Arc<FilteredAlgebra>,
        basis: Vec<BasisElem>,
        precision: usize,
        action: Arc<ActionTable>,
    ) -> Result<Self, SpaceError> {
        debug_assert!(basis.windows(2).all(|w| w[0].val <= w[1].val));
        let vals: Arc<Vec<Val>> = Arc::new(basis.iter().map(|b| b.val).collect());
        if vals.iter().any(|&v| v > precision) {
            return Err(SpaceError::Incompatible(
                "basis valuation exceeds precision".into(),
            ));
        }
        let mut val_starts = vec![0usize; precision + 3];
        for v in 0..=precision + 2 {
            val_starts[v.min(precision + 2)] =
                vals.iter().position(|&t| t >= v).unwrap_or(vals.len());
        }
        let space = FilteredSpace {
            algebra,
            basis,
            precision,
            vals,
            val_starts,
            action,
        };
        // Compatibility: v(r·m) >= v(r) + v(m) for all basis pairs. This also
        // makes every F^i(M) an R-subspace.
        for i in 0..space.algebra.dim() {
            for j in 0..space.dim() {
                let floor = space.algebra.val(i) + space.basis[j].val;
                for &(k, _) in &space.action[i][j] {
                    if space.basis[k].val < floor {
                        return Err(SpaceError::Incompatible(format!(
                            "{} . {} contains {} of valuation {} < {}",
                            space.algebra.basis()[i].name,
                            space.basis[j].name,
                            space.basis[k].name,
                            space.basis[k].val,
                            floor
                        )));
                    }
                }
            }
        }
        Ok(space)
    }

    pub fn algebra(&self) -> &Arc<FilteredAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn vals(&self) -> &Arc<Vec<Val>> {
        &self.vals
    }

    pub fn action(&self) -> &Arc<ActionTable> {
        &self.action
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn is_regular(&self) -> bool {
        Arc::ptr_eq(&self.action, self.algebra.mul_table())
    }

    /// Coordinate range of the valuation-`v` slice of the adapted basis.
    pub fn slice_range(&self, v: Val) -> std::ops::Range<usize> {
        if v > self.precision {
            return self.dim()..self.dim();
        }
        self.val_starts[v]..self.val_starts[v + 1]
    }

    /// Number of basis elements of valuation exactly `v`; this is
    /// `dim F^v(M)/F^(v+1)(M)`.
    pub fn h(&self, v: Val) -> usize {
        self.slice_range(v).len()
    }

    pub fn h_vector(&self) -> Vec<usize> {
        (0..=self.precision).map(|v| self.h(v)).collect()
    }

    /// Ring action on coefficient vectors.
    pub fn apply(&self, r: &[u32], m: &[u32]) -> Vec<u32> {
        debug_assert_eq!(r.len(), self.algebra.dim());
        debug_assert_eq!(m.len(), self.dim());
        bilinear_apply(self.field(), &self.action, self.dim(), r, m)
    }

    pub fn valuation(&self, m: &[u32]) -> Val {
        valuation_of(&self.basis, self.precision, m)
    }

    /// Projection onto the coordinates of valuation exactly `v` (the
    /// homogeneous component of the principal part when `v = valuation(m)`).
    pub fn slice_of(&self, m: &[u32], v: Val) -> Vec<u32> {
        let mut out = vec![0u32; self.dim()];
        let range = self.slice_range(v);
        out[range.clone()].copy_from_slice(&m[range]);
        out
    }

    pub fn principal_part(&self, m: &[u32]) -> Vec<u32> {
        self.slice_of(m, self.valuation(m))
    }

    /// `F^i(M)` as a subgroup.
    pub fn filtration(&self, i: Val) -> Subgroup {
        let coords: Vec<usize> = (self.slice_range(i).start..self.dim()).collect();
        Subgroup::from_coords(self.field(), self.vals.clone(), self.precision, &coords)
    }

    pub fn full_subgroup(&self) -> Subgroup {
        self.filtration(0)
    }

    pub fn zero_subgroup(&self) -> Subgroup {
        Subgroup::zero(self.field(), self.vals.clone(), self.precision)
    }

    pub fn subgroup(&self, rows: &[Vec<u32>]) -> Subgroup {
        Subgroup::from_rows(self.field(), self.vals.clone(), self.precision, rows)
    }

    /// `F^i(R)` as a subgroup of the ring's coordinate space.
    pub fn ring_filtration(&self, i: Val) -> Subgroup {
        let rvals: Arc<Vec<Val>> = Arc::new(self.algebra.vals());
        let start = rvals.iter().position(|&t| t >= i).unwrap_or(rvals.len());
        let coords: Vec<usize> = (start..rvals.len()).collect();
        Subgroup::from_coords(self.field(), rvals, self.algebra.precision(), &coords)
    }

    pub fn ring_full(&self) -> Subgroup {
        self.ring_filtration(0)
    }

    /// Product subgroup `A·Δ`: the `F_p`-span of all pairwise products of
    /// basis vectors. Because both factors are `F_p`-stable this equals the
    /// abelian group of all finite sums `sum a x`.
    pub fn product(&self, a: &Subgroup, delta: &Subgroup) -> Subgroup {
        assert_eq!(a.ambient_dim(), self.algebra.dim(), "A must live in the ring");
        assert_eq!(delta.ambient_dim(), self.dim());
        let rows: Vec<Vec<u32>> = (0..a.dim())
            .flat_map(|i| (0..delta.dim()).map(move |j| self.apply(a.row(i), delta.row(j))))
            .collect();
        self.subgroup(&rows)
    }

    /// `A·Δ` for an explicit element list `Δ`.
    pub fn product_elems(&self, a: &Subgroup, elems: &[Vec<u32>]) -> Subgroup {
        assert_eq!(a.ambient_dim(), self.algebra.dim());
        let rows: Vec<Vec<u32>> = (0..a.dim())
            .flat_map(|i| elems.iter().map(move |x| self.apply(a.row(i), x)))
            .collect();
        self.subgroup(&rows)
    }

    /// The R-span `RΔ` of a list of elements.
    pub fn span(&self, elems: &[Vec<u32>]) -> Subgroup {
        self.product_elems(&self.ring_full(), elems)
    }

    /// Smallest R-subspace containing `Δ`: iterate `S <- R·S` from `S = RΔ`
    /// until stable. Terminates because dimensions are finite.
    pub fn generated_subspace(&self, elems: &[Vec<u32>]) -> Subgroup {
        let full = self.ring_full();
        let mut s = self.span(elems);
        loop {
            let next = self.product(&full, &s);
            debug_assert!(s.is_subset_of(&next), "unital action grows the span");
            if next == s {
                return s;
            }
            s = next;
        }
    }

    /// Whether `s` is closed under the ring action.
    pub fn is_subspace(&self, s: &Subgroup) -> bool {
        self.subspace_failure(s).is_none()
    }

    fn subspace_failure(&self, s: &Subgroup) -> Option<String> {
        for i in 0..self.algebra.dim() {
            let mut r = vec![0u32; self.algebra.dim()];
            r[i] = 1;
            for j in 0..s.dim() {
                let w = self.apply(&r, s.row(j));
                if !s.contains_vec(&w) {
                    return Some(format!(
                        "{} . (row {}) leaves the subgroup",
                        self.algebra.basis()[i].name,
                        j
                    ));
                }
            }
        }
        None
    }

    /// Induced filtration data for a subspace `L` and the quotient `M/L`:
    /// `F^i(L) = L ∩ F^i(M)` and `F^i(M/L) = (F^i(M) + L)/L`, with the
    /// degreewise exactness check `h_M = h_L + h_(M/L)`.
    pub fn induced(&self, sub: &Subgroup) -> Result<InducedFiltration, SpaceError> {
        if let Some(w) = self.subspace_failure(sub) {
            return Err(SpaceError::NotSubspace(w));
        }
        let top = self.precision + 1;
        let sub_profile: Vec<usize> = sub.profile().to_vec();
        let mut quot_profile = Vec::with_capacity(top + 1);
        for i in 0..=top {
            let fi = self.filtration(i);
            quot_profile.push(fi.sum(sub).dim() - sub.dim());
        }
        let h_sub: Vec<usize> = (0..=self.precision)
            .map(|i| sub_profile[i] - sub_profile[i + 1])
            .collect();
        let h_quot: Vec<usize> = (0..=self.precision)
            .map(|i| quot_profile[i] - quot_profile[i + 1])
            .collect();
        let exact = (0..=self.precision).all(|i| self.h(i) == h_sub[i] + h_quot[i]);
        Ok(InducedFiltration {
            sub_profile,
            quot_profile,
            h_sub,
            h_quot,
            exact,
        })
    }

    /// The subspace `L` as a filtered space in its own right, with the
    /// induced filtration `F^i(L) = L ∩ F^i(M)`.
    pub fn subspace(&self, sub: &Subgroup) -> Result<FilteredSpace, SpaceError> {
        if let Some(w) = self.subspace_failure(sub) {
            return Err(SpaceError::NotSubspace(w));
        }
        // Canonical rows of `sub` are valuation-adapted: the ambient basis is
        // sorted, so each row's valuation is the tag of its pivot column.
        let rows = sub.basis_rows();
        let basis: Vec<BasisElem> = sub
            .pivots()
            .iter()
            .map(|&p| self.basis[p].clone())
            .collect();
        let rd = self.algebra.dim();
        let mut action: ActionTable = vec![vec![Vec::new(); rows.len()]; rd];
        for (i, table_row) in action.iter_mut().enumerate() {
            let mut r = vec![0u32; rd];
            r[i] = 1;
            for (j, slot) in table_row.iter_mut().enumerate() {
                let w = self.apply(&r, &rows[j]);
                let coords = sub
                    .coords_of(&w)
                    .expect("closure verified before constructing the subspace");
                *slot = sparse_from_dense(&coords);
            }
        }
        Self::from_parts(self.algebra.clone(), basis, self.precision, Arc::new(action))
    }

    /// The quotient `M/L` as a filtered space, with basis the images of
    /// ambient coordinates chosen degree by degree.
    pub fn quotient(&self, sub: &Subgroup) -> Result<FilteredSpace, SpaceError> {
        if let Some(w) = self.subspace_failure(sub) {
            return Err(SpaceError::NotSubspace(w));
        }
        let f = self.field();
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..=self.precision {
            let mut acc = sub.sum(&self.filtration(i + 1));
            for j in self.slice_range(i) {
                let mut e = vec![0u32; self.dim()];
                e[j] = 1;
                if !acc.contains_vec(&e) {
                    reps.push(j);
                    acc = acc.sum(&self.subgroup(&[e]));
                }
            }
        }
        let basis: Vec<BasisElem> = reps.iter().map(|&j| self.basis[j].clone()).collect();
        // Express every r·rep in the direct sum L ⊕ span(reps) and keep the
        // rep coordinates.
        let mut columns = Matrix::zero(f, self.dim(), sub.dim() + reps.len());
        for (c, row) in sub.basis_rows().iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                columns.set(k, c, v);
            }
        }
        for (c, &j) in reps.iter().enumerate() {
            columns.set(j, sub.dim() + c, 1);
        }
        let rd = self.algebra.dim();
        let mut targets = Vec::with_capacity(rd * reps.len());
        for i in 0..rd {
            let mut r = vec![0u32; rd];
            r[i] = 1;
            for &j in &reps {
                let mut e = vec![0u32; self.dim()];
                e[j] = 1;
                targets.push(self.apply(&r, &e));
            }
        }
        let sols = columns.solve_many(&targets);
        let mut action: ActionTable = vec![vec![Vec::new(); reps.len()]; rd];
        for i in 0..rd {
            for j in 0..reps.len() {
                let sol = sols[i * reps.len() + j]
                    .as_ref()
                    .expect("L + reps span the ambient space");
                action[i][j] = sparse_from_dense(&sol[sub.dim()..]);
            }
        }
        Self::from_parts(self.algebra.clone(), basis, self.precision, Arc::new(action))
    }

    /// The same module with the filtration delayed by `s` steps:
    /// `G^i = F^(max(i - s, 0))`. Always a valid filtered space; the graded
    /// module is the old one shifted, so degree and leading coefficient of
    /// the Hilbert-Samuel data are unchanged.
    pub fn shift_filtration(&self, s: usize) -> FilteredSpace {
        let basis: Vec<BasisElem> = self
            .basis
            .iter()
            .map(|b| BasisElem {
                name: b.name.clone(),
                val: b.val + s,
            })
            .collect();
        Self::from_parts(
            self.algebra.clone(),
            basis,
            self.precision + s,
            self.action.clone(),
        )
        .expect("shifting a valid filtration stays valid")
    }

    /// Removes `s` from every valuation tag; requires every tag to be at
    /// least `s`. Used to re-index a subspace whose lowest valuation is
    /// positive, e.g. a cyclic space whose generator should sit in degree 0.
    pub fn unshift_filtration(&self, s: usize) -> FilteredSpace {
        assert!(self.basis.iter().all(|b| b.val >= s), "tags must allow the unshift");
        let basis: Vec<BasisElem> = self
            .basis
            .iter()
            .map(|b| BasisElem {
                name: b.name.clone(),
                val: b.val - s,
            })
            .collect();
        Self::from_parts(
            self.algebra.clone(),
            basis,
            self.precision - s,
            self.action.clone(),
        )
        .expect("lowering all tags uniformly keeps compatibility")
    }

    /// Re-equips the module with the filtration given by a strictly nested
    /// chain of subgroups `chain[0] = M ⊇ chain[1] ⊇ … ⊇ chain[last] = 0`.
    /// Fails if some step is not an R-subspace, the chain is not nested, or
    /// the result violates `F^i(R)·G^j ⊆ G^(i+j)`.
    pub fn refilter(&self, chain: &[Subgroup]) -> Result<FilteredSpace, SpaceError> {
        if chain.is_empty() || chain[0].dim() != self.dim() {
            return Err(SpaceError::BadChain("chain must start at the full space".into()));
        }
        if chain.last().unwrap().dim() != 0 {
            return Err(SpaceError::BadChain("chain must end at zero".into()));
        }
        for w in chain.windows(2) {
            if !w[1].is_subset_of(&w[0]) {
                return Err(SpaceError::BadChain("chain is not decreasing".into()));
            }
        }
        let f = self.field();
        let levels = chain.len() - 1; // new precision + 1
        let mut rep_rows: Vec<Vec<u32>> = Vec::new();
        let mut rep_vals: Vec<Val> = Vec::new();
        for i in 0..levels {
            let mut acc = chain[i + 1].clone();
            for row in chain[i].basis_rows() {
                if !acc.contains_vec(&row) {
                    rep_rows.push(row.clone());
                    rep_vals.push(i);
                    acc = acc.sum(&self.subgroup(&[row]));
                }
            }
        }
        if rep_rows.len() != self.dim() {
            return Err(SpaceError::BadChain("chain steps do not exhaust the space".into()));
        }
        // Reorder by valuation (stable; reps were produced level by level so
        // they are already sorted).
        let basis: Vec<BasisElem> = rep_vals
            .iter()
            .enumerate()
            .map(|(k, &v)| BasisElem {
                name: format!("g{k}"),
                val: v,
            })
            .collect();
        let mut columns = Matrix::zero(f, self.dim(), rep_rows.len());
        for (c, row) in rep_rows.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                columns.set(k, c, v);
            }
        }
        let rd = self.algebra.dim();
        let mut targets = Vec::with_capacity(rd * rep_rows.len());
        for i in 0..rd {
            let mut r = vec![0u32; rd];
            r[i] = 1;
            for row in &rep_rows {
                targets.push(self.apply(&r, row));
            }
        }
        let sols = columns.solve_many(&targets);
        let mut action: ActionTable = vec![vec![Vec::new(); rep_rows.len()]; rd];
        for i in 0..rd {
            for j in 0..rep_rows.len() {
                let sol = sols[i * rep_rows.len() + j]
                    .as_ref()
                    .ok_or_else(|| SpaceError::BadChain("chain reps do not span".into()))?;
                action[i][j] = sparse_from_dense(sol);
            }
        }
        let new_precision = levels.saturating_sub(1);
        Self::from_parts(self.algebra.clone(), basis, new_precision, Arc::new(action))
    }

    /// Greedy homogeneous generators of the graded module over the graded
    /// ring, with the module-structure check and stability verdict.
    pub fn permissible(&self, window: usize) -> PermissibilityReport {
        let module_failure = graded::graded_module_failure(self);
        let mut generators: Vec<GradedGenerator> = Vec::new();
        // prev = full slice of degree i-1 once extended; the pre-extension
        // span in degree i is gr_1(R) · gr_(i-1)(M).
        let mut prev_full: Option<std::ops::Range<usize>> = None;
        for i in 0..=self.precision {
            let mut t = match &prev_full {
                None => self.zero_subgroup(),
                Some(prev) => {
                    let ring_deg1 = self.ring_slice_coords(1);
                    let mut rows = Vec::new();
                    for &rho in &ring_deg1 {
                        let mut r = vec![0u32; self.algebra.dim()];
                        r[rho] = 1;
                        for j in prev.clone() {
                            let mut e = vec![0u32; self.dim()];
                            e[j] = 1;
                            rows.push(self.slice_of(&self.apply(&r, &e), i));
                        }
                    }
                    self.subgroup(&rows)
                }
            };
            for j in self.slice_range(i) {
                let mut e = vec![0u32; self.dim()];
                e[j] = 1;
                if !t.contains_vec(&e) {
                    generators.push(GradedGenerator {
                        degree: i,
                        element: e.clone(),
                    });
                    t = t.sum(&self.subgroup(&[e]));
                }
            }
            prev_full = Some(self.slice_range(i));
        }
        let horizon = self.precision.saturating_sub(window);
        let stable = generators.iter().all(|g| g.degree <= horizon);
        let report = graded::hilbert(self, window);
        let (dimension, alpha) = match &report.fit {
            Ok(fit) => (Some(fit.degree), Some(fit.leading)),
            Err(_) => (None, None),
        };
        PermissibilityReport {
            module_failure,
            generators,
            stable,
            dimension,
            alpha,
            window,
        }
    }

    fn ring_slice_coords(&self, v: Val) -> Vec<usize> {
        (0..self.algebra.dim())
            .filter(|&i| self.algebra.val(i) == v)
            .collect()
    }

    /// Kernel of `r -> r·x` in the ring, with the witnesses of valuation at
    /// most `tau` (truncation-honest torsion evidence).
    pub fn annihilator(&self, x: &[u32], tau: Val) -> AnnihilatorReport {
        let f = self.field();
        let rd = self.algebra.dim();
        let mut m = Matrix::zero(f, self.dim(), rd);
        for i in 0..rd {
            let mut r = vec![0u32; rd];
            r[i] = 1;
            let col = self.apply(&r, x);
            for (k, &v) in col.iter().enumerate() {
                m.set(k, i, v);
            }
        }
        let kernel_rows = m.kernel();
        let rvals: Arc<Vec<Val>> = Arc::new(self.algebra.vals());
        let kernel = Subgroup::from_rows(f, rvals, self.algebra.precision(), &kernel_rows);
        let witnesses: Vec<Vec<u32>> = (0..kernel.dim())
            .filter(|&i| self.algebra.valuation(kernel.row(i)) <= tau)
            .map(|i| kernel.row(i).to_vec())
            .collect();
        AnnihilatorReport {
            kernel,
            witnesses,
            tau,
        }
    }

    /// Checks `m^i(Rx) = m^i x` (plain) or `m^i(m^j x) = m^(i+j) x`
    /// (m-adic), reporting the first failing exponents.
    pub fn distinguished(
        &self,
        x: &[u32],
        mode: DistinguishedMode,
    ) -> Result<(), DistinguishedFailure> {
        let ring = FilteredSpace::regular(&self.algebra);
        let n = self.algebra.precision();
        let powers = power_ideal_chain(&ring, n + 1);
        let x_list = [x.to_vec()];
        match mode {
            DistinguishedMode::Plain => {
                let rx = self.span(&x_list);
                for (i, mi) in powers.iter().enumerate().take(n + 1) {
                    let lhs = self.product(mi, &rx);
                    let rhs = self.product_elems(mi, &x_list);
                    if lhs != rhs {
                        return Err(DistinguishedFailure::Plain(i));
                    }
                }
                Ok(())
            }
            DistinguishedMode::MAdic => {
                for i in 0..=n {
                    for j in 0..=(n - i) {
                        let inner = self.product_elems(&powers[j], &x_list);
                        let lhs = self.product(&powers[i], &inner);
                        let rhs = self.product_elems(&powers[i + j], &x_list);
                        if lhs != rhs {
                            return Err(DistinguishedFailure::MAdic(i, j));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Associated dimension of a permissible space: the fitted degree of the
    /// truncated length function of the stored filtration.
    pub fn dimension(&self, window: usize) -> Result<DimensionReport, DimensionError> {
        let perm = self.permissible(window);
        if let Some(w) = &perm.module_failure {
            return Err(DimensionError::NotPermissible(w.clone()));
        }
        if !perm.stable {
            return Err(DimensionError::NotPermissible(
                "generator degrees not stable below the precision horizon".into(),
            ));
        }
        let report = graded::hilbert(self, window);
        let fit = report.fit.map_err(DimensionError::Precision)?;
        Ok(DimensionReport {
            delta: fit.degree,
            alpha: fit.leading,
            window,
            precision: self.precision,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistinguishedMode {
    Plain,
    MAdic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistinguishedFailure {
    /// `m^i(Rx) != m^i x`.
    Plain(usize),
    /// `m^i(m^j x) != m^(i+j) x`.
    MAdic(usize, usize),
}

#[derive(Debug, Clone)]
pub struct InducedFiltration {
    pub sub_profile: Vec<usize>,
    pub quot_profile: Vec<usize>,
    pub h_sub: Vec<usize>,
    pub h_quot: Vec<usize>,
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct GradedGenerator {
    pub degree: Val,
    pub element: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct PermissibilityReport {
    /// `None` when the graded action is a genuine graded-module action.
    pub module_failure: Option<String>,
    pub generators: Vec<GradedGenerator>,
    /// No new generators within `window` of the precision horizon.
    pub stable: bool,
    pub dimension: Option<usize>,
    pub alpha: Option<Ratio<i64>>,
    pub window: usize,
}

impl PermissibilityReport {
    pub fn permissible(&self) -> bool {
        self.module_failure.is_none() && self.stable
    }

    pub fn generator_degrees(&self) -> Vec<Val> {
        self.generators.iter().map(|g| g.degree).collect()
    }
}

#[derive(Debug, Clone)]
pub struct AnnihilatorReport {
    pub kernel: Subgroup,
    pub witnesses: Vec<Vec<u32>>,
    pub tau: Val,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub delta: usize,
    pub alpha: Ratio<i64>,
    pub window: usize,
    pub precision: usize,
}

/// `[m^0, m^1, …, m^up_to]` computed left-nested (`m^(n+1) = m(m^n)`) in the
/// ring's regular representation.
pub fn power_ideal_chain(ring: &FilteredSpace, up_to: usize) -> Vec<Subgroup> {
    assert!(ring.is_regular(), "power ideals live in the ring itself");
    let m1 = ring.ring_filtration(1);
    let mut chain = vec![ring.full_subgroup()];
    for _ in 0..up_to {
        let prev = chain.last().unwrap();
        chain.push(ring.product(&m1, prev));
    }
    chain
}

/// `m^n` left-nested.
pub fn power_ideal(ring: &FilteredSpace, n: usize) -> Subgroup {
    power_ideal_chain(ring, n).pop().unwrap()
}
