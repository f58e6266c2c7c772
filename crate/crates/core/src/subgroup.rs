//! `F_p`-subspaces of a truncated filtered space, held in canonical reduced
//! row form together with their valuation profile.
//!
//! Canonical form makes subgroup equality plain representation equality; the
//! profile `dim(S ∩ F^i)` falls out of the pivot columns because the ambient
//! basis is sorted by valuation, so each `F^i` is a coordinate suffix.

use std::sync::Arc;

use crate::algebra::Val;
use crate::field::PrimeField;
use crate::matrix::Matrix;

#[derive(Debug, Clone)]
pub struct Subgroup {
    vals: Arc<Vec<Val>>,
    precision: usize,
    rows: Matrix,
    pivots: Vec<usize>,
    profile: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Canonicalizes arbitrary spanning rows. `vals` are the valuation tags of
    /// the ambient adapted basis (weakly increasing).
    pub fn from_rows(
        field: PrimeField,
        vals: Arc<Vec<Val>>,
        precision: usize,
        spanning: &[Vec<u32>],
    ) -> Self {
        let n = vals.len();
        let ech = Matrix::from_rows(field, n, spanning).rref();
        let rank = ech.rank;
        let mut rows = Matrix::zero(field, rank, n);
        for i in 0..rank {
            rows.row_mut(i).copy_from_slice(ech.matrix.row(i));
        }
        Self::assemble(vals, precision, rows, ech.pivots)
    }

    /// Span of the ambient coordinates in `coords` (must be strictly
    /// increasing): already a canonical form, so no elimination runs.
    pub fn from_coords(
        field: PrimeField,
        vals: Arc<Vec<Val>>,
        precision: usize,
        coords: &[usize],
    ) -> Self {
        let n = vals.len();
        debug_assert!(coords.windows(2).all(|w| w[0] < w[1]));
        let mut rows = Matrix::zero(field, coords.len(), n);
        for (r, &c) in coords.iter().enumerate() {
            rows.set(r, c, 1);
        }
        Self::assemble(vals, precision, rows, coords.to_vec())
    }

    pub fn zero(field: PrimeField, vals: Arc<Vec<Val>>, precision: usize) -> Self {
        Self::from_coords(field, vals, precision, &[])
    }

    pub fn full(field: PrimeField, vals: Arc<Vec<Val>>, precision: usize) -> Self {
        let coords: Vec<usize> = (0..vals.len()).collect();
        Self::from_coords(field, vals, precision, &coords)
    }

    fn assemble(vals: Arc<Vec<Val>>, precision: usize, rows: Matrix, pivots: Vec<usize>) -> Self {
        // profile[i] = #pivots with tag >= i; weakly decreasing in i.
        let mut profile = vec![0usize; precision + 2];
        for &p in &pivots {
            for (i, slot) in profile.iter_mut().enumerate() {
                if vals[p] >= i {
                    *slot += 1;
                }
            }
        }
        Subgroup {
            vals,
            precision,
            rows,
            pivots,
            profile,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows.cols()
    }

    pub fn field(&self) -> PrimeField {
        self.rows.field()
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn vals(&self) -> &Arc<Vec<Val>> {
        &self.vals
    }

    /// `dim(S ∩ F^i)` for `0 <= i <= precision + 1`.
    pub fn profile(&self) -> &[usize] {
        &self.profile
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> Vec<Vec<u32>> {
        self.rows.row_vecs()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        self.rows.row(i)
    }

    /// Residual of `v` after elimination against the canonical rows.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut w = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = w[p];
            if c != 0 {
                f.vec_add_scaled(&mut w, self.rows.row(r), f.neg(c));
            }
        }
        w
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is outside.
    pub fn coords_of(&self, v: &[u32]) -> Option<Vec<u32>> {
        let f = self.field();
        let mut w = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = w[p];
            coords.push(c);
            if c != 0 {
                f.vec_add_scaled(&mut w, self.rows.row(r), f.neg(c));
            }
        }
        if f.vec_is_zero(&w) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains_vec(&self, v: &[u32]) -> bool {
        self.field().vec_is_zero(&self.reduce(v))
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        (0..self.dim()).all(|i| other.contains_vec(self.rows.row(i)))
    }

    pub fn sum(&self, other: &Subgroup) -> Subgroup {
        debug_assert_eq!(self.ambient_dim(), other.ambient_dim());
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Subgroup::from_rows(self.field(), self.vals.clone(), self.precision, &rows)
    }

    /// Intersection via the kernel of the stacked relation `l*A + m*B = 0`.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        debug_assert_eq!(self.ambient_dim(), other.ambient_dim());
        let f = self.field();
        let n = self.ambient_dim();
        let a = self.dim();
        let b = other.dim();
        if a == 0 || b == 0 {
            return Subgroup::zero(f, self.vals.clone(), self.precision);
        }
        // Columns of the stacked transpose are the relation unknowns.
        let mut stacked = Matrix::zero(f, n, a + b);
        for i in 0..a {
            for j in 0..n {
                stacked.set(j, i, self.rows.at(i, j));
            }
        }
        for i in 0..b {
            for j in 0..n {
                stacked.set(j, a + i, other.rows.at(i, j));
            }
        }
        let kernel = stacked.kernel();
        let rows: Vec<Vec<u32>> = kernel
            .iter()
            .map(|rel| {
                let mut v = vec![0u32; n];
                for (i, &c) in rel[..a].iter().enumerate() {
                    f.vec_add_scaled(&mut v, self.rows.row(i), c);
                }
                v
            })
            .collect();
        Subgroup::from_rows(f, self.vals.clone(), self.precision, &rows)
    }

}
