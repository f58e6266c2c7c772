//! Dense exact linear algebra over `F_p`.
//!
//! Row reduction is fully deterministic (leftmost pivot column, first
//! nonzero row wins ties), so the reduced row-echelon form of a subspace is a
//! canonical representative and subspace equality is representation equality.
//! For `p = 2` the elimination runs on bit-packed rows.

use crate::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of row reduction: the canonical RREF, its rank, and the strictly
/// increasing list of pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row vectors; every entry is reduced mod p.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zero(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            for (j, &c) in r.iter().enumerate() {
                m.set(i, j, field.reduce(u64::from(c)));
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (top, bottom) = self.data.split_at_mut(hi * c);
        top[lo * c..(lo + 1) * c].swap_with_slice(&mut bottom[..c]);
    }

    /// Canonical reduced row-echelon form.
    pub fn rref(&self) -> Echelon {
        if self.field.modulus() == 2 {
            return self.rref_packed_f2();
        }
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&r| m.at(r, col) != 0) else {
                continue;
            };
            m.swap_rows(pivot_row, found);
            let inv = f.inv(m.at(pivot_row, col));
            f.vec_scale(m.row_mut(pivot_row), inv);
            for r in 0..m.rows {
                if r != pivot_row && m.at(r, col) != 0 {
                    let c = f.neg(m.at(r, col));
                    let (pr, tr) = row_pair(&mut m.data, m.cols, pivot_row, r);
                    f.vec_add_scaled(tr, pr, c);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Echelon {
            rank: pivots.len(),
            pivots,
            matrix: m,
        }
    }

    fn rref_packed_f2(&self) -> Echelon {
        let limbs = self.cols.div_ceil(64).max(1);
        let mut packed: Vec<u64> = vec![0; self.rows * limbs];
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.at(i, j) != 0 {
                    packed[i * limbs + j / 64] |= 1u64 << (j % 64);
                }
            }
        }
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let limb = col / 64;
            let bit = 1u64 << (col % 64);
            let Some(found) =
                (pivot_row..self.rows).find(|&r| packed[r * limbs + limb] & bit != 0)
            else {
                continue;
            };
            if found != pivot_row {
                for l in 0..limbs {
                    packed.swap(pivot_row * limbs + l, found * limbs + l);
                }
            }
            for r in 0..self.rows {
                if r != pivot_row && packed[r * limbs + limb] & bit != 0 {
                    for l in 0..limbs {
                        packed[r * limbs + l] ^= packed[pivot_row * limbs + l];
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        let mut m = Matrix::zero(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if packed[i * limbs + j / 64] & (1u64 << (j % 64)) != 0 {
                    m.set(i, j, 1);
                }
            }
        }
        Echelon {
            rank: pivots.len(),
            pivots,
            matrix: m,
        }
    }

    /// Solves `self * x = b` for a column `b`, returning the deterministic
    /// solution with all free variables set to zero, or `None` when `b` is not
    /// in the column space.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        self.solve_many(&[b.to_vec()]).pop().unwrap()
    }

    /// Solves `self * x = b` for several right-hand sides with one elimination.
    pub fn solve_many(&self, bs: &[Vec<u32>]) -> Vec<Option<Vec<u32>>> {
        let k = bs.len();
        let mut aug = Matrix::zero(self.field, self.rows, self.cols + k);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j));
            }
        }
        for (t, b) in bs.iter().enumerate() {
            assert_eq!(b.len(), self.rows, "rhs length mismatch");
            for i in 0..self.rows {
                aug.set(i, self.cols + t, self.field.reduce(u64::from(b[i])));
            }
        }
        let ech = aug.rref();
        let mut out = Vec::with_capacity(k);
        for t in 0..k {
            // A pivot inside the A-block row gives x[pivot]; a row whose
            // A-block is zero but whose target entry is nonzero is inconsistent.
            let mut x = vec![0u32; self.cols];
            let mut ok = true;
            for (r, &p) in ech.pivots.iter().enumerate() {
                if p < self.cols {
                    x[p] = ech.matrix.at(r, self.cols + t);
                } else {
                    // Pivot sits in the augmented block: some rhs is outside
                    // the column space; this one iff its entry is nonzero.
                    if ech.matrix.at(r, self.cols + t) != 0 {
                        ok = false;
                    }
                }
            }
            out.push(if ok { Some(x) } else { None });
        }
        out
    }

    /// Canonical basis of the null space: one vector per non-pivot column,
    /// ordered by that column. Empty iff the matrix is injective.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let ech = self.rref();
        let f = self.field;
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &p) in ech.pivots.iter().enumerate() {
                v[p] = f.neg(ech.matrix.at(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u32;
                for (j, &xj) in x.iter().enumerate() {
                    acc = f.add(acc, f.mul(self.at(i, j), xj));
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.at(i, j), f.mul(a, other.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Disjoint (immutable row `a`, mutable row `b`) views into row-major data.
fn row_pair(data: &mut [u32], cols: usize, a: usize, b: usize) -> (&[u32], &mut [u32]) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = data.split_at_mut(b * cols);
        (&lo[a * cols..(a + 1) * cols], &mut hi[..cols])
    } else {
        let (lo, hi) = data.split_at_mut(a * cols);
        (&hi[..cols], &mut lo[b * cols..(b + 1) * cols])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_identity_f2() {
        let m = Matrix::identity(f(2), 2);
        let e = m.rref();
        assert_eq!(e.matrix, m);
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_duplicate_rows_f2() {
        let m = Matrix::from_rows(f(2), 2, &[vec![1, 1], vec![1, 1]]);
        let e = m.rref();
        assert_eq!(e.rank, 1);
        assert_eq!(e.pivots, vec![0]);
        assert_eq!(e.matrix.row(0), &[1, 1]);
        assert_eq!(e.matrix.row(1), &[0, 0]);
    }

    #[test]
    fn rref_dependent_rows_f3() {
        // 2*(1,2) = (2,4) = (2,1) mod 3, so the second row is a multiple.
        let m = Matrix::from_rows(f(3), 2, &[vec![1, 2], vec![2, 1]]);
        let e = m.rref();
        assert_eq!(e.rank, 1);
        assert_eq!(e.matrix.row(0), &[1, 2]);
    }

    #[test]
    fn solve_identity_gives_rhs() {
        let m = Matrix::identity(f(5), 3);
        assert_eq!(m.solve(&[2, 0, 4]).unwrap(), vec![2, 0, 4]);
    }

    #[test]
    fn solve_zero_matrix_nonzero_rhs_fails() {
        let m = Matrix::zero(f(2), 2, 2);
        assert_eq!(m.solve(&[1, 0]), None);
    }

    #[test]
    fn solve_underdetermined_free_vars_zero() {
        // Enumerating all four candidates over F_2: (1,0) and (0,1) solve the
        // system; the free-variables-zero rule picks (1,0).
        let m = Matrix::from_rows(f(2), 2, &[vec![1, 1]]);
        let candidates: Vec<Vec<u32>> = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        let solutions: Vec<_> = candidates
            .into_iter()
            .filter(|x| m.apply(x) == vec![1])
            .collect();
        assert_eq!(solutions, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(m.solve(&[1]).unwrap(), vec![1, 0]);
    }

    #[test]
    fn kernel_identity_empty() {
        assert!(Matrix::identity(f(3), 4).kernel().is_empty());
    }

    #[test]
    fn kernel_zero_map() {
        let m = Matrix::zero(f(2), 1, 2);
        assert_eq!(m.kernel(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn kernel_sum_map_f2() {
        let m = Matrix::from_rows(f(2), 2, &[vec![1, 1]]);
        let k = m.kernel();
        assert_eq!(k, vec![vec![1, 1]]);
        assert!(m.apply(&k[0]).iter().all(|&c| c == 0));
    }

    #[test]
    fn packed_path_is_idempotent_and_detects_dependence() {
        // Row 2 is the XOR of rows 0 and 1, and row 3 repeats row 0.
        let rows = vec![
            vec![1, 0, 1, 1, 0],
            vec![0, 1, 1, 0, 1],
            vec![1, 1, 0, 1, 1],
            vec![1, 0, 1, 1, 0],
        ];
        let e2 = Matrix::from_rows(f(2), 5, &rows).rref();
        assert_eq!(e2.rank, 2);
        assert_eq!(e2.pivots, vec![0, 1]);
        assert_eq!(e2.matrix.rref(), e2, "rref is idempotent");
    }

    #[test]
    fn solve_many_mixed_consistency() {
        let m = Matrix::from_rows(f(3), 3, &[vec![1, 0, 2], vec![0, 1, 1]]);
        let sols = m.solve_many(&[vec![1, 2], vec![0, 0]]);
        let s0 = sols[0].clone().unwrap();
        assert_eq!(m.apply(&s0), vec![1, 2]);
        assert_eq!(sols[1].clone().unwrap(), vec![0, 0, 0]);
    }
}
