//! Successive-approximation solving in truncated filtered spaces.
//!
//! To express a target as a ring-linear combination of spanners, each step
//! solves one homogeneous problem: in degree `v = v(residual)`, find
//! principal parts `sigma(r_i)` of degree `v - v(y_i)` with
//! `sum sigma(r_i) sigma(y_i) = sigma(residual)`. Subtracting the lifted
//! combination strictly raises the residual valuation, so the loop ends in
//! at most `precision + 1` steps; in the complete setting this is exactly the
//! convergence argument behind surjectivity of filtered maps.

use thiserror::Error;

use crate::matrix::Matrix;
use crate::space::FilteredSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("principal parts do not span in degree {degree}")]
    NotSpanned { degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftSolution {
    /// Ring coefficients `r_i`, one per spanner, with `sum r_i y_i = target`.
    pub coefficients: Vec<Vec<u32>>,
    pub steps: usize,
    /// The valuation-drop constant realized by this lift: `max_i v(y_i)`.
    pub constant: usize,
}

/// Solves `sum r_i y_i = target` exactly in the truncation, or reports the
/// degree where the graded equation has no solution. Free variables are zero
/// at every graded step, so the output is deterministic.
pub fn lift_solve(
    space: &FilteredSpace,
    target: &[u32],
    spanners: &[Vec<u32>],
) -> Result<LiftSolution, LiftError> {
    let f = space.field();
    let rd = space.algebra().dim();
    let n = space.precision();
    let constant = spanners
        .iter()
        .map(|y| space.valuation(y))
        .filter(|&v| v <= n)
        .max()
        .unwrap_or(0);
    let spanner_vals: Vec<usize> = spanners.iter().map(|y| space.valuation(y)).collect();

    let mut coeffs = vec![vec![0u32; rd]; spanners.len()];
    let mut residual = target.to_vec();
    let mut steps = 0usize;
    loop {
        let v = space.valuation(&residual);
        if v > n {
            return Ok(LiftSolution {
                coefficients: coeffs,
                steps,
                constant,
            });
        }
        // Unknowns: for each spanner with v(y_i) <= v, the coefficients of
        // ring basis elements of valuation exactly v - v(y_i).
        let mut columns: Vec<(usize, usize)> = Vec::new(); // (spanner, ring coord)
        for (i, &vy) in spanner_vals.iter().enumerate() {
            if vy > v {
                continue;
            }
            let d = v - vy;
            for rho in 0..rd {
                if space.algebra().val(rho) == d {
                    columns.push((i, rho));
                }
            }
        }
        let rows: Vec<usize> = space.slice_range(v).collect();
        let mut mat = Matrix::zero(f, rows.len(), columns.len());
        for (cj, &(i, rho)) in columns.iter().enumerate() {
            let mut r = vec![0u32; rd];
            r[rho] = 1;
            // Restricting the full product to the degree-v slice equals the
            // graded product with the principal part of y_i.
            let prod = space.apply(&r, &spanners[i]);
            for (ri, &t) in rows.iter().enumerate() {
                mat.set(ri, cj, prod[t]);
            }
        }
        let rhs: Vec<u32> = rows.iter().map(|&t| residual[t]).collect();
        let sol = mat
            .solve(&rhs)
            .ok_or(LiftError::NotSpanned { degree: v })?;
        for (cj, &(i, rho)) in columns.iter().enumerate() {
            coeffs[i][rho] = f.add(coeffs[i][rho], sol[cj]);
        }
        // Recompute the residual exactly from the full products.
        residual = target.to_vec();
        for (i, y) in spanners.iter().enumerate() {
            let term = space.apply(&coeffs[i], y);
            f.vec_sub_assign(&mut residual, &term);
        }
        debug_assert!(space.valuation(&residual) > v, "residual valuation must rise");
        steps += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvertError {
    #[error("element has valuation {0} >= 1, not a unit")]
    NotUnit(usize),
    /// Only possible when the ring is not a valid complete local-filtered
    /// algebra (there the degree-0 principal part is a nonzero scalar and
    /// every graded step solves).
    #[error("graded inversion step has no solution in degree {0}")]
    NotSpanned(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inverse {
    /// `x` with `x·a = 1` in the truncation.
    pub left_inverse: Vec<u32>,
    /// Whether `a·x = 1` holds as well.
    pub two_sided: bool,
}

/// Left-inverts a valuation-0 element of the ring by successive
/// approximation against right multiplication, and reports whether the left
/// inverse happens to be two-sided; in a nonassociative ring it need not be.
pub fn invert(ring: &FilteredSpace, a: &[u32]) -> Result<Inverse, InvertError> {
    assert!(ring.is_regular(), "inversion happens inside the ring");
    let v = ring.valuation(a);
    if v != 0 {
        return Err(InvertError::NotUnit(v));
    }
    let one = ring.algebra().unit_elem();
    let sol = lift_solve(ring, &one, &[a.to_vec()])
        .map_err(|LiftError::NotSpanned { degree }| InvertError::NotSpanned(degree))?;
    let x = sol.coefficients.into_iter().next().unwrap();
    let two_sided = ring.algebra().mul_elem(a, &x) == one;
    Ok(Inverse {
        left_inverse: x,
        two_sided,
    })
}
