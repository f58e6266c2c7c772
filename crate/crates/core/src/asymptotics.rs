//! Sizes of quotients `M / m^n M` and their polynomial asymptotics.
//!
//! Over a finite residue field `F_p`, `log_p |M / m^n M|` is just the
//! `F_p`-codimension of the product subgroup `m^n M = F^n(R)·M`. The fitted
//! degree and leading coefficient must agree, exactly as rationals, with the
//! graded dimension data of the stored filtration; the bridge between the two
//! is the sandwich `F^(n+D)(M) ⊆ m^n M ⊆ F^n(M)` supplied by the Artin-Rees
//! constant `D`.
//!
//! Values of `L(n)` are truncation-exact only while `F^(N+1) ⊆ m^n M`, i.e.
//! for `n <= N + 1 - D`; the fit window is clamped accordingly.

use num_rational::Ratio;
use thiserror::Error;

use crate::fit::{fit_sequence, FitError, PolynomialFit};
use crate::graded;
use crate::rees::artin_rees_constant;
use crate::space::FilteredSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymptoticsError {
    #[error("space is not permissible: {0}")]
    NotPermissible(String),
    #[error("no Artin-Rees constant found at this precision")]
    NoArConstant,
}

#[derive(Debug, Clone)]
pub struct SizeSeries {
    /// `L(n) = dim_Fp(M / m^n M)` for `n = 0..=horizon`.
    pub values: Vec<i64>,
    pub fit: Result<PolynomialFit, FitError>,
    pub graded_delta: Option<usize>,
    pub graded_alpha: Option<Ratio<i64>>,
    pub ar_constant: usize,
    pub horizon: usize,
    pub window: usize,
}

impl SizeSeries {
    pub fn delta(&self) -> Option<usize> {
        self.fit.as_ref().ok().map(|f| f.degree)
    }

    pub fn alpha(&self) -> Option<Ratio<i64>> {
        self.fit.as_ref().ok().map(|f| f.leading)
    }

    /// Exact agreement of (degree, leading coefficient) with the graded fit;
    /// `None` when either side did not stabilize.
    pub fn matches_graded(&self) -> Option<bool> {
        let fit = self.fit.as_ref().ok()?;
        Some(self.graded_delta == Some(fit.degree) && self.graded_alpha == Some(fit.leading))
    }
}

pub fn size_series(space: &FilteredSpace, window: usize) -> Result<SizeSeries, AsymptoticsError> {
    let perm = space.permissible(window);
    if let Some(w) = &perm.module_failure {
        return Err(AsymptoticsError::NotPermissible(w.clone()));
    }
    if !perm.stable {
        return Err(AsymptoticsError::NotPermissible(
            "generator degrees not stable below the precision horizon".into(),
        ));
    }
    let ar = artin_rees_constant(space)
        .constant
        .ok_or(AsymptoticsError::NoArConstant)?;
    let n = space.precision();
    let horizon = (n + 1 - ar).min(n);
    let full = space.full_subgroup();
    let values: Vec<i64> = (0..=horizon)
        .map(|k| {
            let mk_m = space.product(&space.ring_filtration(k), &full);
            (space.dim() - mk_m.dim()) as i64
        })
        .collect();
    debug_assert_eq!(values.first(), Some(&0), "m^0 M = M");
    debug_assert!(values.windows(2).all(|w| w[0] <= w[1]), "L is weakly increasing");
    let fit = fit_sequence(&values, window);
    let hr = graded::hilbert(space, window);
    Ok(SizeSeries {
        values,
        fit,
        graded_delta: hr.delta(),
        graded_alpha: hr.alpha(),
        ar_constant: ar,
        horizon,
        window,
    })
}

#[derive(Debug, Clone)]
pub struct SandwichRow {
    pub n: usize,
    /// `ell(M/F^n)`.
    pub lower: i64,
    /// `L(n)`.
    pub mid: i64,
    /// `ell(M/F^(n+d))`.
    pub upper: i64,
    /// Numeric inequalities `lower <= mid <= upper`.
    pub ok: bool,
    /// Subgroup inclusions `F^(n+d)(M) ⊆ m^n M ⊆ F^n(M)`.
    pub inclusions_ok: bool,
}

#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub d: usize,
    pub rows: Vec<SandwichRow>,
}

impl SandwichReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok && r.inclusions_ok)
    }
}

/// Verifies, for every `n` with `n + d` within precision, both the subgroup
/// inclusions and the induced length inequalities
/// `ell(M/F^n) <= L(n) <= ell(M/F^(n+d))`.
pub fn sandwich_check(
    space: &FilteredSpace,
    d: usize,
) -> Result<SandwichReport, AsymptoticsError> {
    let perm = space.permissible(3.min(space.precision().max(2)));
    if let Some(w) = &perm.module_failure {
        return Err(AsymptoticsError::NotPermissible(w.clone()));
    }
    let n_max = space.precision();
    let full = space.full_subgroup();
    let dim = space.dim() as i64;
    let mut rows = Vec::new();
    for n in 0..=n_max.saturating_sub(d) {
        let fn_m = space.filtration(n);
        let fnd_m = space.filtration(n + d);
        let mn_m = space.product(&space.ring_filtration(n), &full);
        let lower = dim - fn_m.dim() as i64;
        let mid = dim - mn_m.dim() as i64;
        let upper = dim - fnd_m.dim() as i64;
        let inclusions_ok = fnd_m.is_subset_of(&mn_m) && mn_m.is_subset_of(&fn_m);
        rows.push(SandwichRow {
            n,
            lower,
            mid,
            upper,
            ok: lower <= mid && mid <= upper,
            inclusions_ok,
        });
    }
    Ok(SandwichReport { d, rows })
}
