//! Central extensions `R[[T]]` acting on permissible spaces, dimension
//! invariance over the extension, and the torsion / pseudo-nullity batteries.
//!
//! A central extension is presented by a matrix `T` on the space that
//! commutes with the ring action and is nilpotent modulo `mM`. Under those
//! validated hypotheses `T` is nilpotent on the truncated model outright
//! (each `T^a` with `T^a M ⊆ mM` pushes images one filtration step deeper),
//! so the table `k_j = min { k : T^k M ⊆ m^j M }` is finite by construction
//! rather than by decree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matrix::Matrix;
use crate::space::{DimensionError, DistinguishedMode, FilteredSpace};
use crate::subgroup::Subgroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("operator matrix must be square of the space dimension")]
    Shape,
    #[error("operator is not central: T({ring} . {space}) != {ring} . T({space})")]
    NotCentral { ring: String, space: String },
    #[error("operator is not nilpotent modulo mM (stable image element outside mM: {witness})")]
    NotNilpotentModM { witness: String },
    #[error("base space is not permissible: {0}")]
    NotPermissible(String),
    #[error("integral-domain hypothesis on the graded ring was not asserted")]
    DomainNotAsserted,
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error("no Artin-Rees constant found at this precision")]
    NoArConstant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralExtension {
    space: FilteredSpace,
    t_op: Matrix,
    /// `k_table[j] = min { k : T^k M ⊆ m^j M }` for `j <= precision`.
    k_table: Vec<usize>,
}

/// Validates centrality and nilpotence mod `mM`, then tabulates the
/// filtration depths of the `T`-image chain.
pub fn build_extension(
    space: FilteredSpace,
    t_op: Matrix,
    window: usize,
) -> Result<CentralExtension, ExtensionError> {
    if t_op.rows() != space.dim() || t_op.cols() != space.dim() {
        return Err(ExtensionError::Shape);
    }
    let perm = space.permissible(window);
    if let Some(w) = &perm.module_failure {
        return Err(ExtensionError::NotPermissible(w.clone()));
    }
    if !perm.stable {
        return Err(ExtensionError::NotPermissible(
            "generator degrees not stable below the precision horizon".into(),
        ));
    }
    let rd = space.algebra().dim();
    for i in 0..rd {
        let mut r = vec![0u32; rd];
        r[i] = 1;
        for j in 0..space.dim() {
            let mut m = vec![0u32; space.dim()];
            m[j] = 1;
            let lhs = t_op.apply(&space.apply(&r, &m));
            let rhs = space.apply(&r, &t_op.apply(&m));
            if lhs != rhs {
                return Err(ExtensionError::NotCentral {
                    ring: space.algebra().basis()[i].name.clone(),
                    space: space.basis()[j].name.clone(),
                });
            }
        }
    }
    let full = space.full_subgroup();
    let m_m = space.product(&space.ring_filtration(1), &full);
    let codim = space.dim() - m_m.dim();
    let mut image = full.clone();
    for _ in 0..codim {
        image = t_image(&space, &t_op, &image);
    }
    let escape_witness = |img: &Subgroup| -> String {
        (0..img.dim())
            .map(|i| img.row(i))
            .find(|row| !m_m.contains_vec(row))
            .map(|row| render(&space, row))
            .unwrap_or_default()
    };
    if !image.is_subset_of(&m_m) {
        let witness = escape_witness(&image);
        return Err(ExtensionError::NotNilpotentModM { witness });
    }
    // k_j table by walking the image chain; bounded because T is nilpotent
    // on the truncation under the validated hypotheses.
    let n = space.precision();
    let cap = space.dim() * (n + 2) + 1;
    let mut k_table = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mj_m = space.product(&space.ring_filtration(j), &full);
        let mut img = full.clone();
        let mut k = 0usize;
        while !img.is_subset_of(&mj_m) {
            img = t_image(&space, &t_op, &img);
            k += 1;
            if k > cap {
                let witness = escape_witness(&img);
                return Err(ExtensionError::NotNilpotentModM { witness });
            }
        }
        k_table.push(k);
    }
    Ok(CentralExtension {
        space,
        t_op,
        k_table,
    })
}

fn t_image(space: &FilteredSpace, t_op: &Matrix, s: &Subgroup) -> Subgroup {
    let rows: Vec<Vec<u32>> = (0..s.dim()).map(|i| t_op.apply(s.row(i))).collect();
    space.subgroup(&rows)
}

fn render(space: &FilteredSpace, v: &[u32]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(i, &c)| {
            let name = &space.basis()[i].name;
            if c == 1 {
                name.clone()
            } else {
                format!("{c}*{name}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[derive(Debug, Clone)]
pub struct ExtensionDimension {
    /// Fitted degree of `k -> dim(M / n^k M)` for the extended maximal ideal
    /// `n = m + (T)`.
    pub delta_n: usize,
    /// Dimension of the space over the base ring.
    pub delta_r: usize,
    pub values: Vec<i64>,
    pub horizon: usize,
}

impl ExtensionDimension {
    pub fn invariant(&self) -> bool {
        self.delta_n == self.delta_r
    }
}

impl CentralExtension {
    pub fn space(&self) -> &FilteredSpace {
        &self.space
    }

    pub fn t_op(&self) -> &Matrix {
        &self.t_op
    }

    pub fn k_table(&self) -> &[usize] {
        &self.k_table
    }

    pub fn t_image_of(&self, s: &Subgroup) -> Subgroup {
        t_image(&self.space, &self.t_op, s)
    }

    /// `n^k M` for `k = 0..=len`, with `n S := m S + T(S)` applied k-fold,
    /// left-nested.
    pub fn n_adic_chain(&self, len: usize) -> Vec<Subgroup> {
        let m1 = self.space.ring_filtration(1);
        let mut chain = vec![self.space.full_subgroup()];
        for _ in 0..len {
            let prev = chain.last().unwrap();
            let next = self
                .space
                .product(&m1, prev)
                .sum(&t_image(&self.space, &self.t_op, prev));
            chain.push(next);
        }
        chain
    }

    /// Dimension of the space over the extension, fitted from the n-adic
    /// quotient sizes, with the invariance verdict against the base ring.
    pub fn dim_over_extension(&self, window: usize) -> Result<ExtensionDimension, ExtensionError> {
        let delta_r = self.space.dimension(window)?.delta;
        let ar = crate::rees::artin_rees_constant(&self.space)
            .constant
            .ok_or(ExtensionError::NoArConstant)?;
        let n = self.space.precision();
        let horizon = (n + 1 - ar).min(n);
        let chain = self.n_adic_chain(horizon);
        let values: Vec<i64> = chain
            .iter()
            .map(|s| (self.space.dim() - s.dim()) as i64)
            .collect();
        let fit = crate::fit::fit_sequence(&values, window)
            .map_err(DimensionError::Precision)?;
        Ok(ExtensionDimension {
            delta_n: fit.degree,
            delta_r,
            values,
            horizon,
        })
    }

    /// Pseudo-nullity of the extension space through the dimension criterion:
    /// `dim R[[T]] - dim M >= 2`, equivalently `dim R - dim M >= 1`. Requires
    /// the integral-domain hypothesis on the graded base ring to be asserted
    /// by the caller; the refuter's outcome travels with the report.
    pub fn pseudo_null_filtration_test(
        &self,
        window: usize,
        domain_asserted: bool,
    ) -> Result<PseudoNullReport, ExtensionError> {
        if !domain_asserted {
            return Err(ExtensionError::DomainNotAsserted);
        }
        let ring = FilteredSpace::regular(self.space.algebra());
        let dim_ring = ring.dimension(window)?.delta;
        let ext = self.dim_over_extension(window)?;
        Ok(PseudoNullReport {
            dim_ring_ext: dim_ring + 1,
            dim_space: ext.delta_n,
            verdict: dim_ring + 1 >= ext.delta_n + 2,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoNullReport {
    /// `dim R[[T]] = dim R + 1` (graded ring of the extension is the
    /// polynomial ring over the graded base).
    pub dim_ring_ext: usize,
    pub dim_space: usize,
    pub verdict: bool,
}

#[derive(Debug, Clone)]
pub struct TorsionConfig {
    pub seed: u64,
    pub samples: usize,
    /// Valuation cap for annihilator witnesses; `None` uses
    /// `precision - v(x) - 2` per element (clamped at 0).
    pub tau: Option<usize>,
    /// Exhaustively enumerate spanner combinations (p = 2, small spaces).
    pub exhaustive: bool,
    pub window: usize,
}

impl Default for TorsionConfig {
    fn default() -> Self {
        TorsionConfig {
            seed: 0,
            samples: 16,
            tau: None,
            exhaustive: false,
            window: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error("spanning set fails m-adic distinguishedness at element {0}")]
    HypothesisNotMet(usize),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error("no Artin-Rees constant found at this precision")]
    NoArConstant,
    #[error("exhaustive enumeration would visit {0} combinations (limit 4096)")]
    ExhaustiveTooLarge(u64),
}

#[derive(Debug, Clone)]
pub struct TorsionReport {
    /// `dim(M) <= dim(R) - 1`.
    pub s1: bool,
    /// Every sampled distinguished element has an annihilator witness.
    pub s2: bool,
    /// Every given spanner has an annihilator witness.
    pub s3: bool,
    pub sampled: usize,
    pub dim_ring: usize,
    pub dim_space: usize,
    /// A distinguished element without witness, when one was found.
    pub counterexample: Option<Vec<u32>>,
}

impl TorsionReport {
    pub fn agree(&self) -> bool {
        self.s1 == self.s2 && self.s2 == self.s3
    }
}

/// Evaluates the three torsion conditions independently on a space spanned by
/// the given elements. The spanning set must be m-adically distinguished
/// (that is the structural hypothesis); whether its members have annihilator
/// witnesses is the data of the third condition, not a precondition.
pub fn torsion_equivalence(
    space: &FilteredSpace,
    spanners: &[Vec<u32>],
    cfg: &TorsionConfig,
) -> Result<TorsionReport, TorsionError> {
    for (i, x) in spanners.iter().enumerate() {
        if space.distinguished(x, DistinguishedMode::MAdic).is_err() {
            return Err(TorsionError::HypothesisNotMet(i));
        }
    }
    let ring = FilteredSpace::regular(space.algebra());
    let dim_ring = ring.dimension(cfg.window)?.delta;
    let dim_space = space.dimension(cfg.window)?.delta;
    let s1 = dim_space < dim_ring;
    let has_witness = |x: &[u32]| -> bool {
        let tau = cfg
            .tau
            .unwrap_or_else(|| space.precision().saturating_sub(space.valuation(x) + 2));
        !space.annihilator(x, tau).witnesses.is_empty()
    };
    let s3 = spanners.iter().all(|x| has_witness(x));

    let mut s2 = true;
    let mut counterexample = None;
    let mut sampled = 0usize;
    let mut check = |x: Vec<u32>, space: &FilteredSpace| {
        if space.field().vec_is_zero(&x) {
            return;
        }
        if space.distinguished(&x, DistinguishedMode::Plain).is_err() {
            return;
        }
        sampled += 1;
        if !has_witness(&x) {
            s2 = false;
            if counterexample.is_none() {
                counterexample = Some(x);
            }
        }
    };
    if cfg.exhaustive {
        let p = space.field().modulus() as u64;
        let count = p.checked_pow(spanners.len() as u32).unwrap_or(u64::MAX);
        if count > 1 << 12 {
            return Err(TorsionError::ExhaustiveTooLarge(count));
        }
        for code in 1..count {
            let mut x = vec![0u32; space.dim()];
            let mut c = code;
            for s in spanners {
                let coef = (c % p) as u32;
                c /= p;
                space.field().vec_add_scaled(&mut x, s, coef);
            }
            check(x, space);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let p = space.field().modulus();
        for s in spanners {
            check(s.clone(), space);
        }
        for _ in 0..cfg.samples {
            let mut x = vec![0u32; space.dim()];
            for s in spanners {
                let coef = rng.gen_range(0..p);
                space.field().vec_add_scaled(&mut x, s, coef);
            }
            check(x, space);
        }
    }
    Ok(TorsionReport {
        s1,
        s2,
        s3,
        sampled,
        dim_ring,
        dim_space,
        counterexample,
    })
}

#[derive(Debug, Clone)]
pub struct ExtensionTorsionReport {
    /// Every sampled distinguished element is killed by some ring element.
    pub t1: bool,
    /// The extension space admits a pseudo-null filtration:
    /// `dim R[[T]] - dim_(R[[T]]) M >= 2` via the extension-side fit.
    pub t2: bool,
    /// All permissible filtrations are pseudo-null: `dim R - dim_R M >= 1`
    /// via the base-side fit.
    pub t3: bool,
    pub base: TorsionReport,
    pub dim_over_ext: usize,
}

impl ExtensionTorsionReport {
    pub fn agree(&self) -> bool {
        self.t1 == self.t2 && self.t2 == self.t3
    }
}

/// The three equivalent conditions for spaces under a central extension,
/// each computed by its own route: annihilator sampling (t1), the n-adic
/// dimension fit (t2), and the base-ring dimension fit (t3).
pub fn extension_torsion(
    ext: &CentralExtension,
    spanners: &[Vec<u32>],
    cfg: &TorsionConfig,
) -> Result<ExtensionTorsionReport, TorsionError> {
    let base = torsion_equivalence(ext.space(), spanners, cfg)?;
    let ed = ext
        .dim_over_extension(cfg.window)
        .map_err(|e| match e {
            ExtensionError::Dimension(d) => TorsionError::Dimension(d),
            _ => TorsionError::NoArConstant,
        })?;
    let t1 = base.s2;
    let t2 = base.dim_ring + 1 >= ed.delta_n + 2;
    let t3 = base.dim_ring > base.dim_space;
    Ok(ExtensionTorsionReport {
        t1,
        t2,
        t3,
        base,
        dim_over_ext: ed.delta_n,
    })
}
