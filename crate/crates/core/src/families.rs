//! Built-in algebra families with truncation towers.
//!
//! Each family produces, for any precision `N`, the corresponding truncated
//! algebra, and consecutive truncations commute with multiplication (tower
//! coherence). The families cover the standard commutative cases (power
//! series rings and their monomial quotients, exact nilpotent quotients) and
//! a genuinely nonassociative deformation used to keep every downstream
//! theorem honest about associativity.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, BasisElem, FilteredAlgebra, SparseVec};
use crate::field::{FieldError, PrimeField};
use crate::space::{FilteredSpace, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("bad family parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Whether the emitted object is a truncation of an infinite ring or is
/// already nilpotent-exact at the stated precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Tower,
    Exact,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Tower => "tower",
            Model::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `F_p[[x_1..x_v]] / (monomial ideal)`, optionally with `m^mcap = 0`.
    PowerSeries {
        p: u64,
        vars: usize,
        quotient: Vec<Vec<usize>>,
        mcap: Option<usize>,
    },
    /// Nonassociative, noncommutative deformation with commutative
    /// associated graded ring: basis `e, x, y, z_2, …, z_N` with
    /// `y·x = z_2 + z_3` and `x·z_2 = z_3 + z_4` as the deformed products.
    Deformation { p: u64 },
}

impl Family {
    pub fn power_series(p: u64, vars: usize) -> Self {
        Family::PowerSeries {
            p,
            vars,
            quotient: Vec::new(),
            mcap: None,
        }
    }

    pub fn power_series_quotient(p: u64, vars: usize, quotient: Vec<Vec<usize>>) -> Self {
        Family::PowerSeries {
            p,
            vars,
            quotient,
            mcap: None,
        }
    }

    pub fn power_series_mcap(p: u64, vars: usize, mcap: usize) -> Self {
        Family::PowerSeries {
            p,
            vars,
            quotient: Vec::new(),
            mcap: Some(mcap),
        }
    }

    pub fn deformation(p: u64) -> Self {
        Family::Deformation { p }
    }

    pub fn model(&self) -> Model {
        match self {
            Family::PowerSeries { mcap: Some(_), .. } => Model::Exact,
            _ => Model::Tower,
        }
    }

    pub fn id_string(&self) -> String {
        match self {
            Family::PowerSeries {
                vars,
                quotient,
                mcap,
                ..
            } => {
                let mut s = format!("powerseries:{vars}");
                if let Some(c) = mcap {
                    s.push_str(&format!(":mcap={c}"));
                } else if !quotient.is_empty() {
                    let names: Vec<String> = quotient
                        .iter()
                        .map(|m| monomial_name(&var_names(*vars), m))
                        .collect();
                    s.push_str(&format!(":{}", names.join(",")));
                }
                s
            }
            Family::Deformation { .. } => "deformation".into(),
        }
    }

    /// Parses a family descriptor such as `powerseries:2`, `powerseries:2:xy`
    /// `powerseries:2:mcap=3`, or `deformation`.
    pub fn parse(spec: &str, p: u64) -> Result<Family, FamilyError> {
        let parts: Vec<&str> = spec.split(':').collect();
        match parts[0] {
            "powerseries" => {
                if parts.len() < 2 {
                    return Err(FamilyError::BadParams(
                        "powerseries needs a variable count, e.g. powerseries:2".into(),
                    ));
                }
                let vars: usize = parts[1]
                    .parse()
                    .map_err(|_| FamilyError::BadParams(format!("bad variable count {:?}", parts[1])))?;
                if vars == 0 || vars > 8 {
                    return Err(FamilyError::BadParams("variable count must be 1..=8".into()));
                }
                let mut quotient = Vec::new();
                let mut mcap = None;
                if parts.len() > 2 {
                    let rest = parts[2..].join(":");
                    if let Some(v) = rest.strip_prefix("mcap=") {
                        mcap = Some(v.parse().map_err(|_| {
                            FamilyError::BadParams(format!("bad mcap value {v:?}"))
                        })?);
                    } else {
                        for mono in rest.split(',') {
                            quotient.push(parse_monomial(&var_names(vars), mono)?);
                        }
                    }
                }
                Ok(Family::PowerSeries {
                    p,
                    vars,
                    quotient,
                    mcap,
                })
            }
            "deformation" => Ok(Family::Deformation { p }),
            other => Err(FamilyError::BadParams(format!("unknown family {other:?}"))),
        }
    }

    pub fn algebra_at(&self, n: usize) -> Result<Arc<FilteredAlgebra>, FamilyError> {
        match self {
            Family::PowerSeries {
                p,
                vars,
                quotient,
                mcap,
            } => power_series_full(*p, *vars, quotient, *mcap, n),
            Family::Deformation { p } => deformation_algebra(*p, n),
        }
    }

    /// Tower coherence at `n >= 1`: multiplying then truncating equals
    /// truncating then multiplying, i.e. the precision-`n` algebra truncates
    /// to the precision-`(n-1)` one on the nose.
    pub fn tower_coherent_at(&self, n: usize) -> Result<bool, FamilyError> {
        assert!(n >= 1);
        let hi = self.algebra_at(n)?;
        let lo = self.algebra_at(n - 1)?;
        Ok(hi.truncate(n - 1) == *lo)
    }
}

/// `F_p[[x_1..x_vars]] / (monomial quotient)` truncated at precision `n`.
pub fn power_series(
    p: u64,
    vars: usize,
    quotient: &[Vec<usize>],
    n: usize,
) -> Result<Arc<FilteredAlgebra>, FamilyError> {
    power_series_full(p, vars, quotient, None, n)
}

fn power_series_full(
    p: u64,
    vars: usize,
    quotient: &[Vec<usize>],
    mcap: Option<usize>,
    n: usize,
) -> Result<Arc<FilteredAlgebra>, FamilyError> {
    let field = PrimeField::new(p)?;
    for q in quotient {
        if q.len() != vars {
            return Err(FamilyError::BadParams(
                "quotient monomial has wrong variable count".into(),
            ));
        }
        if q.iter().all(|&e| e == 0) {
            return Err(FamilyError::BadParams("quotient by the unit monomial".into()));
        }
    }
    let names = var_names(vars);
    let degree_cap = mcap.map(|c| c.saturating_sub(1)).unwrap_or(n).min(n);
    let monomials = enumerate_monomials(vars, degree_cap, quotient);
    let index: BTreeMap<Vec<usize>, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let basis: Vec<BasisElem> = monomials
        .iter()
        .map(|m| BasisElem {
            name: monomial_name(&names, m),
            val: m.iter().sum(),
        })
        .collect();
    let mut products: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for (i, a) in monomials.iter().enumerate() {
        for (j, b) in monomials.iter().enumerate() {
            let sum: Vec<usize> = a.iter().zip(b).map(|(u, v)| u + v).collect();
            if let Some(&k) = index.get(&sum) {
                products.insert((i, j), vec![(k, 1)]);
            }
        }
    }
    Ok(Arc::new(FilteredAlgebra::new(
        field, n, basis, "e", products,
    )?))
}

fn enumerate_monomials(vars: usize, max_deg: usize, quotient: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let mut stack = vec![(Vec::new(), d)];
        while let Some((prefix, rem)) = stack.pop() {
            if prefix.len() == vars {
                if rem == 0 {
                    out.push(prefix);
                }
                continue;
            }
            if prefix.len() + 1 == vars {
                let mut m = prefix;
                m.push(rem);
                if !divisible_by_any(&m, quotient) {
                    out.push(m);
                }
                continue;
            }
            // Descending exponent for the current variable keeps degree-lex
            // order once popped from the stack.
            for e in 0..=rem {
                let mut next = prefix.clone();
                next.push(e);
                stack.push((next, rem - e));
            }
        }
    }
    out
}

fn divisible_by_any(m: &[usize], quotient: &[Vec<usize>]) -> bool {
    quotient
        .iter()
        .any(|q| q.iter().zip(m).all(|(&qe, &me)| me >= qe))
}

pub fn var_names(vars: usize) -> Vec<String> {
    match vars {
        1 => vec!["t".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        4 => vec!["x".into(), "y".into(), "z".into(), "w".into()],
        _ => (1..=vars).map(|i| format!("v{i}")).collect(),
    }
}

pub fn monomial_name(names: &[String], exps: &[usize]) -> String {
    if exps.iter().all(|&e| e == 0) {
        return "e".into();
    }
    let mut s = String::new();
    for (name, &e) in names.iter().zip(exps) {
        if e == 0 {
            continue;
        }
        s.push_str(name);
        if e > 1 {
            s.push_str(&e.to_string());
        }
    }
    s
}

/// Parses a monomial name over the given variable names, e.g. `x2y` or `e`.
pub fn parse_monomial(names: &[String], text: &str) -> Result<Vec<usize>, FamilyError> {
    let mut exps = vec![0usize; names.len()];
    if text == "e" || text == "1" {
        return Ok(exps);
    }
    let mut rest = text;
    while !rest.is_empty() {
        // Longest variable-name match first (v10 before v1).
        let mut hit: Option<(usize, &str)> = None;
        for (i, name) in names.iter().enumerate() {
            if rest.starts_with(name.as_str())
                && hit.map(|(_, h)| name.len() > h.len()).unwrap_or(true)
            {
                hit = Some((i, name));
            }
        }
        let Some((i, name)) = hit else {
            return Err(FamilyError::BadParams(format!(
                "cannot parse monomial {text:?} at {rest:?}"
            )));
        };
        rest = &rest[name.len()..];
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        rest = &rest[digits.len()..];
        let e: usize = if digits.is_empty() {
            1
        } else {
            digits
                .parse()
                .map_err(|_| FamilyError::BadParams(format!("bad exponent in {text:?}")))?
        };
        exps[i] += e;
    }
    Ok(exps)
}

fn deformation_algebra(p: u64, n: usize) -> Result<Arc<FilteredAlgebra>, FamilyError> {
    let field = PrimeField::new(p)?;
    // Basis indices in declaration order: e=0, x=1, y=2, z_k = k+1 (k >= 2).
    let mut basis = vec![BasisElem {
        name: "e".into(),
        val: 0,
    }];
    if n >= 1 {
        basis.push(BasisElem {
            name: "x".into(),
            val: 1,
        });
        basis.push(BasisElem {
            name: "y".into(),
            val: 1,
        });
    }
    for k in 2..=n {
        basis.push(BasisElem {
            name: format!("z{k}"),
            val: k,
        });
    }
    let z = |k: usize| -> Option<usize> {
        if (2..=n).contains(&k) {
            Some(k + 1)
        } else {
            None
        }
    };
    let mut products: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    let mut put = |i: usize, j: usize, terms: Vec<Option<usize>>| {
        let entry: SparseVec = terms.into_iter().flatten().map(|k| (k, 1)).collect();
        products.insert((i, j), entry);
    };
    if n >= 1 {
        let (x, y) = (1usize, 2usize);
        put(x, x, vec![z(2)]);
        put(x, y, vec![z(2)]);
        put(y, y, vec![z(2)]);
        // Degree-3 deformation: y·x picks up a correction from precision 3 on.
        put(y, x, vec![z(2), z(3)]);
        for k in 2..=n {
            let zk = z(k).unwrap();
            if k == 2 {
                // Degree-4 deformation breaking (x·x)·x = x·(x·x).
                put(x, zk, vec![z(3), z(4)]);
            } else {
                put(x, zk, vec![z(k + 1)]);
            }
            put(y, zk, vec![z(k + 1)]);
            put(zk, x, vec![z(k + 1)]);
            put(zk, y, vec![z(k + 1)]);
            for l in 2..=n {
                put(zk, z(l).unwrap(), vec![z(k + l)]);
            }
        }
    }
    Ok(Arc::new(FilteredAlgebra::new(
        field, n, basis, "e", products,
    )?))
}

/// Left ideal generated by `gens`, as a filtered space with the induced
/// filtration `F^i(I) = I ∩ F^i(R)`.
pub fn ideal_space(
    alg: &Arc<FilteredAlgebra>,
    gens: &[Vec<u32>],
) -> Result<FilteredSpace, FamilyError> {
    let ring = FilteredSpace::regular(alg);
    let ideal = ring.generated_subspace(gens);
    Ok(ring.subspace(&ideal)?)
}

/// Quotient `R / (gens)` by the left ideal generated by `gens`.
pub fn quotient_space(
    alg: &Arc<FilteredAlgebra>,
    gens: &[Vec<u32>],
) -> Result<FilteredSpace, FamilyError> {
    let ring = FilteredSpace::regular(alg);
    let ideal = ring.generated_subspace(gens);
    Ok(ring.quotient(&ideal)?)
}

/// Cyclic space `Rx` (closure of `x`) with the induced filtration re-indexed
/// so that `x` has valuation 0.
pub fn cyclic_space(
    alg: &Arc<FilteredAlgebra>,
    x: &[u32],
) -> Result<(FilteredSpace, Vec<u32>), FamilyError> {
    let ring = FilteredSpace::regular(alg);
    let d = ring.valuation(x);
    if d > ring.precision() {
        return Err(FamilyError::BadParams("cyclic generator is zero".into()));
    }
    let closure = ring.generated_subspace(&[x.to_vec()]);
    let sub = ring.subspace(&closure)?;
    let reindexed = sub.unshift_filtration(d);
    let x_in_sub = closure
        .coords_of(x)
        .expect("generator lies in its own closure");
    Ok((reindexed, x_in_sub))
}
