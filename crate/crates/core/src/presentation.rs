//! The `.cfa` presentation format: a line-oriented, diffable text format for
//! algebras, spaces and extensions, plus the element-expression grammar the
//! CLI shares.
//!
//! Parsing is total: every malformed line yields a positioned diagnostic and
//! never a partial object. Serialization preserves declaration order, so
//! `parse(serialize(parse(text))) == parse(text)`.
//!
//! ```text
//! # header
//! p 2
//! precision 5
//! kind algebra            # algebra | space | extension
//! model tower             # tower | exact (default tower)
//!
//! basis e:0 t:1 t2:2 t3:3 t4:4 t5:5
//! unit e
//! mul t t = t2            # unmentioned products default to 0
//! mul t t2 = t3
//!
//! # for kind space / extension:
//! space-basis m0:0 m1:1
//! act t m0 = m1           # ring-name space-name = expression
//! tmap m0 = m1            # the T operator, extension only
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, BasisElem, FilteredAlgebra, SparseVec};
use crate::families::{Family, FamilyError, Model};
use crate::field::{FieldError, PrimeField};
use crate::matrix::Matrix;
use crate::space::{FilteredSpace, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Algebra,
    Space,
    Extension,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Algebra => "algebra",
            Kind::Space => "space",
            Kind::Extension => "extension",
        }
    }
}

/// A sum of terms `coef*name`, `name`, or `coef` (a multiple of the unit),
/// kept exactly as written.
pub type Expr = Vec<(u64, String)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraDecl {
    Family(String),
    Explicit {
        basis: Vec<(String, usize)>,
        unit: String,
        products: Vec<(String, String, Expr)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpaceDecl {
    pub basis: Vec<(String, usize)>,
    pub actions: Vec<(String, String, Expr)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub p: u64,
    pub precision: usize,
    pub kind: Kind,
    pub model: Model,
    pub algebra: AlgebraDecl,
    pub space: Option<SpaceDecl>,
    pub t_op: Vec<(String, Expr)>,
}

pub fn parse(text: &str) -> Result<Presentation, ParseError> {
    let mut p: Option<u64> = None;
    let mut precision: Option<usize> = None;
    let mut kind: Option<Kind> = None;
    let mut model = Model::Tower;
    let mut family: Option<String> = None;
    let mut basis: Vec<(String, usize)> = Vec::new();
    let mut unit: Option<String> = None;
    let mut products: Vec<(String, String, Expr)> = Vec::new();
    let mut space_basis: Vec<(String, usize)> = Vec::new();
    let mut actions: Vec<(String, String, Expr)> = Vec::new();
    let mut t_op: Vec<(String, Expr)> = Vec::new();

    let mut last_line = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap();
        let col = raw.find(keyword).map(|c| c + 1).unwrap_or(1);
        let rest: Vec<&str> = words.collect();
        match keyword {
            "p" => {
                let v = one_arg(ln, col, "p", &rest)?;
                p = Some(parse_num(ln, col, v)?);
            }
            "precision" => {
                let v = one_arg(ln, col, "precision", &rest)?;
                precision = Some(parse_num(ln, col, v)? as usize);
            }
            "kind" => {
                let v = one_arg(ln, col, "kind", &rest)?;
                kind = Some(match v {
                    "algebra" => Kind::Algebra,
                    "space" => Kind::Space,
                    "extension" => Kind::Extension,
                    other => return err(ln, col, format!("unknown kind {other:?}")),
                });
            }
            "model" => {
                let v = one_arg(ln, col, "model", &rest)?;
                model = match v {
                    "tower" => Model::Tower,
                    "exact" => Model::Exact,
                    other => return err(ln, col, format!("unknown model {other:?}")),
                };
            }
            "family" => {
                if rest.is_empty() {
                    return err(ln, col, "family needs a descriptor");
                }
                // `family powerseries:2:xy` or, equivalently, space-separated
                // segments `family powerseries 2 xy`.
                family = Some(rest.join(":"));
            }
            "basis" => parse_basis_items(ln, col, &rest, &mut basis)?,
            "unit" => {
                let v = one_arg(ln, col, "unit", &rest)?;
                unit = Some(v.to_string());
            }
            "mul" => {
                let (a, b, expr) = parse_binary_rule(ln, col, "mul", &rest)?;
                products.push((a, b, expr));
            }
            "space-basis" => parse_basis_items(ln, col, &rest, &mut space_basis)?,
            "act" => {
                let (a, b, expr) = parse_binary_rule(ln, col, "act", &rest)?;
                actions.push((a, b, expr));
            }
            "tmap" => {
                if rest.len() < 2 || rest[1] != "=" {
                    return err(ln, col, "expected `tmap <name> = <expression>`");
                }
                let expr = parse_expr_words(ln, col, &rest[2..])?;
                t_op.push((rest[0].to_string(), expr));
            }
            other => return err(ln, col, format!("unknown keyword {other:?}")),
        }
    }

    let Some(p) = p else {
        return err(last_line + 1, 1, "missing required `p <prime>` line");
    };
    let Some(precision) = precision else {
        return err(last_line + 1, 1, "missing required `precision <N>` line");
    };
    let Some(kind) = kind else {
        return err(last_line + 1, 1, "missing required `kind` line");
    };
    let algebra = if let Some(f) = family {
        if !basis.is_empty() || unit.is_some() || !products.is_empty() {
            return err(
                last_line + 1,
                1,
                "a family declaration excludes explicit basis/unit/mul lines",
            );
        }
        AlgebraDecl::Family(f)
    } else {
        if basis.is_empty() {
            return err(last_line + 1, 1, "missing `basis` declarations");
        }
        let Some(unit) = unit else {
            return err(last_line + 1, 1, "missing required `unit <name>` line");
        };
        AlgebraDecl::Explicit {
            basis,
            unit,
            products,
        }
    };
    let space = match kind {
        Kind::Algebra => {
            if !space_basis.is_empty() || !actions.is_empty() || !t_op.is_empty() {
                return err(
                    last_line + 1,
                    1,
                    "kind algebra admits no space-basis/act/tmap lines",
                );
            }
            None
        }
        Kind::Space | Kind::Extension => {
            if space_basis.is_empty() {
                return err(last_line + 1, 1, "missing `space-basis` declarations");
            }
            if kind == Kind::Space && !t_op.is_empty() {
                return err(last_line + 1, 1, "tmap lines need kind extension");
            }
            Some(SpaceDecl {
                basis: space_basis,
                actions,
            })
        }
    };
    Ok(Presentation {
        p,
        precision,
        kind,
        model,
        algebra,
        space,
        t_op,
    })
}

fn one_arg<'a>(
    line: usize,
    col: usize,
    kw: &str,
    rest: &[&'a str],
) -> Result<&'a str, ParseError> {
    if rest.len() != 1 {
        return err(line, col, format!("`{kw}` takes exactly one argument"));
    }
    Ok(rest[0])
}

fn parse_num(line: usize, col: usize, s: &str) -> Result<u64, ParseError> {
    s.parse()
        .map_err(|_| ParseError {
            line,
            col,
            message: format!("expected a number, got {s:?}"),
        })
}

fn parse_basis_items(
    line: usize,
    col: usize,
    rest: &[&str],
    out: &mut Vec<(String, usize)>,
) -> Result<(), ParseError> {
    if rest.is_empty() {
        return err(line, col, "basis line needs `name:valuation` items");
    }
    for item in rest {
        let Some((name, val)) = item.split_once(':') else {
            return err(line, col, format!("expected `name:valuation`, got {item:?}"));
        };
        if name.is_empty() || name.contains(['=', '*', '+']) {
            return err(line, col, format!("bad basis name {name:?}"));
        }
        let v = parse_num(line, col, val)? as usize;
        out.push((name.to_string(), v));
    }
    Ok(())
}

fn parse_binary_rule(
    line: usize,
    col: usize,
    kw: &str,
    rest: &[&str],
) -> Result<(String, String, Expr), ParseError> {
    if rest.len() < 3 || rest[2] != "=" {
        return err(line, col, format!("expected `{kw} <a> <b> = <expression>`"));
    }
    let expr = parse_expr_words(line, col, &rest[3..])?;
    Ok((rest[0].to_string(), rest[1].to_string(), expr))
}

fn parse_expr_words(line: usize, col: usize, words: &[&str]) -> Result<Expr, ParseError> {
    parse_expr(&words.join(" ")).map_err(|m| ParseError {
        line,
        col,
        message: m,
    })
}

/// Parses `c1*n1 + n2 + 3` style sums. `0` denotes the empty sum; a bare
/// integer is a multiple of the unit.
pub fn parse_expr(text: &str) -> Result<Expr, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty expression (write 0 for zero)".into());
    }
    if text == "0" {
        return Ok(Vec::new());
    }
    if text.contains('-') {
        return Err("subtraction is not part of the expression grammar; use mod-p coefficients".into());
    }
    let mut out = Vec::new();
    for term in text.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err("empty term in expression".into());
        }
        if let Some((c, n)) = term.split_once('*') {
            let c = c
                .trim()
                .parse::<u64>()
                .map_err(|_| format!("bad coefficient {c:?}"))?;
            let n = n.trim();
            if n.is_empty() {
                return Err(format!("missing name after `*` in {term:?}"));
            }
            out.push((c, n.to_string()));
        } else if term.chars().all(|ch| ch.is_ascii_digit()) {
            let c = term.parse::<u64>().map_err(|_| format!("bad term {term:?}"))?;
            out.push((c, "1".to_string()));
        } else {
            out.push((1, term.to_string()));
        }
    }
    Ok(out)
}

pub fn format_expr(expr: &Expr) -> String {
    if expr.is_empty() {
        return "0".into();
    }
    expr.iter()
        .map(|(c, n)| {
            if n == "1" {
                c.to_string()
            } else if *c == 1 {
                n.clone()
            } else {
                format!("{c}*{n}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn serialize(pres: &Presentation) -> String {
    let mut out = String::new();
    out.push_str(&format!("p {}\n", pres.p));
    out.push_str(&format!("precision {}\n", pres.precision));
    out.push_str(&format!("kind {}\n", pres.kind.as_str()));
    out.push_str(&format!("model {}\n", pres.model.as_str()));
    match &pres.algebra {
        AlgebraDecl::Family(f) => out.push_str(&format!("family {f}\n")),
        AlgebraDecl::Explicit {
            basis,
            unit,
            products,
        } => {
            let items: Vec<String> = basis.iter().map(|(n, v)| format!("{n}:{v}")).collect();
            out.push_str(&format!("basis {}\n", items.join(" ")));
            out.push_str(&format!("unit {unit}\n"));
            for (a, b, e) in products {
                out.push_str(&format!("mul {a} {b} = {}\n", format_expr(e)));
            }
        }
    }
    if let Some(space) = &pres.space {
        let items: Vec<String> = space.basis.iter().map(|(n, v)| format!("{n}:{v}")).collect();
        out.push_str(&format!("space-basis {}\n", items.join(" ")));
        for (a, b, e) in &space.actions {
            out.push_str(&format!("act {a} {b} = {}\n", format_expr(e)));
        }
    }
    for (m, e) in &pres.t_op {
        out.push_str(&format!("tmap {m} = {}\n", format_expr(e)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("presentation has kind {0}, expected {1}")]
    WrongKind(String, String),
}

/// Resolves an expression against a name lookup into a coefficient vector.
pub fn resolve_expr(
    field: PrimeField,
    dim: usize,
    lookup: impl Fn(&str) -> Option<usize>,
    expr: &Expr,
) -> Result<Vec<u32>, BuildError> {
    let mut v = vec![0u32; dim];
    for (c, name) in expr {
        let idx = lookup(name).ok_or_else(|| BuildError::UnknownName(name.clone()))?;
        v[idx] = field.add(v[idx], field.reduce(*c));
    }
    Ok(v)
}

pub fn build_algebra(pres: &Presentation) -> Result<Arc<FilteredAlgebra>, BuildError> {
    match &pres.algebra {
        AlgebraDecl::Family(spec) => Ok(Family::parse(spec, pres.p)?.algebra_at(pres.precision)?),
        AlgebraDecl::Explicit {
            basis,
            unit,
            products,
        } => {
            let field = PrimeField::new(pres.p)?;
            let elems: Vec<BasisElem> = basis
                .iter()
                .map(|(n, v)| BasisElem {
                    name: n.clone(),
                    val: *v,
                })
                .collect();
            let index = |name: &str| -> Option<usize> {
                if name == "1" {
                    return basis.iter().position(|(n, _)| n == unit);
                }
                basis.iter().position(|(n, _)| n == name)
            };
            let mut map: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
            for (a, b, expr) in products {
                let i = index(a).ok_or_else(|| BuildError::UnknownName(a.clone()))?;
                let j = index(b).ok_or_else(|| BuildError::UnknownName(b.clone()))?;
                let dense = resolve_expr(field, basis.len(), index, expr)?;
                let sparse: SparseVec = dense
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| c != 0)
                    .map(|(k, &c)| (k, c))
                    .collect();
                map.insert((i, j), sparse);
            }
            Ok(Arc::new(FilteredAlgebra::new(
                field,
                pres.precision,
                elems,
                unit,
                map,
            )?))
        }
    }
}

pub fn build_space(
    pres: &Presentation,
    alg: &Arc<FilteredAlgebra>,
) -> Result<FilteredSpace, BuildError> {
    let Some(decl) = &pres.space else {
        return Err(BuildError::WrongKind(
            pres.kind.as_str().into(),
            "space or extension".into(),
        ));
    };
    let field = alg.field();
    let elems: Vec<BasisElem> = decl
        .basis
        .iter()
        .map(|(n, v)| BasisElem {
            name: n.clone(),
            val: *v,
        })
        .collect();
    let sindex = |name: &str| decl.basis.iter().position(|(n, _)| n == name);
    let rindex = |name: &str| -> Option<usize> {
        if name == "1" {
            return Some(alg.unit_index());
        }
        alg.basis_index(name)
    };
    let mut entries = Vec::new();
    for (r, m, expr) in &decl.actions {
        let i = rindex(r).ok_or_else(|| BuildError::UnknownName(r.clone()))?;
        let j = sindex(m).ok_or_else(|| BuildError::UnknownName(m.clone()))?;
        let dense = resolve_expr(field, decl.basis.len(), sindex, expr)?;
        let sparse: SparseVec = dense
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(k, &c)| (k, c))
            .collect();
        entries.push(((i, j), sparse));
    }
    Ok(FilteredSpace::new(
        alg.clone(),
        elems,
        pres.precision,
        entries,
    )?)
}

/// Builds the T-operator matrix of an extension presentation against the
/// already-built space (columns indexed by the space's sorted basis).
pub fn build_t_op(
    pres: &Presentation,
    space: &FilteredSpace,
) -> Result<Matrix, BuildError> {
    let f = space.field();
    let mut t = Matrix::zero(f, space.dim(), space.dim());
    let sindex = |name: &str| space.basis_index(name);
    for (m, expr) in &pres.t_op {
        let j = sindex(m).ok_or_else(|| BuildError::UnknownName(m.clone()))?;
        let col = resolve_expr(f, space.dim(), sindex, expr)?;
        for (i, &c) in col.iter().enumerate() {
            t.set(i, j, c);
        }
    }
    Ok(t)
}
