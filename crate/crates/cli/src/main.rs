//! `clf` — command-line driver for the filtered-algebra kernel.
//!
//! Inputs come from a `.cfa` presentation file or a built-in family
//! (`--family powerseries:2`, `--family deformation`, …), optionally turned
//! into a derived space (`--ideal`, `--quotient`, `--cyclic`). Every
//! subcommand prints a human summary to stdout and, with `--out DIR`, writes
//! machine-readable `key=value` and CSV files. All randomness is seeded and
//! the seed is reported, so machine reports are byte-identical across runs.
//!
//! Exit codes: 0 success, 2 data/input errors, 3 precision insufficient,
//! 4 property violation.

// Doc comments below double as clap help text; `R[[T]]` and `<expr>`
// placeholders are meant literally, not as rustdoc links or HTML.
#![allow(rustdoc::broken_intra_doc_links, rustdoc::invalid_html_tags)]

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use clf_core::asymptotics::{sandwich_check, size_series, AsymptoticsError};
use clf_core::central::{
    build_extension, extension_torsion, torsion_equivalence, ExtensionError, TorsionConfig,
    TorsionError,
};
use clf_core::families::{cyclic_space, ideal_space, quotient_space, Family, Model};
use clf_core::fit::FitError;
use clf_core::graded;
use clf_core::lift::{invert, lift_solve, InvertError, LiftError};
use clf_core::matrix::Matrix;
use clf_core::presentation::{self, Kind, Presentation};
use clf_core::rees::artin_rees_constant;
use clf_core::report::{Csv, KeyValues};
use clf_core::space::{DistinguishedFailure, DistinguishedMode, FilteredSpace};
use clf_core::FilteredAlgebra;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "clf",
    about = "Exact computations on truncated complete local-filtered nonassociative algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Presentation file (.cfa). Mutually exclusive with --family.
    file: Option<PathBuf>,
    /// Built-in family: powerseries:<vars>[:<mon>,..|:mcap=<k>] or deformation.
    #[arg(long)]
    family: Option<String>,
    /// Characteristic for --family.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Truncation precision N (families only; files fix their own).
    #[arg(long)]
    precision: Option<usize>,
    /// Derive the space: left ideal generated by these elements (comma-separated expressions).
    #[arg(long)]
    ideal: Option<String>,
    /// Derive the space: quotient by the left ideal generated by these elements.
    #[arg(long)]
    quotient: Option<String>,
    /// Derive the space: cyclic span of this element, re-indexed to valuation 0.
    #[arg(long)]
    cyclic: Option<String>,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Stability window for all "eventually" statements.
    #[arg(long, default_value_t = 3)]
    window: usize,
    /// Seed for all randomized sampling (reported in outputs).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for machine-readable reports (key=value and CSV).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the filtration axioms: unique valuation-0 element, unit laws,
    /// F^i F^j within F^(i+j), ideal stability, and the graded conditions
    /// (commutative, associative, generated in degree 1).
    Validate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Analyze the associated graded ring gr(R) = sum F^i/F^(i+1): graded
    /// commutativity/associativity and degree-1 generation, with h-vector.
    Gr {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Hilbert data: h(n) = dim F^n/F^(n+1), lengths ell(n), and the exact
    /// Hilbert-Samuel fit giving the Krull-dimension candidate delta and the
    /// leading coefficient alpha = (stable difference)/delta!.
    Hilbert {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Associated dimension of a permissible space (degree of the fitted
    /// length polynomial), cross-checked against a delayed filtration: two
    /// permissible filtrations of one space must fit the same degree.
    Dim {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// R-span and generated subspace of a list of elements; in a
    /// nonassociative ring the span R·Δ need not be a subspace, the closure
    /// R(R(..Δ)) is.
    Span {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated element expressions, e.g. "x, y, x2 + xy".
        #[arg(long)]
        elems: String,
    },
    /// Artin-Rees constant: the least D with F^(n+d)(M) = F^n(R) F^d(M) for
    /// all d >= D and all n with n + d within precision, by exhaustive
    /// subgroup comparison over the whole (n, d) grid.
    ArtinRees {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Quotient sizes log_p |M / m^n M| and their polynomial asymptotics;
    /// the fitted (delta, alpha) must equal the graded Hilbert-Samuel data
    /// exactly, and the sandwich ell(M/F^n) <= L(n) <= ell(M/F^(n+D)) is
    /// verified for the found Artin-Rees constant D.
    Asymptotics {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Successive-approximation solver: express a target as an exact ring
    /// combination of spanners, one homogeneous graded solve per valuation
    /// step, residual valuation strictly increasing.
    Lift {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        target: String,
        /// Comma-separated spanner expressions.
        #[arg(long)]
        spanners: String,
    },
    /// Left-invert a valuation-0 element (every such element is a unit in a
    /// complete local-filtered ring); reports whether the inverse is
    /// two-sided, which nonassociativity does not guarantee.
    Invert {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        elem: String,
    },
    /// Distinguished-element test: plain checks m^i(Rx) = m^i x for all i;
    /// m-adic checks m^i(m^j x) = m^(i+j) x for all i + j within precision.
    Distinguished {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        elem: String,
        /// plain | m-adic
        #[arg(long, default_value = "plain")]
        mode: String,
    },
    /// Annihilator witnesses: kernel of r -> r·x capped at valuation tau
    /// (default N - v(x) - 2), the truncation-honest torsion evidence.
    Annihilator {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        elem: String,
        /// Valuation cap for witnesses.
        #[arg(long)]
        tau: Option<usize>,
    },
    /// Central extension R[[T]]: validates that T commutes with the ring
    /// action and is nilpotent mod mM, tabulates k_j = min{k : T^k M in
    /// m^j M}, and checks dimension invariance: dim over R[[T]] equals dim
    /// over R. With --pseudo-null, tests dim R[[T]] - dim M >= 2.
    Extend {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// T operator: zero | mult:<expr> | rightmult:<expr> | file.
        #[arg(long, default_value = "zero")]
        t: String,
        /// Also run the pseudo-nullity dimension test (needs --assert-domain).
        #[arg(long)]
        pseudo_null: bool,
        /// Assert that the graded base ring is an integral domain (the
        /// refuter still runs and must not find a witness).
        #[arg(long)]
        assert_domain: bool,
    },
    /// Torsion equivalences: S1 dim(M) <= dim(R) - 1; S2 sampled
    /// distinguished elements all have annihilator witnesses; S3 the given
    /// spanning set has witnesses. With --t, also the extension-side
    /// equivalences T1/T2/T3 (pseudo-null filtration over R[[T]]). The
    /// booleans are computed independently and compared; disagreement exits 4.
    Torsion {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Spanning set (comma-separated expressions); defaults to the unit
        /// basis element when present, else all basis elements.
        #[arg(long)]
        spanners: Option<String>,
        /// Also check the central-extension equivalences with this operator.
        #[arg(long)]
        t: Option<String>,
        /// Sample count for the distinguished-element search.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Valuation cap for witnesses (default N - v(x) - 2 per element).
        #[arg(long)]
        tau: Option<usize>,
        /// Exhaustively enumerate spanner combinations (p = 2, small spaces).
        #[arg(long)]
        slow_exhaustive: bool,
    },
    /// Seeded randomized property checks: row-reduction laws, valuation
    /// bounds v(rm) >= v(r) + v(m), principal-part multiplicativity,
    /// product monotonicity, and bracketing-independence of m^n.
    Fuzz {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 50)]
        iters: usize,
    },
}

// Exit classes per the interface contract.
const EXIT_DATA: u8 = 2;
const EXIT_PRECISION: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn data(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DATA,
            message: msg.into(),
        }
    }
    fn precision(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PRECISION,
            message: msg.into(),
        }
    }
    fn violation(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VIOLATION,
            message: msg.into(),
        }
    }
}

impl From<FitError> for Failure {
    fn from(e: FitError) -> Self {
        match e {
            FitError::WindowTooSmall(_) => Failure::data(e.to_string()),
            FitError::PrecisionTooLow { .. } => Failure::precision(e.to_string()),
        }
    }
}

impl From<clf_core::space::DimensionError> for Failure {
    fn from(e: clf_core::space::DimensionError) -> Self {
        match e {
            clf_core::space::DimensionError::Precision(p) => Failure::precision(p.to_string()),
            other => Failure::data(other.to_string()),
        }
    }
}

impl From<ExtensionError> for Failure {
    fn from(e: ExtensionError) -> Self {
        match e {
            ExtensionError::Dimension(d) => d.into(),
            ExtensionError::NoArConstant => Failure::precision(e.to_string()),
            other => Failure::data(other.to_string()),
        }
    }
}

impl From<TorsionError> for Failure {
    fn from(e: TorsionError) -> Self {
        match e {
            TorsionError::Dimension(d) => d.into(),
            TorsionError::NoArConstant => Failure::precision(e.to_string()),
            other => Failure::data(other.to_string()),
        }
    }
}

impl From<AsymptoticsError> for Failure {
    fn from(e: AsymptoticsError) -> Self {
        match e {
            AsymptoticsError::NoArConstant => Failure::precision(e.to_string()),
            other => Failure::data(other.to_string()),
        }
    }
}

/// Everything a subcommand needs after input resolution.
struct Resolved {
    algebra: Arc<FilteredAlgebra>,
    space: FilteredSpace,
    label: String,
    model: Model,
    /// T operator from an extension file, if any.
    file_t: Option<Matrix>,
    /// The cyclic generator in space coordinates, if --cyclic was used.
    cyclic_gen: Option<Vec<u32>>,
}

fn parse_elem(space: &FilteredSpace, text: &str) -> Result<Vec<u32>, Failure> {
    let expr = presentation::parse_expr(text).map_err(Failure::data)?;
    let unit = space.basis().iter().position(|b| b.name == "e").or_else(|| {
        if space.is_regular() {
            Some(space.algebra().unit_index())
        } else {
            None
        }
    });
    presentation::resolve_expr(
        space.field(),
        space.dim(),
        |name| {
            if name == "1" {
                return unit;
            }
            space.basis_index(name)
        },
        &expr,
    )
    .map_err(|e| Failure::data(e.to_string()))
}

fn parse_elem_list(space: &FilteredSpace, text: &str) -> Result<Vec<Vec<u32>>, Failure> {
    text.split(',')
        .map(|s| parse_elem(space, s.trim()))
        .collect()
}

fn parse_ring_elem(alg: &Arc<FilteredAlgebra>, text: &str) -> Result<Vec<u32>, Failure> {
    let expr = presentation::parse_expr(text).map_err(Failure::data)?;
    presentation::resolve_expr(
        alg.field(),
        alg.dim(),
        |name| {
            if name == "1" {
                Some(alg.unit_index())
            } else {
                alg.basis_index(name)
            }
        },
        &expr,
    )
    .map_err(|e| Failure::data(e.to_string()))
}

fn resolve(input: &InputArgs) -> Result<Resolved, Failure> {
    let (algebra, label, model, pres): (Arc<FilteredAlgebra>, String, Model, Option<Presentation>) =
        match (&input.file, &input.family) {
            (Some(path), None) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::data(format!("cannot read {}: {e}", path.display())))?;
                let pres = presentation::parse(&text).map_err(|e| Failure::data(e.to_string()))?;
                if let Some(n) = input.precision {
                    if n != pres.precision {
                        return Err(Failure::data(format!(
                            "file fixes precision {}, cannot use --precision {n}",
                            pres.precision
                        )));
                    }
                }
                let alg =
                    presentation::build_algebra(&pres).map_err(|e| Failure::data(e.to_string()))?;
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "file".into());
                (alg, label, pres.model, Some(pres))
            }
            (None, Some(spec)) => {
                let fam = Family::parse(spec, input.p).map_err(|e| Failure::data(e.to_string()))?;
                let n = input.precision.unwrap_or(6);
                let alg = fam.algebra_at(n).map_err(|e| Failure::data(e.to_string()))?;
                if n >= 1 {
                    let coherent = fam
                        .tower_coherent_at(n)
                        .map_err(|e| Failure::data(e.to_string()))?;
                    if !coherent {
                        return Err(Failure::violation(format!(
                            "family {} breaks tower coherence at precision {n}",
                            fam.id_string()
                        )));
                    }
                }
                (alg, fam.id_string(), fam.model(), None)
            }
            (Some(_), Some(_)) => {
                return Err(Failure::data("give either a file or --family, not both"))
            }
            (None, None) => return Err(Failure::data("an input file or --family is required")),
        };

    let ring = FilteredSpace::regular(&algebra);
    let mut file_t = None;
    let mut cyclic_gen = None;

    let derivations = [&input.ideal, &input.quotient, &input.cyclic]
        .iter()
        .filter(|o| o.is_some())
        .count();
    if derivations > 1 {
        return Err(Failure::data(
            "--ideal, --quotient and --cyclic are mutually exclusive",
        ));
    }

    let space = if let Some(gens) = &input.ideal {
        let gens = parse_elem_list(&ring, gens)?;
        ideal_space(&algebra, &gens).map_err(|e| Failure::data(e.to_string()))?
    } else if let Some(gens) = &input.quotient {
        let gens = parse_elem_list(&ring, gens)?;
        quotient_space(&algebra, &gens).map_err(|e| Failure::data(e.to_string()))?
    } else if let Some(gen) = &input.cyclic {
        let g = parse_elem(&ring, gen)?;
        let (space, x) = cyclic_space(&algebra, &g).map_err(|e| Failure::data(e.to_string()))?;
        cyclic_gen = Some(x);
        space
    } else if let Some(pres) = &pres {
        match pres.kind {
            Kind::Algebra => ring,
            Kind::Space | Kind::Extension => {
                let space = presentation::build_space(pres, &algebra)
                    .map_err(|e| Failure::data(e.to_string()))?;
                if pres.kind == Kind::Extension {
                    file_t = Some(
                        presentation::build_t_op(pres, &space)
                            .map_err(|e| Failure::data(e.to_string()))?,
                    );
                }
                space
            }
        }
    } else {
        ring
    };

    Ok(Resolved {
        algebra,
        space,
        label,
        model,
        file_t,
        cyclic_gen,
    })
}

fn elem_to_expr(basis: &[clf_core::BasisElem], v: &[u32]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(i, &c)| {
            let name = &basis[i].name;
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

fn write_reports(
    common: &CommonArgs,
    name: &str,
    kv: &KeyValues,
    csv: Option<&Csv>,
) -> Result<(), Failure> {
    let Some(dir) = &common.out else {
        return Ok(());
    };
    fs::create_dir_all(dir)
        .map_err(|e| Failure::data(format!("cannot create {}: {e}", dir.display())))?;
    let kv_path = dir.join(format!("{name}.kv"));
    fs::write(&kv_path, kv.to_text())
        .map_err(|e| Failure::data(format!("cannot write {}: {e}", kv_path.display())))?;
    if let Some(csv) = csv {
        let csv_path = dir.join(format!("{name}.csv"));
        fs::write(&csv_path, csv.to_text())
            .map_err(|e| Failure::data(format!("cannot write {}: {e}", csv_path.display())))?;
    }
    Ok(())
}

fn base_kv(res: &Resolved, common: &CommonArgs) -> KeyValues {
    let mut kv = KeyValues::new();
    kv.set("input", &res.label)
        .set("p", res.algebra.field().modulus())
        .set("precision", res.space.precision())
        .set("model", res.model.as_str())
        .set("window", common.window)
        .set("seed", common.seed);
    kv
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { input, common } => {
            let res = resolve(&input)?;
            let report = res.algebra.validate();
            let mut kv = base_kv(&res, &common);
            println!(
                "validation of {} (precision {})",
                res.label,
                res.algebra.precision()
            );
            for entry in &report.entries {
                let status = if entry.ok() { "pass" } else { "FAIL" };
                println!(
                    "  {:<24} {}{}",
                    entry.axiom.to_string(),
                    status,
                    entry
                        .witness
                        .as_ref()
                        .map(|w| format!("  ({w})"))
                        .unwrap_or_default()
                );
                kv.set(&format!("axiom_{}", entry.axiom), entry.ok());
            }
            kv.set("clf", report.is_clf());
            write_reports(&common, "validate", &kv, None)?;
            if !report.is_clf() {
                return Err(Failure::violation("validation failed"));
            }
            println!("all axioms pass");
            Ok(())
        }
        Command::Gr { input, common } => {
            let res = resolve(&input)?;
            let ring = FilteredSpace::regular(&res.algebra);
            let g = graded::check_clf_graded(&ring);
            let mut kv = base_kv(&res, &common);
            kv.set("commutative", g.commutative.is_ok())
                .set("associative", g.associative.is_ok())
                .set("degree_one_generated", g.degree_one_generated.is_ok());
            let mut csv = Csv::new(&["n", "h"]);
            for (n, &h) in ring.h_vector().iter().enumerate() {
                csv.push_row(vec![n.to_string(), h.to_string()]);
            }
            println!(
                "graded ring of {}: commutative={} associative={} degree-1-generated={}",
                res.label,
                g.commutative.is_ok(),
                g.associative.is_ok(),
                g.degree_one_generated.is_ok()
            );
            let bname = |i: usize| res.algebra.basis()[i].name.clone();
            if let Err((i, j)) = g.commutative {
                println!("  witness: sigma({}) sigma({}) != sigma({}) sigma({})",
                    bname(i), bname(j), bname(j), bname(i));
            }
            if let Err((i, j, k)) = g.associative {
                println!("  witness: triple ({}, {}, {})", bname(i), bname(j), bname(k));
            }
            if let Err(d) = g.degree_one_generated {
                println!("  witness: component_1 * component_{} does not span component_{d}", d - 1);
            }
            println!("h = {:?}", ring.h_vector());
            write_reports(&common, "gr", &kv, Some(&csv))?;
            if !g.ok() {
                return Err(Failure::violation("graded conditions fail"));
            }
            Ok(())
        }
        Command::Hilbert { input, common } => {
            let res = resolve(&input)?;
            let rep = graded::hilbert(&res.space, common.window);
            let mut kv = base_kv(&res, &common);
            kv.set("stable", rep.stable());
            let mut csv = Csv::new(&["n", "h", "ell"]);
            for (n, &e) in rep.ell.iter().enumerate() {
                let h = rep.h.get(n).copied().unwrap_or(0);
                csv.push_row(vec![n.to_string(), h.to_string(), e.to_string()]);
            }
            println!("hilbert data of {}", res.label);
            println!("  h   = {:?}", rep.h);
            println!("  ell = {:?}", rep.ell);
            match &rep.fit {
                Ok(fit) => {
                    kv.set("delta", fit.degree)
                        .set("alpha_num", fit.leading.numer())
                        .set("alpha_den", fit.leading.denom());
                    println!(
                        "  delta = {}, alpha = {}/{} (window {})",
                        fit.degree,
                        fit.leading.numer(),
                        fit.leading.denom(),
                        common.window
                    );
                    write_reports(&common, "hilbert", &kv, Some(&csv))?;
                    Ok(())
                }
                Err(e) => {
                    write_reports(&common, "hilbert", &kv, Some(&csv))?;
                    Err(Failure::precision(e.to_string()))
                }
            }
        }
        Command::Dim { input, common } => {
            let res = resolve(&input)?;
            let perm = res.space.permissible(common.window);
            let d0 = res.space.dimension(common.window)?;
            let d1 = res.space.shift_filtration(1).dimension(common.window)?;
            let mut kv = base_kv(&res, &common);
            let degrees: Vec<String> = perm
                .generator_degrees()
                .iter()
                .map(|d| d.to_string())
                .collect();
            kv.set("delta", d0.delta)
                .set("alpha_num", d0.alpha.numer())
                .set("alpha_den", d0.alpha.denom())
                .set("permissible", perm.permissible())
                .set("generators", perm.generators.len())
                .set("generator_degrees", degrees.join(";"))
                .set("provenance", "stored-filtration")
                .set("crosscheck_delayed_equal", d0.delta == d1.delta);
            let caveat = match res.model {
                Model::Exact => "exact nilpotent model",
                Model::Tower => "tower truncation, certified to this precision only",
            };
            println!(
                "dimension of {} = {} (alpha = {}/{}, {} graded generators; {caveat})",
                res.label,
                d0.delta,
                d0.alpha.numer(),
                d0.alpha.denom(),
                perm.generators.len()
            );
            println!(
                "delayed-filtration cross-check: {}",
                if d0.delta == d1.delta {
                    "equal"
                } else {
                    "DIFFERS"
                }
            );
            write_reports(&common, "dim", &kv, None)?;
            if d0.delta != d1.delta {
                return Err(Failure::violation(
                    "two permissible filtrations fit different degrees",
                ));
            }
            Ok(())
        }
        Command::Span {
            input,
            common,
            elems,
        } => {
            let res = resolve(&input)?;
            let xs = parse_elem_list(&res.space, &elems)?;
            let span = res.space.span(&xs);
            let closure = res.space.generated_subspace(&xs);
            let mut kv = base_kv(&res, &common);
            kv.set("span_dim", span.dim())
                .set("closure_dim", closure.dim())
                .set("span_is_subspace", span == closure);
            let mut csv = Csv::new(&["i", "span_profile", "closure_profile"]);
            for i in 0..span.profile().len() {
                csv.push_row(vec![
                    i.to_string(),
                    span.profile()[i].to_string(),
                    closure.profile()[i].to_string(),
                ]);
            }
            println!(
                "span of {} elements in {}: dim {} (closure dim {}, already a subspace: {})",
                xs.len(),
                res.label,
                span.dim(),
                closure.dim(),
                span == closure
            );
            write_reports(&common, "span", &kv, Some(&csv))?;
            Ok(())
        }
        Command::ArtinRees { input, common } => {
            let res = resolve(&input)?;
            let report = artin_rees_constant(&res.space);
            let mut kv = base_kv(&res, &common);
            kv.set("N", report.precision)
                .set("verified_pairs", report.verified_pairs())
                .set("pairs", report.cells.len());
            let mut csv = Csv::new(&["n", "d", "ok"]);
            for c in &report.cells {
                csv.push_row(vec![c.n.to_string(), c.d.to_string(), c.ok.to_string()]);
            }
            match report.constant {
                Some(d) => {
                    kv.set("D", d);
                    println!(
                        "artin-rees constant of {}: D = {d} (precision {}, {} grid cells verified)",
                        res.label,
                        report.precision,
                        report.verified_pairs()
                    );
                    write_reports(&common, "artin-rees", &kv, Some(&csv))?;
                    Ok(())
                }
                None => {
                    kv.set("D", "none");
                    write_reports(&common, "artin-rees", &kv, Some(&csv))?;
                    Err(Failure::violation(format!(
                        "no Artin-Rees constant at precision {} ({} of {} cells pass)",
                        report.precision,
                        report.verified_pairs(),
                        report.cells.len()
                    )))
                }
            }
        }
        Command::Asymptotics { input, common } => {
            let res = resolve(&input)?;
            let s = size_series(&res.space, common.window)?;
            let mut kv = base_kv(&res, &common);
            kv.set("ar_constant", s.ar_constant)
                .set("horizon", s.horizon);
            let mut csv = Csv::new(&["n", "L"]);
            for (n, &v) in s.values.iter().enumerate() {
                csv.push_row(vec![n.to_string(), v.to_string()]);
            }
            println!("size series of {}: L = {:?}", res.label, s.values);
            let fit = match &s.fit {
                Ok(f) => f,
                Err(e) => {
                    kv.set("stable", false);
                    write_reports(&common, "asymptotics", &kv, Some(&csv))?;
                    return Err(Failure::precision(e.to_string()));
                }
            };
            let matches = s.matches_graded() == Some(true);
            kv.set("stable", true)
                .set("delta", fit.degree)
                .set("alpha_num", fit.leading.numer())
                .set("alpha_den", fit.leading.denom())
                .set("match_graded", matches);
            println!(
                "  delta = {}, alpha = {}/{}, matches graded data: {}",
                fit.degree,
                fit.leading.numer(),
                fit.leading.denom(),
                matches
            );
            let sw = sandwich_check(&res.space, s.ar_constant)?;
            kv.set("sandwich_ok", sw.all_ok());
            write_reports(&common, "asymptotics", &kv, Some(&csv))?;
            if !matches {
                return Err(Failure::violation(
                    "size-series fit disagrees with graded Hilbert-Samuel data",
                ));
            }
            if !sw.all_ok() {
                return Err(Failure::violation("sandwich inequalities fail"));
            }
            Ok(())
        }
        Command::Lift {
            input,
            common,
            target,
            spanners,
        } => {
            let res = resolve(&input)?;
            let t = parse_elem(&res.space, &target)?;
            let ys = parse_elem_list(&res.space, &spanners)?;
            match lift_solve(&res.space, &t, &ys) {
                Ok(sol) => {
                    let mut kv = base_kv(&res, &common);
                    kv.set("steps", sol.steps).set("constant", sol.constant);
                    println!("lift in {} solved in {} steps:", res.label, sol.steps);
                    for (i, c) in sol.coefficients.iter().enumerate() {
                        let text = elem_to_expr(res.algebra.basis(), c);
                        println!("  r_{i} = {text}");
                        kv.set(&format!("r_{i}"), text);
                    }
                    write_reports(&common, "lift", &kv, None)?;
                    Ok(())
                }
                Err(LiftError::NotSpanned { degree }) => Err(Failure::data(format!(
                    "principal parts do not span in degree {degree}"
                ))),
            }
        }
        Command::Invert {
            input,
            common,
            elem,
        } => {
            let res = resolve(&input)?;
            let ring = FilteredSpace::regular(&res.algebra);
            let a = parse_ring_elem(&res.algebra, &elem)?;
            match invert(&ring, &a) {
                Ok(inv) => {
                    let check = res.algebra.mul_elem(&inv.left_inverse, &a);
                    if check != res.algebra.unit_elem() {
                        return Err(Failure::violation("inverse product check failed"));
                    }
                    let mut kv = base_kv(&res, &common);
                    let text = elem_to_expr(res.algebra.basis(), &inv.left_inverse);
                    kv.set("inverse", &text).set("two_sided", inv.two_sided);
                    println!("left inverse in {}: {text}", res.label);
                    println!("two-sided: {}", inv.two_sided);
                    write_reports(&common, "invert", &kv, None)?;
                    Ok(())
                }
                Err(InvertError::NotUnit(v)) => Err(Failure::data(format!(
                    "element has valuation {v} >= 1, not a unit"
                ))),
                Err(e @ InvertError::NotSpanned(_)) => Err(Failure::data(e.to_string())),
            }
        }
        Command::Distinguished {
            input,
            common,
            elem,
            mode,
        } => {
            let res = resolve(&input)?;
            let x = parse_elem(&res.space, &elem)?;
            let m = match mode.as_str() {
                "plain" => DistinguishedMode::Plain,
                "m-adic" => DistinguishedMode::MAdic,
                other => return Err(Failure::data(format!("unknown mode {other:?}"))),
            };
            let mut kv = base_kv(&res, &common);
            kv.set("mode", &mode);
            match res.space.distinguished(&x, m) {
                Ok(()) => {
                    kv.set("distinguished", true);
                    println!("element is {mode}-distinguished in {}", res.label);
                }
                Err(DistinguishedFailure::Plain(i)) => {
                    kv.set("distinguished", false).set("fail_i", i);
                    println!("fails at i = {i}: m^{i}(Rx) != m^{i} x");
                }
                Err(DistinguishedFailure::MAdic(i, j)) => {
                    kv.set("distinguished", false)
                        .set("fail_i", i)
                        .set("fail_j", j);
                    println!(
                        "fails at (i, j) = ({i}, {j}): m^{i}(m^{j} x) != m^{} x",
                        i + j
                    );
                }
            }
            write_reports(&common, "distinguished", &kv, None)?;
            Ok(())
        }
        Command::Annihilator {
            input,
            common,
            elem,
            tau,
        } => {
            let res = resolve(&input)?;
            let x = parse_elem(&res.space, &elem)?;
            let vx = res.space.valuation(&x);
            let tau = tau.unwrap_or_else(|| res.space.precision().saturating_sub(vx + 2));
            let ann = res.space.annihilator(&x, tau);
            let mut kv = base_kv(&res, &common);
            kv.set("tau", tau)
                .set("kernel_dim", ann.kernel.dim())
                .set("witnesses", ann.witnesses.len());
            println!(
                "annihilator of element (valuation {vx}) in {}: kernel dim {}, {} witnesses of valuation <= {tau}",
                res.label,
                ann.kernel.dim(),
                ann.witnesses.len()
            );
            for (i, w) in ann.witnesses.iter().enumerate() {
                let text = elem_to_expr(res.algebra.basis(), w);
                println!("  witness {i}: {text}");
                kv.set(&format!("witness_{i}"), text);
            }
            write_reports(&common, "annihilator", &kv, None)?;
            Ok(())
        }
        Command::Extend {
            input,
            common,
            t,
            pseudo_null,
            assert_domain,
        } => {
            let res = resolve(&input)?;
            let t_op = make_t_op(&res, &t)?;
            let ext = build_extension(res.space.clone(), t_op, common.window)?;
            let mut kv = base_kv(&res, &common);
            let mut csv = Csv::new(&["j", "k_j"]);
            for (j, &k) in ext.k_table().iter().enumerate() {
                csv.push_row(vec![j.to_string(), k.to_string()]);
            }
            println!(
                "extension of {} validated; k_j table: {:?}",
                res.label,
                ext.k_table()
            );
            let dims = ext.dim_over_extension(common.window)?;
            kv.set("delta_ext", dims.delta_n)
                .set("delta_base", dims.delta_r)
                .set("invariant", dims.invariant());
            println!(
                "dimension over R[[T]] = {}, over R = {} ({})",
                dims.delta_n,
                dims.delta_r,
                if dims.invariant() { "equal" } else { "DIFFER" }
            );
            if pseudo_null {
                if assert_domain {
                    let ring = FilteredSpace::regular(&res.algebra);
                    let search = graded::domain_refute(&ring, res.algebra.precision(), 4096);
                    if search.refuted() {
                        return Err(Failure::data(
                            "--assert-domain contradicted: the graded ring has a zero divisor",
                        ));
                    }
                    kv.set("domain_refuter_pairs", search.pairs_searched);
                }
                let rep = ext.pseudo_null_filtration_test(common.window, assert_domain)?;
                kv.set("pseudo_null", rep.verdict)
                    .set("dim_ring_ext", rep.dim_ring_ext)
                    .set("dim_space_ext", rep.dim_space);
                println!(
                    "pseudo-null test: dim R[[T]] - dim M = {} - {} -> {}",
                    rep.dim_ring_ext, rep.dim_space, rep.verdict
                );
            }
            write_reports(&common, "extend", &kv, Some(&csv))?;
            if !dims.invariant() {
                return Err(Failure::violation(
                    "dimension over the extension differs from the base dimension",
                ));
            }
            Ok(())
        }
        Command::Torsion {
            input,
            common,
            spanners,
            t,
            samples,
            tau,
            slow_exhaustive,
        } => {
            let res = resolve(&input)?;
            let spanners: Vec<Vec<u32>> = match &spanners {
                Some(text) => parse_elem_list(&res.space, text)?,
                None => default_spanners(&res),
            };
            let cfg = TorsionConfig {
                seed: common.seed,
                samples,
                tau,
                exhaustive: slow_exhaustive,
                window: common.window,
            };
            let rep = torsion_equivalence(&res.space, &spanners, &cfg)?;
            let mut kv = base_kv(&res, &common);
            kv.set("s1", rep.s1)
                .set("s2", rep.s2)
                .set("s3", rep.s3)
                .set("agree", rep.agree())
                .set("sampled", rep.sampled)
                .set("dim_ring", rep.dim_ring)
                .set("dim_space", rep.dim_space)
                .set("spanners", spanners.len());
            let caveat = match res.model {
                Model::Exact => "exact nilpotent model",
                Model::Tower => "tower truncation, witnesses certified to this precision only",
            };
            println!(
                "torsion conditions on {}: S1={} S2={} S3={} (sampled {}, dim R = {}, dim M = {}; {caveat})",
                res.label, rep.s1, rep.s2, rep.s3, rep.sampled, rep.dim_ring, rep.dim_space
            );
            if let Some(c) = &rep.counterexample {
                println!(
                    "  distinguished element without witness: {}",
                    elem_to_expr(res.space.basis(), c)
                );
            }
            let mut t_agree = true;
            if let Some(tspec) = &t {
                let t_op = make_t_op(&res, tspec)?;
                let ext = build_extension(res.space.clone(), t_op, common.window)?;
                let erep = extension_torsion(&ext, &spanners, &cfg)?;
                kv.set("t1", erep.t1)
                    .set("t2", erep.t2)
                    .set("t3", erep.t3)
                    .set("t_agree", erep.agree())
                    .set("dim_over_ext", erep.dim_over_ext);
                println!(
                    "extension conditions: T1={} T2={} T3={}",
                    erep.t1, erep.t2, erep.t3
                );
                t_agree = erep.agree();
            }
            write_reports(&common, "torsion", &kv, None)?;
            if !rep.agree() || !t_agree {
                return Err(Failure::violation("torsion equivalences disagree"));
            }
            Ok(())
        }
        Command::Fuzz {
            input,
            common,
            iters,
        } => {
            let res = resolve(&input)?;
            let ring = FilteredSpace::regular(&res.algebra);
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let p = res.algebra.field().modulus();
            let mut checks = 0usize;
            for _ in 0..iters {
                // Row-reduction laws on random matrices over the same field.
                let rows = rng.gen_range(1..6usize);
                let cols = rng.gen_range(1..6usize);
                let mut m = Matrix::zero(res.algebra.field(), rows, cols);
                for i in 0..rows {
                    for j in 0..cols {
                        m.set(i, j, rng.gen_range(0..p));
                    }
                }
                let e = m.rref();
                if e.matrix.rref() != e {
                    return Err(Failure::violation("row reduction is not idempotent"));
                }
                if e.rank + m.kernel().len() != cols {
                    return Err(Failure::violation("rank-nullity violated"));
                }
                checks += 2;
                // Valuation bound and principal-part multiplicativity.
                let a: Vec<u32> = (0..ring.dim()).map(|_| rng.gen_range(0..p)).collect();
                let b: Vec<u32> = (0..ring.dim()).map(|_| rng.gen_range(0..p)).collect();
                let (va, vb) = (ring.valuation(&a), ring.valuation(&b));
                let prod = res.algebra.mul_elem(&a, &b);
                let bound = (va + vb).min(ring.precision() + 1);
                if ring.valuation(&prod) < bound {
                    return Err(Failure::violation("v(ab) < v(a) + v(b)"));
                }
                checks += 1;
                if va + vb <= ring.precision() {
                    let g = graded::graded_act(
                        &ring,
                        va,
                        &ring.slice_of(&a, va),
                        vb,
                        &ring.slice_of(&b, vb),
                    );
                    if !ring.field().vec_is_zero(&g)
                        && (ring.valuation(&prod) != va + vb
                            || ring.slice_of(&prod, va + vb) != g)
                    {
                        return Err(Failure::violation(
                            "principal parts fail to multiply: sigma(ab) != sigma(a)sigma(b)",
                        ));
                    }
                    checks += 1;
                }
                // Product monotonicity on random subgroups.
                let rows: Vec<Vec<u32>> = (0..2)
                    .map(|_| (0..ring.dim()).map(|_| rng.gen_range(0..p)).collect())
                    .collect();
                let small = ring.subgroup(&rows[..1]);
                let big = ring.subgroup(&rows);
                let pr_small = ring.product(&small, &small);
                let pr_big = ring.product(&big, &big);
                if !pr_small.is_subset_of(&pr_big) {
                    return Err(Failure::violation("product is not monotone"));
                }
                checks += 1;
            }
            // Bracketing independence of m^n, sampled.
            for n in 1..=ring.precision().min(4) {
                let mut s = ring.filtration(1);
                for _ in 1..n {
                    let split_left = rng.gen_bool(0.5);
                    s = if split_left {
                        ring.product(&ring.ring_filtration(1), &s)
                    } else {
                        ring.product(&ring.subgroup(&s.basis_rows()), &ring.filtration(1))
                    };
                }
                if s != ring.filtration(n) {
                    return Err(Failure::violation(format!("bracketing changed m^{n}")));
                }
                checks += 1;
            }
            let mut kv = base_kv(&res, &common);
            kv.set("iters", iters).set("checks", checks);
            println!(
                "fuzz on {}: {} checks passed (seed {})",
                res.label, checks, common.seed
            );
            write_reports(&common, "fuzz", &kv, None)?;
            Ok(())
        }
    }
}

fn default_spanners(res: &Resolved) -> Vec<Vec<u32>> {
    if let Some(g) = &res.cyclic_gen {
        return vec![g.clone()];
    }
    if let Some(i) = res.space.basis().iter().position(|b| b.name == "e") {
        let mut v = vec![0u32; res.space.dim()];
        v[i] = 1;
        return vec![v];
    }
    (0..res.space.dim())
        .map(|i| {
            let mut v = vec![0u32; res.space.dim()];
            v[i] = 1;
            v
        })
        .collect()
}

fn make_t_op(res: &Resolved, spec: &str) -> Result<Matrix, Failure> {
    if spec == "file" {
        return res
            .file_t
            .clone()
            .ok_or_else(|| Failure::data("the input file carries no tmap"));
    }
    let space = &res.space;
    let f = space.field();
    if spec == "zero" {
        if let Some(t) = &res.file_t {
            // An extension file's own operator wins over the default flag.
            return Ok(t.clone());
        }
        return Ok(Matrix::zero(f, space.dim(), space.dim()));
    }
    if let Some(expr) = spec.strip_prefix("mult:") {
        let u = parse_ring_elem(&res.algebra, expr)?;
        let mut t = Matrix::zero(f, space.dim(), space.dim());
        for j in 0..space.dim() {
            let mut base = vec![0u32; space.dim()];
            base[j] = 1;
            let col = space.apply(&u, &base);
            for (i, &c) in col.iter().enumerate() {
                t.set(i, j, c);
            }
        }
        return Ok(t);
    }
    if let Some(expr) = spec.strip_prefix("rightmult:") {
        if !space.is_regular() {
            return Err(Failure::data(
                "rightmult operators are defined on the ring itself",
            ));
        }
        let u = parse_ring_elem(&res.algebra, expr)?;
        let mut t = Matrix::zero(f, space.dim(), space.dim());
        for j in 0..space.dim() {
            let mut base = vec![0u32; space.dim()];
            base[j] = 1;
            let col = res.algebra.mul_elem(&base, &u);
            for (i, &c) in col.iter().enumerate() {
                t.set(i, j, c);
            }
        }
        return Ok(t);
    }
    Err(Failure::data(format!(
        "unknown T operator {spec:?}; use zero, mult:<expr>, rightmult:<expr> or file"
    )))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
