//! Exact kernel for truncated complete local-filtered nonassociative
//! algebras over prime fields.
//!
//! Everything is computed on finite truncations `R/m^(N+1)` presented by
//! structure constants on a valuation-adapted basis, with exact linear
//! algebra over `F_p` underneath. The crate provides:
//!
//! - validation of the filtration axioms and of the graded-ring conditions
//!   (commutative, associative, generated in degree 1) — [`algebra`],
//!   [`graded`];
//! - subgroup products `A·Δ`, spans, generated subspaces, induced
//!   filtrations, permissibility, annihilators and distinguished elements —
//!   [`space`], [`subgroup`];
//! - successive-approximation solving and one-sided inversion — [`lift`];
//! - Hilbert data with exact rational fits and the Krull-dimension candidate
//!   — [`graded`], [`fit`];
//! - Rees objects, leading-coefficient chains, spanning-set extraction and
//!   the Artin-Rees constant — [`rees`];
//! - quotient sizes `M/m^n M` and their asymptotics — [`asymptotics`];
//! - central extensions `R[[T]]`, dimension invariance and the torsion /
//!   pseudo-nullity batteries — [`central`];
//! - built-in families with truncation towers, the `.cfa` presentation
//!   format, and deterministic report emission — [`families`],
//!   [`presentation`], [`report`].
//!
//! Every analysis is finite-precision honest: reports carry the precision
//! they were computed at, stability windows are explicit, and nothing is
//! certified beyond the truncation.

pub mod algebra;
pub mod asymptotics;
pub mod central;
pub mod families;
pub mod field;
pub mod fit;
pub mod graded;
pub mod lift;
pub mod matrix;
pub mod presentation;
pub mod rees;
pub mod report;
pub mod space;
pub mod subgroup;

pub use algebra::{Axiom, BasisElem, FilteredAlgebra, ValidationReport};
pub use field::PrimeField;
pub use matrix::{Echelon, Matrix};
pub use space::{DistinguishedMode, FilteredSpace};
pub use subgroup::Subgroup;
