//! Fusion rules for affine Lie algebras.
//!
//! This crate computes WZW fusion coefficients for the affine algebras
//! su(N)-hat (N = 2, 3, 4) and sp(4)-hat by three independent routes:
//!
//! - affine Weyl folding of finite tensor products ([`fusion::kac_walton_fusion`]),
//! - a numerical evaluation of the Verlinde formula ([`fusion::verlinde_fusion`]),
//! - lattice-point counting in a fusion basis ([`basisgen::count_by_basis`]).
//!
//! The fusion-basis route rests on a catalog of elementary couplings
//! ([`basisgen`]) together with linear Diophantine machinery for Hilbert
//! bases and cone dualization ([`diophantine`]), and a small truncated
//! power-series engine ([`series`]) used to manipulate fusion generating
//! functions and level-rank duality tables.

pub mod algebra;
pub mod basisgen;
pub mod diophantine;
pub mod fusion;
pub mod series;
pub mod tensor;

pub use algebra::{build_algebra, AffineWeight, AlgebraData, AlgebraId, Weight};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An unknown algebra name was supplied.
    #[error("unknown algebra `{0}` (expected su2, su3, su4, sp4 or g2)")]
    UnknownAlgebra(String),
    /// The requested operation is not available for this algebra.
    #[error("operation `{op}` is not supported for {alg}")]
    Unsupported { op: &'static str, alg: String },
    /// A weight had the wrong number of Dynkin labels or a negative label.
    #[error("invalid weight {0}")]
    InvalidWeight(String),
    /// Shifted reflection toward the dominant chamber did not terminate
    /// within the iteration cap.
    #[error("dominant folding exceeded its iteration cap")]
    FoldDivergence,
    /// The completion frontier of the Hilbert-basis search grew past its cap.
    #[error("Hilbert-basis completion frontier exceeded {0} states")]
    FrontierOverflow(usize),
    /// A plain-text inequality system failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
    /// An internal consistency check failed.
    #[error("internal invariant breach: {0}")]
    Invariant(String),
}

/// Convenience result alias.
pub type Result<T> = std::result::Result<T, Error>;
