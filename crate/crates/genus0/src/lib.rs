//! Exact-arithmetic workbench for equivariant Poincaré characteristics of
//! genus-0 moduli spaces and the operads living on them.
//!
//! Everything is computed over `Q(t)` with arbitrary-precision integers; there
//! is no floating point anywhere. The crate provides three independent
//! computational routes to the same objects, so results can be cross-checked
//! rather than trusted:
//!
//! * closed-form characteristics (infinite products, plethystic Exp/Log,
//!   Legendre transform) in [`operads`] and [`legendre`];
//! * stable-tree enumeration and free-operad dimension counts in [`trees`];
//! * the Arnold-relation presentation of configuration-space cohomology in
//!   [`arnold`], with quadratic-duality rank checks in [`duality`].
//!
//! The basic objects are sparse symmetric-function series ([`symseries`])
//! whose coefficients are rational functions of the grading variable `t`
//! ([`ratfun`]), plus the Murnaghan–Nakayama character engine ([`characters`])
//! used to move between the power-sum and Schur bases.

pub mod arnold;
pub mod characters;
pub mod duality;
pub mod legendre;
pub mod operads;
pub mod partition;
pub mod plethysm;
pub mod ratfun;
pub(crate) mod ratmat;
pub mod symseries;
pub mod trees;

pub use characters::{ch_of_character, mn_character, CharacterVector};
pub use partition::{partitions_of, Partition};
pub use ratfun::RatFun;
pub use symseries::{Basis, SymSeries};

use thiserror::Error;

/// Errors shared across the crate. Operations that state a precondition
/// return one of these instead of panicking; internal invariant breaches
/// (which indicate a bug, not bad input) use the `Internal` variant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("basis mismatch: expected {expected:?}, found {found:?}")]
    BasisMismatch {
        expected: symseries::Basis,
        found: symseries::Basis,
    },
    #[error("degree cap mismatch: {0} vs {1}")]
    CapMismatch(u32, u32),
    #[error("division by zero rational function")]
    DivisionByZero,
    #[error("evaluation point is a pole of the denominator")]
    Pole,
    #[error("series must have zero constant term")]
    NonzeroConstantTerm,
    #[error("series must have constant term 1")]
    ConstantTermNotOne,
    #[error("substitution image of t must be nonzero")]
    ZeroTImage,
    #[error("series linear term must be exactly p1")]
    BadLinearTerm,
    #[error("degree {0} above cap {1}")]
    DegreeAboveCap(u32, u32),
    #[error("arity {0} out of range: {1}")]
    ArityOutOfRange(u32, String),
    #[error("coefficient of {0} is not a polynomial in t: {1}")]
    NonPolynomialCoefficient(String, String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
