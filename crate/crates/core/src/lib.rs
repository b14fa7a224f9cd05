//! Exact arithmetic for theta series of lattices built from linear codes
//! over quotient rings of imaginary quadratic integers.
//!
//! Everything here is integer-exact: series coefficients are big integers,
//! exponents are rationals with a fixed denominator, and matrix ranks are
//! computed by fraction-free elimination. No floating point is used in any
//! computation path.

pub mod codes;
pub mod coset_theta;
pub mod lattice_theta;
pub mod qseries;
pub mod quadring;
pub mod uniqueness;

pub use codes::{CodeFile, LinearCode, WeightEnumerator};
pub use coset_theta::CosetClass;
pub use qseries::ScaledSeries;
pub use quadring::{Level, RingCtx, RingElem, Split};
pub use uniqueness::RankReport;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The pair (p, ell) does not describe an admissible level.
    #[error("NotAdmissible: {0}")]
    NotAdmissible(String),
    /// A series expected to live on integer exponents has fractional support.
    #[error("NonIntegerSupport: series has a term with a fractional exponent")]
    NonIntegerSupport,
    /// A code and a level disagree on the ring they are defined over.
    #[error("LevelMismatch: {0}")]
    LevelMismatch(String),
    /// Substitution exponent must be a positive rational.
    #[error("InvalidPower: {0}")]
    InvalidPower(String),
    /// Malformed code description.
    #[error("InvalidCode: {0}")]
    InvalidCode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
