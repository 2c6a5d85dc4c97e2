//! Error type shared by all constructions.

use alloc::string::String;
use core::fmt;

/// Failure of a construction. Axiom *violations* found by the checkers are
/// ordinary return values; an `Error` means the requested value could not be
/// built at all (mismatched inputs, truncation overflow, failed descent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands live in different base categories.
    CategoryMismatch,
    /// Morphisms expected to be parallel (same domain and codomain) are not.
    NotParallel,
    /// Matrix shape or function range inconsistent with domain/codomain.
    Shape(String),
    /// Σ-action generators fail invertibility or a Coxeter relation.
    BadAction(String),
    /// The computation would need data beyond a truncation cap.
    Truncation { what: String, needed: usize, cap: usize },
    /// Unknown built-in operad name.
    UnknownBuiltin(String),
    /// A structure check that is a construction precondition failed.
    Invalid(String),
    /// A map required to descend to a quotient does not.
    NoDescent(String),
    /// A universal-property factorization does not exist.
    DoesNotFactor,
    /// An expected isomorphism could not be inverted.
    NotInvertible(String),
    /// Enumeration size exceeds the configured guard.
    CapGuard { what: String, size: usize, guard: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CategoryMismatch => write!(f, "objects live in different base categories"),
            Error::NotParallel => write!(f, "morphisms are not a parallel pair"),
            Error::Shape(s) => write!(f, "shape error: {s}"),
            Error::BadAction(s) => write!(f, "invalid symmetric group action: {s}"),
            Error::Truncation { what, needed, cap } => {
                write!(f, "truncation overflow in {what}: needed {needed}, cap {cap}")
            }
            Error::UnknownBuiltin(s) => write!(f, "unknown builtin operad: {s}"),
            Error::Invalid(s) => write!(f, "invalid input: {s}"),
            Error::NoDescent(s) => write!(f, "map does not descend to quotient: {s}"),
            Error::DoesNotFactor => write!(f, "no factorization through the coequalizer"),
            Error::NotInvertible(s) => write!(f, "expected isomorphism is not invertible: {s}"),
            Error::CapGuard { what, size, guard } => {
                write!(f, "cap guard exceeded in {what}: size {size} > guard {guard}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
