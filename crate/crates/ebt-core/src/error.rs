//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by the exact kernel, the symbol calculus, the cone
/// calculus and the Hecke operators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input text could not be parsed; `pos` is a byte offset into the input.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A parameter is outside the domain of the requested operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Antisymmetrised variants are only defined for nontrivial groups.
    #[error("variant {0} is undefined for the trivial group")]
    TrivialGroupVariant(String),

    /// A symbol whose entries do not span the character group was used
    /// where a generator was expected.
    #[error("symbol {0} is not a generator: its entries do not span the character group")]
    UnfaithfulSymbol(String),

    /// Two element classes from different presented groups were combined.
    #[error("element classes belong to different presented groups")]
    GroupMismatch,

    /// Cone generators must be linearly independent.
    #[error("cone generators are linearly dependent")]
    DependentGenerators,

    /// The cone of a triple must be spanned by a lattice basis for a direct
    /// symbol read-off.
    #[error("cone is not basic: generators do not form a lattice basis")]
    NotBasic,

    /// The character vector does not lie in the image of the sublattice
    /// attached to the cone.
    #[error("chi does not lie in the image of the sublattice attached to the cone")]
    ChiCondition,

    /// A face passed to a subdivision operation is unusable.
    #[error("invalid face: {0}")]
    InvalidFace(String),

    /// Hecke operators require a prime not dividing the group order.
    #[error("ell = {ell} must be a prime not dividing the group order {order}")]
    EllDividesOrder { ell: u64, order: u64 },

    /// Guard against accidentally huge Hecke computations.
    #[error("parameters exceed the scale guard (n <= 3, ell <= 7); use the override to proceed")]
    ScaleGuard,

    /// A basis-change denominator must be invertible modulo the exponent.
    #[error("denominator {denom} is not invertible modulo {modulus}")]
    NonInvertibleDenominator { denom: String, modulus: u64 },

    /// An internal invariant was violated; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
