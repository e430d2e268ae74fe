//! Exact arithmetic for abelian local constants (epsilon factors) and
//! Langlands lambda functions over finite extensions of the p-adic numbers.
//!
//! The crate is organised around the objects that appear in the closed-form
//! lambda computations:
//!
//! * [`cyclo`] — rational-coefficient sums of roots of unity, the ring in
//!   which every character sum, Gauss sum and lambda value lives;
//! * [`ffield`] — finite fields `GF(p^s)`, traces and quadratic Gauss sums
//!   (brute force and closed form);
//! * [`padic`] — invariant-level local fields, additive/multiplicative
//!   characters of `Q_p` and conductor bookkeeping;
//! * [`epsilon`] — the normalized character-sum local constant `W(χ, ψ)`
//!   together with its twist laws and functional-equation checks;
//! * [`groups`] — Cayley-table finite groups with the Sylow-2 and
//!   sign-character analysis that drives the lambda dispatcher;
//! * [`lambda`] — the closed-form lambda theorems, the Sylow-2 dispatcher
//!   and the catalog of quadratic extensions of `Q_2`;
//! * [`verify`] — the executable acceptance suite used by the CLI and the
//!   integration tests.
//!
//! All core arithmetic is exact: coefficients are arbitrary-precision
//! rationals and equality of cyclotomic numbers is decided by reduction to
//! the canonical power basis, never by floating point.

pub mod arith;
pub mod cyclo;
pub mod epsilon;
pub mod ffield;
pub mod groups;
pub mod lambda;
pub mod padic;
pub mod verify;

/// Exact rational scalar used by the concrete cyclotomic type.
pub type Rat = num_rational::BigRational;

/// The concrete cyclotomic number type used throughout the crate.
pub type Cyclo = cyclo::CycloNumber<Rat>;

pub use cyclo::Mu4;

/// Crate-wide error type; variant names double as the stable error names
/// reported by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ZeroOrder: a root of unity needs order N >= 1")]
    ZeroOrder,
    #[error("NotAFourthRoot: value does not lie within 1e-6 of any fourth root of unity")]
    NotAFourthRoot,
    #[error("ZeroArgument: {0}")]
    ZeroArgument(&'static str),
    #[error("EvenCharacteristic: operation requires an odd prime characteristic")]
    EvenCharacteristic,
    #[error("NotPrime: {0} is not prime")]
    NotPrime(u64),
    #[error("NotIrreducible: supplied modulus is reducible over GF(p)")]
    NotIrreducible,
    #[error("UnsupportedField: explicit evaluation is only supported over Q_p itself")]
    UnsupportedField,
    #[error("WildDifferentUnknown: different exponent is undefined across a wild step")]
    WildDifferentUnknown,
    #[error("UnsupportedConductor: {0}")]
    UnsupportedConductor(String),
    #[error("InvalidCharacter: {0}")]
    InvalidCharacter(String),
    #[error("NotUnramified: twisting character must have conductor zero")]
    NotUnramified,
    #[error("CharacterMismatch: {0}")]
    CharacterMismatch(String),
    #[error("PsiDependence: Deligne constant changed under a shift of the additive character")]
    PsiDependence,
    #[error("InvalidGroup: {0}")]
    InvalidGroup(String),
    #[error("Not2Group: subgroup order is not a power of two")]
    Not2Group,
    #[error("NotASubgroup: element set is not a subgroup of the parent")]
    NotASubgroup,
    #[error("GroupTooLarge: exhaustive analysis is limited to |G| <= {0}")]
    GroupTooLarge(usize),
    #[error("EvenDegree: operation requires odd degree")]
    EvenDegree,
    #[error("OddDegree: operation requires even degree")]
    OddDegree,
    #[error("EvenRamification: operation requires odd ramification index")]
    EvenRamification,
    #[error("EvenResidueCharacteristic: operation requires odd residue characteristic")]
    EvenResidueCharacteristic,
    #[error("IncomposableSymbolic: symbolic lambda values cannot be combined here")]
    IncomposableSymbolic,
    #[error("TameImpossible: a non-metacyclic Sylow 2-subgroup cannot occur over p odd")]
    TameImpossible,
    #[error("BadInput: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
