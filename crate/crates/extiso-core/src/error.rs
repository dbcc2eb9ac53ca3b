use alloc::string::String;
use core::fmt;

/// Errors across the crate. Decision procedures that finish with a negative
/// answer do not error; `NotIsomorphic` is a result, not an `Error`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Genus was negative.
    NegativeGenus { genus: i64 },
    /// A cone order was <= 1.
    NonPositiveOrder { order: i64 },
    /// Extension rank outside the supported range (n >= 2).
    UnsupportedRank { n: usize },
    /// Matrix dimensions do not match what the operation requires.
    DimensionMismatch { detail: String },
    /// The two classes live over different signatures or ranks.
    SignatureMismatch,
    /// A torsion entry was not reduced modulo its divisor.
    ModulusMismatch { detail: String },
    /// The acting matrix is not in GL_n(Z).
    NotUnimodular,
    /// The permutation does not preserve cone orders.
    PermutationNotInSigma,
    /// The modular matrix is singular modulo its modulus.
    NotInvertible,
    /// No GL_n(Z) lift exists: the determinant is not +-1 mod D.
    NotLiftable,
    /// The first column was required to be e_1 mod D but is not.
    FirstColumnNotPinned,
    /// Enumeration exceeded the configured node budget.
    BudgetExceeded,
    /// Operation requires the torus signature (g = 1, m = 0).
    WrongSignature,
    /// The signature has a finite orbifold group; no rigidity verdict applies.
    FiniteOrbifold,
    /// The signature/rank pair is not in the non-rigid regime.
    NotNonRigid,
    /// A supplied witness failed re-verification.
    WitnessInvalid,
    /// Hom-counting input exceeds the configured size bounds.
    TooLarge { detail: String },
    /// An internally constructed object failed its own verification.
    /// Indicates a bug; never returned on well-behaved inputs.
    InternalVerificationFailed { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NegativeGenus { genus } => write!(f, "genus must be non-negative, got {}", genus),
            Error::NonPositiveOrder { order } => {
                write!(f, "cone orders must be at least 2, got {}", order)
            }
            Error::UnsupportedRank { n } => write!(
                f,
                "extension rank n must be at least 2 (n = {} is outside scope)",
                n
            ),
            Error::DimensionMismatch { detail } => write!(f, "dimension mismatch: {}", detail),
            Error::SignatureMismatch => {
                write!(f, "classes live over different signatures or ranks")
            }
            Error::ModulusMismatch { detail } => write!(f, "modulus mismatch: {}", detail),
            Error::NotUnimodular => write!(f, "matrix is not unimodular"),
            Error::PermutationNotInSigma => {
                write!(f, "permutation does not preserve cone orders")
            }
            Error::NotInvertible => write!(f, "matrix is singular modulo D"),
            Error::NotLiftable => {
                write!(f, "no unimodular lift: determinant is not +-1 modulo D")
            }
            Error::FirstColumnNotPinned => {
                write!(f, "first column is not congruent to e_1 modulo D")
            }
            Error::BudgetExceeded => write!(f, "enumeration exceeded the node budget"),
            Error::WrongSignature => write!(f, "operation requires the torus signature (g = 1, no cone points)"),
            Error::FiniteOrbifold => {
                write!(f, "signature has a finite orbifold group; no verdict applies")
            }
            Error::NotNonRigid => write!(f, "signature/rank pair is not in the non-rigid regime"),
            Error::WitnessInvalid => write!(f, "witness failed re-verification"),
            Error::TooLarge { detail } => write!(f, "input too large: {}", detail),
            Error::InternalVerificationFailed { detail } => {
                write!(f, "internal verification failed: {}", detail)
            }
        }
    }
}

impl core::error::Error for Error {}
