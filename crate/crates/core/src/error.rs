use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("double factorial is undefined for negative even argument {0}")]
    NegativeEvenDoubleFactorial(i64),

    #[error("phase mismatch: cannot add e^{{i{lhs_phase}k(x-z)}}e^{{i{lhs_z}kz}} and e^{{i{rhs_phase}k(x-z)}}e^{{i{rhs_z}kz}} terms")]
    PhaseMismatch {
        lhs_phase: i32,
        lhs_z: i32,
        rhs_phase: i32,
        rhs_z: i32,
    },

    #[error("symbolic unit mismatch: (2pi)^(-{lhs}/2) vs (2pi)^(-{rhs}/2)")]
    UnitMismatch { lhs: i32, rhs: i32 },

    #[error("expression has a residual negative power k^{0}")]
    NegativeKPower(i32),

    #[error("the e^(ikz) phase must be cancelled before expanding in k (found tau = {0})")]
    UnresolvedZPhase(i32),

    #[error("singular point: {0}")]
    Singular(String),

    #[error("pole at k = {0}")]
    Pole(f64),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integration did not converge: {0}")]
    NonConvergence(String),

    #[error("integrand is singular on the contour near k = {0}")]
    PoleOnPath(String),

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("pole order is ambiguous: {0}")]
    AmbiguousPoleOrder(String),

    #[error("Wronskian is not a single Laurent monomial")]
    NonLaurentWronskian,

    #[error("invalid transformation chain: {0}")]
    InvalidChain(String),

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
