use thiserror::Error;

pub type Result<T> = std::result::Result<T, MathieuError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathieuError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The closed-form boundaries only hold in the unbroken phase `0 ≤ β ≤ 1`.
    #[error("beta = {0} is outside [0, 1] where the perturbative boundaries hold")]
    BetaOutOfRange(f64),

    #[error("solution overflowed at x = {x}")]
    NonFinite { x: f64 },

    #[error("Floquet exponent nu = {0} is not 0 or 1/2")]
    InvalidExponent(f64),

    #[error("Hill matrix with beta = {beta} cannot be symmetrized")]
    NotSymmetrizable { beta: f64 },

    #[error("no sign change of Re Δ - target on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("curvature fit needs {required} samples with eps <= {eps_limit}, found {found}")]
    InsufficientSamples {
        found: usize,
        required: usize,
        eps_limit: f64,
    },

    #[error("traced point (eps = {eps}, a = {a}) misses the target discriminant by {residual:e}")]
    VerificationFailed { eps: f64, a: f64, residual: f64 },
}
