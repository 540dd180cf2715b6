use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The logarithm is not unique at −I.
    #[error("logarithm is not unique at -I (antipode of the identity)")]
    Antipode,

    #[error("matrix is not symmetric positive definite: {0}")]
    NotSpd(String),

    #[error("invalid metric parameters: {0}")]
    InvalidParams(String),

    #[error("operation is only defined for Riemannian metrics")]
    SubRiemannianUnsupported,

    #[error("operation rejects the degenerate sub-Riemannian kind (a2 = a3 = inf)")]
    DegenerateUnsupported,

    #[error("neighbour graph is disconnected: {unreachable} samples unreachable from the identity; increase n or k")]
    DisconnectedGraph { unreachable: usize },

    #[error("anisotropy too high for the chord approximation: score {score:.3} exceeds {limit}")]
    AnisotropyTooHigh { score: f64, limit: f64 },

    #[error("geodesic step too large: conservation drift {drift:.3e} exceeds {limit:.1e}")]
    StepTooLarge { drift: f64, limit: f64 },

    #[error("insufficient resolution: {eligible} eligible grid points, need {required}")]
    InsufficientResolution { eligible: usize, required: usize },

    #[error("irrep cutoff exceeded: dimension {dim} above cap {cap}")]
    CutoffExceeded { dim: usize, cap: usize },

    #[error("Weyl count at s = {s} is beyond the computed spectrum (safe below {safe_limit})")]
    CountTruncated { s: f64, safe_limit: f64 },

    #[error("heat trace at t = {time} has truncated tail bound {bound:.3e}")]
    TraceTruncated { time: f64, bound: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
