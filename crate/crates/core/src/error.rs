use thiserror::Error;

/// Errors raised by state construction, kinematics and observables.
///
/// Values are carried as `f64` regardless of the scalar type so the error
/// type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("state norm deviates from one: sum |amplitude|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("amplitude vector of length {len} is not 2^{n_qubits}")]
    BadLength { len: usize, n_qubits: usize },
    #[error("state must contain at least one qubit")]
    NoQubits,
    #[error("particle index {index} out of range 1..={n_qubits}")]
    ParticleIndex { index: usize, n_qubits: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("boost speed beta = {0} outside [0, 1)")]
    BetaOutOfRange(f64),
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("rapidity must be non-negative, got {0}")]
    NegativeRapidity(f64),
    #[error("zero-length vector where a direction is required")]
    ZeroVector,
    #[error("vector is not unit length (|v| = {norm})")]
    NotUnit { norm: f64 },
    #[error("boost is not perpendicular to the momentum (e.p = {dot:e})")]
    NotPerpendicular { dot: f64 },
    #[error("composed little-group element is not a spatial rotation (deviation {deviation:e})")]
    NotARotation { deviation: f64 },
    #[error("measurement direction has out-of-plane component a_z = {0:e}")]
    OffPlane(f64),
    #[error("observable spectrum is not +-1 (|v| = {norm})")]
    ObservableSpectrum { norm: f64 },
    #[error("expected {expected} particles, got {got}")]
    ParticleCount { expected: usize, got: usize },
    #[error("no crossing of the threshold {threshold} in (0, 1)")]
    NoCrossing { threshold: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
