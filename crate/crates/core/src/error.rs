use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),
    #[error("singular geometry: {0}")]
    SingularGeometry(String),
    #[error("SCF did not converge after {cycles} cycles (last density change {delta:e})")]
    ScfNotConverged { cycles: usize, delta: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dipole integrals are absent; the cavity coupling cannot be built")]
    AbsentDipole,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: basis of {size} states is larger than the cap {cap}")]
    Capacity { size: usize, cap: usize },
    #[error("index {index} out of range for {len} sites")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid gate: {0}")]
    Gate(String),
    #[error("layout error: {0}")]
    Layout(String),
    #[error("leakage of {0:e} outside the physical subspace")]
    Leakage(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
