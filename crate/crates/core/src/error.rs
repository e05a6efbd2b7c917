use thiserror::Error;

/// Errors raised by the matrix kernel, the factorizations, the decision
/// engine and the grid realization.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric (relative residual {residual:.3e})")]
    NotSymmetric { residual: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotSpd { min_eigenvalue: f64 },
    #[error("iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is singular (smallest singular value {sigma_min:.3e})")]
    Singular { sigma_min: f64 },
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("matrix side {side} is odd")]
    OddDimension { side: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("upper-right block is singular (sigma_min {sigma_min:.3e}); use the tau-rotation path")]
    NotFree { sigma_min: f64 },
    #[error("factor expected to be real has imaginary part {imag:.3e}")]
    RealityCheckFailed { imag: f64 },
    #[error("U^t U is not block-diagonal (relative off-block norm {off_block:.3e})")]
    NotBlockDiagonal { off_block: f64 },
    #[error("U^t U is not of the form diag(D, conj(D)) (off-block {off_block:.3e}, mismatch {mismatch:.3e})")]
    NotConjugatePair { off_block: f64, mismatch: f64 },
    #[error("half dimension {half_dim} is odd; no d x d block split exists")]
    HalfDimOdd { half_dim: usize },
    #[error("the uncertainty principle holds; no compactly supported witness exists")]
    VerdictHolds,
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("grid is not critically sampled (N h^2 = {product})")]
    NotCriticallySampled { product: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("partial STFT order k = {k} is invalid for d = {d}")]
    BadK { k: usize, d: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
