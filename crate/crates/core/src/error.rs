use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("dimension n = {0} unsupported: n >= 8 required")]
    Dimension(usize),
    #[error("kernel index {j} out of range 1..={max}")]
    KernelIndex { j: usize, max: usize },
    #[error("divergent integral I_p^q with p = {p}, q = {q} (needs p - q > 1)")]
    Divergent { p: f64, q: f64 },
    #[error("quadrature tolerance {tol:e} not met, estimated error {achieved:e}")]
    Quadrature { tol: f64, achieved: f64 },
    #[error("no sign change of the matching function in [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },
    #[error("eigenvalue iteration did not converge after {iters} refinements (last mismatch {mismatch:e})")]
    NoConvergence { iters: usize, mismatch: f64 },
}

pub type Result<T> = std::result::Result<T, CoreError>;
