use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation not supported for this model: {0}")]
    UnsupportedModel(String),

    #[error("k equation has complex roots (discriminant {0:e})")]
    ComplexRoots(f64),

    #[error("expression under the root is not a perfect square (residual {0:e})")]
    NotPerfectSquare(f64),

    #[error("square root polynomial has complex coefficients (leading {0:e})")]
    ComplexSquareRoot(f64),

    #[error("no admissible bound-state branch")]
    NoBoundBranch,

    #[error("ambiguous branch selection: {0} admissible candidates")]
    AmbiguousBranch(usize),

    #[error("weight of this sigma cannot be written in closed form: {0}")]
    UnsupportedWeight(String),

    #[error("no sign change of the level residual on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("bisection did not converge within {0} iterations")]
    MaxIterations(usize),

    #[error("polynomial degree {0} exceeds the supported maximum of 64")]
    DegreeOverflow(usize),

    #[error("critical deformation undefined for n={n}, l={l}")]
    UndefinedCritical { n: u32, l: u32 },

    #[error("inversion deformation undefined for n={n}, l={l}")]
    UndefinedInversion { n: u32, l: u32 },

    #[error("state is not normalizable: {0}")]
    NonNormalizable(String),

    #[error("branch root delta is complex (discriminant {0:e})")]
    ComplexDelta(f64),

    #[error("integrand is not integrable: {0}")]
    NonIntegrable(String),

    #[error("quadrature did not reach tolerance (estimated error {0:e})")]
    Quadrature(f64),

    #[error("finite-difference convergence failure: Richardson ratio {ratio:.3} (expected 4)")]
    Convergence { ratio: f64 },
}

impl Error {
    /// Errors caused by bad input rather than by a numerical failure.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::MaxIterations(_) | Error::Quadrature(_) | Error::Convergence { .. }
        )
    }
}
