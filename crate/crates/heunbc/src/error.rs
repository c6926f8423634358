use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("reversal degree {n} is below polynomial degree {degree}")]
    InvalidReversal { n: usize, degree: usize },

    #[error("roots of the zero polynomial are undefined")]
    UndefinedRoots,

    #[error("root iteration did not converge")]
    RootConvergence { best: Vec<C64> },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("Pochhammer (1+alpha)_k vanishes at k = {k}")]
    DegenerateParameter { k: usize },

    #[error("periodic coefficients are not normalized (K4 = {k4})")]
    NonNormalized { k4: C64 },

    #[error("z = 0 is a singular point")]
    SingularPoint,

    #[error("weight recursion divisor vanishes at k = {k}")]
    DegenerateWeight { k: usize },

    #[error("weight truncation tail {tail:e} exceeds {tol:e}")]
    InsufficientTruncation { tail: f64, tol: f64 },

    #[error("weight series is evaluated only for |z| >= 0.5 (got {r})")]
    WeightDomain { r: f64 },

    #[error("diagnostic undefined: weight coefficients vanish at k = {k}")]
    DiagnosticUndefined { k: usize },

    #[error("termination condition fails: lhs {lhs} vs 2(n+1) = {rhs}")]
    NotTerminating { lhs: C64, rhs: f64 },

    #[error("spectrum invariant violated: {0}")]
    InvariantViolation(String),

    #[error("quadrature node count {0} must be a power of two >= 16")]
    BadNodeCount(usize),

    #[error("integrand is not finite at node {index}")]
    NonFiniteNode { index: usize },

    #[error("half-line weight needs alpha > -1 (got {alpha})")]
    NonIntegrable { alpha: f64 },

    #[error("configuration is not 2*pi*i periodic (2 sigma = {two_sigma} is not an integer)")]
    NonPeriodic { two_sigma: C64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("incompatible configuration: {0}")]
    Configuration(String),

    #[error("kernel constraint 4a^2 = 1 violated (a = {a})")]
    KernelConstraint { a: C64 },

    #[error("Fredholm integral vanishes at every sample point")]
    DegenerateIntegral,

    #[error("E = {e} is not a spectrum member (|P_J(E)| = {residual:e})")]
    NonTerminatingSeries { e: C64, residual: f64 },

    #[error("no terminating solution for J = 0")]
    EmptySpectrum,
}

pub type Result<T> = std::result::Result<T, Error>;
