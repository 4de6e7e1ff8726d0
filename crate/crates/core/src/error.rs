use thiserror::Error;

/// Errors raised by the solvers and algebra in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate field at t = {t}: B+ = 0, the oscillator connection is trivial")]
    DegenerateField { t: f64 },

    #[error("t = {t} is outside the tabulated field domain [{start}, {end}]")]
    OutOfDomain { t: f64, start: f64, end: f64 },

    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("form has linear terms; expected a purely quadratic form")]
    NonQuadratic,

    #[error("form has quadratic terms; expected a purely linear form")]
    NonLinear,

    #[error("product of degree {0} exceeds the representable degree 2")]
    DegreeOverflow(usize),

    #[error("effective frequency is imaginary: B0^2 + 2 omega B0z + omega^2 = {discriminant} < 0")]
    ComplexOmega { discriminant: f64 },

    #[error("resonance denominator omega + B0z vanishes")]
    ResonanceDenominatorZero,

    #[error("vector is not a unit vector (|m| = {norm})")]
    NotUnit { norm: f64 },

    #[error("linearized variable z crosses zero near t = {t} (pole of xi)")]
    ZeroCrossing { t: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
