use thiserror::Error;

use crate::quadrature::Axis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("factor `{0}` is not a homogeneous linear form in x, y, z, t")]
    NotLinear(String),

    #[error("expected 8 linear factors, found {0}")]
    FactorCount(usize),

    #[error("plane {0} appears more than once")]
    RepeatedPlane(String),

    #[error("linear form with all coefficients zero")]
    ZeroForm,

    #[error("scaling lambda must be nonzero")]
    ZeroLambda,

    #[error("arrangement file: {0}")]
    ArrangementFile(String),

    #[error("invalid Betti data: b3_hat = {b3_hat}, b3_tilde = {b3_tilde}")]
    InvalidBetti { b3_hat: i64, b3_tilde: i64 },

    #[error("chart matrix is not invertible")]
    SingularChart,

    #[error("coefficient does not fit in 64 bits")]
    Overflow,

    #[error("cell is not box-reducible: {0}")]
    NotBoxReducible(String),

    #[error("integrand is unbounded after the power substitution with k = {k}")]
    UnboundedIntegrand { k: u32 },

    #[error("form {form} has the wrong sign ({value:e}) at an integration node")]
    SignInconsistent { form: usize, value: f64 },

    #[error(
        "tolerance not reached after {evaluations} evaluations: estimate {estimate}, relative error {achieved:e}"
    )]
    ToleranceNotReached {
        estimate: f64,
        achieved: f64,
        evaluations: u64,
    },

    #[error("scaling check failed: expected {expected}, got {got}")]
    ScalingMismatch { expected: f64, got: f64 },

    #[error("ratio {a} / {b} is not recognised as a rational number")]
    NoRationalRatio { a: f64, b: f64 },

    #[error("no period on the {0:?} axis")]
    MissingAxis(Axis),

    #[error("tau must lie in the upper half plane")]
    NotUpperHalfPlane,

    #[error("E4^3 = E6^2: j has a pole")]
    JPole,

    #[error("coefficient a_{0} is missing")]
    MissingPrime(u64),

    #[error("a_{p} = {a_p} violates the Deligne bound")]
    DeligneBound { p: u64, a_p: i64 },

    #[error("weight {0} is not supported (only weight 4)")]
    WrongWeight(u32),

    #[error("a_1 = {0}, expected a normalised eigenform with a_1 = 1")]
    NotNormalized(i64),

    #[error("stored a_{n} = {stored} but the Hecke recursion gives {derived}")]
    HeckeMismatch { n: u64, stored: i64, derived: i64 },

    #[error("q-expansion checksum failed at a_{n}: expected {expected}, found {found}")]
    Checksum { n: u64, expected: i64, found: i64 },

    #[error("{needed} coefficients needed for the requested precision, only {available} available")]
    InsufficientCoefficients { needed: u64, available: u64 },

    #[error("coefficient file: {0}")]
    FormFile(String),

    #[error("s = {0} is not a critical point (expected 1, 2 or 3)")]
    NonCriticalPoint(u32),

    #[error("no admissible cycles found for arrangement {0}")]
    NoCycles(String),

    #[error("unknown arrangement `{0}`")]
    UnknownArrangement(String),

    #[error("unknown modular form `{0}`")]
    UnknownForm(String),

    #[error("data: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
