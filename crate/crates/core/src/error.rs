use thiserror::Error;

/// Failures raised by the library. Messages name the violated precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid cutoff: {0}")]
    InvalidCutoff(String),
    #[error("non-integrable tail: {0}")]
    NonIntegrableTail(String),
    #[error("quadrature failure: requested error {requested:e}, achieved {achieved:e}")]
    QuadratureFailure { requested: f64, achieved: f64 },
    #[error("undeclared variation: the model must declare finite or infinite variation")]
    UndeclaredVariation,
    #[error("alpha out of range: alpha = {alpha} but {requirement}")]
    AlphaOutOfRange { alpha: f64, requirement: String },
    #[error("degenerate sigma: sigma2 = 0 {0}")]
    DegenerateSigma(String),
    #[error("missing global M: eps > 1 requires a bound on f for |x| >= 1")]
    MissingGlobalM,
    #[error("wrong variation: the bound requires a {expected}-variation model")]
    WrongVariation { expected: &'static str },
    #[error("not symmetric: the bound requires a symmetric Lévy density")]
    NotSymmetric,
    #[error("missing Lipschitz certificate")]
    MissingLipschitzCert,
    #[error(
        "certificate too weak: Lipschitz constant {constant} exceeds M(eps ∧ 1)^-(2+alpha) = {allowed}"
    )]
    CertTooWeak { constant: f64, allowed: f64 },
    #[error("window violated: t*lambda_eps = {value} outside (0, {limit}]")]
    WindowViolated { value: f64, limit: f64 },
    #[error("lambda out of range: 0 < lambda <= 2 required, got {0}")]
    LambdaOutOfRange(f64),
    #[error("no applicable bound at eps = {eps}, t = {t}")]
    NoApplicableBound { eps: f64, t: f64 },
    #[error("shape too large: 0 < t < 1 required, got t = {0}")]
    ShapeTooLarge(f64),
    #[error("unsupported jump law: {0}")]
    UnsupportedJumpLaw(String),
    #[error("scheme infeasible: {0}")]
    SchemeInfeasible(String),
    #[error("truth unavailable: {0}")]
    TruthUnavailable(String),
    #[error("too few points: {got} usable, at least {needed} needed")]
    TooFewPoints { got: usize, needed: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn alpha(alpha: f64, requirement: &str) -> Self {
        Error::AlphaOutOfRange {
            alpha,
            requirement: requirement.to_string(),
        }
    }
}
