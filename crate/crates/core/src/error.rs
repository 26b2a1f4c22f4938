use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
    #[error("interval needs lo < hi, got ({lo}, {hi})")]
    EmptyInterval { lo: String, hi: String },
    #[error("interval endpoints must be positive, got {0}")]
    NonPositiveEndpoint(String),
    #[error("intervals overlap near {0}")]
    OverlappingIntervals(String),
    #[error("a configuration needs at least one interval")]
    NoIntervals,
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("truncating at {0} leaves no intervals")]
    TruncationEmpty(String),
    #[error("{0} is not an endpoint of the configuration")]
    NotAnEndpoint(String),
    #[error("window yields a degenerate configuration: {0}")]
    DegenerateWindow(String),
    #[error("delta out of range: {0}")]
    DeltaOutOfRange(String),
    #[error("attached copies overlap or touch at level {level}; epsilon too large")]
    CopiesOverlap { level: usize },
    #[error("base configuration must lie in (-inf, 1); last endpoint is {0}")]
    BaseBeyondUnit(String),
    #[error("tail check level {0} out of range; need 1 <= n < depth")]
    TailLevelOutOfRange(usize),
    #[error("extremum at endpoint {0} is the unattained limit 1/2")]
    ExtremumUnattained(String),
    #[error("not a counterexample at delta = {delta}: delta* = {delta_star}")]
    NotACounterexample { delta: String, delta_star: String },
    #[error("cover does not tile the host interval exactly: {0}")]
    CoverNotExact(String),
    #[error("cover interval {index} has density {density}, below 1 - delta")]
    HypothesisViolated { index: usize, density: String },
    #[error("parameter out of range: {0}")]
    ParamRange(String),
    #[error("search decode failed: {0}")]
    DecodeFailed(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
