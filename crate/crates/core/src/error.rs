use thiserror::Error;

/// Every failure mode of the kernel, the expression language and the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("leading coefficient is zero through order {order}; series is not invertible")]
    ZeroLeadingCoefficient { order: i64 },
    #[error("base exponent {exp} is not positive")]
    NonpositiveBaseExponent { exp: i64 },
    #[error("exponent {requested} lies beyond the validity order {order}")]
    OrderExceeded { requested: i64, order: i64 },
    #[error("infinite product with argument exponent {exp} does not converge q-adically")]
    DivergentProduct { exp: i64 },
    #[error("double sum f[{a},{b},{c}] has no termination certificate")]
    UnboundedDoubleSum { a: i64, b: i64, c: i64 },
    #[error("Appell function has a pole at r = {r}")]
    AppellPole { r: i64 },
    #[error("theta denominator j({x};{base}) vanishes identically")]
    ThetaDenominatorZero { x: String, base: String },
    #[error("split of f[{n},{n},1] is undefined: {detail}")]
    SplitUndefined { n: i64, detail: String },
    #[error("denominator is not a unit: {0}")]
    NonUnitDenominator(String),
    #[error("coefficient at q^{exp} is not an integer: {value}")]
    NonIntegralCoefficient { exp: i64, value: String },
    #[error("fractional offset {0} does not cancel")]
    OffsetMismatch(String),
    #[error("string function at m = {m} has a polar term at q^{valuation}")]
    PolarPart { m: i64, valuation: i64 },
    #[error("quantum window is empty or has the wrong parity")]
    WindowTooSmall,
    #[error("invalid string function parameters: {0}")]
    InvalidStringParams(String),
    #[error("syntax error at byte {offset}: expected {}", expected.join(" | "))]
    SyntaxError { offset: usize, expected: Vec<String> },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("undeclared parameter `{0}`")]
    UndeclaredParameter(String),
    #[error("{0}")]
    Eval(String),
    #[error("{path}: {source}")]
    At { path: String, source: Box<Error> },
}

impl Error {
    /// Wraps the error with one more segment of the AST path.
    pub fn at(self, segment: impl Into<String>) -> Error {
        match self {
            Error::At { path, source } => Error::At { path: format!("{}/{}", segment.into(), path), source },
            other => Error::At { path: segment.into(), source: Box::new(other) },
        }
    }

    /// The error with all path annotations stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
