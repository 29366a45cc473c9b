use thiserror::Error;

/// Errors raised while validating couples and elements.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoupleError {
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("nonpositive weight at index {index}: {value}")]
    NonpositiveWeight { index: usize, value: f64 },
    #[error("exponent out of range: {value} (must lie in [1, inf])")]
    ExponentOutOfRange { value: f64 },
    #[error("index set must be nonempty")]
    EmptyIndexSet,
    #[error("non-finite entry at index {index}")]
    NonFiniteEntry { index: usize },
}

/// Errors raised by curve construction and evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("curve argument must be positive, got {0}")]
    NonpositiveArgument(f64),
    #[error("breakpoints must be strictly increasing and positive")]
    BadBreakpoints,
    #[error("curve values must be nonnegative and nondecreasing")]
    NotMonotone,
    #[error("slopes must be nonincreasing left to right (concavity)")]
    NotConcave,
    #[error("terminal slope must be nonnegative")]
    NegativeTerminalSlope,
    #[error("value at 0+ must be nonnegative, got {0}")]
    NegativeOrigin(f64),
    #[error("at least one point is required")]
    EmptyInput,
    #[error("stored slopes disagree with values at piece {0}")]
    SlopeMismatch(usize),
}

/// Errors raised by the K-functional solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum KError {
    #[error("t must be positive, got {0}")]
    NonpositiveT(f64),
    #[error("tolerance must be positive, got {0}")]
    NonpositiveTolerance(f64),
    #[error(transparent)]
    Couple(#[from] CoupleError),
    #[error("strategy `{strategy}` does not support this couple/exponent combination")]
    Unsupported { strategy: &'static str },
    #[error("no strategy named `{0}` is registered")]
    UnknownStrategy(String),
    #[error("solver did not converge: best bounds [{lower}, {upper}]")]
    NonConvergence { lower: f64, upper: f64 },
    #[error("exponents must agree for the equal-exponent form (p0 = {p0:?}, p1 = {p1:?})")]
    ExponentMismatch {
        p0: crate::couple::Exponent,
        p1: crate::couple::Exponent,
    },
}

/// Errors raised when a curve fails the admissibility clauses of realization.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealizeError {
    #[error("phi(0+) != 0 (got {0})")]
    NonzeroOrigin(f64),
    #[error("breakpoint {0} is not an integer")]
    NonIntegerBreakpoint(f64),
    #[error("curve must be eventually constant (terminal slope {0} != 0)")]
    NotEventuallyConstant(f64),
}

/// Errors raised by grid-function operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid step must be positive, got {0}")]
    NonpositiveStep(f64),
    #[error("a grid function needs at least two samples")]
    TooFewSamples,
    #[error("sample {index} is not finite")]
    NonFiniteSample { index: usize },
    #[error("the argument must be nonnegative, got {0}")]
    NegativeArgument(f64),
    #[error("t must be positive, got {0}")]
    NonpositiveT(f64),
    #[error("grids do not match")]
    GridMismatch,
}

/// Errors raised by subcouple, quotient, retract and extension machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error(
        "operator shape mismatch: {rows}x{cols} against couples of sizes {target_len}/{source_len}"
    )]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        source_len: usize,
        target_len: usize,
    },
    #[error("subset of kept indices must be nonempty")]
    EmptyKeepSet,
    #[error("index {0} is out of bounds for the ambient couple")]
    IndexOutOfBounds(usize),
    #[error("cannot kill every coordinate of the ambient couple")]
    KillsEverything,
    #[error("basis vectors must be linearly independent")]
    DependentBasis,
    #[error("spanned subcouples are supported up to dimension {max}, got {got}")]
    SpanTooLarge { max: usize, got: usize },
    #[error(transparent)]
    Couple(#[from] CoupleError),
    #[error(transparent)]
    K(#[from] KError),
    #[error(
        "extension precondition violated: |T a| = {lhs} > {rhs} = bound at the certificate element"
    )]
    PreconditionViolated { lhs: f64, rhs: f64 },
    #[error("feasible interval for the extension step is empty ([{lo}, {hi}])")]
    EmptyFeasibleInterval { lo: f64, hi: f64 },
}

/// Errors raised by the orbit machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("domination violated at t = {witness}: K(t,b) = {lhs} > {rhs} = K(t,a)")]
    DominationViolated { witness: f64, lhs: f64, rhs: f64 },
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("epsilon must be positive, got {0}")]
    NonpositiveEps(f64),
    #[error("samples must share one positive grid")]
    GridMismatch,
    #[error("samples must be nonnegative (entry {index} is {value})")]
    NegativeSample { index: usize, value: f64 },
    #[error(transparent)]
    Couple(#[from] CoupleError),
    #[error(transparent)]
    K(#[from] KError),
}

/// Errors raised by interpolation-norm computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterpError {
    #[error("theta must lie strictly between 0 and 1, got {0}")]
    ThetaOutOfRange(f64),
    #[error("q must lie in [1, inf], got {0}")]
    QOutOfRange(f64),
    #[error("operator must be a contraction in the exact category (norm bound {0} > 1)")]
    NotAContraction(f64),
    #[error("interpolation bound violated: norm ratio {ratio} exceeds 1")]
    InterpolationBoundViolated { ratio: f64 },
    #[error("equivalence ratio {ratio} at t = {t} falls outside the acceptance window")]
    WindowViolated { t: f64, ratio: f64 },
    #[error("vector must be nonincreasing and nonnegative")]
    NotMonotone,
    #[error("Lorentz exponents must satisfy 1 <= p0 < p1 <= inf")]
    BadLorentzExponents,
    #[error(transparent)]
    Couple(#[from] CoupleError),
    #[error(transparent)]
    K(#[from] KError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}
