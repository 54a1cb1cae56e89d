use thiserror::Error;

/// Every failure mode of the toolkit.
///
/// The `Display` form leads with the variant name so command-line users can
/// match on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ArityMismatch: expected arity {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("ArityTooSmall: arity {arity} is below the minimum of {min}")]
    ArityTooSmall { arity: usize, min: usize },
    #[error("VariableOutOfRange: variable {var} is outside 1..={n}")]
    VariableOutOfRange { var: u32, n: usize },
    #[error("RepeatedVariable: variable {var} occurs twice in one clause")]
    RepeatedVariable { var: u32 },
    #[error("InvalidPredicate: {0}")]
    InvalidPredicate(String),
    #[error("KindMismatch: expected a {expected} formula, found {found}")]
    KindMismatch { expected: &'static str, found: &'static str },
    #[error("InvalidParams: {0}")]
    InvalidParams(String),
    #[error("InsufficientVariables: n = {n} is smaller than arity k = {k}")]
    InsufficientVariables { n: usize, k: usize },
    #[error("PlantingStalled: accepted {accepted} clauses after {draws} draws")]
    PlantingStalled { draws: u64, accepted: usize },
    #[error("KNotPowerOfTwo: arity {0} is not a power of two")]
    KNotPowerOfTwo(usize),
    #[error("TooManyAux: {aux} auxiliary variables exceed the enumeration budget of {limit}")]
    TooManyAux { aux: usize, limit: usize },
    #[error("InvalidEquation: {0}")]
    InvalidEquation(String),
    #[error("RhoOutOfRange: rho = {0} is outside (0, 1]")]
    RhoOutOfRange(String),
    #[error("EmptyFormula: the formula has no clauses")]
    EmptyFormula,
    #[error("QuotaMismatch: {selected} clauses selected but the cluster quota is {quota}")]
    QuotaMismatch { selected: usize, quota: usize },
    #[error("InconsistentWitness: clause {clause} is not satisfied by the assignment")]
    InconsistentWitness { clause: usize },
    #[error("Unbalanceable: side holds {side} vertices, cannot reach {half} using {spare} balancer vertices")]
    Unbalanceable { side: usize, half: usize, spare: usize },
    #[error("TooLarge: {size} exceeds the exhaustion limit {limit} ({what})")]
    TooLarge { what: &'static str, size: usize, limit: usize },
    #[error("OddVertexCount: graph has {0} vertices")]
    OddVertexCount(usize),
    #[error("InvalidGraph: {0}")]
    InvalidGraph(String),
    #[error("EmptySet: the vertex set is empty")]
    EmptySet,
    #[error("EmptyComplement: the vertex set is the whole graph")]
    EmptyComplement,
    #[error("NoEdges: the graph has no edges")]
    NoEdges,
    #[error("ParamOrderViolated: gamma = {gamma} must be strictly below beta = {beta}")]
    ParamOrderViolated { beta: String, gamma: String },
    #[error("InvalidTrials: at least one trial is required")]
    InvalidTrials,
    #[error("Parse: line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("Io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
