use thiserror::Error;

/// Errors raised by graph construction, the matching engine, the SAT front
/// end and the reductions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(i64),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(i64, i64),
    #[error("edge endpoint {0} is not a vertex of the graph")]
    VertexOutOfRange(i64),
    #[error("vertex id {0} appears more than once")]
    DuplicateVertexId(i64),
    #[error("vertex {0} has no coordinate")]
    MissingCoordinate(i64),
    #[error("vertices {0} and {1} share the coordinate ({2}, {3})")]
    DuplicateCoordinate(i64, i64, i64, i64),
    #[error("edge {{{0}, {1}}} joins two vertices whose x+y has equal parity")]
    ParityViolation(i64, i64),
    #[error("edge {{{0}, {1}}} lies inside one side of the bipartition")]
    InvalidBipartition(i64, i64),
    #[error("bipartition has {got} entries for a graph with {expected} vertices")]
    BipartitionLength { expected: usize, got: usize },

    #[error("not a matching: {0}")]
    NotAMatching(String),
    #[error("matching of size {size} is not maximum (matching number is {beta})")]
    NotMaximum { size: usize, beta: usize },
    #[error("matching of size {size} is not perfect on {vertices} vertices")]
    NotPerfect { size: usize, vertices: usize },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("more than {0} maximum matchings exist")]
    LimitExceeded(usize),

    #[error("malformed graph file: {0}")]
    GraphFormat(String),
    #[error("line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("clause {clause} does not have exactly two literals")]
    ClauseWidth { clause: usize },
    #[error("clause {clause} repeats variable x{var}")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("clause {clause} duplicates clause {first}")]
    DuplicateClause { clause: usize, first: usize },
    #[error("literal refers to x{var} but the instance has {n} variables")]
    LiteralOutOfRange { var: usize, n: usize },
    #[error("assignment has {got} bits, instance has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("{0} variables exceed the brute-force limit of {1}")]
    TooManyVariables(usize, usize),
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),

    #[error("instance is not strict: {0}")]
    NotStrict(String),
    #[error("threshold K = {k} outside 1..={m}")]
    ThresholdOutOfRange { k: usize, m: usize },
    #[error("matching mixes both edge classes on the cycle of x{0}")]
    MixedClasses(usize),
    #[error("clause {clause}: residual {got} under setting {setting}, expected {expected}")]
    TableMismatch {
        clause: usize,
        setting: String,
        got: usize,
        expected: usize,
    },
    #[error("clause index {0} out of range")]
    ClauseOutOfRange(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
