use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed embedding: {0}")]
    MalformedEmbedding(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid boundary path: {0}")]
    InvalidPath(String),

    #[error("paths do not share both endpoints")]
    EndpointMismatch,

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("terminal {0} does not occur in the cyclic order")]
    TerminalMissing(usize),

    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),

    #[error("grid dimensions out of range: m = {m}, n = {n} (need m >= 3, n >= 1)")]
    GridDimensions { m: usize, n: usize },

    #[error("pattern is not cross-free")]
    NotCrossFree,

    #[error("pattern has {k} elements but the grid has only {n} rings")]
    TooManyPairs { k: usize, n: usize },

    #[error("terminal {0} is not on the routing boundary cycle")]
    OffBoundary(usize),

    #[error("set is not contained in the ground set: vertex {0}")]
    NotInGround(usize),

    #[error("ground sets of the two gammoids do not match: {0}")]
    GroundMismatch(String),

    #[error("buffer hypothesis violated at block {block}: {reason}")]
    BufferHypothesis { block: usize, reason: String },

    #[error("invalid buffer partition: {0}")]
    InvalidPartition(String),

    #[error("rerouting failed: {0}")]
    Reroute(String),

    #[error("vertex {0} is a terminal")]
    TerminalVertex(usize),

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("not a valid linkage: {0}")]
    InvalidLinkage(String),

    #[error("rank deficient: {need} disjoint paths requested, only {have} exist")]
    RankDeficient { need: usize, have: usize },

    #[error("invalid insulation: {0}")]
    InvalidInsulation(String),

    #[error("surface has {0} holes; the bound is defined for surfaces without boundary")]
    HasBoundary(usize),

    #[error("missing constant parameter C (must be positive)")]
    MissingConstant,

    #[error("threshold must be at least 1")]
    BadThreshold,

    #[error("graph too large for this operation: {0} vertices (limit {1})")]
    TooLarge(usize, usize),
}
