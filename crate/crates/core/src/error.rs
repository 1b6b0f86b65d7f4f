use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} closes a cycle")]
    CycleDetected(usize, usize),
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("tree has no edges")]
    EmptyTree,
    #[error("forest is not connected")]
    NotATree,
    #[error("more than {cap} homomorphisms")]
    ExplosionGuard { cap: usize },
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("separation oracle returned a row the candidate already satisfies")]
    OracleInconsistency,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph is not a forest")]
    NotAForest,
    #[error("line {line}: malformed entry `{token}`")]
    MalformedEntry { line: usize, token: String },
    #[error("line {line}: ambiguous edge token `{token}`")]
    AmbiguousEdgeToken { line: usize, token: String },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("{vertices} vertices exceeds the cap of {cap}")]
    SizeGuard { vertices: u128, cap: u64 },
    #[error("about {edges} edges exceeds the cap of {cap}")]
    EdgeGuard { edges: u128, cap: u64 },
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
