use crate::C64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    Document(String),
    #[error("dangling reference: {context} refers to unknown vertex `{id}`")]
    DanglingReference { context: String, id: String },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("edge {edge} has non-positive or non-finite length {length}")]
    InvalidLength { edge: usize, length: f64 },
    #[error("vertex `{vertex}` has degree 0")]
    IsolatedVertex { vertex: String },
    #[error("Robin coupling requires degree 1, vertex `{vertex}` has degree {degree}")]
    RobinDegree { vertex: String, degree: usize },
    #[error("coupling matrix at vertex `{vertex}` is {rows}x{cols}, vertex degree is {degree}")]
    CouplingSize { vertex: String, rows: usize, cols: usize, degree: usize },
    #[error("coupling matrix at vertex `{vertex}` is not unitary (max |U^*U - I| = {deviation:e})")]
    NonUnitary { vertex: String, deviation: f64 },
    #[error("effective-coupling pole at k = {k}")]
    EffectiveCouplingPole { k: C64 },
    #[error("sigma pole at k = {k}")]
    SigmaPole { k: C64 },
    #[error("matrix is singular or ill-conditioned (condition estimate {condition:e})")]
    Singular { condition: f64 },
    #[error("orbit explosion: more than {cap} cycles or pseudo-orbits")]
    OrbitExplosion { cap: usize },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid search region: {0}")]
    InvalidRegion(String),
    #[error("function vanishes on the contour boundary after {attempts} nudges")]
    BoundaryZero { attempts: usize },
    #[error("argument principle did not resolve an integer winding (last estimate {winding})")]
    ContourUnresolved { winding: f64 },
    #[error("Newton iteration did not converge from {start} (residual {residual:e})")]
    NonConvergence { start: C64, residual: f64 },
    #[error("Newton iteration diverged from {start}")]
    Divergence { start: C64 },
    #[error("zero count mismatch in cell: expected {expected}, subcells sum to {found}")]
    CountMismatch { expected: i64, found: i64 },
    #[error("k = {k} is not a root at t = 0 (normalized residual {residual:e})")]
    NotARoot { k: C64, residual: f64 },
    #[error("k0 = {k} is not real, Fermi data requires an embedded eigenvalue")]
    NotEmbedded { k: C64 },
    #[error("the k-dot coefficient vanishes at k0 = {k} (degenerate eigenvalue)")]
    DegenerateCoefficient { k: C64 },
    #[error("corollary inapplicable: {0}")]
    CorollaryInapplicable(String),
    #[error("invalid length schedule: {0}")]
    InvalidSchedule(String),
    #[error("trajectory lost at t = {t} (step below {min_step:e})")]
    StepUnderflow { t: f64, min_step: f64 },
    #[error("insufficient data: need {needed} usable windows, have {found}")]
    InsufficientData { needed: usize, found: usize },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Document(e.to_string())
    }
}
