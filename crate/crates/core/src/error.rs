use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not skew-symmetric (max deviation {deviation:e})")]
    NotSkew { deviation: f64 },
    #[error("matrix is not involutory (max |P^2 - I| = {deviation:e})")]
    NotInvolutory { deviation: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("vector length {len} is not valid for {what}")]
    BadLength { len: usize, what: &'static str },
    #[error("pair mixes a symmetric and a skew-symmetric matrix")]
    MixedSymmetryClass,
    #[error("matrix is neither symmetric nor skew-symmetric")]
    NoSymmetryClass,
    #[error("matrices do not commute (||AB - BA||_F = {commutator:e})")]
    NotCommuting { commutator: f64 },
    #[error("no sign conjugation embeds the skew compression in the symmetric one")]
    NoEmbedding,
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid rank: {0}")]
    BadRank(String),
    #[error("invalid band index: {0}")]
    BadBandIndex(String),
    #[error("invalid moved entry: {0}")]
    BadMoveIndex(String),
    #[error("precondition failed: {0}")]
    PreconditionFail(String),
    #[error("mu exceeded 2^60 without reaching the target verdict")]
    MuOverflow,
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("generated matrix violates its family contract: {0}")]
    ContractViolation(String),
    #[error("leading block is singular or not positive definite")]
    LeadingBlockNotPd,
    #[error("value is not an exact rational: {0}")]
    NotRational(String),
    #[error("certificate fails at stage `{stage}`: {detail}")]
    CertificateFails { stage: String, detail: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
