use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IndexError {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("convolution diverges: {0}")]
    ConvolutionDiverges(String),
    #[error("no comb solution: {0}")]
    NoCombSolution(String),
    #[error("not representable in the density class: {0}")]
    NotRepresentable(String),
    #[error("test function leaves the validity window: {0}")]
    WindowViolation(String),
    #[error("germ is singular at {0}")]
    GermSingular(String),
    #[error("reduction unavailable: {0}")]
    ReductionUnavailable(String),
    #[error("not integrable: {0}")]
    NonIntegrable(String),
    #[error("symbol is not of Clifford type: {0}")]
    NotCliffordType(String),
    #[error("unknown fixed-set model: {0}")]
    UnknownFixedSetModel(String),
    #[error("right factor lacks the order-0 flag")]
    OrderFlagMissing,
    #[error("critical set is not compact: {0}")]
    NonCompactCriticalSet(String),
    #[error("contact transversality fails at {0}")]
    ContactTransversalityFails(String),
    #[error("unsupported bundle: {0}")]
    UnsupportedBundle(String),
    #[error("cutoff too small: {0}")]
    CutoffTooSmall(String),
    #[error("did not converge up to T = {t_max}: {trace}")]
    NonConvergent { t_max: f64, trace: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, IndexError>;
