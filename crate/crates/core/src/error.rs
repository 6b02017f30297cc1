use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial is constant in x{0}")]
    ConstantInVariable(usize),

    #[error("curves share a common component")]
    CommonComponent,

    #[error("multiplicity votes disagree: {0}")]
    MultiplicityDisagreement(String),

    #[error("singular transformation")]
    SingularTransform,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("determinant of the pencil vanishes identically")]
    DegeneratePencil,

    #[error("quartic is not reduced (repeated factor)")]
    NonReduced,

    #[error("point fails node residual gates: |f| = {f:.3e}, |grad f| = {grad:.3e}")]
    ResidualGate { f: f64, grad: f64 },

    #[error("expected rank {expected}, found rank {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("{0}")]
    NotFound(String),

    #[error("input flagged transversal but only {0} nodes were found")]
    MissingNodes(usize),

    #[error("node-finding paths disagree: {0}")]
    PathDisagreement(String),

    #[error("identity check failed: {what} (residual {residual:.3e})")]
    IdentityFailed { what: String, residual: f64 },

    #[error("unexpected dimension of {what}: {dim}")]
    NullSpaceDimension { what: String, dim: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("repeated roots")]
    RepeatedRoots,

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("[{stage}] {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Innermost error with stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn stage(&self) -> Option<&'static str> {
        match self {
            Error::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(stage))
    }
}
