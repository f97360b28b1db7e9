use thiserror::Error;

/// Errors surfaced by the engine.
///
/// Hypothesis failures (bad or out-of-scope input) are distinguished from
/// internal errors so that callers can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is not weighted-homogeneous: offending monomials {0:?}")]
    NotWeightedHomogeneous(Vec<String>),

    #[error("polynomial is not reduced: ker(df∧) on 1-forms is nonzero in degree {degree} < {expected}")]
    NotReduced { degree: usize, expected: usize },

    #[error("window too small: need internal degrees up to {needed}, window caps at {have}")]
    WindowTooSmall { needed: usize, have: usize },

    #[error("nonisolated beyond supported rows: H^{j}(Ω•, df∧) ≠ 0 at internal degree {degree}")]
    NonIsolatedBeyondSupportedRows { j: usize, degree: usize },

    #[error("three-row data present: H^{j}(Ω•, df∧) ≠ 0 at internal degree {degree}; rerun with the three-row mode")]
    NeedsThreeRow { j: usize, degree: usize },

    #[error("saturation bound too small: μ' nonzero at degree {degree}, within {margin} of bound {bound}")]
    BoundTooSmall {
        degree: usize,
        margin: usize,
        bound: usize,
    },

    #[error("μ_k not stabilized on the top {span} degrees of the window (last values {tail:?})")]
    MuNotStabilized { span: usize, tail: Vec<usize> },

    #[error("arrangement is not reduced: forms {0} and {1} are proportional")]
    NotReducedArrangement(usize, usize),

    #[error("arrangement is not essential (covector rank {rank} < ambient dimension {n}); essentialize first, e.g. via the coordinate Künneth split")]
    NotEssential { rank: usize, n: usize },

    #[error("residues are required for this certificate but were not provided")]
    MissingResidues,

    #[error("weights must be positive rationals, got {0}")]
    BadWeight(String),

    #[error("weights do not admit an isolated singularity: Poincaré series division leaves remainder")]
    NotIsolatedWeights,

    #[error("modular runs disagree ({0}); rerun with exact arithmetic")]
    PrimeConsensusFailed(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    /// True for errors caused by inputs that violate the stated hypotheses,
    /// as opposed to bugs. CLI maps these to exit code 2, the rest to 1.
    pub fn is_hypothesis_failure(&self) -> bool {
        !matches!(
            self,
            Error::InternalInconsistency(_) | Error::PrimeConsensusFailed(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
