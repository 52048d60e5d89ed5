use thiserror::Error;

/// Every failure the engine reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u64),
    #[error("cannot parse field element `{0}`")]
    Parse(String),
    #[error("denominator vanishes modulo {0}")]
    DenominatorVanishes(u64),
    #[error("radicand is zero")]
    ZeroRadicand,
    #[error("tower depth would exceed {0}")]
    TowerTooDeep(usize),
    #[error("field has no real embedding")]
    NoEmbedding,
    #[error("elements live in unrelated fields")]
    FieldMismatch,
    #[error("zero argument")]
    ZeroArgument,
    #[error("trace form of zero scalar")]
    ZeroScalar,
    #[error("circle is degenerate (c0 = 0)")]
    DegenerateCircle,
    #[error("points do not determine a unique circle")]
    UnderDetermined,
    #[error("radius squared is not a square in the working field")]
    SquareRootUnavailable,
    #[error("parameter hits a pole (1 + t^2 = 0)")]
    PoleAtT,
    #[error("centers are collinear")]
    CollinearCenters,
    #[error("input circles {0} and {1} are tangent")]
    TangentPair(usize, usize),
    #[error("a tangent circle has infinite radius")]
    InfiniteRadius,
    #[error("solution is concentric with input {0}")]
    ConcentricDegeneracy(usize),
    #[error("solution circle is degenerate")]
    DegenerateSolution,
    #[error("local index vanishes (non-transverse point)")]
    ZeroIndex,
    #[error("system has solutions at infinity")]
    SolutionsAtInfinity,
    #[error("system is not zero-dimensional")]
    NotZeroDimensional,
    #[error("global form is degenerate (rank {rank} of {dim})")]
    DegenerateForm { rank: usize, dim: usize },
    #[error("t = 0 roots coincide for sign class {0}; perturb the configuration")]
    DegenerateMerge(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
