use thiserror::Error;

/// Errors raised by net parsing, set operations, chain validation and
/// mollifier construction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("comb pieces overlap near 0: {0}")]
    Overlap(String),
    #[error("cannot resolve eventual sign: {0}")]
    IndeterminateSign(String),
    #[error("comb patterns have incompatible bases: {0}")]
    IncompatiblePatterns(String),
    #[error("operands use different backends or grids")]
    BackendMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("family is not sharply bounded")]
    NotSharplyBounded,
    #[error("clipped family is eventually empty (bound precondition failed)")]
    EmptyClip,
    #[error("family is eventually empty")]
    EmptyFamily,
    #[error("patterns do not partition (0, eta0): {0}")]
    NotAPartition(String),
    #[error("unsupported shape combination: {0}")]
    UnsupportedShapeCombo(String),
    #[error("no bound exponent available for chain entry {0}; the bound sequence cannot be dropped")]
    MissingBound(usize),
    #[error("chain is not decreasing at entry {0}")]
    ChainNotDecreasing(usize),
    #[error("chain entry {0} is eventually empty")]
    EmptyEntry(usize),
    #[error("ball chain is not nested at index {0}")]
    NotNested(usize),
    #[error("sequence is not sharp-Cauchy")]
    NotCauchy,
    #[error("sequence too short to certify depth {0}")]
    SequenceTooShort(usize),
    #[error("evaluation point is outside the domain family")]
    OutsideDomain,
    #[error("no continuity modulus m <= {0} found")]
    NoModulusFound(u32),
    #[error("expression undefined on its domain: {0}")]
    DomainEvaluation(String),
    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),
    #[error("no feasible scale eta on the search grid")]
    BudgetInfeasible,
    #[error("moment precondition failed at level {level}: |moment {k}| = {value:e}")]
    PreconditionMomentFailure { level: u32, k: u32, value: f64 },
    #[error("derivative magnitude overflowed at order {0}")]
    DerivativeOverflow(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
