use alloc::string::String;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { pos: usize, name: char },
    #[error("exponent overflow at byte {pos}")]
    ExponentOverflow { pos: usize },
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: u64, cap: u32 },
    #[error("zero polynomial has no leading part")]
    ZeroPolynomial,
    #[error("zero class has no degree")]
    ZeroElement,
    #[error("matrix does not preserve xt - yz")]
    NotOrthogonal,
    #[error("polynomial uses variables outside {allowed}")]
    VariableViolation { allowed: &'static str },
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("relation fx*ft - fy*fz = 1 violated (internal error)")]
    InternalRelationViolation,
    #[error("weights must be negative")]
    WeightNotNegative,
    #[error("weights violate a0 + a3 = a1 + a2")]
    BalanceViolated,
    #[error("pair is algebraically dependent")]
    DependentPair,
    #[error("argument is constant")]
    ConstantArgument,
    #[error("pair is critically resonant; the resonant bound does not apply")]
    CriticallyResonant,
    #[error("hypothesis of the derivative inequality fails")]
    HypothesisFails,
    #[error("pair of slots is not admissible for a type II vertex")]
    InadmissiblePair,
    #[error("vertex not present in the explored set")]
    VertexAbsent,
    #[error("a corner has non-negative value")]
    NonNegativeCorner,
    #[error("conjugated map does not fix [x]")]
    ConjugatorInvalid,
    #[error("weights do not satisfy the asymmetry condition")]
    ConditionSevenViolated,
    #[error("sequence too short for classification (need at least {needed})")]
    SequenceTooShort { needed: usize },
    #[error("sequence does not grow exponentially")]
    NotExponential,
    #[error("automorphism is affine")]
    AffineInput,
    #[error("invalid scalar `{0}`")]
    BadScalar(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownVariable { .. } => "UnknownVariable",
            Error::ExponentOverflow { .. } => "ExponentOverflow",
            Error::DegreeCapExceeded { .. } => "DegreeCapExceeded",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::ZeroElement => "ZeroElement",
            Error::NotOrthogonal => "NotOrthogonal",
            Error::VariableViolation { .. } => "VariableViolation",
            Error::ZeroScalar => "ZeroScalar",
            Error::UnknownGenerator(_) => "UnknownGenerator",
            Error::InternalRelationViolation => "InternalRelationViolation",
            Error::WeightNotNegative => "WeightNotNegative",
            Error::BalanceViolated => "BalanceViolated",
            Error::DependentPair => "DependentPair",
            Error::ConstantArgument => "ConstantArgument",
            Error::CriticallyResonant => "CriticallyResonant",
            Error::HypothesisFails => "HypothesisFails",
            Error::InadmissiblePair => "InadmissiblePair",
            Error::VertexAbsent => "VertexAbsent",
            Error::NonNegativeCorner => "NonNegativeCorner",
            Error::ConjugatorInvalid => "ConjugatorInvalid",
            Error::ConditionSevenViolated => "ConditionSevenViolated",
            Error::SequenceTooShort { .. } => "SequenceTooShort",
            Error::NotExponential => "NotExponential",
            Error::AffineInput => "AffineInput",
            Error::BadScalar(_) => "BadScalar",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
