use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid coefficient field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomials live in different rings: {0}")]
    RingMismatch(String),
    #[error("characteristic mismatch: {0} vs {1}")]
    CharacteristicMismatch(u32, u32),
    #[error("zero polynomial in divisor list at position {0}")]
    ZeroDivisor(usize),
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("ideal is not homogeneous")]
    NonHomogeneous,
    #[error("the presentation defines the zero ring")]
    ZeroRing,
    #[error("inverted element {0} is zero in the quotient")]
    InvertedIsZero(String),
    #[error("inverted element {0} does not map to a unit")]
    NotAUnit(String),
    #[error("not a ring homomorphism: relation {0} maps to nonzero {1}")]
    NotAHomomorphism(String, String),
    #[error("wrong number of images: expected {expected}, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("not smooth: Fitting ideal F_{index} = ({ideal}) is not the unit ideal")]
    NotSmooth { index: usize, ideal: String },
    #[error("smoothness in characteristic {0} needs an explicit separability assertion")]
    SeparabilityRequired(u32),
    #[error("module of differentials is projective but no free basis was found")]
    NotFree,
    #[error("not finite: {0}")]
    NotFinite(String),
    #[error("no free module basis certified for the finite map")]
    NoFreeBasis,
    #[error("not Cohen-Macaulay: Ext^i nonzero for i in {0:?}")]
    NotCohenMacaulay(Vec<usize>),
    #[error("dual is not concentrated in a single degree: nonzero at {0:?}")]
    NotConcentrated(Vec<i64>),
    #[error("base change is not exact: Tor_{0} is nonzero")]
    NotTorIndependent(usize),
    #[error("module is not graded and the ideal is not contained in the irrelevant ideal")]
    NotGradable,
    #[error("{0}")]
    Shape(String),
    #[error("trace is not integral: {0}")]
    Integrality(String),
    #[error("{0} is a zero divisor")]
    ZeroDivisorElement(String),
    #[error("not a localization map")]
    NotLocalization,
    #[error("levels are not related in the tower: {0}")]
    UnrelatedLevels(String),
    #[error("trace oracles disagree: {0} vs {1}")]
    OracleMismatch(String, String),
    #[error("base ring of a tower must be a domain")]
    NotADomain,
}
