use alloc::string::String;
use alloc::vec::Vec;

/// Failure modes shared by every module of the kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("exponent {0:?} lies outside the window")]
    ExponentOutsideWindow(Vec<i64>),
    #[error("formal product is not summable in variable `{0}`")]
    NonSummableProduct(String),
    #[error("no valid window remains for variable `{0}`")]
    EmptyWindow(String),
    #[error("variable `{0}` needs exact-complete support for this operation")]
    WindowUnsupported(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("malformed structure: {0}")]
    MalformedStructure(String),
    #[error("dimension cap exceeded at {0}")]
    CapExceeded(usize),
    #[error("D is not nilpotent")]
    NonNilpotentD,
    #[error("not a derivation: {0}")]
    NotADerivation(String),
    #[error("invalid cocycle: {0}")]
    CocycleInvalid(String),
    #[error("invalid grading: {0}")]
    GradingInvalid(String),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("operator sequence {0:?} is not compatible within the bound")]
    NotCompatible(Vec<usize>),
}

pub type Result<T> = core::result::Result<T, Error>;
