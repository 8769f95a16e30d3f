use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("arity mismatch: expected {expected} substitutions, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VarIndexOutOfRange { index: usize, nvars: usize },
    #[error("exponent vector of length {got} in a ring with {nvars} variables")]
    ExponentLength { got: usize, nvars: usize },
    #[error("matrix is {rows}x{cols}, a square matrix is required")]
    NonSquare { rows: usize, cols: usize },
    #[error("system has {components} components in {nvars} variables, a square system is required")]
    NonSquareSystem { components: usize, nvars: usize },
    #[error("degree {degree} exceeds the declared bound {bound}")]
    DegreeBound { degree: u32, bound: u32 },
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("system is not normalized: {0}")]
    NotNormalized(String),
    #[error("linear part is singular (determinant {0})")]
    SingularLinearPart(String),
    #[error("split index {n1} out of range for dimension {dim}")]
    SplitOutOfRange { n1: usize, dim: usize },
    #[error("partial inverse is not certified")]
    Uncertified,
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("degree {0} is below the required minimum")]
    DegreeTooLow(u32),
    #[error("system has a nonzero constant part")]
    ConstantPart,
    #[error("the qft reduction requires vanishing quadratic couplings")]
    QuadraticCouplings,
    #[error("dimension {0} is not of the form n(n+1)")]
    NotReducedDimension(usize),
    #[error("coupling index out of range: {0}")]
    CouplingIndex(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
