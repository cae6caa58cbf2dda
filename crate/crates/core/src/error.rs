use crate::arcs::VerifyFailure;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("no modulus of degree {0} satisfies the requested constraints")]
    NotFound(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("sub-degree {d} does not divide extension degree {m}")]
    BadSubfield { d: u32, m: u32 },
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("the supplied map does not define a scattered set: {0}")]
    NotScattered(String),
    #[error("set size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("lift point does not give a complement of the hyperplane at infinity: {0}")]
    BadLift(String),
    #[error("not a translation arc with respect to the given line: {0}")]
    NotTranslation(String),
    #[error("field modulus unsuitable: {0}")]
    BadField(String),
    #[error("not an o-polynomial: {0}")]
    NotOPolynomial(String),
    #[error("cone hypothesis violated: {0}")]
    BadGeometry(String),
    #[error("elation pre-image or image lies on the axis")]
    DegenerateElation,
    #[error("arc has the wrong type for this operation: {0}")]
    WrongType(String),
    #[error("objects are defined over different fields")]
    FieldMismatch,
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(VerifyFailure),
}

pub type Result<T> = std::result::Result<T, Error>;
