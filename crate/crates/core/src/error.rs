use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NonPrime(u64),
    #[error("degree out of range: {0}")]
    DegreeOutOfRange(String),
    #[error("{what} of size {size} exceeds the budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {element} does not lie in the subfield of degree {degree}")]
    NotInSubfield { element: u32, degree: u32 },
    #[error("operation is undefined in characteristic 2")]
    EvenCharacteristic,
    #[error("{d} does not divide {n}")]
    NotADivisor { d: u32, n: u32 },
    #[error("the zero functional has no hyperplane kernel")]
    ZeroFunctional,
    #[error("subspace contains no nonzero square")]
    NoNonzeroSquare,
    #[error("expected a subspace of dimension {expected}, got {actual}")]
    WrongDimension { expected: usize, actual: usize },
    #[error("invariant requires odd q and even n")]
    WrongParity,
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("subspace has dimension 0")]
    ZeroDimension,
    #[error("subspace dimension {d} outside the supported range 1..={max}")]
    DimensionOutOfRange { d: usize, max: usize },
    #[error("more than {0} maximal cliques")]
    CapExceeded(usize),
    #[error("vertex set is not a maximal clique")]
    NotMaximal,
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("time limit exceeded")]
    TimeLimit,
    #[error("parse error: {0}")]
    Parse(String),
}
