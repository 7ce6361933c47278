use thiserror::Error;

use crate::structure::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),

    #[error("arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("element {element} out of range for a universe of size {n}")]
    OutOfRange { element: usize, n: usize },

    #[error("duplicate tuple {tuple:?} in relation `{symbol}`")]
    DuplicateTuple { symbol: String, tuple: Vec<u32> },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("invalid structure: {0}")]
    Invalid(Violation),

    #[error("enumeration needs 2^{bits} candidates, above the cap of {cap}")]
    CapExceeded { bits: u64, cap: u64 },

    #[error("basis of {size} monomials exceeds the cap of {cap}")]
    BasisCapExceeded { size: usize, cap: usize },

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("polynomial parse error at byte {pos}: {message}")]
    PolyParse { pos: usize, message: String },

    #[error("Z-variable z[{0}] is not allowed here")]
    ZVariable(u32),

    #[error("variable {0} does not belong to this signature and universe")]
    ForeignVariable(String),

    #[error("no substitution given for z[{0}]")]
    MissingSubstitution(u32),

    #[error("{line}:{column}: {message}")]
    FormulaParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("free variable `{0}`")]
    FreeVariable(String),

    #[error("polynomial is not symmetric")]
    NotSymmetric,

    #[error("polynomial is not structural")]
    NotStructural,

    #[error("formula is not isomorphism-invariant")]
    NotInvariant,

    #[error(
        "no rational solution for a symmetric structural polynomial (the generation theorem would fail here): {0}"
    )]
    NoRationalSolution(String),

    #[error("only a non-integral rational solution was found: {0}")]
    RationalOnly(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
