use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported modulus {p}^{n}: need a prime 3 < p <= 97 and n in {{1, 2}}")]
    UnsupportedModulus { p: u32, n: u32 },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("denominator is not a submodule of the numerator")]
    NotASubmodule,

    #[error("matrix is not invertible modulo {0}")]
    NotInvertible(u32),

    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("linear system has {unknowns} unknowns, over the budget of {budget}")]
    LinearBudgetExceeded { unknowns: usize, budget: usize },

    #[error("element is not congruent to the identity modulo p")]
    NotReductionKernel,

    #[error("not a subgroup of the ambient group")]
    NotASubgroup,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("cocycle values are not fixed by the normal subgroup")]
    ValuesNotFixed,

    #[error("value table is not a cocycle")]
    NotACocycle,

    #[error("local cohomology characterizations disagree ({per_element:?} vs {cyclic:?})")]
    CharacterizationMismatch {
        per_element: Vec<u64>,
        cyclic: Vec<u64>,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
