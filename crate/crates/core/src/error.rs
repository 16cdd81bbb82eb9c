use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("reducible modulus for extension field")]
    ReducibleModulus,

    #[error("mismatched ring handles")]
    MismatchedRings,

    #[error("element is not a unit")]
    NotAUnit,

    #[error("p equals the ring characteristic")]
    PEqualsCharacteristic,

    #[error("pair is not unimodular")]
    NotUnimodular,

    #[error("tuple is not in general position")]
    TupleNotGeneralPosition,

    #[error("element is not admissible")]
    NotAdmissible,

    #[error("enumeration guard exceeded: {what} has size {size}, limit {limit}")]
    GuardExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("map does not descend to the presented quotients")]
    IncompatibleMap,

    #[error("five-term map is not well defined: relation {index} maps to a nonzero element")]
    PhiNotWellDefined { index: usize },

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("determinant is not 1")]
    NotSpecialLinear,
}
