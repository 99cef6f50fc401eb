use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(
        "n = {n} exceeds the enumeration cap of {cap}; raise the cap explicitly to enumerate S_{n}"
    )]
    EnumerationCap { n: usize, cap: usize },

    #[error("{n} exceeds {cap}, the cap for direct enumeration of A(S; m+k); use a_coefficients_from_b instead")]
    DirectEnumerationCap { n: usize, cap: usize },

    #[error("enumeration cap {0} is above the supported maximum of {max}", max = crate::permtools::EnumerationCap::HARD_LIMIT)]
    CapTooLarge(usize),

    #[error("invalid permutation {0:?}: must be a rearrangement of 1..n")]
    InvalidPermutation(Vec<usize>),

    #[error("invalid position set {0:?}: elements must be positive and strictly increasing")]
    InvalidPositionSet(Vec<usize>),

    #[error("cannot parse position set {0:?}: expected comma-separated positive integers")]
    PositionSetParse(String),

    #[error("cannot parse polynomial {0:?}")]
    PolynomialParse(String),

    #[error("the descent set must be nonempty")]
    EmptySet,

    #[error("max(S) = {max} must be below n = {n}")]
    SetExceedsSize { max: usize, n: usize },

    #[error("multinomial parts sum to {sum}, expected {n}")]
    PartsSum { sum: usize, n: usize },

    #[error("{set} is not {n}-admissible")]
    NotAdmissible { set: String, n: usize },

    #[error("sequence entry {0} has a negative coefficient")]
    NegativeEntry(usize),

    #[error("max_m = {max_m} exceeds the scan bound of {bound}")]
    ScanBound { max_m: usize, bound: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
