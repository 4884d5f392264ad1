use alloc::string::String;
use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{m} is not cube-free")]
    NotCubeFree { m: i64 },

    #[error("{m} does not define a cubic field")]
    DegenerateInput { m: i64 },

    #[error("UnsupportedBasisCase: m = {m} satisfies m^2 = 1 (mod 9)")]
    UnsupportedBasisCase { m: i64 },

    #[error("BadPrime: {p} is not a prime >= 5")]
    BadPrime { p: u64 },

    #[error("{c} is not coprime to {p}")]
    NotCoprime { c: BigInt, p: u64 },

    #[error("elements are linearly dependent over Z")]
    NotFullRank,

    #[error("malformed triple (i={i}, j={j}, beta={beta}): beta must lie in [0, p^i)")]
    MalformedTriple { i: u32, j: u32, beta: BigInt },

    #[error("triple (i={i}, j={j}, beta={beta}) is not an order: {reason}")]
    NotAnOrder {
        i: u32,
        j: u32,
        beta: BigInt,
        reason: String,
    },

    #[error("({x}, {y}) is not a unit value of the index form")]
    BadWitness { x: BigInt, y: BigInt },

    #[error("solution ({u}, {v}, {n}) matches no valuation case")]
    ClassificationGap { u: BigInt, v: BigInt, n: u32 },

    #[error("solution ({u}, {v}, {solution_n}) links to {count} orders of index p^{n}")]
    MultiplicityViolation {
        u: BigInt,
        v: BigInt,
        solution_n: u32,
        n: u32,
        count: usize,
    },

    #[error("census inconsistency: {0}")]
    CensusInconsistent(String),

    #[error("scan over beta < p^{i} is too large (n = {n} exceeds the scan limit {limit})")]
    ScanTooLarge { n: u32, i: u32, limit: u32 },

    #[error("count mismatch at n = {n}: formula {formula}, scan {scan}")]
    CountMismatch {
        n: u32,
        formula: BigInt,
        scan: BigInt,
    },
}

impl Error {
    /// Errors caused by rejected input, as opposed to a failed internal
    /// cross-check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NotCubeFree { .. }
                | Error::DegenerateInput { .. }
                | Error::UnsupportedBasisCase { .. }
                | Error::BadPrime { .. }
                | Error::NotCoprime { .. }
                | Error::NotFullRank
                | Error::MalformedTriple { .. }
                | Error::BadWitness { .. }
                | Error::ScanTooLarge { .. }
        )
    }
}
