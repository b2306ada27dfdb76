use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base {0} is out of range (expected 2..={max})", max = crate::base_digits::MAX_BASE)]
    InvalidBase(u32),

    #[error("value {value} does not fit in four base-{base} digits")]
    ValueOutOfRange { value: u64, base: u32 },

    #[error("digit {digit} is not a valid base-{base} digit")]
    DigitOutOfRange { digit: u32, base: u32 },

    #[error("({d}, {d_prime}) is not a canonical base-{base} difference pair")]
    InvalidPair { d: u32, d_prime: u32, base: u32 },

    #[error("operation requires {requirement}, got base {base}")]
    UnsupportedBase {
        base: u32,
        requirement: &'static str,
    },

    #[error("base mismatch: expected {expected}, got {actual}")]
    BaseMismatch { expected: u32, actual: u32 },

    #[error("orbit undetermined after {steps} steps")]
    Undetermined { steps: u64 },

    #[error("({p}, {q}) is not a row of {table}")]
    NotInTable { p: u32, q: u32, table: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
