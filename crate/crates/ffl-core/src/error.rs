use alloc::string::String;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {0} exceeds 2^16")]
    FieldTooLarge(u64),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("requires a non-constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("operands over different fields (q={0} and q={1})")]
    FieldMismatch(u32, u32),
    #[error("modulus is not square-full")]
    NotSquareFull,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("trivial character not accepted here")]
    TrivialCharacter,
    #[error("character is not primitive")]
    NotPrimitive,
    #[error("wrong parity: expected {0} character")]
    WrongParity(&'static str),
    #[error("pole at s = 1")]
    Pole,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: u64,
        limit: u64,
    },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = core::result::Result<T, Error>;

/// Size limits for tables and enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Entries in any flat table (sieve, residue tables).
    pub max_table: u64,
    /// Largest unit group handled.
    pub max_group: u64,
    /// Inner-loop iterations for brute-force sums.
    pub max_work: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_table: 1 << 24,
            max_group: 1_000_000,
            max_work: 1 << 36,
        }
    }
}

impl Budget {
    pub fn check_table(&self, what: &'static str, needed: u64) -> Result<()> {
        check(what, needed, self.max_table)
    }

    pub fn check_group(&self, what: &'static str, needed: u64) -> Result<()> {
        check(what, needed, self.max_group)
    }

    pub fn check_work(&self, what: &'static str, needed: u64) -> Result<()> {
        check(what, needed, self.max_work)
    }
}

fn check(what: &'static str, needed: u64, limit: u64) -> Result<()> {
    if needed > limit {
        Err(Error::Budget {
            what,
            needed,
            limit,
        })
    } else {
        Ok(())
    }
}
