use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse word {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("word length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("word level {0} exceeds the supported maximum")]
    LevelTooLarge(u32),

    #[error("rank {0} is not a power of two")]
    RankNotPowerOfTwo(u64),

    #[error("rank 2^{exponent} exceeds word length 2^{level}")]
    RankTooLarge { exponent: u32, level: u32 },

    #[error("{what} {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        range: String,
    },

    #[error("invalid thinned-out family: {0}")]
    InvalidFamily(String),
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_owned(),
            reason: reason.into(),
        }
    }

    pub(crate) fn out_of_range(what: &'static str, value: u64, range: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            value,
            range: range.into(),
        }
    }
}
