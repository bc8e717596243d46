use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {left} symbols vs {right} symbols")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("symbol index {symbol} is out of range for an alphabet of size {size}")]
    InvalidSymbol { symbol: usize, size: usize },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("block of length {len} exceeds the exact-probability bound of {max}")]
    BlockTooLong { len: usize, max: usize },

    #[error(
        "inconsistent observation: history prefix of length {prefix_len} \
         (last symbol {symbol}) has zero probability under every component"
    )]
    InconsistentObservation { prefix_len: usize, symbol: usize },

    #[error("impossible observation at step {step}: {reason}")]
    ImpossibleObservation { step: usize, reason: String },

    #[error("empty trace")]
    EmptyTrace,

    #[error("block length {k} exceeds prefix length {len}")]
    PrefixTooShort { k: usize, len: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),
}
