use thiserror::Error;

/// Everything that can go wrong across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxError {
    #[error("bit width {0} is not supported (must be even, 4..=64)")]
    InvalidWidth(u32),
    #[error("value {value} does not fit in {width}-bit two's complement")]
    ValueOutOfRange { value: i128, width: u32 },
    #[error("operand widths differ: {0} vs {1}")]
    WidthMismatch(u32, u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse configuration '{0}'")]
    ConfigParse(String),
    #[error("mask 0x{0:x} is not a contiguous run of low zero bits")]
    MalformedMask(u64),
    #[error("floating-point input is not a normal number: {0}")]
    NonNormalInput(String),
    #[error("empty sample stream")]
    EmptyStream,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("accumulator overflow at {0}")]
    AccumulatorOverflow(String),
    #[error("malformed image: {0}")]
    MalformedImage(String),
    #[error("unit {0} is not covered by the assignment scheme")]
    UncoveredUnit(String),
    #[error("no energy cost for configuration '{0}'")]
    MissingCost(String),
    #[error("malformed network file: {0}")]
    MalformedNetwork(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for AxError {
    fn from(e: std::io::Error) -> Self {
        AxError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, AxError>;
