//! Bit-accurate models of accurate and approximate multipliers with error
//! metrics, DSP kernels and a quantized-network energy estimator.

pub mod approx;
pub mod dlsb;
pub mod error;
pub mod fixed;
pub mod float;
pub mod kernels;
pub mod metrics;
pub mod net;
pub mod oracle;

pub use approx::{multiply_dispatch, ApproxOptions, AxConfig, Multiplier};
pub use error::{AxError, Result};
pub use fixed::{multiply_accurate, oracle_multiply, FixedOperand, Radix4Digit};
pub use float::{FpDatum, FpFormat, FpProduct, Verdict};
pub use metrics::{ErrorSample, MetricsReport};
