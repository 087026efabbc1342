pub mod analysis;
pub mod cli;
pub mod error;
pub mod io;
pub mod numkernel;
pub mod oracle;
pub mod series;

pub use error::{Error, Result};
pub use numkernel::{Parity, ParityPolynomial, Polynomial, Scalar, Term};

/// Default working precision in significant decimal digits.
pub const DEFAULT_PRECISION: u32 = 80;

pub use series::{run_series, AnsatzSpec, BBSeries, OrderTerm, PotentialSpec};
