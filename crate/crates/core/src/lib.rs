//! α-Rosen continued fractions: exact expansions, natural extension domains,
//! invariant measures and the statistics of approximation coefficients.

pub mod algebra;
mod error;
pub mod expansion;
pub mod metrics;
pub mod natext;

pub use error::{Error, Result};
