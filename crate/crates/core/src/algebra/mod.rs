//! Exact arithmetic in Q(2cos(pi/q)) and the sequence B_n.

mod bseq;
mod field;
mod number;
mod poly;

pub use bseq::{b_identity_check, b_n, delta_d, lambda, rho, BSequence, IdentityReport};
pub use field::{GroupIndex, Parity, RosenField};
pub use number::{compare, AlgebraicNumber, NumberRepr};
