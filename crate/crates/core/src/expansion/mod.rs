//! The map T_alpha, digits, convergents and the convergence estimate.

mod convergents;
mod map;
mod params;
mod real;

pub use convergents::{
    convergents, error_bound, error_bound_trace, evaluate, reconstruct, theta_direct, BoundTrace, ConvergentPair,
    ErrorBound,
};
pub use map::{digit_and_image, digit_of, expand, orbit, t_alpha, Digit, Expansion, Orbit};
pub use params::{parse_field_element, parse_rational, Alpha, ExactParams, FloatParams, Params, ZERO_BAND};
pub use real::Real;
