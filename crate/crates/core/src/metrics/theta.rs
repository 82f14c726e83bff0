use serde::Serialize;

use crate::error::{Error, Result};

/// (Theta_{n-1}, Theta_n) read off the planar orbit point (t_n, v_n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaPair {
    pub theta_prev: f64,
    pub theta_cur: f64,
    pub eps_next: i8,
}

/// Theta_n = eps_{n+1} t_n / (1 + t_n v_n), Theta_{n-1} = v_n / (1 + t_n v_n).
pub fn theta_from_orbit(t: f64, v: f64, eps_next: i8) -> Result<ThetaPair> {
    let den = 1.0 + t * v;
    if den.is_nan() || den <= 0.0 {
        return Err(Error::Consistency(format!("1 + t v = {den} at ({t}, {v})")));
    }
    Ok(ThetaPair { theta_prev: v / den, theta_cur: f64::from(eps_next) * t / den, eps_next })
}

/// F(t, v) = (v / (1 + tv), t / (1 + tv)).
pub fn f_map(t: f64, v: f64) -> Result<(f64, f64)> {
    let den = 1.0 + t * v;
    if den == 0.0 {
        return Err(Error::Singular("t v = -1".into()));
    }
    Ok((v / den, t / den))
}

/// The inverse of F on the branch |tv| < 1: with s = tv solving s / (1 + s)^2 = xi eta,
/// (t, v) = (eta (1 + s), xi (1 + s)).
pub fn f_inverse(xi: f64, eta: f64) -> Result<(f64, f64)> {
    let u = xi * eta;
    let disc = 1.0 - 4.0 * u;
    if disc < 0.0 {
        return Err(Error::Domain(format!("4 xi eta = {} > 1 is outside the image of F", 4.0 * u)));
    }
    let s = 2.0 * u / (1.0 - 2.0 * u + disc.sqrt());
    Ok((eta * (1.0 + s), xi * (1.0 + s)))
}
