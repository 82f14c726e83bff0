use std::fmt;

use serde::{Deserialize, Serialize};

use super::params::Params;
use super::real::Real;
use crate::error::{Error, Result};

/// A digit (eps : d). The terminal digit of an orbit that reaches 0 is (0 : inf).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digit {
    pub eps: i8,
    /// `None` stands for d = infinity.
    pub d: Option<u64>,
}

impl Digit {
    pub const ZERO: Digit = Digit { eps: 0, d: None };

    pub fn new(eps: i8, d: u64) -> Digit {
        assert!(eps == 1 || eps == -1, "eps must be +1 or -1");
        assert!(d >= 1, "d must be positive");
        Digit { eps, d: Some(d) }
    }

    pub fn is_zero(&self) -> bool {
        self.eps == 0
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            Some(d) => write!(f, "({}:{})", if self.eps > 0 { "+1" } else { "-1" }, d),
            None => write!(f, "(0:inf)"),
        }
    }
}

/// Digits of a point plus how the expansion ended.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Expansion {
    /// Digits (eps_n : d_n), excluding the terminal (0 : inf).
    pub digits: Vec<Digit>,
    /// The orbit reached 0.
    pub terminated: bool,
    /// Float mode only: termination came from the zero band rather than an exact 0.
    pub by_tolerance: bool,
    /// Float mode only: steps whose floor fell within rounding distance of an integer.
    pub ambiguous_steps: Vec<usize>,
}

/// The orbit x = t_0, t_1, ... together with its digits.
#[derive(Debug, Clone)]
pub struct Orbit<S> {
    pub points: Vec<S>,
    pub expansion: Expansion,
}

struct Step<S> {
    digit: Digit,
    image: S,
    ambiguous: bool,
    by_tolerance: bool,
}

fn step<S: Real>(x: &S, p: &Params<S>) -> Result<Step<S>> {
    if !p.contains(x) {
        return Err(Error::Domain(format!("{:.17}", x.to_f64())));
    }
    let zero = x.int(0);
    if x.sign() == 0 {
        return Ok(Step { digit: Digit::ZERO, image: zero, ambiguous: false, by_tolerance: false });
    }
    if !S::is_exact() && x.to_f64().abs() <= p.zero_band {
        return Ok(Step { digit: Digit::ZERO, image: zero, ambiguous: false, by_tolerance: true });
    }
    let inv = x.recip()?;
    let a = inv.abs();
    let y = a.clone() * p.inv_lambda.clone() + p.one_minus_alpha.clone();
    let d = y
        .floor_u64()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Consistency(format!("digit out of range at x = {:e}", x.to_f64())))?;
    let mut image = a - p.lambda.int(d as i64) * p.lambda.clone();
    let mut ambiguous = false;
    if !S::is_exact() {
        let yf = y.to_f64();
        let frac = yf - yf.floor();
        ambiguous = frac.min(1.0 - frac) <= 4.0 * f64::EPSILON * yf.abs().max(1.0);
        if image < p.left {
            image = p.left.clone();
        }
        if image > p.right {
            image = p.right.clone();
        }
    } else if image < p.left || image >= p.right {
        return Err(Error::Consistency("T_alpha left [l0, r0)".into()));
    }
    Ok(Step { digit: Digit::new(x.sign() as i8, d), image, ambiguous, by_tolerance: false })
}

/// The first digit (eps(x) : d(x)), d(x) = floor(|1/(x lambda)| + 1 - alpha).
pub fn digit_of<S: Real>(x: &S, p: &Params<S>) -> Result<Digit> {
    Ok(step(x, p)?.digit)
}

/// T_alpha(x) = |1/x| - lambda d(x), with T_alpha(0) = 0.
pub fn t_alpha<S: Real>(x: &S, p: &Params<S>) -> Result<S> {
    Ok(step(x, p)?.image)
}

/// One step returning both the digit and the image.
pub fn digit_and_image<S: Real>(x: &S, p: &Params<S>) -> Result<(Digit, S)> {
    let s = step(x, p)?;
    Ok((s.digit, s.image))
}

/// At most `n_max` steps of the orbit of x.
pub fn orbit<S: Real>(x: &S, n_max: usize, p: &Params<S>) -> Result<Orbit<S>> {
    let mut points = vec![x.clone()];
    let mut exp = Expansion::default();
    if !p.contains(x) {
        return Err(Error::Domain(format!("{:.17}", x.to_f64())));
    }
    while exp.digits.len() < n_max {
        let cur = points.last().unwrap();
        let s = step(cur, p)?;
        if s.digit.is_zero() {
            exp.terminated = true;
            exp.by_tolerance = s.by_tolerance;
            break;
        }
        if s.ambiguous {
            exp.ambiguous_steps.push(exp.digits.len());
        }
        exp.digits.push(s.digit);
        points.push(s.image);
    }
    if !exp.terminated && points.last().is_some_and(|t| t.sign() == 0) {
        exp.terminated = true;
    }
    Ok(Orbit { points, expansion: exp })
}

/// The first `n_max` digits of x.
pub fn expand<S: Real>(x: &S, n_max: usize, p: &Params<S>) -> Result<Expansion> {
    Ok(orbit(x, n_max, p)?.expansion)
}
