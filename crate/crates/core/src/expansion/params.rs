use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::real::Real;
use crate::algebra::{AlgebraicNumber, GroupIndex, RosenField};
use crate::error::{Error, Result};

/// The parameter alpha, either rational or one of the symbolic boundary values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Alpha {
    Rational(BigRational),
    Half,
    InvLambda,
    RhoOverLambda,
}

impl Alpha {
    pub fn ratio(num: i64, den: i64) -> Alpha {
        Alpha::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(r: BigRational) -> Alpha {
        if r == BigRational::new(1.into(), 2.into()) {
            Alpha::Half
        } else {
            Alpha::Rational(r)
        }
    }

    /// Exact value in the field of `q`.
    pub fn value(&self, q: GroupIndex) -> Result<AlgebraicNumber> {
        let field = RosenField::get(q)?;
        let lam = AlgebraicNumber::lambda(&field);
        Ok(match self {
            Alpha::Rational(r) => AlgebraicNumber::from_rational(&field, r.clone()),
            Alpha::Half => AlgebraicNumber::from_ratio(&field, 1, 2),
            Alpha::InvLambda => lam.recip()?,
            Alpha::RhoOverLambda => AlgebraicNumber::rho(&field)?.checked_div(&lam)?,
        })
    }

    pub fn to_f64(&self, q: GroupIndex) -> f64 {
        let lam = q.lambda_f64();
        match self {
            Alpha::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Alpha::Half => 0.5,
            Alpha::InvLambda => 1.0 / lam,
            Alpha::RhoOverLambda => (lam - 2.0 + (lam * lam - 4.0 * lam + 8.0).sqrt()) / 2.0 / lam,
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Rational(r) => write!(f, "{r}"),
            Alpha::Half => write!(f, "1/2"),
            Alpha::InvLambda => write!(f, "1/lambda"),
            Alpha::RhoOverLambda => write!(f, "rho/lambda"),
        }
    }
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parse a decimal or p/r string into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let err = || Error::Parse(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all = format!("{int}{frac}");
    let num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| err())?;
    let ten = BigInt::from(10);
    let scale = exp - frac.len() as i32;
    let mut r = BigRational::from_integer(num);
    if scale >= 0 {
        r *= BigRational::from_integer(ten.pow(scale as u32));
    } else {
        r /= BigRational::from_integer(ten.pow((-scale) as u32));
    }
    Ok(if neg { -r } else { r })
}

/// Parse an element of Q(lambda) written as a sum of terms like `3/2`, `-0.25`, `lambda`,
/// `2*lambda^2`, `-lambda/2`.
pub fn parse_field_element(s: &str, q: GroupIndex) -> Result<AlgebraicNumber> {
    let field = RosenField::get(q)?;
    let t: String = s.trim().to_lowercase().replace('λ', "lambda").chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    // split before every + or - that is not a leading sign or an exponent sign
    let bytes = t.as_bytes();
    let mut starts = vec![0];
    for i in 1..bytes.len() {
        if matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'^' | b'*' | b'/') {
            starts.push(i);
        }
    }
    starts.push(t.len());
    let mut total = AlgebraicNumber::zero(&field);
    for w in starts.windows(2) {
        let term = &t[w[0]..w[1]];
        let term = term.strip_prefix('+').unwrap_or(term);
        let value = match term.split_once("lambda") {
            None => AlgebraicNumber::from_rational(&field, parse_rational(term)?),
            Some((coef, rest)) => {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let coef = match coef {
                    "" | "+" => BigRational::from_integer(1.into()),
                    "-" => BigRational::from_integer((-1).into()),
                    c => parse_rational(c)?,
                };
                let (power, den) = match rest.split_once('/') {
                    Some((p, d)) => (p, parse_rational(d)?),
                    None => (rest, BigRational::from_integer(1.into())),
                };
                let power = match power.strip_prefix('^') {
                    Some(k) => k.parse::<u32>().map_err(|_| err())?,
                    None if power.is_empty() => 1,
                    None => return Err(err()),
                };
                if den.is_zero() {
                    return Err(err());
                }
                let c = AlgebraicNumber::from_rational(&field, coef / den);
                &c * &AlgebraicNumber::lambda(&field).pow(power)
            }
        };
        total = &total + &value;
    }
    Ok(total)
}

impl FromStr for Alpha {
    type Err = Error;
    fn from_str(s: &str) -> Result<Alpha> {
        let t: String = s.trim().to_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "1/lambda" | "1/λ" | "inv_lambda" => Ok(Alpha::InvLambda),
            "rho/lambda" | "ρ/λ" => Ok(Alpha::RhoOverLambda),
            _ => parse_rational(&t).map(Alpha::from_rational).map_err(|_| Error::Parse(s.to_string())),
        }
    }
}

/// Map parameters: q, lambda, alpha and the interval [l0, r0] = [(alpha - 1) lambda, alpha lambda].
#[derive(Debug, Clone)]
pub struct Params<S> {
    pub q: GroupIndex,
    pub lambda: S,
    pub alpha: S,
    pub left: S,
    pub right: S,
    pub(crate) inv_lambda: S,
    pub(crate) one_minus_alpha: S,
    /// Float mode: |x| at or below this is treated as the orbit reaching 0.
    pub zero_band: f64,
}

pub type ExactParams = Params<AlgebraicNumber>;
pub type FloatParams = Params<f64>;

/// Default float-mode termination band.
pub const ZERO_BAND: f64 = 5.421010862427522e-20; // 2^-64

impl Params<AlgebraicNumber> {
    pub fn exact(q: GroupIndex, alpha: &Alpha) -> Result<Self> {
        Self::from_alpha_value(alpha.value(q)?)
    }

    pub fn from_alpha_value(alpha: AlgebraicNumber) -> Result<Self> {
        let field = alpha.field().clone();
        let lambda = AlgebraicNumber::lambda(&field);
        let one = AlgebraicNumber::one(&field);
        let half = AlgebraicNumber::from_ratio(&field, 1, 2);
        if alpha < half || &alpha * &lambda > one {
            return Err(Error::Parameter(format!(
                "alpha = {} must satisfy 1/2 <= alpha <= 1/lambda",
                alpha.to_decimal(10)
            )));
        }
        let left = (&alpha - &one) * &lambda;
        let right = &alpha * &lambda;
        Ok(Params {
            q: field.index(),
            inv_lambda: lambda.recip()?,
            one_minus_alpha: &one - &alpha,
            lambda,
            alpha,
            left,
            right,
            zero_band: 0.0,
        })
    }

    /// The f64 image of these parameters.
    pub fn to_float(&self) -> Params<f64> {
        let lambda = self.q.lambda_f64();
        let alpha = self.alpha.to_f64();
        Params {
            q: self.q,
            lambda,
            alpha,
            left: self.left.to_f64(),
            right: self.right.to_f64(),
            inv_lambda: 1.0 / lambda,
            one_minus_alpha: 1.0 - alpha,
            zero_band: ZERO_BAND,
        }
    }

    /// delta_d = 1 / ((alpha + d) lambda).
    pub fn delta(&self, d: u64) -> AlgebraicNumber {
        crate::algebra::delta_d(&self.alpha, d.max(1)).expect("delta_d is nonzero")
    }
}

impl Params<f64> {
    pub fn float(q: GroupIndex, alpha: f64) -> Result<Self> {
        let lambda = q.lambda_f64();
        if !(alpha >= 0.5 - 1e-15 && alpha * lambda <= 1.0 + 1e-15) {
            return Err(Error::Parameter(format!("alpha = {alpha} must satisfy 1/2 <= alpha <= 1/lambda")));
        }
        Ok(Params {
            q,
            lambda,
            alpha,
            left: (alpha - 1.0) * lambda,
            right: alpha * lambda,
            inv_lambda: 1.0 / lambda,
            one_minus_alpha: 1.0 - alpha,
            zero_band: ZERO_BAND,
        })
    }

    pub fn delta(&self, d: u64) -> f64 {
        1.0 / ((self.alpha + d as f64) * self.lambda)
    }
}

impl<S: Real> Params<S> {
    /// Whether x lies in [l0, r0].
    pub fn contains(&self, x: &S) -> bool {
        *x >= self.left && *x <= self.right
    }

    /// The bound alpha lambda / (1 + alpha lambda - lambda) appearing in the convergence estimate.
    pub fn bound_constant(&self) -> S {
        let al = self.alpha.clone() * self.lambda.clone();
        let den = self.lambda.int(1) + al.clone() - self.lambda.clone();
        al.div(&den).expect("1 + alpha lambda - lambda > 0")
    }
}
