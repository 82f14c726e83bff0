use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::field::{ceil_shift, rational_interval, GroupIndex, RosenField};
use super::poly;
use crate::error::{Error, Result};

/// An exact element of Q(lambda_q), or of Q(lambda_q, rho) for odd q.
///
/// Coefficient vectors are canonical, so equality and hashing are structural.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Arc<RosenField>,
    base: Vec<BigRational>,
    rho: Vec<BigRational>,
}

const START_BITS: u64 = 64;
const MAX_BITS: u64 = 1 << 22;

impl AlgebraicNumber {
    fn from_parts(field: Arc<RosenField>, base: Vec<BigRational>, rho: Vec<BigRational>) -> Self {
        let rho = if rho.iter().all(Zero::is_zero) { Vec::new() } else { rho };
        AlgebraicNumber { field, base, rho }
    }

    pub fn zero(field: &Arc<RosenField>) -> Self {
        Self::from_rational(field, BigRational::zero())
    }

    pub fn one(field: &Arc<RosenField>) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_int(field: &Arc<RosenField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(field: &Arc<RosenField>, r: BigRational) -> Self {
        let mut base = vec![BigRational::zero(); field.degree()];
        base[0] = r;
        Self::from_parts(field.clone(), base, Vec::new())
    }

    pub fn from_ratio(field: &Arc<RosenField>, num: i64, den: i64) -> Self {
        Self::from_rational(field, BigRational::new(num.into(), den.into()))
    }

    /// The generator lambda = 2cos(pi/q).
    pub fn lambda(field: &Arc<RosenField>) -> Self {
        let d = field.degree();
        let coeffs: Vec<BigRational> = if d == 1 {
            vec![BigRational::from_integer(-field.minpoly()[0].clone())]
        } else {
            let mut v = vec![BigRational::zero(); d];
            v[1] = BigRational::one();
            v
        };
        Self::from_parts(field.clone(), coeffs, Vec::new())
    }

    /// rho, the positive root of x^2 + (2 - lambda) x - 1 (odd q only).
    pub fn rho(field: &Arc<RosenField>) -> Result<Self> {
        if !field.has_rho() {
            return Err(Error::Parameter(format!("rho is defined for odd q only, got q = {}", field.q())));
        }
        let mut r = vec![BigRational::zero(); field.degree()];
        r[0] = BigRational::one();
        Ok(Self::from_parts(field.clone(), vec![BigRational::zero(); field.degree()], r))
    }

    /// Build from coefficients of 1, lambda, lambda^2, ... (reduced modulo the minimal polynomial).
    pub fn from_lambda_poly(field: &Arc<RosenField>, coeffs: Vec<BigRational>) -> Self {
        let base = poly::reduce_monic(coeffs, field.minpoly());
        Self::from_parts(field.clone(), base, Vec::new())
    }

    pub fn field(&self) -> &Arc<RosenField> {
        &self.field
    }

    pub fn q(&self) -> GroupIndex {
        self.field.index()
    }

    /// Coefficients of 1, lambda, ..., lambda^(deg-1) in the rational part.
    pub fn base_coeffs(&self) -> &[BigRational] {
        &self.base
    }

    /// Coefficients of the rho part (empty when zero).
    pub fn rho_coeffs(&self) -> &[BigRational] {
        &self.rho
    }

    pub fn is_zero(&self) -> bool {
        self.rho.is_empty() && self.base.iter().all(Zero::is_zero)
    }

    /// The value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.rho.is_empty() && self.base[1..].iter().all(Zero::is_zero)).then(|| self.base[0].clone())
    }

    fn check_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.q() == other.field.q(),
            "mixing elements of Q(lambda_{}) and Q(lambda_{})",
            self.field.q(),
            other.field.q()
        );
    }

    fn mul_base(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        poly::reduce_monic(poly::rat_mul(a, b), self.field.minpoly())
    }

    fn add_vec(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        match (a.is_empty(), b.is_empty()) {
            (true, _) => b.to_vec(),
            (_, true) => a.to_vec(),
            _ => a.iter().zip(b).map(|(x, y)| x + y).collect(),
        }
    }

    fn lambda_minus_two(&self) -> Vec<BigRational> {
        Self::lambda(&self.field)
            .base
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { c - BigRational::from_integer(2.into()) } else { c.clone() })
            .collect()
    }

    fn add_ref(&self, o: &Self) -> Self {
        self.check_field(o);
        Self::from_parts(self.field.clone(), Self::add_vec(&self.base, &o.base), Self::add_vec(&self.rho, &o.rho))
    }

    fn neg_ref(&self) -> Self {
        Self::from_parts(
            self.field.clone(),
            self.base.iter().map(|c| -c).collect(),
            self.rho.iter().map(|c| -c).collect(),
        )
    }

    fn mul_ref(&self, o: &Self) -> Self {
        self.check_field(o);
        let mut base = self.mul_base(&self.base, &o.base);
        if self.rho.is_empty() && o.rho.is_empty() {
            return Self::from_parts(self.field.clone(), base, Vec::new());
        }
        // (a + b rho)(c + e rho) = ac + be + (ae + bc + be (lambda - 2)) rho
        let mut rho = vec![BigRational::zero(); self.field.degree()];
        if !o.rho.is_empty() {
            rho = Self::add_vec(&rho, &self.mul_base(&self.base, &o.rho));
        }
        if !self.rho.is_empty() {
            rho = Self::add_vec(&rho, &self.mul_base(&self.rho, &o.base));
        }
        if !self.rho.is_empty() && !o.rho.is_empty() {
            let be = self.mul_base(&self.rho, &o.rho);
            base = Self::add_vec(&base, &be);
            rho = Self::add_vec(&rho, &self.mul_base(&be, &self.lambda_minus_two()));
        }
        Self::from_parts(self.field.clone(), base, rho)
    }

    /// Multiplicative inverse.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Singular("division by zero".into()));
        }
        let m = self.field.minpoly();
        if self.rho.is_empty() {
            let inv =
                poly::inverse_mod(&self.base, m).ok_or_else(|| Error::Consistency("non-invertible element".into()))?;
            return Ok(Self::from_parts(self.field.clone(), inv, Vec::new()));
        }
        // (a + b rho)^-1 = (a + b (lambda - 2) - b rho) / (a^2 + (lambda - 2) a b - b^2)
        let (a, b) = (&self.base, &self.rho);
        let lm2 = self.lambda_minus_two();
        let ab = self.mul_base(a, b);
        let mut norm = self.mul_base(a, a);
        norm = Self::add_vec(&norm, &self.mul_base(&ab, &lm2));
        let bb = self.mul_base(b, b);
        norm = norm.iter().zip(&bb).map(|(x, y)| x - y).collect();
        let ninv =
            poly::inverse_mod(&norm, m).ok_or_else(|| Error::Consistency("zero norm for a nonzero element".into()))?;
        let num_base = Self::add_vec(a, &self.mul_base(b, &lm2));
        let base = self.mul_base(&num_base, &ninv);
        let rho: Vec<BigRational> = self.mul_base(b, &ninv).iter().map(|c| -c).collect();
        Ok(Self::from_parts(self.field.clone(), base, rho))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul_ref(&o.recip()?))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            b = b.mul_ref(&b);
            e >>= 1;
        }
        acc
    }

    /// Integers lo, hi with lo / 2^k <= self <= hi / 2^k.
    pub fn enclosure(&self, k: u64) -> (BigInt, BigInt) {
        let lam = self.field.lambda_interval(k);
        let mut out = eval_interval(&self.base, &lam, k);
        if !self.rho.is_empty() {
            let r = rho_interval(&lam, k);
            let b = eval_interval(&self.rho, &lam, k);
            let prod = mul_interval(&b, &r, k);
            out = (out.0 + prod.0, out.1 + prod.1);
        }
        out
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(r) = self.as_rational() {
            return if r.is_positive() { 1 } else { -1 };
        }
        let mut k = START_BITS;
        loop {
            let (lo, hi) = self.enclosure(k);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            assert!(k < MAX_BITS, "sign refinement did not converge");
            k *= 2;
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg_ref()
        } else {
            self.clone()
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor().to_integer();
        }
        let (lo, _) = self.enclosure(START_BITS);
        let mut n: BigInt = lo >> START_BITS;
        let as_num = |n: &BigInt| Self::from_rational(&self.field, BigRational::from_integer(n.clone()));
        while compare(self, &as_num(&n)) == Ordering::Less {
            n -= 1;
        }
        while compare(self, &as_num(&(&n + 1))) != Ordering::Less {
            n += 1;
        }
        n
    }

    /// Nearest f64.
    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        let mut k = 96;
        loop {
            let (lo, hi) = self.enclosure(k);
            let mid: BigInt = (&lo + &hi) >> 1;
            let width: BigInt = hi - lo;
            if width.bits() + 60 <= mid.bits() || k >= 4096 {
                let drop = mid.bits().saturating_sub(64);
                let top: BigInt = mid >> drop;
                return top.to_f64().unwrap_or(f64::NAN) * 2f64.powi(drop as i32 - k as i32);
            }
            k *= 2;
        }
    }

    /// Decimal string truncated toward zero at `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let k = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 16;
        let (lo, hi) = self.enclosure(k);
        let mid: BigInt = (lo + hi) >> 1;
        let neg = mid.is_negative();
        let scaled = (mid.abs() * BigInt::from(10).pow(digits as u32)) >> k;
        let s = scaled.to_string();
        let (int, frac) = if s.len() > digits { s.split_at(s.len() - digits) } else { ("", s.as_str()) };
        let int = if int.is_empty() { "0" } else { int };
        let frac = format!("{:0>width$}", frac, width = digits);
        let sign = if neg && scaled.is_positive() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Serializable form: exact coefficients plus a decimal image.
    pub fn to_repr(&self, digits: usize) -> NumberRepr {
        NumberRepr {
            lambda_coeffs: self.base.iter().map(ToString::to_string).collect(),
            rho_coeffs: self.rho.iter().map(ToString::to_string).collect(),
            decimal: self.to_decimal(digits),
        }
    }
}

/// Coefficient-vector export of an [`AlgebraicNumber`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberRepr {
    pub lambda_coeffs: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub rho_coeffs: Vec<String>,
    pub decimal: String,
}

type Interval = (BigInt, BigInt);

fn mul_interval(a: &Interval, b: &Interval, k: u64) -> Interval {
    let c = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = c.iter().min().unwrap();
    let hi = c.iter().max().unwrap();
    (lo >> k, ceil_shift(hi, k))
}

fn eval_interval(coeffs: &[BigRational], lam: &Interval, k: u64) -> Interval {
    let mut acc: Interval = (BigInt::zero(), BigInt::zero());
    for (i, c) in coeffs.iter().enumerate().rev() {
        if i + 1 < coeffs.len() {
            acc = mul_interval(&acc, lam, k);
        }
        if !c.is_zero() {
            let (lo, hi) = rational_interval(c, k);
            acc = (acc.0 + lo, acc.1 + hi);
        }
    }
    acc
}

/// rho(lambda) = (lambda - 2 + sqrt((lambda - 2)^2 + 4)) / 2 is increasing in lambda.
fn rho_interval(lam: &Interval, k: u64) -> Interval {
    let two = BigInt::from(2) << k;
    let four = BigInt::from(4) << (2 * k);
    let lo = {
        let x = &lam.0 - &two;
        let s = (&x * &x + &four).sqrt();
        (x + s) >> 1
    };
    let hi = {
        let x = &lam.1 - &two;
        let d = &x * &x + &four;
        let mut s = d.sqrt();
        if &s * &s < d {
            s += 1;
        }
        ceil_shift(&(x + s), 1)
    };
    (lo, hi)
}

/// Exact comparison.
pub fn compare(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Ordering {
    match a.sub_ref(b).signum() {
        -1 => Ordering::Less,
        0 => Ordering::Equal,
        _ => Ordering::Greater,
    }
}

impl AlgebraicNumber {
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.q() == other.field.q() && self.base == other.base && self.rho == other.rho
    }
}

impl Eq for AlgebraicNumber {}

impl Hash for AlgebraicNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.q().hash(state);
        self.base.hash(state);
        self.rho.hash(state);
    }
}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigRational]) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
        }
        first = false;
        let unit = mag.is_one();
        match i {
            0 => write!(f, "{mag}")?,
            _ if unit => {}
            _ => write!(f, "{mag}*")?,
        }
        match i {
            0 => {}
            1 => write!(f, "l")?,
            _ => write!(f, "l^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rho.is_empty() {
            return write_poly(f, &self.base);
        }
        if !self.base.iter().all(Zero::is_zero) {
            write_poly(f, &self.base)?;
            write!(f, " + ")?;
        }
        write!(f, "(")?;
        write_poly(f, &self.rho)?;
        write!(f, ")*rho")
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [q={}, ~{}]", self, self.field.q(), self.to_decimal(12))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&AlgebraicNumber> for &AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: &AlgebraicNumber) -> AlgebraicNumber {
                $body(self, o)
            }
        }
        impl $tr<AlgebraicNumber> for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: AlgebraicNumber) -> AlgebraicNumber {
                $body(&self, &o)
            }
        }
        impl $tr<&AlgebraicNumber> for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: &AlgebraicNumber) -> AlgebraicNumber {
                $body(&self, o)
            }
        }
        impl $tr<AlgebraicNumber> for &AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: AlgebraicNumber) -> AlgebraicNumber {
                $body(self, &o)
            }
        }
    };
}

binop!(Add, add, |a: &AlgebraicNumber, b| a.add_ref(b));
binop!(Sub, sub, |a: &AlgebraicNumber, b| a.sub_ref(b));
binop!(Mul, mul, |a: &AlgebraicNumber, b| a.mul_ref(b));
binop!(Div, div, |a: &AlgebraicNumber, b| a.checked_div(b).expect("division by zero"));

impl Neg for AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        self.neg_ref()
    }
}

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u32) -> Arc<RosenField> {
        RosenField::get(GroupIndex::new(q).unwrap()).unwrap()
    }

    #[test]
    fn lambda_squares() {
        let f = field(4);
        let l = AlgebraicNumber::lambda(&f);
        assert_eq!(&l * &l, AlgebraicNumber::from_int(&f, 2));
        let f = field(6);
        let l = AlgebraicNumber::lambda(&f);
        assert_eq!(&l * &l, AlgebraicNumber::from_int(&f, 3));
    }

    #[test]
    fn rho_satisfies_quadratic() {
        for q in [3, 5, 7, 9, 11, 13] {
            let f = field(q);
            let l = AlgebraicNumber::lambda(&f);
            let r = AlgebraicNumber::rho(&f).unwrap();
            let two = AlgebraicNumber::from_int(&f, 2);
            let one = AlgebraicNumber::one(&f);
            let v = &r * &r + (&two - &l) * &r - one;
            assert!(v.is_zero(), "q={q}");
        }
    }

    #[test]
    fn inverses() {
        for q in [3, 4, 5, 7, 8, 12] {
            let f = field(q);
            let l = AlgebraicNumber::lambda(&f);
            let mut x = &l * &l - AlgebraicNumber::from_ratio(&f, 1, 3) + &l;
            if f.has_rho() {
                x = x + &AlgebraicNumber::rho(&f).unwrap() * &l;
            }
            let y = x.recip().unwrap();
            assert_eq!(&x * &y, AlgebraicNumber::one(&f), "q={q}");
        }
    }

    #[test]
    fn signs_and_floors() {
        let f = field(4);
        let l = AlgebraicNumber::lambda(&f);
        let one = AlgebraicNumber::one(&f);
        assert_eq!((&l - &one).signum(), 1);
        assert_eq!((&one - &l).signum(), -1);
        assert_eq!((&l * AlgebraicNumber::from_int(&f, 10)).floor(), BigInt::from(14));
        assert_eq!((-&l).floor(), BigInt::from(-2));
        assert_eq!(l.to_decimal(8), "1.41421356");
        assert_eq!((-&l).to_decimal(3), "-1.414");
    }

    #[test]
    fn nearly_equal_values_are_separated() {
        // lambda_12 = (sqrt 6 + sqrt 2) / 2; compare against a rational within 1e-30
        let f = field(12);
        let l = AlgebraicNumber::lambda(&f);
        let approx =
            BigRational::new(BigInt::parse_bytes(b"1931851652578136573", 10).unwrap(), BigInt::from(10).pow(18));
        let r = AlgebraicNumber::from_rational(&f, approx);
        assert_eq!(compare(&l, &r), Ordering::Greater);
    }
}
