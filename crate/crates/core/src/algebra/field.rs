use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{self, IntPoly};
use crate::error::{Error, Result};

/// Parity data of the Hecke group index q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// q = 2p
    Even { p: u32 },
    /// q = 2h + 3
    Odd { h: u32 },
}

/// The index q >= 3 of the Hecke group G_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct GroupIndex(u32);

impl GroupIndex {
    pub fn new(q: u32) -> Result<Self> {
        if q < 3 {
            return Err(Error::Parameter(format!("q must be at least 3, got {q}")));
        }
        if q > 4096 {
            return Err(Error::Parameter(format!("q = {q} is too large")));
        }
        Ok(GroupIndex(q))
    }

    pub fn q(self) -> u32 {
        self.0
    }

    pub fn parity(self) -> Parity {
        if self.0.is_multiple_of(2) {
            Parity::Even { p: self.0 / 2 }
        } else {
            Parity::Odd { h: (self.0 - 3) / 2 }
        }
    }

    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// 2cos(pi/q) in floating point.
    pub fn lambda_f64(self) -> f64 {
        2.0 * (PI / self.0 as f64).cos()
    }
}

impl TryFrom<u32> for GroupIndex {
    type Error = Error;
    fn try_from(q: u32) -> Result<Self> {
        GroupIndex::new(q)
    }
}

impl From<GroupIndex> for u32 {
    fn from(g: GroupIndex) -> u32 {
        g.0
    }
}

impl fmt::Display for GroupIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct LambdaBracket {
    k: u64,
    lo: BigInt,
    hi: BigInt,
    sign_lo: i32,
}

/// The real field Q(lambda_q), extended by rho for odd q.
///
/// For odd q the element rho = (lambda - 2 + sqrt(lambda^2 - 4 lambda + 8)) / 2 is
/// generally not in Q(lambda) (q = 3 gives (sqrt 5 - 1)/2), so numbers are
/// stored as a + b rho with a, b in Q(lambda) and rho^2 = 1 + (lambda - 2) rho.
pub struct RosenField {
    index: GroupIndex,
    minpoly: IntPoly,
    tower: bool,
    rational_lambda: Option<BigInt>,
    bracket: Mutex<Option<LambdaBracket>>,
}

impl fmt::Debug for RosenField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RosenField")
            .field("q", &self.index.q())
            .field("minpoly", &self.minpoly)
            .field("tower", &self.tower)
            .finish()
    }
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<RosenField>>>> = OnceLock::new();

impl RosenField {
    /// Shared field instance for q, built on first use.
    pub fn get(q: GroupIndex) -> Result<Arc<RosenField>> {
        let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&q.q()) {
            return Ok(f.clone());
        }
        let field = Arc::new(RosenField::build(q)?);
        let mut guard = cache.lock().unwrap();
        Ok(guard.entry(q.q()).or_insert(field).clone())
    }

    fn build(index: GroupIndex) -> Result<RosenField> {
        let minpoly = poly::lambda_minpoly(index.q());
        let rational_lambda = (minpoly.len() == 2).then(|| -minpoly[0].clone());
        let mut field = RosenField { index, minpoly, tower: false, rational_lambda, bracket: Mutex::new(None) };
        field.init_bracket()?;
        if !index.is_even() {
            if field.disc_norm_is_square() {
                return Err(Error::Unsupported(format!(
                    "cannot certify that rho is irrational over Q(lambda) for q = {index}"
                )));
            }
            field.tower = true;
        }
        Ok(field)
    }

    /// A non-square norm certifies that lambda^2 - 4 lambda + 8 has no square root in Q(lambda).
    fn disc_norm_is_square(&self) -> bool {
        let d = self.degree();
        let disc: Vec<BigRational> = [8, -4, 1].iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        let mut cols = Vec::with_capacity(d);
        let mut col = poly::reduce_monic(disc, &self.minpoly);
        for _ in 0..d {
            cols.push(col.clone());
            let mut shifted = vec![BigRational::zero()];
            shifted.extend(col);
            col = poly::reduce_monic(shifted, &self.minpoly);
        }
        let matrix: Vec<Vec<BigRational>> = (0..d).map(|r| (0..d).map(|c| cols[c][r].clone()).collect()).collect();
        poly::is_rational_square(&poly::determinant(matrix))
    }

    fn init_bracket(&mut self) -> Result<()> {
        if self.rational_lambda.is_some() {
            return Ok(());
        }
        let q = self.index.q() as f64;
        let approx = 2.0 * (PI / q).cos();
        let gap = approx - 2.0 * (3.0 * PI / q).cos();
        let k = (4.0 / gap).log2().ceil() as u64 + 4;
        let centre = BigInt::from((approx * (1u64 << k) as f64).floor() as i64);
        let lo = &centre - 2;
        let hi = &centre + 2;
        let sign_lo = poly::sign_at_dyadic(&self.minpoly, &lo, k);
        let sign_hi = poly::sign_at_dyadic(&self.minpoly, &hi, k);
        if sign_lo == 0 || sign_hi == 0 || sign_lo == sign_hi {
            return Err(Error::Consistency(format!("minimal polynomial does not isolate 2cos(pi/{q})")));
        }
        *self.bracket.get_mut().unwrap() = Some(LambdaBracket { k, lo, hi, sign_lo });
        Ok(())
    }

    pub fn index(&self) -> GroupIndex {
        self.index
    }

    pub fn q(&self) -> u32 {
        self.index.q()
    }

    /// Degree of Q(lambda) over Q.
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// Whether elements carry a rho component.
    pub fn has_rho(&self) -> bool {
        self.tower
    }

    pub(crate) fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// Monic minimal polynomial of lambda, constant term first.
    pub fn minimal_polynomial(&self) -> Vec<BigInt> {
        self.minpoly.clone()
    }

    /// Integers lo, hi with lo / 2^k <= lambda <= hi / 2^k.
    pub(crate) fn lambda_interval(&self, k: u64) -> (BigInt, BigInt) {
        if let Some(l) = &self.rational_lambda {
            let v = l << k;
            return (v.clone(), v);
        }
        let mut guard = self.bracket.lock().unwrap();
        let b = guard.as_mut().expect("bracket initialised");
        while b.k < k || &b.hi - &b.lo > BigInt::one() {
            if &b.hi - &b.lo <= BigInt::one() {
                b.lo <<= 1;
                b.hi <<= 1;
                b.k += 1;
            }
            let mid: BigInt = (&b.lo + &b.hi) >> 1;
            let s = poly::sign_at_dyadic(&self.minpoly, &mid, b.k);
            assert!(s != 0, "lambda is irrational here");
            if s == b.sign_lo {
                b.lo = mid;
            } else {
                b.hi = mid;
            }
        }
        let shift = b.k - k;
        let lo = &b.lo >> shift;
        let hi = ceil_shift(&b.hi, shift);
        (lo, hi)
    }
}

/// ceil(x / 2^s)
pub(crate) fn ceil_shift(x: &BigInt, s: u64) -> BigInt {
    -((-x) >> s)
}

/// floor(n / d * 2^k) and its ceiling.
pub(crate) fn rational_interval(r: &BigRational, k: u64) -> (BigInt, BigInt) {
    let n = r.numer() << k;
    let (qt, rem) = n.div_mod_floor(r.denom());
    if rem.is_zero() {
        (qt.clone(), qt)
    } else {
        let up = &qt + 1;
        (qt, up)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_parity() {
        assert!(GroupIndex::new(2).is_err());
        assert_eq!(GroupIndex::new(6).unwrap().parity(), Parity::Even { p: 3 });
        assert_eq!(GroupIndex::new(3).unwrap().parity(), Parity::Odd { h: 0 });
        assert_eq!(GroupIndex::new(9).unwrap().parity(), Parity::Odd { h: 3 });
    }

    #[test]
    fn lambda_bracket_contains_float_value() {
        for q in 3..=40 {
            let g = GroupIndex::new(q).unwrap();
            let f = RosenField::get(g).unwrap();
            let (lo, hi) = f.lambda_interval(200);
            let scale = 2f64.powi(200);
            let l = g.lambda_f64();
            let lo = lo_to_f64(&lo) / scale;
            let hi = lo_to_f64(&hi) / scale;
            assert!(lo <= l + 1e-15 && l - 1e-15 <= hi, "q={q}");
        }
    }

    fn lo_to_f64(x: &BigInt) -> f64 {
        use num_traits::ToPrimitive;
        x.to_f64().unwrap()
    }

    #[test]
    fn odd_fields_are_towers() {
        for q in (3..=31).step_by(2) {
            let f = RosenField::get(GroupIndex::new(q).unwrap()).unwrap();
            assert!(f.has_rho(), "q={q}");
        }
    }
}
