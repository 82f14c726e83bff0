//! Dense univariate polynomials, coefficients stored low degree first.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type IntPoly = Vec<BigInt>;
pub(crate) type RatPoly = Vec<BigRational>;

fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact quotient of `a` by a monic divisor; panics if the division leaves a remainder.
fn int_div_exact(a: &[BigInt], monic: &[BigInt]) -> IntPoly {
    let mut rem = a.to_vec();
    let dm = monic.len() - 1;
    if rem.len() <= dm {
        trim(&mut rem);
        assert!(rem.is_empty(), "inexact polynomial division");
        return Vec::new();
    }
    let mut quo = vec![BigInt::zero(); rem.len() - dm];
    for i in (dm..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quo[i - dm] = c.clone();
        for (j, m) in monic.iter().enumerate() {
            rem[i - dm + j] -= &c * m;
        }
    }
    trim(&mut rem);
    assert!(rem.is_empty(), "inexact polynomial division");
    trim(&mut quo);
    quo
}

/// The n-th cyclotomic polynomial.
pub(crate) fn cyclotomic(n: u32) -> IntPoly {
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    let mut den = vec![BigInt::one()];
    for d in 1..n {
        if n.is_multiple_of(d) {
            den = int_mul(&den, &cyclotomic(d));
        }
    }
    int_div_exact(&num, &den)
}

/// Monic minimal polynomial of 2cos(pi/q) over Q.
///
/// The cyclotomic polynomial of order 2q is palindromic, so it can be rewritten
/// in y = x + 1/x using x^k + x^-k = D_k(y), D_{k+1} = y D_k - D_{k-1}.
pub(crate) fn lambda_minpoly(q: u32) -> IntPoly {
    let phi = cyclotomic(2 * q);
    let m = (phi.len() - 1) / 2;
    let mut d_prev: IntPoly = vec![BigInt::from(2)];
    let mut d_cur: IntPoly = vec![BigInt::zero(), BigInt::one()];
    let mut out: IntPoly = vec![phi[m].clone()];
    for k in 1..=m {
        let c = &phi[m + k];
        if out.len() < d_cur.len() {
            out.resize(d_cur.len(), BigInt::zero());
        }
        for (i, t) in d_cur.iter().enumerate() {
            out[i] += c * t;
        }
        let mut next = vec![BigInt::zero(); d_cur.len() + 1];
        for (i, t) in d_cur.iter().enumerate() {
            next[i + 1] += t;
        }
        for (i, t) in d_prev.iter().enumerate() {
            next[i] -= t;
        }
        d_prev = d_cur;
        d_cur = next;
    }
    trim(&mut out);
    out
}

pub(crate) fn rat_mul(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Reduce modulo a monic integer polynomial, returning exactly `deg` coefficients.
pub(crate) fn reduce_monic(mut p: RatPoly, monic: &[BigInt]) -> RatPoly {
    let deg = monic.len() - 1;
    for i in (deg..p.len()).rev() {
        if p[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut p[i]);
        for (j, m) in monic[..deg].iter().enumerate() {
            if !m.is_zero() {
                p[i - deg + j] -= &c * BigRational::from_integer(m.clone());
            }
        }
    }
    p.resize(deg, BigRational::zero());
    p
}

fn rat_divrem(a: &[BigRational], b: &[BigRational]) -> (RatPoly, RatPoly) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let lead = b[db].clone();
    let mut quo = vec![BigRational::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = &rem[i] / &lead;
        for (j, t) in b.iter().enumerate() {
            rem[i - db + j] -= &c * t;
        }
        quo[i - db] = c;
    }
    trim(&mut rem);
    (quo, rem)
}

fn rat_sub(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

/// Inverse of `a` modulo an irreducible monic polynomial, via the extended Euclidean algorithm.
pub(crate) fn inverse_mod(a: &[BigRational], monic: &[BigInt]) -> Option<RatPoly> {
    let m: RatPoly = monic.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut r0 = m;
    let mut r1 = a.to_vec();
    trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    let mut s0: RatPoly = Vec::new();
    let mut s1: RatPoly = vec![BigRational::one()];
    while !r1.is_empty() {
        let (qt, r) = rat_divrem(&r0, &r1);
        let s = rat_sub(&s0, &rat_mul(&qt, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    let inv: RatPoly = s0.iter().map(|x| x / &c).collect();
    Some(reduce_monic(inv, monic))
}

/// Sign of p(num / 2^k) for an integer polynomial p.
pub(crate) fn sign_at_dyadic(p: &[BigInt], num: &BigInt, k: u64) -> i32 {
    let d = p.len() - 1;
    let mut acc = BigInt::zero();
    let mut pow = BigInt::one();
    for (i, c) in p.iter().enumerate() {
        acc += (c * &pow) << ((d - i) as u64 * k);
        pow *= num;
    }
    match acc.sign() {
        Sign::Plus => 1,
        Sign::Minus => -1,
        Sign::NoSign => 0,
    }
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub(crate) fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            let (top, bottom) = m.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// True when a nonnegative rational is the square of a rational.
pub(crate) fn is_rational_square(x: &BigRational) -> bool {
    if x.is_negative() {
        return false;
    }
    let (n, d) = (x.numer(), x.denom());
    let g = n.gcd(d);
    let (n, d) = (n / &g, d / &g);
    let sn = n.sqrt();
    let sd = d.sqrt();
    &sn * &sn == n && &sd * &sd == d
}
