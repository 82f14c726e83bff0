use serde::Serialize;

use super::map::{orbit, Digit};
use super::params::{ExactParams, Params};
use super::real::Real;
use crate::algebra::AlgebraicNumber;
use crate::error::{Error, Result};

/// (R_n, S_n), the n-th convergent numerator and denominator.
///
/// In float mode long runs are rescaled: the true pair is (r, s) * 2^scale_log2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergentPair<S> {
    pub n: i64,
    pub r: S,
    pub s: S,
    pub scale_log2: i64,
}

impl<S: Real> ConvergentPair<S> {
    /// R_n / S_n.
    pub fn value(&self) -> Result<S> {
        self.r.div(&self.s)
    }
}

/// Convergents from n = -1 onwards: R_{-1} = 1, R_0 = 0, S_{-1} = 0, S_0 = 1,
/// R_n = d_n lambda R_{n-1} + eps_n R_{n-2} and likewise for S. Stops at a (0 : inf) digit.
pub fn convergents<S: Real>(digits: &[Digit], p: &Params<S>) -> Vec<ConvergentPair<S>> {
    let one = p.lambda.int(1);
    let zero = p.lambda.int(0);
    let mut out = vec![
        ConvergentPair { n: -1, r: one.clone(), s: zero.clone(), scale_log2: 0 },
        ConvergentPair { n: 0, r: zero, s: one, scale_log2: 0 },
    ];
    for (i, dg) in digits.iter().enumerate() {
        let Some(d) = dg.d else { break };
        let k = out.len();
        let (a, b) = (&out[k - 2], &out[k - 1]);
        let shift = b.scale_log2 - a.scale_log2;
        let (ar, as_) = if shift == 0 {
            (a.r.clone(), a.s.clone())
        } else {
            (a.r.scale_pow2(-shift as i32), a.s.scale_pow2(-shift as i32))
        };
        let dl = p.lambda.int(d as i64) * p.lambda.clone();
        let e = p.lambda.int(dg.eps as i64);
        let mut r = dl.clone() * b.r.clone() + e.clone() * ar;
        let mut s = dl * b.s.clone() + e * as_;
        let mut scale = b.scale_log2;
        if let Some(sh) = s.overflow_shift() {
            r = r.scale_pow2(sh);
            s = s.scale_pow2(sh);
            scale -= sh as i64;
        }
        out.push(ConvergentPair { n: i as i64 + 1, r, s, scale_log2: scale });
    }
    out
}

/// The finite continued fraction eps_1 / (d_1 lambda + eps_2 / (d_2 lambda + ...)).
pub fn evaluate<S: Real>(digits: &[Digit], p: &Params<S>) -> Result<S> {
    let mut v = p.lambda.int(0);
    for dg in digits.iter().rev() {
        let Some(d) = dg.d else {
            return Err(Error::Singular("infinite digit inside a finite prefix".into()));
        };
        let den = p.lambda.int(d as i64) * p.lambda.clone() + v;
        if den.sign() == 0 {
            return Err(Error::Singular("zero denominator in continued fraction".into()));
        }
        v = p.lambda.int(dg.eps as i64) * den.recip()?;
    }
    Ok(v)
}

/// x = (R_n + t R_{n-1}) / (S_n + t S_{n-1}) where t = T_alpha^n(x).
pub fn reconstruct<S: Real>(pair_n: &ConvergentPair<S>, pair_prev: &ConvergentPair<S>, tail: &S) -> Result<S> {
    let shift = pair_n.scale_log2 - pair_prev.scale_log2;
    let (pr, ps) = (pair_prev.r.scale_pow2(-shift as i32), pair_prev.s.scale_pow2(-shift as i32));
    let num = pair_n.r.clone() + tail.clone() * pr;
    let den = pair_n.s.clone() + tail.clone() * ps;
    if den.sign() == 0 {
        return Err(Error::Singular("S_n + t S_(n-1) = 0".into()));
    }
    num.div(&den)
}

/// Quantities in |x - R_n/S_n| = |t_n| / (S_n^2 (1 + t_n v_n)) <= alpha lambda / ((1 + alpha lambda - lambda) S_n^2).
#[derive(Debug, Clone, Serialize)]
pub struct ErrorBound<S> {
    /// Index actually used (smaller than requested if the orbit terminated).
    pub n: usize,
    pub actual: S,
    pub bound: S,
    pub tail: S,
    pub v: S,
    /// actual * S_n^2 * (1 + t_n v_n) - |t_n|; zero up to rounding.
    pub identity_residual: S,
}

impl<S: Real> ErrorBound<S> {
    pub fn holds(&self) -> bool {
        self.actual <= self.bound
    }
}

/// Approximation error of the n-th convergent of x against the uniform bound.
pub fn error_bound<S: Real>(x: &S, n: usize, p: &Params<S>) -> Result<ErrorBound<S>> {
    let orb = orbit(x, n, p)?;
    let m = orb.expansion.digits.len();
    let conv = convergents(&orb.expansion.digits, p);
    let last = &conv[m + 1];
    let prev = &conv[m];
    let tail = if m < orb.points.len() { orb.points[m].clone() } else { x.int(0) };
    let actual = (x.clone() - last.value()?).abs();
    let shift = last.scale_log2 - prev.scale_log2;
    let v = prev.s.scale_pow2(-shift as i32).div(&last.s)?;
    let s2 = last.s.clone() * last.s.clone();
    let bound = p.bound_constant().div(&s2)?.scale_pow2(-2 * last.scale_log2 as i32);
    let one = x.int(1);
    let identity_residual =
        (actual.clone() * s2 * (one + tail.clone() * v.clone())).scale_pow2(2 * last.scale_log2 as i32) - tail.abs();
    Ok(ErrorBound { n: m, actual, bound, tail, v, identity_residual })
}

/// Theta_n = S_n^2 |x - R_n / S_n|.
pub fn theta_direct<S: Real>(x: &S, n: usize, p: &Params<S>) -> Result<S> {
    let orb = orbit(x, n, p)?;
    let m = orb.expansion.digits.len();
    if m < n {
        return Ok(x.int(0));
    }
    let conv = convergents(&orb.expansion.digits, p);
    let last = &conv[m + 1];
    let diff = (x.clone() - last.value()?).abs();
    Ok((diff * last.s.clone() * last.s.clone()).scale_pow2(2 * last.scale_log2 as i32))
}

/// The bound checked exactly at every n up to `n_max` in the division-free form
/// |x S_n - R_n| S_n <= alpha lambda / (1 + alpha lambda - lambda).
#[derive(Debug, Clone, Serialize)]
pub struct BoundTrace {
    pub steps: usize,
    /// Indices where the bound fails.
    pub violations: Vec<usize>,
    /// max over n of |x S_n - R_n| S_n divided by the constant.
    pub worst_ratio: f64,
    pub digits: Vec<Digit>,
}

impl BoundTrace {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs on A_n = R_n - S_n x, which obeys the convergent recurrence and gives
/// t_n = -A_n / A_{n-1}, so no field inversions are needed.
pub fn error_bound_trace(x: &AlgebraicNumber, n_max: usize, p: &ExactParams) -> Result<BoundTrace> {
    if !p.contains(x) {
        return Err(Error::Domain(format!("x = {} lies outside the interval", x.to_decimal(12))));
    }
    let lam = &p.lambda;
    let k = p.bound_constant();
    let kf = k.to_f64();
    let shift = &p.alpha - &lam.int(1);
    let (mut a_prev, mut a) = (lam.int(1), -x.clone());
    let (mut s_prev, mut s) = (lam.int(0), lam.int(1));
    let mut trace = BoundTrace { steps: 0, violations: Vec::new(), worst_ratio: 0.0, digits: Vec::new() };
    for n in 1..=n_max {
        if a.is_zero() {
            break;
        }
        // digit of t_{n-1} = -a / a_prev
        let eps: i8 = if a.signum() == a_prev.signum() { -1 } else { 1 };
        let (num, den) = (a_prev.abs(), &a.abs() * lam);
        let guess = (num.to_f64() / den.to_f64() - shift.to_f64()).floor().max(1.0) as u64;
        let mut d = guess;
        while d > 1 && num < &den * &(&shift + &lam.int(d as i64)) {
            d -= 1;
        }
        while num >= &den * &(&shift + &lam.int(d as i64 + 1)) {
            d += 1;
        }
        let dl = &lam.int(d as i64) * lam;
        let e = lam.int(eps as i64);
        (a_prev, a) = (a.clone(), &(&dl * &a) + &(&e * &a_prev));
        (s_prev, s) = (s.clone(), &(&dl * &s) + &(&e * &s_prev));
        trace.digits.push(Digit::new(eps, d));
        trace.steps = n;
        let lhs = &a.abs() * &s;
        if lhs > k {
            trace.violations.push(n);
        }
        trace.worst_ratio = trace.worst_ratio.max(lhs.to_f64() / kf);
    }
    Ok(trace)
}
