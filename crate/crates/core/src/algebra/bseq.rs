use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::field::{GroupIndex, RosenField};
use super::number::AlgebraicNumber;
use crate::error::{Error, Result};

/// B_0 = 0, B_1 = 1, B_n = lambda B_{n-1} - B_{n-2}, i.e. B_n = sin(n pi/q) / sin(pi/q).
///
/// Values on [-radius, radius] are produced by running the recurrence in both
/// directions. Indices outside that window are reduced by the period 2q.
#[derive(Debug, Clone)]
pub struct BSequence {
    field: Arc<RosenField>,
    radius: i64,
    values: Vec<AlgebraicNumber>,
}

impl BSequence {
    pub fn new(q: GroupIndex) -> Result<Self> {
        Self::with_radius(q, 6 * q.q() as i64 + 4)
    }

    pub fn with_radius(q: GroupIndex, radius: i64) -> Result<Self> {
        let field = RosenField::get(q)?;
        let radius = radius.max(2);
        let lam = AlgebraicNumber::lambda(&field);
        let mut forward = vec![AlgebraicNumber::zero(&field), AlgebraicNumber::one(&field)];
        while (forward.len() as i64) <= radius {
            let n = forward.len();
            forward.push(&lam * &forward[n - 1] - &forward[n - 2]);
        }
        // B_{n-2} = lambda B_{n-1} - B_n
        let mut backward = vec![AlgebraicNumber::one(&field), AlgebraicNumber::zero(&field)];
        while (backward.len() as i64) <= radius + 1 {
            let n = backward.len();
            backward.push(&lam * &backward[n - 1] - &backward[n - 2]);
        }
        let mut values: Vec<AlgebraicNumber> = backward[2..=(radius as usize + 1)].iter().rev().cloned().collect();
        values.extend(forward.into_iter().take(radius as usize + 1));
        Ok(BSequence { field, radius, values })
    }

    pub fn field(&self) -> &Arc<RosenField> {
        &self.field
    }

    /// B_n for any integer n.
    pub fn get(&self, n: i64) -> &AlgebraicNumber {
        let n = if n.abs() > self.radius {
            let period = 2 * self.field.q() as i64;
            n.rem_euclid(period)
        } else {
            n
        };
        &self.values[(n + self.radius) as usize]
    }
}

/// The generator lambda_q = 2cos(pi/q).
pub fn lambda(q: GroupIndex) -> Result<AlgebraicNumber> {
    Ok(AlgebraicNumber::lambda(&RosenField::get(q)?))
}

/// B_n for the group index q.
pub fn b_n(q: GroupIndex, n: i64) -> Result<AlgebraicNumber> {
    let field = RosenField::get(q)?;
    let lam = AlgebraicNumber::lambda(&field);
    let period = 2 * q.q() as i64;
    let n = n.rem_euclid(period);
    let (mut prev, mut cur) = (AlgebraicNumber::zero(&field), AlgebraicNumber::one(&field));
    if n == 0 {
        return Ok(prev);
    }
    for _ in 1..n {
        let next = &lam * &cur - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// rho = (lambda - 2 + sqrt(lambda^2 - 4 lambda + 8)) / 2, odd q only.
pub fn rho(q: GroupIndex) -> Result<AlgebraicNumber> {
    AlgebraicNumber::rho(&RosenField::get(q)?)
}

/// delta_d = 1 / ((alpha + d) lambda).
pub fn delta_d(alpha: &AlgebraicNumber, d: u64) -> Result<AlgebraicNumber> {
    if d < 1 {
        return Err(Error::Parameter("d must be at least 1".into()));
    }
    let field = alpha.field();
    let lam = AlgebraicNumber::lambda(field);
    let dd = AlgebraicNumber::from_int(field, d as i64);
    ((alpha + &dd) * lam).recip()
}

/// Outcome of checking B_{n+m1} B_{-n+m2} - B_{n+m3} B_{-n+m4} = B_{m1-m3} B_{m2+m3}
/// over all m1 - m2 = m3 - m4 and n with indices in [-bound, bound].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub q: u32,
    pub bound: i64,
    pub cases: u64,
    pub failures: u64,
}

/// Exhaustive check of the B-product identity. Products B_a B_b are formed exactly once per
/// residue pair mod 2q and compared as integer coordinate vectors.
pub fn b_identity_check(q: GroupIndex, bound: i64) -> Result<IdentityReport> {
    let seq = BSequence::new(q)?;
    let period = 2 * q.q() as i64;
    let deg = seq.field().degree();
    let pu = period as usize;
    let mut table = vec![0i64; pu * pu * deg];
    for a in 0..period {
        for b in 0..period {
            let prod = seq.get(a) * seq.get(b);
            if !prod.rho_coeffs().is_empty() {
                return Err(Error::Consistency("B_a B_b left Q(lambda)".into()));
            }
            let at = ((a * period + b) as usize) * deg;
            for (i, c) in prod.base_coeffs().iter().enumerate() {
                table[at + i] = c
                    .is_integer()
                    .then(|| c.to_integer().to_i64())
                    .flatten()
                    .ok_or_else(|| Error::Consistency(format!("B_{a} B_{b} is not integral")))?;
            }
        }
    }
    let m = |x: i64| x.rem_euclid(period) as usize;
    let at = |a: i64, b: i64| (m(a) * pu + m(b)) * deg;
    let mut cases = 0u64;
    let mut failures = 0u64;
    for m1 in -bound..=bound {
        for m3 in -bound..=bound {
            for m2 in -bound..=bound {
                let m4 = m3 - m1 + m2;
                if m4.abs() > bound {
                    continue;
                }
                let rhs = at(m1 - m3, m2 + m3);
                for n in -bound..=bound {
                    let (x, y) = (at(n + m1, -n + m2), at(n + m3, -n + m4));
                    cases += 1;
                    if (0..deg).any(|i| table[x + i] - table[y + i] != table[rhs + i]) {
                        failures += 1;
                    }
                }
            }
        }
    }
    Ok(IdentityReport { q: q.q(), bound, cases, failures })
}
