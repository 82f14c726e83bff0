use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{build_domain, DomainF64};
use crate::algebra::GroupIndex;
use crate::error::{Error, Result};
use crate::expansion::{digit_and_image, digit_of, Alpha, Digit, FloatParams, Params, Real};

/// A point (t_n, v_n) = T^n(x, 0) of the planar orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitSample {
    pub t: f64,
    pub v: f64,
    /// eps_{n+1}, the sign of t_n.
    pub eps_next: i8,
    pub n: u64,
}

/// (t, v) -> (T(t), 1/(d(t) lambda + eps(t) v)); `Error::Terminated` at t = 0.
pub fn two_dim_map<S: Real>(t: &S, v: &S, p: &Params<S>) -> Result<(S, S)> {
    let (digit, image) = digit_and_image(t, p)?;
    Ok((image, second_coordinate(digit, v, p)?))
}

pub(crate) fn second_coordinate<S: Real>(digit: Digit, v: &S, p: &Params<S>) -> Result<S> {
    let Some(d) = digit.d else {
        return Err(Error::Terminated);
    };
    let dl = p.lambda.int(d as i64) * p.lambda.clone();
    let den = if digit.eps > 0 { dl + v.clone() } else { dl - v.clone() };
    den.recip()
}

/// The preimage of (x, y) in `domain`, searched over the branches (eps, d) whose
/// second coordinate lands in [0, 1].
pub fn two_dim_inverse(x: f64, y: f64, p: &FloatParams, domain: &DomainF64) -> Result<(f64, f64)> {
    if y.is_nan() || y <= 0.0 {
        return Err(Error::Domain(format!("y = {y} has no preimage")));
    }
    let lam = p.lambda;
    let centre = (1.0 / (y * lam)).floor() as i64;
    let mut best: Option<(f64, (f64, f64))> = None;
    for eps in [1i8, -1] {
        for d in (centre - 2).max(1)..=centre + 2 {
            let dl = d as f64 * lam;
            let v = f64::from(eps) * (1.0 / y - dl);
            let t = f64::from(eps) / (x + dl);
            if !(-1e-12..=1.0 + 1e-12).contains(&v) || !p.contains(&t) {
                continue;
            }
            if digit_of(&t, p)? != Digit::new(eps, d as u64) {
                continue;
            }
            // distance outside the domain, 0 for interior points
            let miss = match domain.height_at(t) {
                Some(h) => (v - h).max(0.0) + (-v).max(0.0),
                None => f64::INFINITY,
            };
            if best.as_ref().is_none_or(|(m, _)| miss < *m) {
                best = Some((miss, (t, v)));
            }
        }
    }
    match best {
        Some((miss, pt)) if miss <= 1e-9 => Ok(pt),
        _ => Err(Error::Domain(format!("no preimage of ({x}, {y}) in the domain"))),
    }
}

/// Images of uniform samples of Omega_alpha tested for membership and for coincidences.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub samples: usize,
    /// Images farther than 1e-9 from the domain.
    pub outside: usize,
    /// Largest overshoot of an image above the local height.
    pub max_excess: f64,
    /// Distinct samples whose images agree to 1e-12.
    pub collisions: usize,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.outside == 0 && self.collisions == 0
    }
}

pub fn membership_check(q: GroupIndex, alpha: &Alpha, samples: usize, seed: u64) -> Result<MembershipReport> {
    let dom = build_domain(q, alpha)?;
    let fd = dom.to_f64();
    let p = dom.context().params.to_float();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(samples);
    let mut report = MembershipReport { samples, outside: 0, max_excess: 0.0, collisions: 0 };
    let mut done = 0;
    while done < samples {
        let (x, y) = fd.sample(rng.random(), rng.random());
        if x.abs() <= p.zero_band {
            continue;
        }
        done += 1;
        let (x2, y2) = two_dim_map(&x, &y, &p)?;
        if !fd.contains_tol(x2, y2, 1e-9) {
            report.outside += 1;
        }
        if let Some(h) = fd.height_at(x2.min(fd.right() - f64::EPSILON)) {
            report.max_excess = report.max_excess.max(y2 - h);
        }
        if !seen.insert(((x2 * 1e12).round() as i64, (y2 * 1e12).round() as i64)) {
            report.collisions += 1;
        }
    }
    Ok(report)
}
