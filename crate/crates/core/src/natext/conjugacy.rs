use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::domain::build_domain;
use super::map2d::{two_dim_inverse, two_dim_map};
use super::sweep::{compare_regions, Box2};
use crate::algebra::GroupIndex;
use crate::error::{Error, Result};
use crate::expansion::{Alpha, Real};

/// Direction of the reflection between Omega_{1/lambda} and Omega_{1/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Omega_{1/lambda} to Omega_{1/2}.
    Forward,
    /// Omega_{1/2} to Omega_{1/lambda}.
    Inverse,
}

/// M(x, y) = (-y, -x) for x < 0 and (y, x) for x >= 0; the inverse branches on the sign of x the same way.
pub fn conjugacy_m<S: Real>(q: GroupIndex, x: &S, y: &S, _direction: Direction) -> Result<(S, S)> {
    if !q.is_even() {
        return Err(Error::Parameter(format!("the reflection needs even q, got {}", q.q())));
    }
    Ok(if x.sign() < 0 { (-y.clone(), -x.clone()) } else { (y.clone(), x.clone()) })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyReport {
    pub q: u32,
    /// M maps the rectangles of Omega_{1/lambda} exactly onto Omega_{1/2}.
    pub corners_match: bool,
    pub overlapping_slabs: usize,
    pub mismatched_slabs: usize,
    pub samples: usize,
    /// Sample points where no preimage under T_{1/2} was found.
    pub missing_preimages: usize,
    /// max |T_{1/lambda}(x, y) - M^-1 T_{1/2}^-1 M (x, y)| over the samples.
    pub max_discrepancy: f64,
}

impl ConjugacyReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.corners_match && self.missing_preimages == 0 && self.max_discrepancy <= tol
    }
}

/// Check M exactly on the domains and the conjugation identity at `samples` random points.
pub fn conjugacy_region_check(q: GroupIndex, samples: usize, seed: u64) -> Result<ConjugacyReport> {
    if !q.is_even() {
        return Err(Error::Parameter(format!("the reflection needs even q, got {}", q.q())));
    }
    let inv = build_domain(q, &Alpha::InvLambda)?;
    let half = build_domain(q, &Alpha::Half)?;
    let zero = inv.context().num(0);

    let mut images = Vec::new();
    for r in &inv.rects {
        let parts =
            [(r.left.clone(), r.right.clone().min(zero.clone())), (r.left.clone().max(zero.clone()), r.right.clone())];
        for (a, b) in parts {
            if a >= b {
                continue;
            }
            let ((xa, ya), (xb, yb)) = if b <= zero {
                ((-r.height.clone(), -a.clone()), (zero.clone(), -b.clone()))
            } else {
                ((zero.clone(), a.clone()), (r.height.clone(), b.clone()))
            };
            images.push(Box2::new(xa, xb, ya, yb));
        }
    }
    let target: Vec<Box2> =
        half.rects.iter().map(|r| Box2::new(r.left.clone(), r.right.clone(), zero.clone(), r.height.clone())).collect();
    let sweep = compare_regions(&images, &target);

    let p_inv = inv.context().params.to_float();
    let p_half = half.context().params.to_float();
    let (f_inv, f_half) = (inv.to_f64(), half.to_f64());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut missing = 0;
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < samples {
        let (x, y) = f_inv.sample(rng.random(), rng.random());
        if x.abs() < 1e-9 {
            continue;
        }
        done += 1;
        let lhs = two_dim_map(&x, &y, &p_inv)?;
        let (mx, my) = conjugacy_m(q, &x, &y, Direction::Forward)?;
        match two_dim_inverse(mx, my, &p_half, &f_half) {
            Ok((px, py)) => {
                let rhs = conjugacy_m(q, &px, &py, Direction::Inverse)?;
                worst = worst.max((lhs.0 - rhs.0).abs()).max((lhs.1 - rhs.1).abs());
            }
            Err(_) => missing += 1,
        }
    }
    Ok(ConjugacyReport {
        q: q.q(),
        corners_match: sweep.tiles(),
        overlapping_slabs: sweep.overlapping_slabs,
        mismatched_slabs: sweep.mismatched_slabs,
        samples,
        missing_preimages: missing,
        max_discrepancy: worst,
    })
}
