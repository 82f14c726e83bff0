use serde::Serialize;

use super::domain::build;
use super::sweep::{compare_regions, Box2};
use super::{Context, DomainF64, NatExtDomain, Regime};
use crate::algebra::{AlgebraicNumber, GroupIndex};
use crate::error::{Error, Result};
use crate::expansion::{digit_of, Alpha};

/// Exact tiling check: the images of the pieces J_n x [0, H_n] cut along cylinders
/// cover Omega_alpha without overlap.
#[derive(Debug, Clone, Serialize)]
pub struct JigsawReport {
    pub q: u32,
    pub alpha: String,
    pub regime: Regime,
    /// Finite pieces mapped individually.
    pub pieces: usize,
    /// Cylinders with d >= tail_from lie next to 0 and are handled as one strip.
    pub tail_from: u64,
    /// The heights on both sides of 0 add up to lambda, so the tail strips stack without gaps.
    pub tail_stacks: bool,
    pub slabs: usize,
    pub overlapping_slabs: usize,
    pub mismatched_slabs: usize,
    /// max |nu(piece) - nu(image)| over the finite pieces, unnormalized.
    pub max_measure_defect: f64,
}

impl JigsawReport {
    pub fn passed(&self) -> bool {
        self.tail_stacks && self.overlapping_slabs == 0 && self.mismatched_slabs == 0 && self.max_measure_defect < 1e-12
    }
}

fn t_branch(ctx: &Context, x: &AlgebraicNumber, eps: i8, d: u64) -> Result<AlgebraicNumber> {
    let inv = x.recip()?;
    let s = if eps > 0 { inv } else { -inv };
    Ok(s - ctx.num(d as i64) * ctx.lambda())
}

fn y_branch(ctx: &Context, v: &AlgebraicNumber, eps: i8, d: u64) -> Result<AlgebraicNumber> {
    let dl = ctx.num(d as i64) * ctx.lambda();
    if eps > 0 { dl + v } else { dl - v }.recip()
}

/// Smallest D >= 2 with every nonzero rectangle endpoint outside (-delta_{D-1}, delta_{D-1}).
fn tail_start(dom: &NatExtDomain) -> u64 {
    let ctx = &dom.ctx;
    let ends: Vec<AlgebraicNumber> =
        dom.rects.iter().flat_map(|r| [r.left.abs(), r.right.abs()]).filter(|e| !e.is_zero()).collect();
    let mut d = 2;
    while ends.iter().any(|e| *e < ctx.params.delta(d - 1)) {
        d += 1;
    }
    d
}

pub(crate) fn check(dom: &NatExtDomain) -> Result<JigsawReport> {
    let ctx = &dom.ctx;
    let p = &ctx.params;
    let zero = ctx.num(0);
    let tail = tail_start(dom);
    let edge = p.delta(tail - 1);
    let height_near = |left_side: bool| {
        dom.rects
            .iter()
            .find(|r| if left_side { r.left < zero && r.right >= zero } else { r.left <= zero && r.right > zero })
            .map(|r| r.height.clone())
    };
    // with l_0 = 0 there are no negative cylinders and H_left = 0
    let hl = height_near(true).unwrap_or_else(|| zero.clone());
    let hr = height_near(false).ok_or_else(|| Error::Consistency("no rectangle to the right of 0".into()))?;
    let tail_stacks = &hl + &hr == *ctx.lambda();

    let mut images = Vec::new();
    let mut pieces = 0;
    let mut max_defect: f64 = 0.0;
    let mut cuts: Vec<AlgebraicNumber> = vec![zero.clone()];
    for d in 1..tail {
        cuts.push(p.delta(d));
        cuts.push(-p.delta(d));
    }
    for r in &dom.rects {
        let mut pts = vec![r.left.clone(), r.right.clone()];
        pts.extend(cuts.iter().filter(|c| **c > r.left && **c < r.right).cloned());
        pts.sort_by(crate::algebra::compare);
        for w in pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if *a >= -edge.clone() && *b <= edge {
                continue;
            }
            let mid = (a + b) * ctx.ratio(1, 2);
            let digit = digit_of(&mid, p)?;
            let (eps, d) = (digit.eps, digit.d.ok_or(Error::Terminated)?);
            let (ta, tb) = (t_branch(ctx, a, eps, d)?, t_branch(ctx, b, eps, d)?);
            let (y0, y1) = (y_branch(ctx, &zero, eps, d)?, y_branch(ctx, &r.height, eps, d)?);
            let before = DomainF64::box_mass(a.to_f64(), b.to_f64(), 0.0, r.height.to_f64());
            let img = Box2::new(ta, tb, y0, y1);
            let after = DomainF64::box_mass(img.x0.to_f64(), img.x1.to_f64(), img.y0.to_f64(), img.y1.to_f64());
            max_defect = max_defect.max((before - after).abs());
            images.push(img);
            pieces += 1;
        }
    }
    // cylinders (+-1 : d), d >= tail, are full and stack into [l_0, r_0) x [0, 1/(D lambda - H_left)]
    let top = y_branch(ctx, &hl, -1, tail)?;
    images.push(Box2::new(p.left.clone(), p.right.clone(), zero.clone(), top));

    let target: Vec<Box2> =
        dom.rects.iter().map(|r| Box2::new(r.left.clone(), r.right.clone(), zero.clone(), r.height.clone())).collect();
    let sweep = compare_regions(&images, &target);
    Ok(JigsawReport {
        q: ctx.q().q(),
        alpha: ctx.alpha_token.to_string(),
        regime: dom.regime,
        pieces,
        tail_from: tail,
        tail_stacks,
        slabs: sweep.slabs,
        overlapping_slabs: sweep.overlapping_slabs,
        mismatched_slabs: sweep.mismatched_slabs,
        max_measure_defect: max_defect,
    })
}

/// Run the exact jigsaw check for (q, alpha).
pub fn jigsaw_check(q: GroupIndex, alpha: &Alpha) -> Result<JigsawReport> {
    check(&build(Context::new(q, alpha)?)?)
}
