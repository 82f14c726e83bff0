use serde::Serialize;

use super::Context;
use crate::algebra::{AlgebraicNumber, GroupIndex, Parity};
use crate::error::Result;
use crate::expansion::{digit_and_image, Alpha, Digit};

/// The orbits l_n = T^n(l_0), r_n = T^n(r_0) of the interval endpoints.
#[derive(Debug, Clone, Serialize)]
pub struct EndpointOrbits {
    #[serde(skip)]
    pub ell: Vec<AlgebraicNumber>,
    #[serde(skip)]
    pub r: Vec<AlgebraicNumber>,
    /// d_n(l_0) for n = 1, 2, ...; the digit of l_{n-1}.
    pub digits_l: Vec<Digit>,
    pub digits_r: Vec<Digit>,
    /// First (i, j) with i, j >= 1, |i - j| <= 1 and l_i = r_j.
    pub meet_index: Option<(usize, usize)>,
    pub closed_forms: Vec<ClosedFormCheck>,
}

/// One comparison of an iterate against its closed form.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormCheck {
    pub label: String,
    pub holds: bool,
}

impl EndpointOrbits {
    pub fn compute(ctx: &Context) -> Result<EndpointOrbits> {
        let k = match ctx.q().parity() {
            Parity::Even { p } => p as usize + 2,
            Parity::Odd { h } => 2 * h as usize + 4,
        };
        let (ell, digits_l) = iterate(ctx, &ctx.params.left, k)?;
        let (r, digits_r) = iterate(ctx, &ctx.params.right, k)?;
        let mut meet_index = None;
        'outer: for m in 1..=k {
            for (i, j) in [(m, m), (m - 1, m), (m, m - 1)] {
                if i >= 1 && j >= 1 && ell[i] == r[j] {
                    meet_index = Some((i, j));
                    break 'outer;
                }
            }
        }
        let mut out = EndpointOrbits { ell, r, digits_l, digits_r, meet_index, closed_forms: Vec::new() };
        out.closed_forms = closed_form_checks(ctx, &out);
        Ok(out)
    }

    /// d_n(l_0), 1-based.
    pub fn dl(&self, n: usize) -> Digit {
        self.digits_l[n - 1]
    }

    /// d_n(r_0), 1-based.
    pub fn dr(&self, n: usize) -> Digit {
        self.digits_r[n - 1]
    }

    pub fn closed_forms_hold(&self) -> bool {
        self.closed_forms.iter().all(|c| c.holds)
    }
}

fn iterate(ctx: &Context, x0: &AlgebraicNumber, k: usize) -> Result<(Vec<AlgebraicNumber>, Vec<Digit>)> {
    let mut pts = vec![x0.clone()];
    let mut digits = Vec::with_capacity(k);
    for _ in 0..k {
        let (d, t) = digit_and_image(pts.last().unwrap(), &ctx.params)?;
        digits.push(d);
        pts.push(t);
    }
    Ok((pts, digits))
}

fn prefix_is(digits: &[Digit], pattern: impl Fn(usize) -> Digit, len: usize) -> bool {
    len <= digits.len() && (0..len).all(|i| digits[i] == pattern(i))
}

fn closed_form_checks(ctx: &Context, o: &EndpointOrbits) -> Vec<ClosedFormCheck> {
    let b = |n: i64| ctx.bn(n);
    let al = &ctx.params.alpha * ctx.lambda();
    let am1l = &al - ctx.lambda();
    let one = ctx.num(1);
    let minus_one = Digit::new(-1, 1);
    let mut out = Vec::new();
    let mut check = |label: String, got: &AlgebraicNumber, num: AlgebraicNumber, den: AlgebraicNumber| {
        let holds = !den.is_zero() && *got == -(num / den);
        out.push(ClosedFormCheck { label, holds });
    };
    let last = o.ell.len() - 1;

    // l_0 = [(-1:1)^n, ...]
    for n in 0..last {
        if !prefix_is(&o.digits_l, |_| minus_one, n) {
            break;
        }
        let n = n as i64;
        check(format!("l_{n} (B-form)"), &o.ell[n as usize], &b(n + 1) * &al - b(n + 2), &b(n) * &al - b(n + 1));
    }
    // r_0 = [+1:1, (-1:1)^(n-1), ...]
    let r_pat = |i: usize| if i == 0 { Digit::new(1, 1) } else { minus_one };
    for n in 1..last {
        if !prefix_is(&o.digits_r, r_pat, n) {
            break;
        }
        let n = n as i64;
        check(format!("r_{n} (B-form)"), &o.r[n as usize], &b(n + 1) * &al - b(n), &b(n) * &al - b(n - 1));
    }
    if let Parity::Odd { h } = ctx.q().parity() {
        let h = h as usize;
        let lp = move |i: usize| if i == h { Digit::new(-1, 2) } else { minus_one };
        let rp = move |i: usize| {
            let d = lp(i);
            if i == 0 {
                Digit::new(1, d.d.unwrap())
            } else {
                d
            }
        };
        let c = |n: i64| b(n + 2) - b(n + 1) + b(n) * ctx.num(2);
        let s = |n: i64| b(n + 1) + b(n);
        for n in 1..=(h as i64 + 1) {
            let idx = h + n as usize;
            if prefix_is(&o.digits_l, lp, idx) {
                check(format!("l_{idx} (odd low form)"), &o.ell[idx], s(n) * &am1l + c(n), s(n - 1) * &am1l + c(n - 1));
            }
            if prefix_is(&o.digits_r, rp, idx) {
                check(format!("r_{idx} (odd low form)"), &o.r[idx], s(n) * &al - c(n), s(n - 1) * &al - c(n - 1));
            }
        }
        let idx = 2 * h + 1;
        let two_a_minus_one = &ctx.params.alpha * ctx.num(2) - &one;
        let l2 = ctx.lambda() * ctx.lambda();
        if prefix_is(&o.digits_r, rp, idx) {
            let den = &ctx.params.alpha * &l2 - ctx.lambda() * ctx.num(2) + ctx.num(2);
            check(format!("r_{idx} (explicit)"), &o.r[idx], &two_a_minus_one * ctx.lambda(), den);
        }
        if prefix_is(&o.digits_l, lp, idx) {
            let den = (&one - &ctx.params.alpha) * &l2 - ctx.lambda() * ctx.num(2) + ctx.num(2);
            check(format!("l_{idx} (explicit)"), &o.ell[idx], -(&two_a_minus_one * ctx.lambda()), den);
        }
    }
    out
}

/// Exact endpoint orbits for (q, alpha).
pub fn endpoint_orbits(q: GroupIndex, alpha: &Alpha) -> Result<EndpointOrbits> {
    EndpointOrbits::compute(&Context::new(q, alpha)?)
}
