use std::f64::consts::PI;

use serde::Serialize;
use serde_json::{json, Value};

use super::{ClosedFormCheck, Context, EndpointOrbits, HeightSystem, Regime};
use crate::algebra::{AlgebraicNumber, GroupIndex, Parity};
use crate::error::{Error, Result};
use crate::expansion::Alpha;

/// One rectangle J_n x [0, H_n].
#[derive(Debug, Clone)]
pub struct Rect {
    /// The index n of J_n in the regime's numbering.
    pub index: usize,
    pub left: AlgebraicNumber,
    pub right: AlgebraicNumber,
    pub height: AlgebraicNumber,
}

impl Rect {
    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "index": self.index,
            "left": self.left.to_repr(digits),
            "right": self.right.to_repr(digits),
            "height": self.height.to_repr(digits),
        })
    }
}

/// The digits fixed by the ordering theorem, e.g. d_p(l_0) and d_p(r_0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CriticalDigits {
    pub index_l: usize,
    pub d_l: Option<u64>,
    pub index_r: usize,
    pub d_r: Option<u64>,
}

/// The domain Omega_alpha of the planar map.
#[derive(Debug, Clone)]
pub struct NatExtDomain {
    pub regime: Regime,
    pub alpha: Alpha,
    pub rects: Vec<Rect>,
    pub heights: HeightSystem,
    pub orbits: EndpointOrbits,
    pub critical: Option<CriticalDigits>,
    /// Indices n of the generic layout whose J_n is empty (or absorbed into a neighbour) at this alpha.
    pub dropped: Vec<usize>,
    /// Partition, width and explicit-formula checks run at construction.
    pub checks: Vec<ClosedFormCheck>,
    pub(crate) ctx: Context,
}

impl NatExtDomain {
    pub fn q(&self) -> GroupIndex {
        self.ctx.q()
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn checks_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds) && self.heights.all_hold()
    }

    pub fn left(&self) -> &AlgebraicNumber {
        &self.ctx.params.left
    }

    pub fn right(&self) -> &AlgebraicNumber {
        &self.ctx.params.right
    }

    pub fn to_f64(&self) -> DomainF64 {
        DomainF64 { rects: self.rects.iter().map(|r| [r.left.to_f64(), r.right.to_f64(), r.height.to_f64()]).collect() }
    }

    /// prod (1 + b H) / (1 + a H) over the rectangles; its log is the nu-mass before normalization.
    pub fn mass_argument(&self) -> Result<AlgebraicNumber> {
        let one = self.ctx.num(1);
        let mut acc = one.clone();
        for r in &self.rects {
            let lo = &one + &r.left * &r.height;
            let hi = &one + &r.right * &r.height;
            if !lo.is_positive() || !hi.is_positive() {
                return Err(Error::Consistency(format!("1 + xH <= 0 on J_{}", r.index)));
            }
            acc = acc * hi / lo;
        }
        Ok(acc)
    }

    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "q": self.q().q(),
            "alpha": self.alpha.to_string(),
            "regime": self.regime,
            "critical_digits": self.critical,
            "rectangles": self.rects.iter().map(|r| r.to_json(digits)).collect::<Vec<_>>(),
            "dropped": self.dropped,
            "relations": self.heights.relations,
            "checks": self.checks,
        })
    }
}

fn rect(index: usize, left: &AlgebraicNumber, right: &AlgebraicNumber, height: AlgebraicNumber) -> Rect {
    Rect { index, left: left.clone(), right: right.clone(), height }
}

fn raw_rects(ctx: &Context, o: &EndpointOrbits, hs: &HeightSystem) -> Vec<Rect> {
    let (l, r) = (&o.ell, &o.r);
    let k = ctx.half_index();
    let mut out = Vec::new();
    match ctx.regime {
        Regime::EvenInterior | Regime::EvenHalf => {
            let p = k;
            for n in 1..p {
                out.push(rect(2 * n - 1, &l[n - 1], &r[n], hs.h(2 * n - 1)));
                out.push(rect(2 * n, &r[n], &l[n], hs.h(2 * n)));
            }
            out.push(rect(2 * p - 1, &l[p - 1], &r[0], hs.h(2 * p - 1)));
        }
        Regime::EvenInvLambda => {
            let p = k;
            for n in 1..p - 1 {
                out.push(rect(2 * n, &r[n], &l[n], hs.h(2 * n)));
            }
            out.push(rect(2 * p - 2, &r[p - 1], &r[0], hs.h(2 * p - 2)));
        }
        Regime::OddHigh | Regime::OddInvLambda => {
            let h = k;
            for n in 1..=h {
                out.push(rect(2 * n - 1, &l[n - 1], &r[n], hs.h(2 * n - 1)));
                out.push(rect(2 * n, &r[n], &l[n], hs.h(2 * n)));
            }
            out.push(rect(2 * h + 1, &l[h], &r[h + 1], hs.h(2 * h + 1)));
            out.push(rect(2 * h + 2, &r[h + 1], &r[0], hs.h(2 * h + 2)));
        }
        Regime::OddRho => {
            let h = k;
            for n in 1..=h {
                out.push(rect(2 * n - 1, &l[n - 1], &r[n], hs.h(2 * n - 1)));
                out.push(rect(2 * n, &r[n], &l[n], hs.h(2 * n)));
            }
            out.push(rect(2 * h + 1, &l[h], &r[0], hs.h(2 * h + 1)));
        }
        Regime::OddLow | Regime::OddHalf => {
            let h = k;
            for n in 1..=h {
                out.push(rect(4 * n - 3, &l[n - 1], &r[h + n], hs.h(4 * n - 3)));
                out.push(rect(4 * n - 2, &r[h + n], &l[h + n], hs.h(4 * n - 2)));
                out.push(rect(4 * n - 1, &l[h + n], &r[n], hs.h(4 * n - 1)));
                out.push(rect(4 * n, &r[n], &l[n], hs.h(4 * n)));
            }
            out.push(rect(4 * h + 1, &l[h], &r[2 * h + 1], hs.h(4 * h + 1)));
            out.push(rect(4 * h + 2, &r[2 * h + 1], &l[2 * h + 1], hs.h(4 * h + 2)));
            out.push(rect(4 * h + 3, &l[2 * h + 1], &r[0], hs.h(4 * h + 3)));
        }
    }
    out
}

fn critical_digits(ctx: &Context, o: &EndpointOrbits) -> Option<CriticalDigits> {
    let k = ctx.half_index();
    let (il, ir) = match ctx.regime {
        Regime::EvenInterior => (k, k),
        Regime::OddLow => (2 * k + 2, 2 * k + 2),
        Regime::OddHigh => (k + 1, k + 2),
        _ => return None,
    };
    Some(CriticalDigits { index_l: il, d_l: o.dl(il).d, index_r: ir, d_r: o.dr(ir).d })
}

/// Compare the rectangles against the explicit B-sequence descriptions of the boundary domains.
fn explicit_forms(ctx: &Context, rects: &[Rect]) -> Vec<ClosedFormCheck> {
    let b = |n: i64| ctx.bn(n);
    let mut expected: Vec<[AlgebraicNumber; 3]> = Vec::new();
    match ctx.regime {
        Regime::EvenHalf => {
            let p = ctx.half_index() as i64;
            for n in (1..p).rev() {
                expected.push([-(b(n) / b(n + 1)), -(b(n - 1) / b(n)), (b(n) - b(n + 1)) / (b(n - 1) - b(n))]);
            }
            expected.push([ctx.num(0), ctx.lambda() * ctx.ratio(1, 2), ctx.num(1)]);
        }
        Regime::EvenInvLambda => {
            let p = ctx.half_index() as i64;
            for n in 1..p {
                expected.push([
                    (b(n) - b(n + 1)) / (b(n) - b(n - 1)),
                    (b(n + 1) - b(n + 2)) / (b(n + 1) - b(n)),
                    b(n) / b(n + 1),
                ]);
            }
        }
        Regime::OddRho => {
            let h = ctx.half_index() as i64;
            let mut rs = rects.iter();
            for j in 1..=h {
                for height in [(b(j - 1) + b(j)) / (b(j) + b(j + 1)), b(j) / b(j + 1)] {
                    if let Some(r) = rs.next() {
                        expected.push([r.left.clone(), r.right.clone(), height]);
                    }
                }
            }
            let last = rects.last().map(|r| r.left.clone()).unwrap_or_else(|| ctx.num(0));
            expected.push([last, ctx.rho().clone(), ctx.lambda() * ctx.ratio(1, 2)]);
        }
        _ => return Vec::new(),
    }
    let holds = expected.len() == rects.len()
        && expected.iter().zip(rects).all(|(e, r)| e[0] == r.left && e[1] == r.right && e[2] == r.height);
    vec![ClosedFormCheck { label: "explicit B-form of the domain".into(), holds }]
}

pub(crate) fn build(ctx: Context) -> Result<NatExtDomain> {
    let orbits = EndpointOrbits::compute(&ctx)?;
    let heights = HeightSystem::solve(&ctx);
    let mut rects = raw_rects(&ctx, &orbits, &heights);
    rects.retain(|r| r.left != r.right);
    let k = ctx.half_index();
    let nominal = match ctx.q().parity() {
        Parity::Even { .. } => 2 * k - 1,
        Parity::Odd { .. } if matches!(ctx.regime, Regime::OddLow | Regime::OddHalf) => 4 * k + 3,
        Parity::Odd { .. } => 2 * k + 2,
    };
    let dropped = (1..=nominal).filter(|n| rects.iter().all(|r| r.index != *n)).collect();

    let mut checks = Vec::new();
    let ordered = rects.iter().all(|r| r.left < r.right);
    let adjacent = rects.windows(2).all(|w| w[0].right == w[1].left);
    let ends = rects.first().is_some_and(|r| r.left == ctx.params.left)
        && rects.last().is_some_and(|r| r.right == ctx.params.right);
    checks.push(ClosedFormCheck { label: "J_n partition [l_0, r_0)".into(), holds: ordered && adjacent && ends });
    let width = rects.iter().fold(ctx.num(0), |acc, r| acc + &r.right - &r.left);
    checks.push(ClosedFormCheck {
        label: "total width r_0 - l_0".into(),
        holds: width == &ctx.params.right - &ctx.params.left,
    });
    let positive = rects.iter().all(|r| r.height.is_positive() && r.height <= ctx.num(1));
    checks.push(ClosedFormCheck { label: "0 < H_n <= 1".into(), holds: positive });
    checks.extend(explicit_forms(&ctx, &rects));

    Ok(NatExtDomain {
        regime: ctx.regime,
        alpha: ctx.alpha_token.clone(),
        critical: critical_digits(&ctx, &orbits),
        rects,
        dropped,
        heights,
        orbits,
        checks,
        ctx,
    })
}

/// Build Omega_alpha for (q, alpha).
pub fn build_domain(q: GroupIndex, alpha: &Alpha) -> Result<NatExtDomain> {
    build(Context::new(q, alpha)?)
}

/// Lebesgue-density mass of the domain under dx dy / (1 + xy)^2, i.e. 1 / C_{q,alpha}.
pub fn domain_mass(domain: &NatExtDomain) -> Result<f64> {
    let mut total = 0.0;
    for r in &domain.rects {
        let lo = domain.ctx.num(1) + &r.left * &r.height;
        let hi = domain.ctx.num(1) + &r.right * &r.height;
        if !lo.is_positive() {
            return Err(Error::Consistency(format!("1 + aH <= 0 on J_{}", r.index)));
        }
        total += (hi / lo).to_f64().ln();
    }
    Ok(total)
}

/// C_{q,alpha} with its closed form.
#[derive(Debug, Clone, Serialize)]
pub struct NormalizingConstant {
    pub regime: Regime,
    /// The closed form, e.g. "1/log((1+cos(pi/q))/sin(pi/q))".
    pub formula: &'static str,
    /// C from the trigonometric closed form.
    pub value: f64,
    /// exp(1/C) as an exact field element.
    #[serde(skip)]
    pub argument: AlgebraicNumber,
    /// The exact product over the rectangles equals `argument`.
    pub exact_match: bool,
    /// |1/C - domain_mass|.
    pub residual: f64,
}

/// C_{q,alpha} in closed form, checked exactly against the domain.
pub fn normalizing_constant(q: GroupIndex, alpha: &Alpha) -> Result<NormalizingConstant> {
    let dom = build_domain(q, alpha)?;
    let ctx = &dom.ctx;
    let qf = q.q() as f64;
    let lam = q.lambda_f64();
    let (formula, argument, trig) = match q.parity() {
        Parity::Even { p } => {
            let p = p as i64;
            (
                "1/log((1+cos(pi/q))/sin(pi/q))",
                (ctx.bn(p) - ctx.bn(p - 1)).recip()?,
                (1.0 + (PI / qf).cos()) / (PI / qf).sin(),
            )
        }
        Parity::Odd { h } => {
            let bh = ctx.bn(h as i64 + 1);
            let s = 2.0 * (PI / (2.0 * qf)).sin();
            match dom.regime {
                Regime::OddHigh | Regime::OddInvLambda => {
                    let a = ctx.params.alpha.to_f64();
                    (
                        "1/log((1+2 alpha cos(pi/q))/(2 sin(pi/(2q))))",
                        (ctx.num(1) + &ctx.params.alpha * ctx.lambda()) * bh,
                        (1.0 + 2.0 * a * (PI / qf).cos()) / s,
                    )
                }
                _ => {
                    let rho = (lam - 2.0 + (lam * lam - 4.0 * lam + 8.0).sqrt()) / 2.0;
                    ("1/log((1+rho)/sqrt(2-lambda))", (ctx.num(1) + ctx.rho()) * bh, (1.0 + rho) / s)
                }
            }
        }
    };
    let exact_match = dom.mass_argument()? == argument;
    let value = 1.0 / trig.ln();
    let residual = (trig.ln() - domain_mass(&dom)?).abs();
    Ok(NormalizingConstant { regime: dom.regime, formula, value, argument, exact_match, residual })
}

/// Float copy of a domain for sampling and membership tests.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainF64 {
    /// [left, right, height] per rectangle, left to right.
    pub rects: Vec<[f64; 3]>,
}

impl DomainF64 {
    pub fn left(&self) -> f64 {
        self.rects[0][0]
    }

    pub fn right(&self) -> f64 {
        self.rects[self.rects.len() - 1][1]
    }

    /// Index of the rectangle whose J contains x.
    pub fn locate(&self, x: f64) -> Option<usize> {
        let i = self.rects.partition_point(|r| r[1] <= x);
        (i < self.rects.len() && self.rects[i][0] <= x).then_some(i)
    }

    pub fn height_at(&self, x: f64) -> Option<f64> {
        self.locate(x).map(|i| self.rects[i][2])
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.contains_tol(x, y, 0.0)
    }

    /// Membership with slack `tol` in both coordinates.
    pub fn contains_tol(&self, x: f64, y: f64, tol: f64) -> bool {
        if y < -tol || x < self.left() - tol || x > self.right() + tol {
            return false;
        }
        let xc = x.clamp(self.left(), self.right() - f64::EPSILON);
        let lo = self.locate(xc - tol).or(self.locate(xc));
        let hi = self.locate(xc + tol).or(self.locate(xc));
        match (lo, hi) {
            (Some(a), Some(b)) => (a..=b).any(|i| y <= self.rects[i][2] + tol),
            _ => false,
        }
    }

    /// Unnormalized nu-mass of [a, b] x [y0, y1].
    pub fn box_mass(a: f64, b: f64, y0: f64, y1: f64) -> f64 {
        let f = |x: f64, y: f64| (x * y).ln_1p();
        f(b, y1) - f(a, y1) - f(b, y0) + f(a, y0)
    }

    /// Unnormalized nu-mass of rectangle i.
    pub fn rect_mass(&self, i: usize) -> f64 {
        let [a, b, h] = self.rects[i];
        Self::box_mass(a, b, 0.0, h)
    }

    pub fn area(&self) -> f64 {
        self.rects.iter().map(|r| (r[1] - r[0]) * r[2]).sum()
    }

    /// A Lebesgue-uniform point from two uniforms in [0, 1).
    pub fn sample(&self, u: f64, w: f64) -> (f64, f64) {
        let mut target = u * self.area();
        for r in &self.rects {
            let a = (r[1] - r[0]) * r[2];
            if target < a || std::ptr::eq(r, self.rects.last().unwrap()) {
                let x = r[0] + (target / a).min(1.0 - f64::EPSILON) * (r[1] - r[0]);
                return (x.min(r[1]), w * r[2]);
            }
            target -= a;
        }
        unreachable!()
    }
}
