use serde::Serialize;

use super::{Context, EndpointOrbits, Regime};
use crate::algebra::{AlgebraicNumber, GroupIndex};
use crate::error::Result;
use crate::expansion::Alpha;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Term {
    L(usize),
    R(usize),
    NegDelta(u64),
    PosDelta(u64),
    Zero,
}

impl Term {
    fn label(self) -> String {
        match self {
            Term::L(n) => format!("l_{n}"),
            Term::R(n) => format!("r_{n}"),
            Term::NegDelta(d) => format!("-delta_{d}"),
            Term::PosDelta(d) => format!("delta_{d}"),
            Term::Zero => "0".into(),
        }
    }

    fn value(self, ctx: &Context, o: &EndpointOrbits) -> AlgebraicNumber {
        match self {
            Term::L(n) => o.ell[n].clone(),
            Term::R(n) => o.r[n].clone(),
            Term::NegDelta(d) => -ctx.params.delta(d),
            Term::PosDelta(d) => ctx.params.delta(d),
            Term::Zero => ctx.num(0),
        }
    }
}

/// Groups of equal terms, strictly increasing from one group to the next.
type Chain = Vec<Vec<Term>>;

/// One exact comparison of the certificate.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub lhs: String,
    pub relation: &'static str,
    pub rhs: String,
    pub holds: bool,
    pub lhs_decimal: String,
    pub rhs_decimal: String,
}

/// A relation between critical digits, e.g. d_p(r_0) = d_p(l_0) + 1.
#[derive(Debug, Clone, Serialize)]
pub struct DigitRelation {
    pub statement: String,
    pub lhs: Option<u64>,
    pub rhs: Option<u64>,
    pub holds: bool,
}

/// Every comparison of the ordering theorem for one (q, alpha).
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub q: u32,
    pub alpha: String,
    pub regime: Regime,
    pub chain: String,
    pub comparisons: Vec<Comparison>,
    pub digit_relations: Vec<DigitRelation>,
    pub closed_forms_checked: usize,
    pub closed_forms_hold: bool,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.closed_forms_hold
            && self.comparisons.iter().all(|c| c.holds)
            && self.digit_relations.iter().all(|d| d.holds)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .comparisons
            .iter()
            .filter(|c| !c.holds)
            .map(|c| format!("{} {} {} ({} vs {})", c.lhs, c.relation, c.rhs, c.lhs_decimal, c.rhs_decimal))
            .collect();
        out.extend(self.digit_relations.iter().filter(|d| !d.holds).map(|d| d.statement.clone()));
        if !self.closed_forms_hold {
            out.push("closed forms of the endpoint orbits".into());
        }
        out
    }
}

fn chain_for(ctx: &Context) -> Chain {
    use Term::*;
    let k = ctx.half_index();
    let mut c: Chain = Vec::new();
    match ctx.regime {
        Regime::EvenInterior => {
            let p = k;
            c.push(vec![L(0)]);
            for j in 1..=p - 2 {
                c.push(vec![R(j)]);
                c.push(vec![L(j)]);
            }
            c.extend([vec![NegDelta(1)], vec![R(p - 1)], vec![Zero], vec![L(p - 1)], vec![R(0)]]);
        }
        Regime::EvenHalf => {
            let p = k;
            c.push(vec![L(0)]);
            for j in 1..=p - 2 {
                c.push(vec![R(j), L(j)]);
            }
            c.extend([vec![NegDelta(1)], vec![R(p - 1), L(p - 1), Zero], vec![R(0)]]);
        }
        Regime::EvenInvLambda => {
            let p = k;
            for j in 0..=p - 2 {
                c.push(vec![L(j), R(j + 1)]);
            }
            c.last_mut().unwrap().push(NegDelta(1));
            c.extend([vec![Zero], vec![R(0)]]);
        }
        _ if k == 0 => return nakada_chain(ctx.regime),
        Regime::OddLow | Regime::OddHalf => {
            let h = k;
            let merged = ctx.regime == Regime::OddHalf;
            let pair = |a: Term, b: Term| if merged { vec![vec![a, b]] } else { vec![vec![a], vec![b]] };
            c.push(vec![L(0)]);
            for j in 1..h {
                c.extend(pair(R(h + j), L(h + j)));
                c.extend(pair(R(j), L(j)));
            }
            c.extend(pair(R(2 * h), L(2 * h)));
            c.push(vec![NegDelta(1)]);
            c.extend(pair(R(h), L(h)));
            c.push(vec![NegDelta(2)]);
            if merged {
                c.push(vec![R(2 * h + 1), L(2 * h + 1), Zero]);
            } else {
                c.extend([vec![R(2 * h + 1)], vec![Zero], vec![L(2 * h + 1)]]);
            }
            c.push(vec![R(0)]);
        }
        Regime::OddRho => {
            let h = k;
            c.push(vec![L(0), R(h + 1)]);
            for j in 1..h {
                c.push(vec![L(h + j), R(j)]);
                c.push(vec![L(j)]);
            }
            c.push(vec![L(2 * h), R(h), NegDelta(1)]);
            c.extend([vec![L(h)], vec![NegDelta(2)], vec![Zero], vec![R(0)]]);
        }
        Regime::OddHigh => {
            let h = k;
            c.push(vec![L(0)]);
            for j in 1..h {
                c.push(vec![R(j)]);
                c.push(vec![L(j)]);
            }
            c.extend([vec![R(h)], vec![NegDelta(1)], vec![L(h)], vec![Zero], vec![R(h + 1)], vec![R(0)]]);
        }
        Regime::OddInvLambda => {
            let h = k;
            for j in 0..h {
                c.push(vec![L(j), R(j + 1)]);
            }
            c.extend([vec![NegDelta(1)], vec![L(h), R(h + 1), Zero], vec![R(0)]]);
        }
    }
    c
}

/// Chains for q = 3, where the general odd chains degenerate.
fn nakada_chain(regime: Regime) -> Chain {
    use Term::*;
    match regime {
        Regime::OddHalf => vec![vec![NegDelta(1)], vec![L(0)], vec![NegDelta(2)], vec![R(1), L(1), Zero], vec![R(0)]],
        Regime::OddLow => {
            vec![vec![NegDelta(1)], vec![L(0)], vec![NegDelta(2)], vec![R(1)], vec![Zero], vec![L(1)], vec![R(0)]]
        }
        Regime::OddRho => vec![vec![NegDelta(1)], vec![L(0), R(1), NegDelta(2)], vec![Zero], vec![R(0), PosDelta(1)]],
        Regime::OddHigh => vec![vec![NegDelta(2)], vec![L(0)], vec![Zero], vec![R(1)], vec![R(0)]],
        Regime::OddInvLambda => vec![vec![L(0), R(1), Zero], vec![R(0)]],
        _ => unreachable!("even regimes never reach the q = 3 chains"),
    }
}

fn render(chain: &Chain) -> String {
    chain.iter().map(|g| g.iter().map(|t| t.label()).collect::<Vec<_>>().join(" = ")).collect::<Vec<_>>().join(" < ")
}

fn digit_relations(ctx: &Context, o: &EndpointOrbits) -> Vec<DigitRelation> {
    let k = ctx.half_index();
    let d = |x: crate::expansion::Digit| x.d;
    let mut out = Vec::new();
    let merge = |i: usize, j: usize, out: &mut Vec<DigitRelation>| {
        out.push(DigitRelation {
            statement: format!("l_{i} = r_{j}"),
            lhs: None,
            rhs: None,
            holds: o.ell[i] == o.r[j],
        });
    };
    let plus_one =
        |name_big: String, big: Option<u64>, name_small: String, small: Option<u64>, out: &mut Vec<DigitRelation>| {
            out.push(DigitRelation {
                statement: format!("{name_big} = {name_small} + 1"),
                lhs: big,
                rhs: small,
                holds: matches!((big, small), (Some(a), Some(b)) if a == b + 1),
            });
        };
    match ctx.regime {
        Regime::EvenInterior => {
            merge(k, k, &mut out);
            plus_one(format!("d_{k}(r_0)"), d(o.dr(k)), format!("d_{k}(l_0)"), d(o.dl(k)), &mut out);
        }
        Regime::OddLow => {
            let n = 2 * k + 2;
            merge(n, n, &mut out);
            plus_one(format!("d_{n}(r_0)"), d(o.dr(n)), format!("d_{n}(l_0)"), d(o.dl(n)), &mut out);
        }
        Regime::OddHigh => {
            merge(k + 1, k + 2, &mut out);
            plus_one(
                format!("d_{}(l_0)", k + 1),
                d(o.dl(k + 1)),
                format!("d_{}(r_0)", k + 2),
                d(o.dr(k + 2)),
                &mut out,
            );
        }
        _ => {}
    }
    out
}

/// Check the ordering chain of the regime exactly.
pub fn verify_ordering(q: GroupIndex, alpha: &Alpha) -> Result<Certificate> {
    let ctx = Context::new(q, alpha)?;
    let o = EndpointOrbits::compute(&ctx)?;
    Ok(certificate(&ctx, &o))
}

pub(crate) fn certificate(ctx: &Context, o: &EndpointOrbits) -> Certificate {
    let chain = chain_for(ctx);
    let mut comparisons = Vec::new();
    let mut push = |a: Term, rel: &'static str, b: Term| {
        let (x, y) = (a.value(ctx, o), b.value(ctx, o));
        let holds = match rel {
            "=" => x == y,
            _ => x < y,
        };
        comparisons.push(Comparison {
            lhs: a.label(),
            relation: rel,
            rhs: b.label(),
            holds,
            lhs_decimal: x.to_decimal(20),
            rhs_decimal: y.to_decimal(20),
        });
    };
    for (gi, group) in chain.iter().enumerate() {
        for w in group.windows(2) {
            push(w[0], "=", w[1]);
        }
        if gi + 1 < chain.len() {
            push(*group.last().unwrap(), "<", chain[gi + 1][0]);
        }
    }
    Certificate {
        q: ctx.q().q(),
        alpha: ctx.alpha_token.to_string(),
        regime: ctx.regime,
        chain: render(&chain),
        comparisons,
        digit_relations: digit_relations(ctx, o),
        closed_forms_checked: o.closed_forms.len(),
        closed_forms_hold: o.closed_forms_hold(),
    }
}
