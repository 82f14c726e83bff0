use serde::Serialize;

use super::{Context, Regime};
use crate::algebra::{AlgebraicNumber, GroupIndex};
use crate::error::Result;
use crate::expansion::Alpha;

/// Which relation system the heights solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Even,
    OddHigh,
    OddLow,
}

/// Heights H_1, ..., H_N with the checked relations.
#[derive(Debug, Clone, Serialize)]
pub struct HeightSystem {
    pub kind: SystemKind,
    #[serde(skip)]
    pub heights: Vec<AlgebraicNumber>,
    pub relations: Vec<RelationCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub label: String,
    pub statement: String,
    pub holds: bool,
}

impl HeightSystem {
    /// H_n, 1-based; H_0 = 0.
    pub fn h(&self, n: usize) -> AlgebraicNumber {
        if n == 0 {
            AlgebraicNumber::zero(self.heights[0].field())
        } else {
            self.heights[n - 1].clone()
        }
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|r| r.holds)
    }

    pub(crate) fn solve(ctx: &Context) -> HeightSystem {
        let k = ctx.half_index() as i64;
        let b = |n: i64| ctx.bn(n);
        let kind = match ctx.regime {
            Regime::EvenInterior | Regime::EvenHalf | Regime::EvenInvLambda => SystemKind::Even,
            Regime::OddHigh | Regime::OddInvLambda | Regime::OddRho => SystemKind::OddHigh,
            Regime::OddLow | Regime::OddHalf => SystemKind::OddLow,
        };
        let size = match kind {
            SystemKind::Even => 2 * k - 1,
            SystemKind::OddHigh => 2 * k + 2,
            SystemKind::OddLow => 4 * k + 3,
        } as usize;
        let mut hs: Vec<Option<AlgebraicNumber>> = vec![None; size + 1];
        let mut set = |i: i64, v: AlgebraicNumber| {
            assert!(hs[i as usize].is_none(), "H_{i} assigned twice");
            hs[i as usize] = Some(v);
        };
        match kind {
            SystemKind::Even => {
                let p = k;
                for n in 1..p {
                    set(2 * n, b(n) / b(n + 1));
                }
                for n in 1..=p {
                    set(2 * n - 1, (b(p - n) - b(p + 1 - n)) / (b(p - 1 - n) - b(p - n)));
                }
            }
            SystemKind::OddHigh => {
                for n in 1..=k + 1 {
                    set(2 * n, b(n) / b(n + 1));
                    set(2 * n - 1, (b(n - 1) + b(n)) / (b(n) + b(n + 1)));
                }
            }
            SystemKind::OddLow => {
                let rho = ctx.rho();
                let h = k;
                for n in 1..=h {
                    set(4 * n, b(n) / b(n + 1));
                }
                for n in 1..=h + 1 {
                    set(4 * n - 2, (b(n - 1) + b(n)) / (b(n) + b(n + 1)));
                }
                for n in 0..=h {
                    set(4 * h + 3 - 4 * n, (b(n + 1) * rho - b(n)) / (b(n) * rho - b(n - 1)));
                    set(4 * h + 1 - 4 * n, (b(n + 1) * rho - b(n + 2)) / (b(n) * rho - b(n + 1)));
                }
            }
        }
        let heights: Vec<AlgebraicNumber> = hs.into_iter().skip(1).map(|v| v.expect("every height assigned")).collect();
        let mut sys = HeightSystem { kind, heights, relations: Vec::new() };
        sys.relations = sys.check_relations(ctx);
        sys
    }

    fn check_relations(&self, ctx: &Context) -> Vec<RelationCheck> {
        let n_max = self.len() as i64;
        let lam = ctx.lambda().clone();
        let k = ctx.half_index() as i64;
        let mut out = Vec::new();
        // Relation H_i = 1 / (c lambda + s H_j); skipped when an index leaves [0, N].
        let mut recip = |label: String, i: i64, c: i64, s: i64, j: Option<i64>| {
            if i < 1 || i > n_max || j.is_some_and(|j| j < 0 || j > n_max) {
                return;
            }
            let mut den = ctx.num(c) * &lam;
            let mut stmt = format!("H_{i} = 1/({c}*lambda");
            if let Some(j) = j {
                den = den + ctx.num(s) * self.h(j as usize);
                stmt.push_str(&format!(" {} H_{j}", if s > 0 { '+' } else { '-' }));
            }
            stmt.push(')');
            let holds = den.recip().map(|v| v == self.h(i as usize)).unwrap_or(false);
            out.push(RelationCheck { label, statement: stmt, holds });
        };
        let half_lambda = &lam * ctx.ratio(1, 2);
        match self.kind {
            SystemKind::Even => {
                let p = k;
                recip("R_1".into(), 1, 1, 1, Some(2 * p - 1));
                recip("R_2".into(), 2, 1, 0, None);
                for n in 3..=2 * p - 1 {
                    recip(format!("R_{n}"), n, 1, -1, Some(n - 2));
                }
            }
            SystemKind::OddHigh => {
                let h = k;
                recip("R_1".into(), 1, 1, 1, Some(2 * h + 2));
                recip("R_2".into(), 2, 1, 0, None);
                for n in 3..=2 * h + 2 {
                    recip(format!("R_{n}"), n, 1, -1, Some(n - 2));
                }
            }
            SystemKind::OddLow => {
                let h = k;
                recip("R_1".into(), 1, 2, -1, Some(4 * h - 1));
                recip("R_2".into(), 2, 2, -1, Some(4 * h));
                recip("R_3".into(), 3, 1, 1, Some(4 * h + 3));
                recip("R_4".into(), 4, 1, 0, None);
                for n in 5..=4 * h + 3 {
                    recip(format!("R_{n}"), n, 1, -1, Some(n - 4));
                }
            }
        }
        let mut fixed = |label: String, i: i64, v: &AlgebraicNumber, what: &str| {
            out.push(RelationCheck { label, statement: format!("H_{i} = {what}"), holds: self.h(i as usize) == *v });
        };
        let mut sum = Vec::new();
        match self.kind {
            SystemKind::Even => {
                let p = k;
                fixed(format!("R_{}", 2 * p), 2 * p - 2, &half_lambda, "lambda/2");
                sum.push((format!("R_{}", 2 * p + 1), 2 * p - 3, 2 * p - 1));
            }
            SystemKind::OddHigh => {
                let h = k;
                fixed(format!("R_{}", 2 * h + 3), 2 * h + 1, &half_lambda, "lambda/2");
                sum.push((format!("R_{}", 2 * h + 4), 2 * h, 2 * h + 2));
            }
            SystemKind::OddLow => {
                let h = k;
                fixed(format!("R_{}", 4 * h + 4), 4 * h + 2, &half_lambda, "lambda/2");
                sum.push((format!("R_{}", 4 * h + 5), 4 * h + 1, 4 * h + 3));
            }
        }
        for (label, i, j) in sum {
            if i < 0 || j > n_max {
                continue;
            }
            let holds = self.h(i as usize) + self.h(j as usize) == lam;
            out.push(RelationCheck { label, statement: format!("H_{i} + H_{j} = lambda"), holds });
        }
        out
    }
}

/// Closed-form heights of the regime, with every relation checked exactly.
pub fn heights(q: GroupIndex, alpha: &Alpha) -> Result<HeightSystem> {
    Ok(HeightSystem::solve(&Context::new(q, alpha)?))
}
