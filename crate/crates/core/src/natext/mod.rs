//! Endpoint orbits, ordering theorems, heights, the domains Omega_alpha and the planar map.

mod conjugacy;
mod domain;
mod heights;
mod jigsaw;
mod map2d;
mod orbits;
mod ordering;
mod sweep;

use std::fmt;

use serde::Serialize;

use crate::algebra::{AlgebraicNumber, BSequence, GroupIndex, Parity};
use crate::error::Result;
use crate::expansion::{Alpha, ExactParams, Params};

pub use conjugacy::{conjugacy_m, conjugacy_region_check, ConjugacyReport, Direction};
pub use domain::{
    build_domain, domain_mass, normalizing_constant, CriticalDigits, DomainF64, NatExtDomain, NormalizingConstant, Rect,
};
pub use heights::{heights, HeightSystem, RelationCheck, SystemKind};
pub use jigsaw::{jigsaw_check, JigsawReport};
pub use map2d::{membership_check, two_dim_inverse, two_dim_map, MembershipReport, OrbitSample};
pub use orbits::{endpoint_orbits, ClosedFormCheck, EndpointOrbits};
pub use ordering::{verify_ordering, Certificate, Comparison, DigitRelation};

/// Parameter regime of (q, alpha).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    EvenInterior,
    EvenHalf,
    EvenInvLambda,
    OddLow,
    OddRho,
    OddHigh,
    OddHalf,
    OddInvLambda,
}

impl Regime {
    pub const ALL: [Regime; 8] = [
        Regime::EvenInterior,
        Regime::EvenHalf,
        Regime::EvenInvLambda,
        Regime::OddLow,
        Regime::OddRho,
        Regime::OddHigh,
        Regime::OddHalf,
        Regime::OddInvLambda,
    ];

    pub fn is_even(self) -> bool {
        matches!(self, Regime::EvenInterior | Regime::EvenHalf | Regime::EvenInvLambda)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::EvenInterior => "EVEN_INTERIOR",
            Regime::EvenHalf => "EVEN_HALF",
            Regime::EvenInvLambda => "EVEN_INV_LAMBDA",
            Regime::OddLow => "ODD_LOW",
            Regime::OddRho => "ODD_RHO",
            Regime::OddHigh => "ODD_HIGH",
            Regime::OddHalf => "ODD_HALF",
            Regime::OddInvLambda => "ODD_INV_LAMBDA",
        };
        f.write_str(s)
    }
}

/// Exact data shared by the natural-extension constructions for one (q, alpha).
#[derive(Debug, Clone)]
pub struct Context {
    pub params: ExactParams,
    pub alpha_token: Alpha,
    pub b: BSequence,
    pub regime: Regime,
    pub rho: Option<AlgebraicNumber>,
}

impl Context {
    pub fn new(q: GroupIndex, alpha: &Alpha) -> Result<Context> {
        let params = Params::exact(q, alpha)?;
        let b = BSequence::new(q)?;
        let field = params.lambda.field().clone();
        let rho = field.has_rho().then(|| AlgebraicNumber::rho(&field)).transpose()?;
        let regime = regime_of(&params, rho.as_ref());
        Ok(Context { params, alpha_token: alpha.clone(), b, regime, rho })
    }

    pub fn q(&self) -> GroupIndex {
        self.params.q
    }

    pub fn lambda(&self) -> &AlgebraicNumber {
        &self.params.lambda
    }

    pub fn num(&self, n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_int(self.params.lambda.field(), n)
    }

    pub fn ratio(&self, n: i64, d: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_ratio(self.params.lambda.field(), n, d)
    }

    pub fn bn(&self, n: i64) -> AlgebraicNumber {
        self.b.get(n).clone()
    }

    /// p for q = 2p, h for q = 2h + 3.
    pub fn half_index(&self) -> usize {
        match self.q().parity() {
            Parity::Even { p } => p as usize,
            Parity::Odd { h } => h as usize,
        }
    }

    pub fn rho(&self) -> &AlgebraicNumber {
        self.rho.as_ref().expect("rho exists for odd q")
    }
}

fn regime_of(p: &ExactParams, rho: Option<&AlgebraicNumber>) -> Regime {
    let half = AlgebraicNumber::from_ratio(p.lambda.field(), 1, 2);
    let one = AlgebraicNumber::one(p.lambda.field());
    let at_inv = &p.alpha * &p.lambda == one;
    match rho {
        None if p.alpha == half => Regime::EvenHalf,
        None if at_inv => Regime::EvenInvLambda,
        None => Regime::EvenInterior,
        Some(_) if p.alpha == half => Regime::OddHalf,
        Some(_) if at_inv => Regime::OddInvLambda,
        Some(r) => match (&p.alpha * &p.lambda).cmp(r) {
            std::cmp::Ordering::Less => Regime::OddLow,
            std::cmp::Ordering::Equal => Regime::OddRho,
            std::cmp::Ordering::Greater => Regime::OddHigh,
        },
    }
}

/// Exact regime of (q, alpha).
pub fn classify(q: GroupIndex, alpha: &Alpha) -> Result<Regime> {
    Ok(Context::new(q, alpha)?.regime)
}

/// The special values of alpha for q together with `interior` rationals of
/// denominator 10^4 spread evenly through each open sub-regime.
pub fn parameter_grid(q: GroupIndex, interior: usize) -> Result<Vec<Alpha>> {
    let inv = Alpha::InvLambda.to_f64(q);
    let mut out = vec![Alpha::Half];
    let mut bands = Vec::new();
    if q.is_even() {
        bands.push((0.5, inv, Regime::EvenInterior));
    } else {
        let rho = Alpha::RhoOverLambda.to_f64(q);
        bands.push((0.5, rho, Regime::OddLow));
        bands.push((rho, inv, Regime::OddHigh));
        out.push(Alpha::RhoOverLambda);
    }
    out.push(Alpha::InvLambda);
    for (lo, hi, regime) in bands {
        for k in 1..=interior {
            let target = lo + (hi - lo) * k as f64 / (interior + 1) as f64;
            let mut num = (target * 1e4).round() as i64;
            let mut alpha = Alpha::ratio(num, 10_000);
            while classify(q, &alpha)? != regime || out.contains(&alpha) {
                num += if (num as f64) < target * 1e4 { 1 } else { -1 };
                alpha = Alpha::ratio(num, 10_000);
            }
            out.push(alpha);
        }
    }
    Ok(out)
}
