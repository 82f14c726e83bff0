use rosen_core::algebra::{AlgebraicNumber, GroupIndex};
use rosen_core::expansion::{orbit, Alpha, Params};
use rosen_core::natext::*;

fn g(q: u32) -> GroupIndex {
    GroupIndex::new(q).unwrap()
}

fn a(s: &str) -> Alpha {
    s.parse().unwrap()
}

#[test]
fn figure_digits() {
    let d = build_domain(g(6), &a("0.53")).unwrap();
    assert_eq!(d.orbits.dl(3).d, Some(2));
    assert_eq!(d.orbits.dr(3).d, Some(3));

    let d = build_domain(g(5), &a("0.56")).unwrap();
    assert_eq!(d.regime, Regime::OddHigh);
    assert_eq!(d.orbits.dl(2).d, Some(3));
    assert_eq!(d.orbits.dr(3).d, Some(2));

    // float orbits of the endpoints give (3, 4) at 0.5038 and (2, 3) at 0.5054
    let d = build_domain(g(5), &a("0.5038")).unwrap();
    assert_eq!(d.regime, Regime::OddLow);
    assert_eq!(d.orbits.dl(4).d, Some(3));
    assert_eq!(d.orbits.dr(4).d, Some(4));
    let d = build_domain(g(5), &a("0.5054")).unwrap();
    assert_eq!(d.orbits.dl(4).d, Some(2));
    assert_eq!(d.orbits.dr(4).d, Some(3));
    assert_eq!(d.critical.unwrap().d_r, Some(3));
}

/// Float T_alpha digits of x, for cross-checking exact orbits.
fn float_digits(q: u32, alpha: f64, mut x: f64, n: usize) -> Vec<(i8, u64)> {
    let lam = g(q).lambda_f64();
    let mut out = Vec::new();
    for _ in 0..n {
        let d = ((1.0 / x).abs() / lam + 1.0 - alpha).floor() as u64;
        let e: i8 = if x > 0.0 { 1 } else { -1 };
        out.push((e, d));
        x = f64::from(e) / x - d as f64 * lam;
    }
    out
}

#[test]
fn endpoint_digits_match_float_orbits() {
    for (q, alpha) in [(5, 0.5038f64), (5, 0.56), (6, 0.53), (7, 0.51)] {
        let d = build_domain(g(q), &Alpha::ratio((alpha * 1e4).round() as i64, 10_000)).unwrap();
        let lam = g(q).lambda_f64();
        let want_l = float_digits(q, alpha, (alpha - 1.0) * lam, 5);
        let want_r = float_digits(q, alpha, alpha * lam, 5);
        let got =
            |ds: &[rosen_core::expansion::Digit]| ds[..5].iter().map(|x| (x.eps, x.d.unwrap())).collect::<Vec<_>>();
        assert_eq!(got(&d.orbits.digits_l), want_l, "q={q} alpha={alpha}");
        assert_eq!(got(&d.orbits.digits_r), want_r, "q={q} alpha={alpha}");
    }
}

/// Upper end of the low odd band where -delta_2 < r_{2h+1} still holds.
fn delta2_threshold(q: u32) -> f64 {
    let lam = g(q).lambda_f64();
    (-lam + (5.0 * lam * lam - 4.0 * lam + 4.0).sqrt()) / 2.0 / lam
}

#[test]
fn odd_low_chain_breaks_only_at_delta_two() {
    for q in [5, 7, 9] {
        let h = (q - 3) / 2;
        let rho = Alpha::RhoOverLambda.to_f64(g(q));
        let cut = delta2_threshold(q);
        assert!(0.5 < cut && cut < rho);
        let below = Alpha::ratio(((0.5 + cut) / 2.0 * 1e6) as i64, 1_000_000);
        assert!(verify_ordering(g(q), &below).unwrap().passed());
        let above = Alpha::ratio(((cut + rho) / 2.0 * 1e6) as i64, 1_000_000);
        let cert = verify_ordering(g(q), &above).unwrap();
        assert_eq!(cert.regime, Regime::OddLow);
        assert_eq!(cert.failures().len(), 1);
        assert!(cert.failures()[0].starts_with(&format!("-delta_2 < r_{}", 2 * h + 1)));
        assert!(jigsaw_check(g(q), &above).unwrap().passed());
    }
}

#[test]
fn grid_covers_every_regime() {
    let mut seen = std::collections::HashSet::new();
    for q in [3, 4, 5, 6] {
        let grid = parameter_grid(g(q), 2).unwrap();
        assert_eq!(grid.len(), if q % 2 == 0 { 4 } else { 7 });
        for alpha in grid {
            seen.insert(classify(g(q), &alpha).unwrap());
        }
    }
    assert_eq!(seen.len(), Regime::ALL.len());
}

#[test]
fn orderings_and_heights_on_small_grid() {
    for q in [3, 4, 5, 6, 7] {
        for alpha in parameter_grid(g(q), 2).unwrap() {
            let cert = verify_ordering(g(q), &alpha).unwrap();
            let in_gap =
                q > 3 && q % 2 == 1 && cert.regime == Regime::OddLow && alpha.to_f64(g(q)) > delta2_threshold(q);
            assert_eq!(cert.passed(), !in_gap, "q={q} alpha={alpha}: {:?}", cert.failures());
            let hs = heights(g(q), &alpha).unwrap();
            assert!(hs.all_hold(), "q={q} alpha={alpha}");
        }
    }
}

#[test]
fn named_chains() {
    let cert = verify_ordering(g(6), &a("53/100")).unwrap();
    assert!(cert.passed());
    assert!(cert.comparisons.iter().any(|c| c.rhs.contains("delta") || c.lhs.contains("delta")));
    let cert = verify_ordering(g(5), &Alpha::RhoOverLambda).unwrap();
    assert_eq!(cert.regime, Regime::OddRho);
    assert!(cert.passed());
    let cert = verify_ordering(g(8), &Alpha::InvLambda).unwrap();
    assert_eq!(cert.regime, Regime::EvenInvLambda);
    assert!(cert.passed());
}

#[test]
fn height_pins() {
    let lam = |q: u32| AlgebraicNumber::lambda(&rosen_core::algebra::RosenField::get(g(q)).unwrap());
    let hs = heights(g(8), &a("0.52")).unwrap();
    let l = lam(8);
    assert_eq!(hs.kind, SystemKind::Even);
    assert_eq!(hs.h(2), l.recip().unwrap());
    assert_eq!(hs.h(6), &l * &AlgebraicNumber::from_ratio(l.field(), 1, 2));
    assert!(hs.h(7) == AlgebraicNumber::one(l.field()));

    let l = lam(7);
    let hs = heights(g(7), &Alpha::InvLambda).unwrap();
    assert_eq!(hs.kind, SystemKind::OddHigh);
    assert!(hs.h(6) == AlgebraicNumber::one(l.field()));
    assert_eq!(hs.h(5), &l * &AlgebraicNumber::from_ratio(l.field(), 1, 2));

    let hs = heights(g(7), &Alpha::Half).unwrap();
    assert_eq!(hs.kind, SystemKind::OddLow);
    let rho = AlgebraicNumber::rho(l.field()).unwrap();
    assert_eq!(hs.h(11), rho);
    let two = AlgebraicNumber::from_int(l.field(), 2);
    let one = AlgebraicNumber::one(l.field());
    assert!((&(&rho * &rho) + &(&(&two - &l) * &rho) - one).is_zero());
}

#[test]
fn rectangle_counts() {
    assert_eq!(build_domain(g(6), &a("0.53")).unwrap().rects.len(), 5);
    assert_eq!(build_domain(g(5), &a("0.5038")).unwrap().rects.len(), 7);
    assert!(build_domain(g(5), &Alpha::Half).unwrap().rects.len() < 7);

    let d = build_domain(g(4), &Alpha::Half).unwrap();
    assert_eq!(d.rects.len(), 2);
    let last = d.rects.last().unwrap();
    assert!(last.left.is_zero());
    assert!(last.height == AlgebraicNumber::one(last.height.field()));
}

#[test]
fn rectangles_partition_the_interval() {
    for q in [3, 4, 5, 6, 7, 8] {
        for alpha in parameter_grid(g(q), 1).unwrap() {
            let d = build_domain(g(q), &alpha).unwrap();
            assert!(d.checks_hold(), "q={q} alpha={alpha}");
            assert_eq!(&d.rects[0].left, d.left());
            assert_eq!(&d.rects.last().unwrap().right, d.right());
            for w in d.rects.windows(2) {
                assert_eq!(w[0].right, w[1].left);
                assert!(w[0].left < w[0].right);
            }
        }
    }
}

#[test]
fn mass_matches_closed_form() {
    let d = build_domain(g(4), &Alpha::Half).unwrap();
    assert!((domain_mass(&d).unwrap() - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);

    let lam = g(5).lambda_f64();
    let d = build_domain(g(5), &a("0.56")).unwrap();
    let want = ((1.0 + 0.56 * lam) / (2.0 * (std::f64::consts::PI / 10.0).sin())).ln();
    assert!((domain_mass(&d).unwrap() - want).abs() < 1e-12);

    let rho = (lam - 2.0 + (lam * lam - 4.0 * lam + 8.0).sqrt()) / 2.0;
    let d = build_domain(g(5), &a("0.5038")).unwrap();
    assert!((domain_mass(&d).unwrap() - ((1.0 + rho) / (2.0 - lam).sqrt()).ln()).abs() < 1e-12);

    for q in [4, 5, 6, 7] {
        for alpha in parameter_grid(g(q), 1).unwrap() {
            let c = normalizing_constant(g(q), &alpha).unwrap();
            assert!(c.exact_match && c.residual < 1e-12, "q={q} alpha={alpha}");
        }
    }
}

#[test]
fn nakada_constants() {
    let golden = ((5f64.sqrt() + 1.0) / 2.0).ln();
    for alpha in ["0.5", "0.55", "0.6"] {
        let c = normalizing_constant(g(3), &a(alpha)).unwrap();
        assert!((c.value - 1.0 / golden).abs() < 1e-12, "{alpha}");
    }
    for alpha in ["0.62", "0.8", "1"] {
        let c = normalizing_constant(g(3), &a(alpha)).unwrap();
        let x: f64 = alpha.parse().unwrap();
        assert!((c.value - 1.0 / (1.0 + x).ln()).abs() < 1e-12, "{alpha}");
        assert!(c.exact_match);
    }
}

#[test]
fn even_constant_ignores_alpha() {
    let c0 = normalizing_constant(g(4), &Alpha::Half).unwrap().value;
    assert!((c0 - 1.134593).abs() < 1e-6);
    for alpha in [a("0.6"), Alpha::InvLambda] {
        assert_eq!(normalizing_constant(g(4), &alpha).unwrap().value, c0);
    }
}

#[test]
fn jigsaw_per_regime() {
    for (q, alpha) in [
        (6, a("0.53")),
        (6, Alpha::Half),
        (6, Alpha::InvLambda),
        (5, a("0.5038")),
        (5, Alpha::RhoOverLambda),
        (5, a("0.56")),
        (5, Alpha::Half),
        (5, Alpha::InvLambda),
        (3, a("1")),
        (3, a("0.55")),
    ] {
        let r = jigsaw_check(g(q), &alpha).unwrap();
        assert!(r.passed(), "q={q} alpha={alpha}: {r:?}");
    }
}

#[test]
fn map_sends_domain_into_itself() {
    let m = membership_check(g(6), &a("0.53"), 20_000, 11).unwrap();
    assert!(m.passed(), "{m:?}");
    assert!(m.max_excess <= 1e-9);
}

#[test]
fn fiber_zero_image() {
    let p = Params::exact(g(6), &a("0.53")).unwrap();
    let t = AlgebraicNumber::from_ratio(p.lambda.field(), 1, 3);
    let (t2, v2) = two_dim_map(&t, &AlgebraicNumber::zero(p.lambda.field()), &p).unwrap();
    let o = orbit(&t, 1, &p).unwrap();
    assert_eq!(t2, o.points[1]);
    let d = o.expansion.digits[0].d.unwrap() as i64;
    assert_eq!(v2, (&AlgebraicNumber::from_int(p.lambda.field(), d) * &p.lambda).recip().unwrap());
    let zero = AlgebraicNumber::zero(p.lambda.field());
    assert!(two_dim_map(&zero, &zero, &p).is_err());
}

#[test]
fn reflection() {
    let (x, y) = conjugacy_m(g(6), &0.3, &0.7, Direction::Forward).unwrap();
    assert_eq!((x, y), (0.7, 0.3));
    assert_eq!(conjugacy_m(g(6), &x, &y, Direction::Inverse).unwrap(), (0.3, 0.7));
    assert_eq!(conjugacy_m(g(6), &-0.3, &0.7, Direction::Forward).unwrap(), (-0.7, 0.3));
    assert!(conjugacy_m(g(5), &0.3, &0.7, Direction::Forward).is_err());
    let r = conjugacy_region_check(g(6), 2000, 5).unwrap();
    assert!(r.passed(1e-12), "{r:?}");
}

#[test]
fn domain_json_has_exact_and_decimal_endpoints() {
    let d = build_domain(g(5), &a("0.56")).unwrap();
    let j = d.to_json(20);
    let rects = j["rectangles"].as_array().unwrap();
    assert_eq!(rects.len(), d.rects.len());
    assert!(rects[0]["left"].is_object());
}

#[test]
fn boundary_alphas_drop_empty_intervals() {
    assert_eq!(build_domain(g(6), &Alpha::Half).unwrap().dropped, vec![2, 4]);
    let inv = build_domain(g(6), &Alpha::InvLambda).unwrap();
    assert!([1, 3].iter().all(|n| inv.dropped.contains(n)));
    let odd = build_domain(g(5), &Alpha::Half).unwrap();
    assert_eq!(odd.dropped, vec![2, 4, 6]);
    assert_eq!(odd.rects.len() + odd.dropped.len(), 7);
    assert!(build_domain(g(5), &a("0.5038")).unwrap().dropped.is_empty());
}
