use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rosen_core::algebra::{AlgebraicNumber, GroupIndex};
use rosen_core::expansion::{theta_direct, Alpha, Params};
use rosen_core::metrics::*;
use rosen_core::natext::{build_domain, two_dim_map};

fn g(q: u32) -> GroupIndex {
    GroupIndex::new(q).unwrap()
}

fn a(s: &str) -> Alpha {
    s.parse().unwrap()
}

#[test]
fn theta_edge_cases() {
    let p = theta_from_orbit(0.3, 0.0, 1).unwrap();
    assert_eq!(p.theta_prev, 0.0);
    assert!((p.theta_cur - 0.3).abs() < 1e-15);
    assert_eq!(theta_from_orbit(0.0, 0.4, 1).unwrap().theta_cur, 0.0);
    assert!(theta_from_orbit(-2.0, 0.5, -1).is_err());

    let params = Params::exact(g(4), &Alpha::Half).unwrap();
    let x = AlgebraicNumber::from_ratio(params.lambda.field(), 1, 2);
    // 1/2 = 1/(1 lambda + ...) terminates quickly in Q(sqrt 2)
    assert!(theta_direct(&params.left, 3, &params).unwrap().is_zero());
    assert!(theta_direct(&x, 1, &params).unwrap().is_positive());
}

#[test]
fn theta_formulas_agree_on_exact_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for (q, alpha) in [(4, Alpha::Half), (5, a("0.56")), (6, a("0.53")), (7, Alpha::InvLambda)] {
        let p = Params::exact(g(q), &alpha).unwrap();
        let f = p.lambda.field().clone();
        for _ in 0..320 {
            let u: u32 = rng.random();
            let u = AlgebraicNumber::from_rational(&f, BigRational::new(BigInt::from(u), BigInt::from(1u64 << 32)));
            let x = &p.left + &(&u * &(&p.right - &p.left));
            let (mut t, mut v) = (x.clone(), AlgebraicNumber::zero(&f));
            let mut prev = x.abs().to_f64();
            for n in 1..=8 {
                let Ok((t2, v2)) = two_dim_map(&t, &v, &p) else { break };
                (t, v) = (t2, v2);
                let eps = if t.is_negative() { -1 } else { 1 };
                let pair = theta_from_orbit(t.to_f64(), v.to_f64(), eps).unwrap();
                let direct = theta_direct(&x, n, &p).unwrap().to_f64();
                assert!((pair.theta_cur - direct).abs() < 1e-10, "q={q} n={n}");
                assert!((pair.theta_prev - prev).abs() < 1e-10, "q={q} n={n}");
                prev = direct;
                checked += 1;
            }
        }
    }
    assert!(checked >= 10_000, "{checked}");
}

#[test]
fn f_map_examples() {
    assert_eq!(f_map(0.0, 0.0).unwrap(), (0.0, 0.0));
    assert_eq!(f_map(0.4, 0.0).unwrap(), (0.0, 0.4));
    assert!(f_map(2.0, -0.5).is_err());
    assert!(f_inverse(1.0, 1.0).is_err());
}

proptest! {
    #[test]
    fn f_inverse_undoes_f(t in -0.95f64..0.95, v in 0.0f64..1.0) {
        let (xi, eta) = f_map(t, v).unwrap();
        let (t2, v2) = f_inverse(xi, eta).unwrap();
        prop_assert!((t - t2).abs() < 1e-12 && (v - v2).abs() < 1e-12);
    }

    #[test]
    fn theta_pair_is_f_of_the_orbit_point(t in 0.0f64..0.9, v in 0.0f64..1.0) {
        let pair = theta_from_orbit(t, v, 1).unwrap();
        let (xi, eta) = f_map(t, v).unwrap();
        prop_assert!((pair.theta_prev - xi).abs() < 1e-15 && (pair.theta_cur - eta).abs() < 1e-15);
    }
}

#[test]
fn density_examples() {
    let d = GammaDensity::new(g(6), &a("0.53")).unwrap();
    // (xi, eta) = F(t, v) for an interior point with t > 0
    let (xi, eta) = f_map(0.3, 0.2).unwrap();
    assert!(d.in_gamma(xi, eta));
    let want = d.c / (1.0 - 4.0 * xi * eta).sqrt();
    assert!((d.signed(xi, eta).unwrap() - want).abs() < 1e-12);
    assert_eq!(density_d_alpha(5.0, 5.0, g(6), &a("0.53")).unwrap(), 0.0);
}

#[test]
fn density_integrates_to_one() {
    for (q, alpha) in [(6, a("0.53")), (5, a("0.5038"))] {
        let d = GammaDensity::new(g(q), &alpha).unwrap();
        let (xm, em) = d.bounding_box();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 400_000;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..n {
            let v = d.folded(rng.random::<f64>() * xm, rng.random::<f64>() * em).unwrap();
            sum += v;
            sq += v * v;
        }
        let mean = sum / n as f64;
        let se = ((sq / n as f64 - mean * mean) / n as f64).sqrt() * xm * em;
        let total = mean * xm * em;
        assert!((total - 1.0).abs() < 1e-3, "q={q}: {total} +- {se}");
    }
}

#[test]
fn lenstra_constants() {
    let l = lenstra_constant(g(4), &Alpha::Half).unwrap().to_f64();
    assert!((l - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    let lam = g(4).lambda_f64();
    let l = lenstra_constant(g(4), &Alpha::InvLambda).unwrap().to_f64();
    assert!((l - lam / (lam + 2.0)).abs() < 1e-15);
    let s3 = 3f64.sqrt();
    let l = lenstra_constant(g(6), &a("0.53")).unwrap().to_f64();
    assert!((l - (s3 / (s3 + 2.0)).min(s3 * (2.0 - 0.53 * 3.0))).abs() < 1e-15);
    assert!(lenstra_constant(g(5), &Alpha::Half).is_err());
}

#[test]
fn lenstra_summary_value() {
    let l = lenstra_constant(g(4), &Alpha::Half).unwrap().to_f64();
    let r = lenstra_experiment(g(4), &Alpha::Half, &[1.0 / l, 1e3], &SimConfig::new(200_000, 1)).unwrap();
    let c = 1.0 / (1.0 + 2f64.sqrt()).ln();
    assert!((r.points[0].theory - (2.0 - 2f64.sqrt()) * c).abs() < 1e-12);
    assert!((r.points[0].theory - 0.66460).abs() < 5e-5);
    assert!((r.points[0].empirical - r.points[0].theory).abs() < 0.01);
    assert!(r.points[1].empirical < 0.005);
    assert!(r.below_threshold.is_empty());
}

#[test]
fn lenstra_seeds_agree() {
    let l = lenstra_constant(g(6), &a("0.53")).unwrap().to_f64();
    let cs = [2.0 / l];
    let r1 = lenstra_experiment(g(6), &a("0.53"), &cs, &SimConfig::new(300_000, 1)).unwrap();
    let r2 = lenstra_experiment(g(6), &a("0.53"), &cs, &SimConfig::new(300_000, 2)).unwrap();
    let (p1, p2) = (&r1.points[0], &r2.points[0]);
    assert!((p1.empirical - p2.empirical).abs() < 3.0 * (p1.sigma.powi(2) + p2.sigma.powi(2)).sqrt());
}

#[test]
fn runs_are_deterministic() {
    let cfg = SimConfig::new(50_000, 9);
    let r1 = lenstra_experiment(g(4), &Alpha::Half, &[3.0], &cfg).unwrap();
    let r2 = lenstra_experiment(g(4), &Alpha::Half, &[3.0], &cfg.with_threads(1)).unwrap();
    assert_eq!(r1.points[0].empirical, r2.points[0].empirical);
    assert_eq!(r1.to_csv(g(4), &Alpha::Half, &cfg), r2.to_csv(g(4), &Alpha::Half, &cfg));
}

#[test]
fn orbits_stay_in_the_domain() {
    for (q, alpha) in [(6, a("0.53")), (5, a("0.56")), (5, a("0.5038")), (4, Alpha::InvLambda)] {
        let dom = build_domain(g(q), &alpha).unwrap();
        let fd = dom.to_f64();
        let p = dom.context().params.to_float();
        let bound = p.bound_constant();
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        for _ in 0..5 {
            let (mut t, mut v) = (rng.random_range(p.left..p.right), 0.0);
            for _ in 0..10_000 {
                (t, v) = two_dim_map(&t, &v, &p).unwrap();
                assert!(v <= 1.0 + 1e-12);
                assert!(fd.contains_tol(t, v, 1e-9), "q={q} ({t}, {v})");
                let eps = if t < 0.0 { -1 } else { 1 };
                assert!(theta_from_orbit(t, v, eps).unwrap().theta_cur <= bound + 1e-12);
            }
        }
    }
}

#[test]
fn histogram_mass_and_support() {
    let cfg = SimConfig::new(200_000, 4);
    let h = theta_distribution_experiment(g(6), &a("0.53"), (40, 40), &cfg).unwrap();
    assert!((h.total_mass() - 1.0).abs() < 1e-12);
    assert_eq!(h.outside_gamma, 0);
    assert!((h.theoretical.iter().sum::<f64>() - 1.0).abs() < 1e-3);
    let csv = h.to_csv(g(6), &a("0.53"), &cfg);
    assert!(csv.starts_with("# q=6 alpha=53/100 N=200000 seed=4"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 40 * 40);
}

#[test]
fn equidistribution_small_run() {
    let r = equidistribution(g(5), &a("0.56"), 1, &SimConfig::new(400_000, 8)).unwrap();
    assert_eq!(r.outside, 0);
    let total: f64 = r.cells.iter().map(|c| c.expected).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(r.max_abs_z < 5.0);
}
