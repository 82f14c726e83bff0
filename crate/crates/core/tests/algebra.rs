use std::cmp::Ordering;
use std::f64::consts::PI;

use rosen_core::algebra::{b_n, compare, delta_d, lambda, rho, AlgebraicNumber, BSequence, GroupIndex, RosenField};
use rosen_core::expansion::Alpha;

fn g(q: u32) -> GroupIndex {
    GroupIndex::new(q).unwrap()
}

#[test]
fn lambda_images() {
    assert_eq!(lambda(g(3)).unwrap().as_rational().unwrap(), num_rational::BigRational::from_integer(1.into()));
    assert_eq!(lambda(g(4)).unwrap().to_decimal(8), "1.41421356");
    assert_eq!(lambda(g(6)).unwrap().to_decimal(8), "1.73205080");
    assert!(GroupIndex::new(2).is_err());
}

#[test]
fn lambda_matches_cosine() {
    for q in 3..=60 {
        let l = lambda(g(q)).unwrap().to_f64();
        assert!((l - 2.0 * (PI / q as f64).cos()).abs() < 1e-15, "q={q}");
    }
}

#[test]
fn b_values() {
    let f = RosenField::get(g(4)).unwrap();
    assert!(b_n(g(4), 0).unwrap().is_zero());
    assert_eq!(b_n(g(4), 2).unwrap(), AlgebraicNumber::lambda(&f));
    assert_eq!(b_n(g(4), 3).unwrap(), AlgebraicNumber::one(&f));
}

#[test]
fn b_matches_sine_ratio() {
    for q in 3..=16u32 {
        let seq = BSequence::new(g(q)).unwrap();
        let s1 = (PI / q as f64).sin();
        for n in -40i64..=40 {
            let want = (n as f64 * PI / q as f64).sin() / s1;
            let got = seq.get(n).to_f64();
            assert!((got - want).abs() < 1e-12, "q={q} n={n}: {got} vs {want}");
            if n >= 0 {
                assert_eq!(&b_n(g(q), n).unwrap(), seq.get(n), "q={q} n={n}");
            }
        }
    }
}

#[test]
fn b_is_periodic_and_odd() {
    for q in 3..=12u32 {
        let seq = BSequence::new(g(q)).unwrap();
        let p = 2 * q as i64;
        for n in -2 * p..=p {
            assert_eq!(seq.get(n + p), seq.get(n), "q={q} n={n}");
        }
        assert_eq!(seq.get(-1), &-seq.get(1));
    }
}

#[test]
fn odd_b_identity() {
    // (2 - lambda) B_{h+1}^2 = 1
    for q in (3..=21u32).step_by(2) {
        let h = (q as i64 - 3) / 2;
        let seq = BSequence::new(g(q)).unwrap();
        let f = seq.field().clone();
        let two = AlgebraicNumber::from_int(&f, 2);
        let b = seq.get(h + 1);
        let v = (two - AlgebraicNumber::lambda(&f)) * b * b;
        assert_eq!(v, AlgebraicNumber::one(&f), "q={q}");
    }
}

#[test]
fn rho_values() {
    assert_eq!(rho(g(3)).unwrap().to_decimal(7), "0.6180339");
    assert_eq!(rho(g(5)).unwrap().to_decimal(6), "0.827090");
    assert!(rho(g(4)).is_err());
    for q in (3..=25u32).step_by(2) {
        let r = rho(g(q)).unwrap();
        let f = r.field().clone();
        let lam = AlgebraicNumber::lambda(&f);
        let ratio = &r / &lam;
        assert!(ratio > AlgebraicNumber::from_ratio(&f, 1, 2), "q={q}");
        assert!(ratio < lam.recip().unwrap(), "q={q}");
        let l = lam.to_f64();
        let want = (l - 2.0 + (l * l - 4.0 * l + 8.0).sqrt()) / 2.0;
        assert!((r.to_f64() - want).abs() < 1e-14);
    }
}

#[test]
fn delta_values() {
    let half = Alpha::Half.value(g(4)).unwrap();
    let d1 = delta_d(&half, 1).unwrap();
    let f = half.field().clone();
    assert_eq!(d1, AlgebraicNumber::lambda(&f) / AlgebraicNumber::from_int(&f, 3));
    assert_eq!(d1.to_decimal(6), "0.471404");
    assert_eq!(compare(&d1, &AlgebraicNumber::from_ratio(&f, 1, 2)), Ordering::Less);

    let one = Alpha::ratio(1, 1).value(g(3)).unwrap();
    assert_eq!(delta_d(&one, 1).unwrap().as_rational().unwrap(), num_rational::BigRational::new(1.into(), 2.into()));

    let a = Alpha::ratio(56, 100).value(g(5)).unwrap();
    let ds: Vec<_> = (1..=3).map(|d| delta_d(&a, d).unwrap()).collect();
    assert!(ds[0] > ds[1] && ds[1] > ds[2]);
    assert!(delta_d(&a, 0).is_err());
}

#[test]
fn compare_examples() {
    let f = RosenField::get(g(4)).unwrap();
    let l = AlgebraicNumber::lambda(&f);
    assert_eq!(compare(&l, &l.clone()), Ordering::Equal);
    assert_eq!(compare(&b_n(g(4), 2).unwrap(), &AlgebraicNumber::one(&f)), Ordering::Greater);
}

#[test]
fn compare_agrees_with_floats() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for q in [4u32, 5, 7, 9, 12] {
        let f = RosenField::get(g(q)).unwrap();
        let lam = AlgebraicNumber::lambda(&f);
        let mut pool = Vec::new();
        for _ in 0..40 {
            let a = AlgebraicNumber::from_ratio(&f, rng.random_range(-50..50), rng.random_range(1..20));
            let b = AlgebraicNumber::from_ratio(&f, rng.random_range(-50..50), rng.random_range(1..20));
            let mut x = a + b * &lam * &lam;
            if f.has_rho() {
                x = x + AlgebraicNumber::rho(&f).unwrap() * AlgebraicNumber::from_ratio(&f, rng.random_range(-9..9), 7);
            }
            pool.push(x);
        }
        for x in &pool {
            for y in &pool {
                let (fx, fy) = (x.to_f64(), y.to_f64());
                if (fx - fy).abs() > 1e-9 {
                    assert_eq!(compare(x, y), fx.partial_cmp(&fy).unwrap());
                }
            }
        }
    }
}

#[test]
fn b_identity_small_q() {
    for q in [3, 4, 5, 6] {
        let r = rosen_core::algebra::b_identity_check(g(q), 3 * q as i64).unwrap();
        assert!(r.cases > 0);
        assert_eq!(r.failures, 0, "q={q}");
    }
}

#[test]
fn tiny_values_keep_relative_precision() {
    let f = RosenField::get(g(7)).unwrap();
    let lam = AlgebraicNumber::lambda(&f);
    let big = lam.pow(200);
    let tiny = &(&big - &AlgebraicNumber::from_int(&f, 1)) - &big;
    assert_eq!(tiny.to_f64(), -1.0);
    let small = lam.recip().unwrap().pow(120);
    let want = (2.0 * (PI / 7.0).cos()).powi(-120);
    assert!((small.to_f64() / want - 1.0).abs() < 1e-13);
}
