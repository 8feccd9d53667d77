mod common;

use proptest::prelude::*;
use rand::RngExt;
use rand_distr::{Distribution, StandardNormal};

use sigbits::stats::{chi2_cdf, chi2_quantile, normal_cdf, normal_quantile, shapiro_wilk, student_quantile};

proptest! {
    #[test]
    fn normal_round_trip(x in -6.0f64..6.0) {
        let q = normal_cdf(x).unwrap();
        let back = normal_quantile(q).unwrap().value;
        prop_assert!((back - x).abs() <= 1e-7 * x.abs().max(1e-3), "x={x} back={back}");
    }

    #[test]
    fn chi2_round_trip(q in 0.001f64..0.999, dof in 1u64..2000) {
        let x = chi2_quantile(q, dof).unwrap().value;
        prop_assert!((chi2_cdf(x, dof) - q).abs() <= 1e-7 * q.min(1.0 - q).max(1e-3));
    }

    #[test]
    fn chi2_increasing_in_q(q in 0.001f64..0.99, dq in 1e-4f64..0.009, dof in 1u64..500) {
        let a = chi2_quantile(q, dof).unwrap().value;
        let b = chi2_quantile(q + dq, dof).unwrap().value;
        prop_assert!(b > a);
    }

    #[test]
    fn chi2_median_bounds(k in 2u64..5000) {
        let m = chi2_quantile(0.5, k).unwrap().value;
        prop_assert!(m > (k - 1) as f64 && m < k as f64, "k={k} median={m}");
    }

    #[test]
    fn student_tends_to_normal(q in 0.001f64..0.999) {
        let t = student_quantile(q, 1_000_000).unwrap().value;
        let z = normal_quantile(q).unwrap().value;
        prop_assert!((t - z).abs() <= 1e-4);
    }

    #[test]
    fn shapiro_permutation_invariant(seed in any::<u64>(), n in 3usize..300) {
        let mut r = common::rng(seed);
        let mut x: Vec<f64> = (0..n).map(|_| r.sample::<f64, _>(StandardNormal)).collect();
        let a = shapiro_wilk(&x).unwrap();
        for i in (1..n).rev() {
            let j = r.random_range(0..=i);
            x.swap(i, j);
        }
        let b = shapiro_wilk(&x).unwrap();
        prop_assert_eq!(a.w, b.w);
        prop_assert_eq!(a.p_value, b.p_value);
    }

    #[test]
    fn shapiro_affine_invariant(seed in any::<u64>(), n in 3usize..300, scale in 1e-12f64..1e6, shift in -1e3f64..1e3) {
        let mut r = common::rng(seed);
        let x: Vec<f64> = (0..n).map(|_| r.sample::<f64, _>(StandardNormal)).collect();
        let y: Vec<f64> = x.iter().map(|v| v * scale + shift).collect();
        let a = shapiro_wilk(&x).unwrap();
        let b = shapiro_wilk(&y).unwrap();
        prop_assert!((a.w - b.w).abs() < 1e-9);
    }
}

#[test]
fn shapiro_calibration_normal_samples() {
    let mut r = common::rng(11);
    let accepted = (0..100)
        .filter(|_| {
            let x: Vec<f64> = (0..5000).map(|_| StandardNormal.sample(&mut r)).collect();
            shapiro_wilk(&x).unwrap().p_value > 0.01
        })
        .count();
    assert!(accepted >= 98, "{accepted}/100 normal samples accepted");
}

#[test]
fn shapiro_power_against_uniform() {
    let mut r = common::rng(12);
    let rejected = (0..100)
        .filter(|_| {
            let x: Vec<f64> = (0..5000).map(|_| r.random::<f64>()).collect();
            shapiro_wilk(&x).unwrap().p_value < 0.01
        })
        .count();
    assert!(rejected >= 99, "{rejected}/100 uniform samples rejected");
}

#[test]
fn shapiro_size_limits() {
    assert!(shapiro_wilk(&[1.0, 2.0]).is_err());
    assert!(shapiro_wilk(&[0.5; 10]).is_err());
    let x: Vec<f64> = (0..5001).map(|i| (i as f64).sin()).collect();
    assert!(shapiro_wilk(&x).is_err());
}
