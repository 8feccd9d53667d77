mod common;

use proptest::prelude::*;

use sigbits::bernoulli::significance_trial;
use sigbits::cnh::{
    contribution_probability_cnh, delta_cnh, significance_probability_cnh, significant_bits_cnh, ConfidenceParams,
};
use sigbits::stats::Probability;
use sigbits::tables::{shift_table, ShiftSpec};

fn pr(v: f64) -> Probability {
    Probability::new(v).unwrap()
}

proptest! {
    #[test]
    fn significance_decreases_in_k(log_sigma in -60.0f64..0.0, k in -5.0f64..60.0, dk in 0.01f64..3.0) {
        let sigma = log_sigma.exp2();
        let a = significance_probability_cnh(sigma, k).unwrap();
        let b = significance_probability_cnh(sigma, k + dk).unwrap();
        // Strict wherever the probabilities are distinguishable from 0 and 1.
        prop_assert!(b <= a);
        if a < 1.0 - 1e-12 && b > 1e-12 {
            prop_assert!(b < a);
        }
    }

    #[test]
    fn shift_structure(log_sigma in -50.0f64..-1.0, n in 2usize..5000, p in 0.5f64..0.999, alpha in 0.001f64..0.5) {
        let params = ConfidenceParams::new(n, p, alpha).unwrap();
        let a = significant_bits_cnh(log_sigma.exp2(), &params).unwrap();
        prop_assume!(!a.is_clamped());
        let b = significant_bits_cnh((log_sigma - 3.7).exp2(), &params).unwrap();
        prop_assume!(!b.is_clamped());
        let c1 = a.bits + log_sigma;
        let c2 = b.bits + log_sigma - 3.7;
        prop_assert!((c1 - c2).abs() <= 1e-12);
        prop_assert!((c1 + delta_cnh(n, pr(p), pr(alpha)).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn scaling_law(log_sigma in -40.0f64..-5.0, m in -4i32..10, n in 2usize..2000) {
        let params = ConfidenceParams::new(n, 0.99, 0.05).unwrap();
        let s = significant_bits_cnh(log_sigma.exp2(), &params).unwrap();
        let t = significant_bits_cnh(log_sigma.exp2() * 2f64.powi(-m), &params).unwrap();
        prop_assume!(!s.is_clamped() && !t.is_clamped());
        prop_assert!((t.bits - s.bits - m as f64).abs() <= 1e-9);
    }
}

#[test]
fn envelope_contains_stripe_oracle() {
    for k in 2..=20 {
        let c = contribution_probability_cnh(1.0, k).unwrap();
        let oracle = common::contribution_excess_oracle((-(k as f64)).exp2());
        let lo = c.excess - c.lower_width;
        let hi = c.excess + c.upper_width;
        assert!(
            oracle >= lo && oracle <= hi,
            "k={k}: oracle {oracle:e} outside [{lo:e}, {hi:e}] (excess {:e})",
            c.excess
        );
    }
}

#[test]
fn chi2_coverage() {
    let cov = common::cnh_coverage(1000, 30, 0.9, 0.05, 2000, 2024);
    assert!(cov >= 1.0 - 0.05 - 0.03, "coverage {cov}");
}

#[test]
fn fresh_draws_agree_with_curve() {
    let sigma = 2f64.powi(-20);
    let mut r = common::rng(3);
    use rand_distr::{Distribution, Normal};
    let normal = Normal::new(0.0, sigma).unwrap();
    let z: Vec<f64> = (0..200_000).map(|_| normal.sample(&mut r)).collect();
    for k in 17..=24u32 {
        let emp = z.iter().filter(|&&v| significance_trial(v, k)).count() as f64 / z.len() as f64;
        let model = significance_probability_cnh(sigma, k as f64).unwrap();
        assert!((emp - model).abs() < 0.005, "k={k}: {emp} vs {model}");
    }
}

#[test]
fn shift_table_monotone() {
    let t = shift_table(&ShiftSpec::standard()).unwrap();
    let spec = ShiftSpec::standard();
    for (c, &(p, conf)) in spec.columns().iter().enumerate() {
        // Rounded cells may tie (n = 299 and 300); the underlying shifts may not.
        assert!(t.column(c).windows(2).all(|w| w[1] <= w[0]), "column {}", t.column_labels[c]);
        let raw: Vec<f64> =
            spec.sample_sizes().iter().map(|&n| delta_cnh(n, p, conf.complement()).unwrap()).collect();
        assert!(raw.windows(2).all(|w| w[1] < w[0]), "column {}", t.column_labels[c]);
    }
    for (r, &n) in spec.sample_sizes().iter().enumerate() {
        for (i, &(p1, c1)) in spec.columns().iter().enumerate() {
            for (j, &(p2, c2)) in spec.columns().iter().enumerate() {
                if c1 == c2 && p1 < p2 {
                    assert!(t.cells[r][i] < t.cells[r][j], "n={n} c={c1}: p {p1} vs {p2}");
                }
            }
        }
    }
}
