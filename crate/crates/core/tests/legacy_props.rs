use proptest::prelude::*;

use sigbits::cnh::delta_cnh;
use sigbits::legacy::{cestac_shift, equivalent_probability, s_hat_cestac, s_hat_mca, CadnaPreset};
use sigbits::stats::Probability;

fn pr(v: f64) -> Probability {
    Probability::new(v).unwrap()
}

proptest! {
    #[test]
    fn cestac_minus_mca_is_constant(mu in 0.5f64..1e6, log_rel in -45.0f64..-3.0, n in 2usize..10_000) {
        let sigma = mu * log_rel.exp2();
        let a = pr(0.05);
        let m = s_hat_mca(mu, sigma).unwrap();
        let c = s_hat_cestac(mu, sigma, n, a).unwrap();
        prop_assume!(!m.is_clamped() && !c.is_clamped());
        prop_assert!((c.bits - m.bits + cestac_shift(n, a).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn sign_flip_invariance(mu in 0.5f64..1e6, log_rel in -45.0f64..-3.0, n in 2usize..1000) {
        let sigma = mu * log_rel.exp2();
        let a = pr(0.05);
        prop_assert_eq!(s_hat_mca(mu, sigma).unwrap(), s_hat_mca(-mu, sigma).unwrap());
        prop_assert_eq!(s_hat_cestac(mu, sigma, n, a).unwrap(), s_hat_cestac(-mu, sigma, n, a).unwrap());
    }

    #[test]
    fn equivalent_probability_increasing(shift in -3.0f64..5.0, d in 0.01f64..1.0, n in 2usize..2000) {
        let a = pr(0.05);
        let p1 = equivalent_probability(shift, n, a);
        let p2 = equivalent_probability(shift + d, n, a);
        if let (Ok(p1), Ok(p2)) = (p1, p2) {
            prop_assert!(p2 > p1);
        }
    }

    #[test]
    fn equivalent_probability_inverts_delta(p in 0.05f64..0.999, n in 2usize..5000, alpha in 0.01f64..0.3) {
        let d = delta_cnh(n, pr(p), pr(alpha)).unwrap();
        let back = equivalent_probability(d, n, pr(alpha)).unwrap();
        prop_assert!((back - p).abs() <= 1e-9, "p={p} back={back}");
    }
}

#[test]
fn sample_sign_flip_gives_same_estimates() {
    let x: Vec<f64> = (0..50).map(|i| 3.0 + (i as f64 * 0.37).sin() * 1e-9).collect();
    let stats = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let s = (v.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt();
        (m, s)
    };
    let (m1, s1) = stats(&x);
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    let (m2, s2) = stats(&neg);
    assert_eq!(s_hat_mca(m1, s1).unwrap(), s_hat_mca(m2, s2).unwrap());
}

#[test]
fn cadna_preset() {
    let c = CadnaPreset::default();
    assert!((c.shift().unwrap() - 1.31).abs() < 0.005);
    assert!((CadnaPreset::with_safety_margin().shift().unwrap() - 4.63).abs() < 0.005);
    assert!((c.equivalent_probability().unwrap() - 0.308).abs() < 0.003);
}
