//! Normal-hypothesis estimators on synthetic errors with a known σ.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use sigbits::cnh::{
    cnh_report, contribution_probability_cnh, delta_cnh, significance_probability_cnh, ConfidenceParams,
};
use sigbits::error_model::ErrorSampleSet;
use sigbits::stats::Probability;

fn main() -> sigbits::Result<()> {
    let sigma = 2f64.powi(-30);
    let n = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let normal = Normal::new(0.0, sigma).expect("valid sigma");
    let z: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();

    let params = ConfidenceParams::new(n, 0.99, 0.05)?;
    let report = cnh_report(&ErrorSampleSet::from_errors(z)?, &params, None)?;
    println!("-log2 sigma      {:.3}", -sigma.log2());
    println!("delta_cnh        {:.3}", report.delta);
    println!("s_cnh            {:.3}", report.s_cnh.bits);
    println!("c_cnh (p=0.51)   {:.3}", report.c_cnh.map(|c| c.bits).unwrap_or(f64::NAN));
    if let Some(sw) = report.normality {
        println!("shapiro-wilk     W={:.4} p={:.3}", sw.w, sw.p_value);
    }

    println!("\n  k  P(significant)  P(contributes)");
    for k in 26..=36 {
        let ps = significance_probability_cnh(sigma, k as f64)?;
        let pc = contribution_probability_cnh(sigma, k).map(|c| format!("{:.4}", c.p_estimate));
        println!("{k:3}  {ps:14.4}  {:>14}", pc.unwrap_or_else(|_| "-".into()));
    }

    let p = Probability::new(0.9)?;
    let a = Probability::new(0.05)?;
    println!("\nshift at p=0.9, 95%:");
    for n in [3, 10, 30, 100, 1000, 10000] {
        println!("  n={n:<6} {:.3}", delta_cnh(n, p, a)?);
    }
    Ok(())
}
