//! Chi-square quantiles via the regularized incomplete gamma function.

use super::normal;
use super::probability::QuantileResult;
use super::solve::newton_bracketed;
use super::special::{gamma_pq, gamma_prefactor, ln_gamma};
use crate::error::{Error, Result};

pub const MAX_DOF: u64 = 1_000_000;

/// `P(χ²_dof ≤ x)`.
pub fn chi2_cdf(x: f64, dof: u64) -> f64 {
    gamma_pq(dof as f64 / 2.0, x / 2.0).0
}

/// Quantile of the chi-square law with `dof` degrees of freedom.
pub fn chi2_quantile(q: f64, dof: u64) -> Result<QuantileResult> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("chi2_quantile argument {q} is not in (0, 1)")));
    }
    if dof == 0 || dof > MAX_DOF {
        return Err(Error::domain(format!(
            "chi2_quantile needs 1 <= dof <= {MAX_DOF}, got {dof}"
        )));
    }
    let a = dof as f64 / 2.0;
    // Solve on whichever tail is smaller; both residuals increase with y.
    let lower = q <= 0.5;
    let target = if lower { q } else { 1.0 - q };
    let residual = |y: f64| {
        let (p, qq) = gamma_pq(a, y);
        if lower {
            p - target
        } else {
            target - qq
        }
    };

    let y0 = initial_guess(q, dof) / 2.0;
    let mut hi = y0.max(1.0) * 2.0;
    while residual(hi) < 0.0 {
        hi *= 2.0;
    }
    let y = newton_bracketed(
        |y| (residual(y), gamma_prefactor(a, y) / y),
        y0,
        0.0,
        hi,
        1e-15,
    );
    let achieved = (residual(y) / target).abs();
    Ok(QuantileResult { value: 2.0 * y, achieved_accuracy: achieved })
}

fn initial_guess(q: f64, dof: u64) -> f64 {
    let k = dof as f64;
    let z = normal::quantile(q).unwrap_or(0.0);
    // Wilson–Hilferty cube approximation.
    let c = 2.0 / (9.0 * k);
    let wh = k * (1.0 - c + z * c.sqrt()).powi(3);
    // Small-x expansion P ≈ (x/2)^a / Γ(a + 1), used deep in the lower tail.
    let a = k / 2.0;
    let small = 2.0 * ((q.ln() + ln_gamma(a + 1.0)) / a).exp();
    if wh > 0.0 && (q > 0.05 || small > wh) {
        wh
    } else {
        small
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let med = chi2_quantile(0.5, 2).unwrap().value;
        assert!((med - (-2.0 * 0.5f64.ln())).abs() < 1e-12);
        assert!((med - 1.386_294).abs() < 1e-5);
        // dof = 2 is exponential with mean 2: x = -2 ln(1 - q).
        let lo = chi2_quantile(0.025, 2).unwrap().value;
        assert!((lo - 0.050_636).abs() < 1e-5);
        assert!((lo + 2.0 * (-0.025f64).ln_1p()).abs() < 1e-14);
        let hi = chi2_quantile(0.975, 2).unwrap().value;
        assert!((hi - 7.377_759).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_dof() {
        assert!(chi2_quantile(0.5, 0).is_err());
        assert!(chi2_quantile(0.5, MAX_DOF + 1).is_err());
        assert!(chi2_quantile(1.0, 3).is_err());
    }

    #[test]
    fn accuracy_over_domain() {
        for &dof in &[1, 2, 3, 7, 29, 298, 9_999, 100_000, 1_000_000] {
            for &q in &[1e-9, 1e-4, 0.025, 0.5, 0.975, 1.0 - 1e-6, 1.0 - 1e-9] {
                let r = chi2_quantile(q, dof).unwrap();
                assert!(r.value > 0.0);
                assert!(
                    r.achieved_accuracy <= 1e-8,
                    "dof={dof} q={q} acc={}",
                    r.achieved_accuracy
                );
            }
        }
    }

    #[test]
    fn median_bracket_and_monotone() {
        for k in 2..200u64 {
            let m = chi2_quantile(0.5, k).unwrap().value;
            let kf = k as f64;
            assert!(m > kf - 1.0 && m < kf, "k={k} median={m}");
        }
        let mut last = 0.0;
        for i in 1..100 {
            let v = chi2_quantile(i as f64 / 100.0, 9).unwrap().value;
            assert!(v > last);
            last = v;
        }
    }
}
