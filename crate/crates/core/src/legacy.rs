//! MCA and CESTAC estimators and the CADNA reinterpretation.

use serde::Serialize;

use crate::bits::BitsEstimate;
use crate::cnh::confidence_shift;
use crate::error::{Error, Result};
use crate::stats::{normal_upper_tail, student_quantile, Probability};

fn check(mu_hat: f64, sigma_hat: f64) -> Result<()> {
    if !mu_hat.is_finite() || !sigma_hat.is_finite() || sigma_hat < 0.0 {
        return Err(Error::domain(format!("invalid moments mu={mu_hat}, sigma={sigma_hat}")));
    }
    if mu_hat == 0.0 {
        return Err(Error::DegenerateReference("sample mean is zero".into()));
    }
    Ok(())
}

/// ŝ_MCA = -log2 |σ̂ / μ̂|.
pub fn s_hat_mca(mu_hat: f64, sigma_hat: f64) -> Result<BitsEstimate> {
    check(mu_hat, sigma_hat)?;
    if sigma_hat == 0.0 {
        return Ok(BitsEstimate::exact());
    }
    Ok(BitsEstimate::clamped(-(sigma_hat / mu_hat).abs().log2()))
}

/// log2(τ_n / √n) with τ_n the Student quantile at 1 - α/2 on n - 1 degrees of freedom.
pub fn cestac_shift(n: usize, alpha: Probability) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("CESTAC needs n >= 2, got {n}")));
    }
    let tau = student_quantile(1.0 - alpha.value() / 2.0, n as u64 - 1)?.value;
    Ok((tau / (n as f64).sqrt()).log2())
}

/// ŝ_CESTAC = -log2(τ_n σ̂ / (√n |μ̂|)). Grows without bound with n.
pub fn s_hat_cestac(mu_hat: f64, sigma_hat: f64, n: usize, alpha: Probability) -> Result<BitsEstimate> {
    check(mu_hat, sigma_hat)?;
    let shift = cestac_shift(n, alpha)?;
    if sigma_hat == 0.0 {
        return Ok(BitsEstimate::exact());
    }
    Ok(BitsEstimate::clamped(-(sigma_hat / mu_hat).abs().log2() - shift))
}

/// Bits shared by the mean and an exact reference: -log2 |(x_real - μ̂) / x_real|.
pub fn s_cestac_exact(mu_hat: f64, x_real: f64) -> Result<BitsEstimate> {
    if x_real == 0.0 || !x_real.is_finite() || !mu_hat.is_finite() {
        return Err(Error::DegenerateReference(format!("exact reference {x_real} is unusable")));
    }
    Ok(BitsEstimate::clamped(-((x_real - mu_hat) / x_real).abs().log2()))
}

/// Probability p at which a shift equals δ_CNH(n, p, α).
pub fn equivalent_probability(shift: f64, n: usize, alpha: Probability) -> Result<f64> {
    if !shift.is_finite() {
        return Err(Error::domain(format!("shift {shift} is not finite")));
    }
    let x = (shift - confidence_shift(n, alpha)?).exp2();
    let p = 1.0 - 2.0 * normal_upper_tail(x);
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("no probability in (0, 1) matches shift {shift}")));
    }
    Ok(p)
}

/// CADNA's fixed configuration: three samples at 95 % confidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CadnaPreset {
    pub n: usize,
    pub alpha: Probability,
    /// Drop one more decimal digit, as CADNA users are told to.
    pub safety_margin: bool,
}

impl Default for CadnaPreset {
    fn default() -> Self {
        CadnaPreset { n: 3, alpha: Probability::new(0.05).expect("valid"), safety_margin: false }
    }
}

impl CadnaPreset {
    pub fn with_safety_margin() -> Self {
        CadnaPreset { safety_margin: true, ..Default::default() }
    }

    /// Bits subtracted from -log2 σ̂: about 1.31, or 4.63 with the margin.
    pub fn shift(&self) -> Result<f64> {
        let margin = if self.safety_margin { 10f64.log2() } else { 0.0 };
        Ok(cestac_shift(self.n, self.alpha)? + margin)
    }

    pub fn estimate(&self, mu_hat: f64, sigma_hat: f64) -> Result<BitsEstimate> {
        let mca = s_hat_mca(mu_hat, sigma_hat)?;
        if sigma_hat == 0.0 {
            return Ok(mca);
        }
        Ok(BitsEstimate::clamped(mca.raw - self.shift()?))
    }

    pub fn equivalent_probability(&self) -> Result<f64> {
        equivalent_probability(self.shift()?, self.n, self.alpha)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegacyEstimates {
    pub s_mca: BitsEstimate,
    pub s_cestac: BitsEstimate,
    /// Probability at which the CESTAC shift for this n certifies significance.
    pub cestac_equivalent_p: Option<f64>,
    pub cadna_equivalent_p: f64,
    pub n: usize,
    pub alpha: Probability,
}

pub fn legacy_estimates(mu_hat: f64, sigma_hat: f64, n: usize, alpha: Probability) -> Result<LegacyEstimates> {
    let shift = cestac_shift(n, alpha)?;
    Ok(LegacyEstimates {
        s_mca: s_hat_mca(mu_hat, sigma_hat)?,
        s_cestac: s_hat_cestac(mu_hat, sigma_hat, n, alpha)?,
        cestac_equivalent_p: equivalent_probability(shift, n, alpha).ok(),
        cadna_equivalent_p: CadnaPreset::default().equivalent_probability()?,
        n,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Clamp;
    use crate::cnh::delta_cnh;

    fn pr(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn mca_examples() {
        assert_eq!(s_hat_mca(2.0, 2f64.powi(-9)).unwrap().bits, 10.0);
        assert_eq!(s_hat_mca(-2.0, 2f64.powi(-9)).unwrap().bits, 10.0);
        assert!((s_hat_mca(1.99999999909, 5.3427e-9).unwrap().bits - 28.48).abs() < 0.01);
        assert_eq!(s_hat_mca(2.0, 0.0).unwrap().clamp, Clamp::ExactMatch);
        assert!(matches!(s_hat_mca(0.0, 1.0), Err(Error::DegenerateReference(_))));
    }

    #[test]
    fn cestac_examples() {
        let s = s_hat_cestac(1.99999999909, 5.3427e-9, 10000, pr(0.05)).unwrap();
        assert!((s.bits - 34.2).abs() < 0.1, "{}", s.bits);
        let mca = s_hat_mca(1.0, 1e-6).unwrap().bits;
        let c3 = s_hat_cestac(1.0, 1e-6, 3, pr(0.05)).unwrap().bits;
        assert!((mca - c3 - 1.313).abs() < 0.002);
        let a = s_hat_cestac(1.0, 1e-6, 10000, pr(0.05)).unwrap().bits;
        let b = s_hat_cestac(1.0, 1e-6, 40000, pr(0.05)).unwrap().bits;
        assert!((b - a - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn cadna_constants() {
        let plain = CadnaPreset::default();
        assert!((plain.shift().unwrap() - 1.31).abs() < 0.005);
        let p = plain.equivalent_probability().unwrap();
        // scipy: 2 Φ(2^(log2(t_.975,2 / √3) - ½ log2(2 / χ²_.025,2))) - 1.
        assert!((p - 0.307_352_914).abs() < 1e-8, "{p}");
        assert!((p - 0.308).abs() < 0.003);
        let safe = CadnaPreset::with_safety_margin();
        assert!((safe.shift().unwrap() - 4.63).abs() < 0.01);
        assert!(safe.equivalent_probability().unwrap() >= 0.99);
        let e = plain.estimate(1.0, 2f64.powi(-20)).unwrap();
        assert!((e.bits - (20.0 - plain.shift().unwrap())).abs() < 1e-12);
    }

    #[test]
    fn equivalent_probability_examples() {
        let p = equivalent_probability(1.313, 3, pr(0.05)).unwrap();
        assert!((p - 0.308).abs() < 0.003);
        assert!(equivalent_probability(1.313 + 3.322, 3, pr(0.05)).unwrap() >= 0.99);
        let d = delta_cnh(29, pr(0.9), pr(0.05)).unwrap();
        assert!((equivalent_probability(d, 29, pr(0.05)).unwrap() - 0.9).abs() < 1e-9);
        assert!(equivalent_probability(f64::NAN, 3, pr(0.05)).is_err());
        assert!(equivalent_probability(200.0, 3, pr(0.05)).is_err());
    }

    #[test]
    fn exact_reference() {
        let s = s_cestac_exact(2.0 - 2f64.powi(-30), 2.0).unwrap();
        assert_eq!(s.bits, 31.0);
        assert!(s_cestac_exact(1.0, 0.0).is_err());
    }
}
