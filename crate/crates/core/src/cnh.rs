//! Estimators under the centered normality hypothesis Z ~ N(0, σ).

use std::f64::consts::PI;

use serde::Serialize;

use crate::bits::{BitsEstimate, MANTISSA_BITS};
use crate::error::{Error, Result};
use crate::error_model::ErrorSampleSet;
use crate::samples::std_dev;
use crate::stats::{chi2_quantile, normal_quantile, normal_upper_tail, shapiro_wilk, Probability, ShapiroWilk};
use crate::warning::Warning;

/// Shapiro–Wilk p-values below this attach a warning.
pub const NORMALITY_THRESHOLD: f64 = 0.05;

/// Default target for contributing bits.
pub const DEFAULT_CONTRIBUTION_P: f64 = 0.51;

/// Contribution formulas are only tight below this probability.
pub const CONTRIBUTION_P_LIMIT: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceParams {
    pub n: usize,
    pub p: Probability,
    pub alpha: Probability,
}

impl ConfidenceParams {
    pub fn new(n: usize, p: f64, alpha: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("at least 2 samples are needed, got {n}")));
        }
        Ok(ConfidenceParams { n, p: Probability::new(p)?, alpha: Probability::new(alpha)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceInterval {
    pub lower: f64,
    pub upper: f64,
    pub sigma_hat: f64,
    pub n: usize,
    /// σ̂ = 0: the interval collapses to [0, 0].
    pub degenerate: bool,
}

impl VarianceInterval {
    /// Upper confidence bound on σ.
    pub fn sigma_upper(&self) -> f64 {
        self.upper.sqrt()
    }
}

fn check_n(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::domain(format!("at least 2 samples are needed, got {n}")));
    }
    Ok(n as u64 - 1)
}

/// Bilateral χ² confidence interval on σ² at level 1 - α.
pub fn variance_ci(sigma_hat: f64, n: usize, alpha: Probability) -> Result<VarianceInterval> {
    let dof = check_n(n)?;
    if !(sigma_hat >= 0.0) || !sigma_hat.is_finite() {
        return Err(Error::domain(format!("sigma_hat must be finite and >= 0, got {sigma_hat}")));
    }
    if sigma_hat == 0.0 {
        return Ok(VarianceInterval { lower: 0.0, upper: 0.0, sigma_hat, n, degenerate: true });
    }
    let a = alpha.value();
    let hi_q = chi2_quantile(1.0 - a / 2.0, dof)?.value;
    let lo_q = chi2_quantile(a / 2.0, dof)?.value;
    let ss = dof as f64 * sigma_hat * sigma_hat;
    Ok(VarianceInterval { lower: ss / hi_q, upper: ss / lo_q, sigma_hat, n, degenerate: false })
}

/// ½ log2((n - 1) / χ²), the confidence term shared by both CNH shifts.
pub fn confidence_shift(n: usize, alpha: Probability) -> Result<f64> {
    let dof = check_n(n)?;
    let q = chi2_quantile(alpha.value() / 2.0, dof)?.value;
    Ok(0.5 * (dof as f64 / q).log2())
}

/// Probability that bit k is significant: 2Φ(2^-k / σ) - 1.
pub fn significance_probability_cnh(sigma: f64, k: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    let x = (-k).exp2() / sigma;
    Ok(1.0 - 2.0 * normal_upper_tail(x))
}

/// log2 Φ⁻¹((p + 1) / 2), the probability part of δ_CNH.
pub fn significance_shift(p: Probability) -> Result<f64> {
    if p.value() > 1.0 - 1e-12 {
        return Err(Error::domain(format!("p = {p} is too close to 1")));
    }
    // (p + 1) / 2 = 1 - (1 - p) / 2, solved on the small tail.
    let tail = (1.0 - p.value()) / 2.0;
    Ok((-normal_quantile(tail)?.value).log2())
}

/// δ_CNH(n, p, α).
pub fn delta_cnh(n: usize, p: Probability, alpha: Probability) -> Result<f64> {
    Ok(confidence_shift(n, alpha)? + significance_shift(p)?)
}

/// ŝ_CNH = -log2 σ̂ - δ_CNH, clamped to [0, 53].
pub fn significant_bits_cnh(sigma_hat: f64, params: &ConfidenceParams) -> Result<BitsEstimate> {
    if sigma_hat == 0.0 {
        return Ok(BitsEstimate::exact());
    }
    if !(sigma_hat > 0.0) || !sigma_hat.is_finite() {
        return Err(Error::domain(format!("sigma_hat must be positive, got {sigma_hat}")));
    }
    let delta = delta_cnh(params.n, params.p, params.alpha)?;
    Ok(BitsEstimate::clamped(-sigma_hat.log2() - delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContributionEstimate {
    pub k: i32,
    pub p_estimate: f64,
    pub p_lower: f64,
    pub p_upper: f64,
    /// p_estimate - ½, kept separately since it is far below the ulp of ½ for large k.
    pub excess: f64,
    /// Envelope half-widths below and above p_estimate.
    pub lower_width: f64,
    pub upper_width: f64,
}

/// Probability that bit k contributes, with its trapezoidal error envelope.
pub fn contribution_probability_cnh(sigma: f64, k: i32) -> Result<ContributionEstimate> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    let h = (-(k as f64)).exp2();
    if !(h < 3f64.sqrt() * sigma) {
        return Err(Error::OutOfValidity(format!(
            "contribution approximation needs 2^-k < sqrt(3)*sigma; 2^-{k} = {h:e} >= {:e}",
            3f64.sqrt() * sigma
        )));
    }
    let s2pi = (2.0 * PI).sqrt();
    let excess = h / (2.0 * sigma * s2pi);
    let cube = (h / sigma).powi(3) / (12.0 * s2pi);
    let e = 4.0 * (-1.5f64).exp();
    let lower_width = cube * (e + 1.0);
    let upper_width = cube * e;
    let p_estimate = 0.5 + excess;
    Ok(ContributionEstimate {
        k,
        p_estimate,
        p_lower: (p_estimate - lower_width).clamp(0.0, 1.0),
        p_upper: (p_estimate + upper_width).clamp(0.0, 1.0),
        excess,
        lower_width,
        upper_width,
    })
}

/// log2(p - ½) + log2(2√(2π)), the probability part of the contribution shift.
pub fn contribution_shift(p: Probability) -> Result<f64> {
    let pv = p.value();
    if pv <= 0.5 {
        return Err(Error::domain(format!("contribution target must exceed 0.5, got {pv}")));
    }
    if pv >= CONTRIBUTION_P_LIMIT {
        return Err(Error::OutOfValidity(format!(
            "contribution approximation is only tight for p < {CONTRIBUTION_P_LIMIT}, got {pv}"
        )));
    }
    Ok((pv - 0.5).log2() + (2.0 * (2.0 * PI).sqrt()).log2())
}

/// ĉ_CNH, the number of bits contributing with probability at least p.
pub fn contributing_bits_cnh(sigma_hat: f64, params: &ConfidenceParams) -> Result<BitsEstimate> {
    let shift = contribution_shift(params.p)?;
    if sigma_hat == 0.0 {
        return Ok(BitsEstimate::exact());
    }
    if !(sigma_hat > 0.0) || !sigma_hat.is_finite() {
        return Err(Error::domain(format!("sigma_hat must be positive, got {sigma_hat}")));
    }
    let conf = confidence_shift(params.n, params.alpha)?;
    Ok(BitsEstimate::clamped(-sigma_hat.log2() - (conf + shift)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnhCurvePoint {
    pub k: u32,
    /// Significance probability at the upper confidence bound of σ.
    pub p_significance: f64,
    /// Contribution estimate where its approximation is valid.
    pub contribution: Option<ContributionEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnhReport {
    pub sigma_hat: f64,
    pub variance_interval: VarianceInterval,
    pub delta: f64,
    pub s_cnh: BitsEstimate,
    pub contribution_p: f64,
    pub c_cnh: Option<BitsEstimate>,
    pub normality: Option<ShapiroWilk>,
    pub curve: Vec<CnhCurvePoint>,
    pub warnings: Vec<Warning>,
}

/// Runs every CNH estimator on `z`; `contribution_p` defaults to 0.51.
pub fn cnh_report(
    z: &ErrorSampleSet,
    params: &ConfidenceParams,
    contribution_p: Option<f64>,
) -> Result<CnhReport> {
    if z.len() != params.n {
        return Err(Error::Shape { expected: params.n, got: z.len() });
    }
    let mut warnings = Vec::new();
    let sigma_hat = std_dev(&z.z);
    let variance_interval = variance_ci(sigma_hat, params.n, params.alpha)?;
    let delta = delta_cnh(params.n, params.p, params.alpha)?;
    let s_cnh = significant_bits_cnh(sigma_hat, params)?;
    if variance_interval.degenerate {
        warnings.push(Warning::DegenerateSample);
    }
    if s_cnh.is_clamped() && !variance_interval.degenerate {
        warnings.push(Warning::Clamped { estimator: "s_cnh".into(), raw: s_cnh.raw, reported: s_cnh.bits });
    }

    let contribution_p = contribution_p.unwrap_or(DEFAULT_CONTRIBUTION_P);
    let c_params = Probability::new(contribution_p)
        .map(|p| ConfidenceParams { p, ..*params });
    let c_cnh = match c_params.and_then(|cp| contributing_bits_cnh(sigma_hat, &cp)) {
        Ok(c) => {
            if c.is_clamped() && !variance_interval.degenerate {
                warnings.push(Warning::Clamped { estimator: "c_cnh".into(), raw: c.raw, reported: c.bits });
            }
            Some(c)
        }
        Err(e) => {
            warnings.push(Warning::EstimatorSkipped { estimator: "c_cnh".into(), reason: e.to_string() });
            None
        }
    };

    let normality = match shapiro_wilk(&z.z) {
        Ok(sw) => {
            if sw.p_value < NORMALITY_THRESHOLD {
                warnings.push(Warning::NormalityRejected {
                    p_value: sw.p_value,
                    threshold: NORMALITY_THRESHOLD,
                });
            }
            Some(sw)
        }
        Err(e) => {
            warnings.push(Warning::NormalityUntested { reason: e.to_string() });
            None
        }
    };

    let sigma_up = variance_interval.sigma_upper();
    let curve = (0..=MANTISSA_BITS)
        .map(|k| {
            if sigma_up == 0.0 {
                return CnhCurvePoint { k, p_significance: 1.0, contribution: None };
            }
            CnhCurvePoint {
                k,
                p_significance: significance_probability_cnh(sigma_up, k as f64).unwrap_or(f64::NAN),
                contribution: contribution_probability_cnh(sigma_up, k as i32).ok(),
            }
        })
        .collect();

    Ok(CnhReport {
        sigma_hat,
        variance_interval,
        delta,
        s_cnh,
        contribution_p,
        c_cnh,
        normality,
        curve,
        warnings,
    })
}
