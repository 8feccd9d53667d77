use std::fmt;

use serde::Serialize;

/// Precondition that was relaxed or failed while producing a result.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Errors are measured against the sample mean, which depends on every sample.
    ReferenceIsSampleMean,
    /// Shapiro–Wilk rejects normality, so the CNH figures are not certified.
    NormalityRejected { p_value: f64, threshold: f64 },
    /// The normality test could not be run (sample size or constant sample).
    NormalityUntested { reason: String },
    /// The CLT lower bound was used with fewer than 5 successes or 5 failures.
    CltPreconditionUnmet { estimator: String, bits: Vec<u32> },
    /// All errors are zero; variance based estimators degenerate.
    DegenerateSample,
    /// A bit count was clamped to the mantissa range.
    Clamped { estimator: String, raw: f64, reported: f64 },
    /// Not even the first bit is certified.
    NoTrustedBit { estimator: String },
    /// Fewer samples than the distribution-free bound needs at (p, α).
    InsufficientSamples { required: u64, available: u64 },
    /// An estimator was skipped because its validity range excludes the inputs.
    EstimatorSkipped { estimator: String, reason: String },
    /// The CESTAC estimator grows without bound as n increases.
    LegacyDiverges,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ReferenceIsSampleMean => {
                write!(f, "reference is the sample mean; errors are not independent of it")
            }
            Warning::NormalityRejected { p_value, threshold } => write!(
                f,
                "Shapiro-Wilk p-value {p_value:.3e} < {threshold}: normality rejected, CNH results uncertified"
            ),
            Warning::NormalityUntested { reason } => write!(f, "normality not tested: {reason}"),
            Warning::CltPreconditionUnmet { estimator, bits } => write!(
                f,
                "{estimator}: fewer than 5 successes or failures at {} bit rank(s), lower bound is approximate",
                bits.len()
            ),
            Warning::DegenerateSample => write!(f, "all errors are zero"),
            Warning::Clamped { estimator, raw, reported } => {
                write!(f, "{estimator}: {raw} clamped to {reported}")
            }
            Warning::NoTrustedBit { estimator } => write!(f, "{estimator}: no bit can be trusted"),
            Warning::InsufficientSamples { required, available } => {
                write!(f, "{available} samples available, {required} required")
            }
            Warning::EstimatorSkipped { estimator, reason } => {
                write!(f, "{estimator} skipped: {reason}")
            }
            Warning::LegacyDiverges => {
                write!(f, "s_cestac is a legacy estimator and diverges as n grows")
            }
        }
    }
}
