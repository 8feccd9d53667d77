//! The error variable Z in its four settings.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bits::BitsEstimate;
use crate::error::{Error, Result};
use crate::samples::SampleSet;
use crate::warning::Warning;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Absolute,
    Relative,
}

impl FromStr for ErrorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "absolute" | "abs" => Ok(ErrorKind::Absolute),
            "relative" | "rel" => Ok(ErrorKind::Relative),
            _ => Err(Error::Usage(format!("unknown error kind {s:?} (absolute|relative)"))),
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Absolute => "absolute",
            ErrorKind::Relative => "relative",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    /// Known value x: Z = X - x or X / x - 1.
    Scalar(f64),
    /// Second sample set Y paired by index: Z = X - Y or X / Y - 1.
    Paired(SampleSet),
    /// Empirical mean of X itself.
    SampleMean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSpec {
    pub kind: ErrorKind,
    pub reference: Reference,
}

impl ErrorSpec {
    pub fn new(kind: ErrorKind, reference: Reference) -> Self {
        ErrorSpec { kind, reference }
    }
}

/// Reference as echoed in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ReferenceSummary {
    Scalar { value: f64 },
    Paired { mean: f64 },
    SampleMean { mean: f64 },
}

impl ReferenceSummary {
    /// The scalar x, or the mean of the reference samples.
    pub fn value(&self) -> f64 {
        match *self {
            ReferenceSummary::Scalar { value } => value,
            ReferenceSummary::Paired { mean } | ReferenceSummary::SampleMean { mean } => mean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorSampleSet {
    pub z: Vec<f64>,
    pub kind: ErrorKind,
    pub reference: ReferenceSummary,
    /// e_y = floor(log2 |ref|) + 1; absent when the reference value is zero.
    pub normalization_exponent: Option<i32>,
    pub warnings: Vec<Warning>,
}

impl ErrorSampleSet {
    /// Wraps raw error values, e.g. synthetic draws, as relative errors.
    pub fn from_errors(z: Vec<f64>) -> Result<Self> {
        if let Some(i) = z.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("error value {i} is not finite")));
        }
        Ok(ErrorSampleSet {
            z,
            kind: ErrorKind::Relative,
            reference: ReferenceSummary::Scalar { value: 1.0 },
            normalization_exponent: Some(1),
            warnings: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Bits to add to an absolute-error count so it reads as a relative count.
    pub fn normalization_shift(&self) -> f64 {
        match (self.kind, self.normalization_exponent) {
            (ErrorKind::Absolute, Some(e)) => (e - 1) as f64,
            _ => 0.0,
        }
    }
}

/// Builds Z from the samples of X according to `spec`.
pub fn build_error_samples(x: &SampleSet, spec: &ErrorSpec) -> Result<ErrorSampleSet> {
    let xs = x.values();
    let mut warnings = Vec::new();
    let (z, reference) = match &spec.reference {
        Reference::Scalar(r) => {
            if !r.is_finite() {
                return Err(Error::Data(format!("reference {r} is not finite")));
            }
            if spec.kind == ErrorKind::Relative && *r == 0.0 {
                return Err(Error::DegenerateReference("relative error against a zero reference".into()));
            }
            (apply_scalar(xs, *r, spec.kind), ReferenceSummary::Scalar { value: *r })
        }
        Reference::SampleMean => {
            if xs.is_empty() {
                return Err(Error::Data("no samples".into()));
            }
            let m = x.mean();
            if spec.kind == ErrorKind::Relative && m == 0.0 {
                return Err(Error::DegenerateReference("sample mean is zero".into()));
            }
            warnings.push(Warning::ReferenceIsSampleMean);
            (apply_scalar(xs, m, spec.kind), ReferenceSummary::SampleMean { mean: m })
        }
        Reference::Paired(y) => {
            let ys = y.values();
            if ys.len() != xs.len() {
                return Err(Error::Shape { expected: xs.len(), got: ys.len() });
            }
            if spec.kind == ErrorKind::Relative {
                if let Some(i) = ys.iter().position(|&v| v == 0.0) {
                    return Err(Error::DegenerateReference(format!("reference sample {i} is zero")));
                }
            }
            let z = xs
                .iter()
                .zip(ys)
                .map(|(&a, &b)| match spec.kind {
                    ErrorKind::Absolute => a - b,
                    ErrorKind::Relative => relative_error(a, b),
                })
                .collect();
            (z, ReferenceSummary::Paired { mean: y.mean() })
        }
    };
    if let Some(i) = z.iter().position(|v: &f64| !v.is_finite()) {
        return Err(Error::Data(format!("error value {i} is not finite")));
    }
    let r = reference.value();
    let normalization_exponent = if r != 0.0 && r.is_finite() {
        Some(normalization_exponent(r)?)
    } else {
        None
    };
    Ok(ErrorSampleSet { z, kind: spec.kind, reference, normalization_exponent, warnings })
}

/// x / y - 1 rounded once: the subtraction is exact whenever x and y are within a factor of two.
pub fn relative_error(x: f64, y: f64) -> f64 {
    (x - y) / y
}

fn apply_scalar(xs: &[f64], r: f64, kind: ErrorKind) -> Vec<f64> {
    match kind {
        ErrorKind::Absolute => xs.iter().map(|&a| a - r).collect(),
        ErrorKind::Relative => xs.iter().map(|&a| relative_error(a, r)).collect(),
    }
}

/// floor(log2 |v|) + 1, read from the exponent field.
pub fn normalization_exponent(v: f64) -> Result<i32> {
    if v == 0.0 || !v.is_finite() {
        return Err(Error::domain(format!("normalization exponent undefined for {v}")));
    }
    let bits = v.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    if biased == 0 {
        let frac = bits & ((1u64 << 52) - 1);
        // Subnormal: value = frac * 2^-1074.
        let top = 63 - frac.leading_zeros() as i32;
        Ok(top - 1074 + 1)
    } else {
        Ok(biased - 1023 + 1)
    }
}

/// Number of bits shared by `x` and reference `y`, clamped to [0, 53].
pub fn significant_bits_between(x: f64, y: f64, kind: ErrorKind) -> Result<BitsEstimate> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::domain("significant_bits_between needs finite arguments"));
    }
    let raw = match kind {
        ErrorKind::Relative => {
            if y == 0.0 {
                return Err(Error::DegenerateReference("relative error against zero".into()));
            }
            -relative_error(x, y).abs().log2()
        }
        ErrorKind::Absolute => {
            let shift = if y == 0.0 { 0 } else { normalization_exponent(y)? - 1 };
            -(x - y).abs().log2() + shift as f64
        }
    };
    Ok(BitsEstimate::clamped(raw))
}
