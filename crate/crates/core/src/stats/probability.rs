use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A probability strictly inside (0, 1).
///
/// Used for targets and risk levels (p, α) and for quantile arguments.
/// Empirical frequencies, which may legitimately be 0 or 1, are plain `f64`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Probability(value))
        } else {
            Err(Error::domain(format!("probability {value} is not in the open interval (0, 1)")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - self`, exact for values at or above one half.
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Quantile value together with its estimated relative error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantileResult {
    pub value: f64,
    /// Relative residual of the CDF at `value`, measured on the tail that was solved.
    pub achieved_accuracy: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_closed_endpoints() {
        assert!(Probability::new(0.0).is_err());
        assert!(Probability::new(1.0).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert!(Probability::new(0.5).is_ok());
    }

    #[test]
    fn serde_validates() {
        let p: Probability = serde_json::from_str("0.95").unwrap();
        assert_eq!(p.value(), 0.95);
        assert!(serde_json::from_str::<Probability>("1.5").is_err());
    }
}
