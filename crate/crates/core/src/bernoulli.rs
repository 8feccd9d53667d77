//! Distribution-free estimators built from per-bit Bernoulli trials.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bits::{pow2, BitsEstimate, Clamp, MANTISSA_BITS};
use crate::error::{Error, Result};
use crate::stats::{normal_quantile, Probability};

/// Below this many successes or failures the CLT bound is flagged.
pub const CLT_MIN_COUNT: u64 = 5;

/// Range of bit ranks examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BitRange {
    #[default]
    Binary64,
    Binary32,
}

impl BitRange {
    pub fn max_bits(self) -> u32 {
        match self {
            BitRange::Binary64 => MANTISSA_BITS,
            BitRange::Binary32 => 24,
        }
    }
}

impl FromStr for BitRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "53" | "binary64" | "double" => Ok(BitRange::Binary64),
            "24" | "binary32" | "single" => Ok(BitRange::Binary32),
            _ => Err(Error::Usage(format!("unknown bit range {s:?} (53|24)"))),
        }
    }
}

impl fmt::Display for BitRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.max_bits())
    }
}

/// S: |z| ≤ 2^-k.
pub fn significance_trial(z: f64, k: u32) -> bool {
    z.abs() <= pow2(-(k as i32))
}

/// C: floor(2^k |z|) is even.
pub fn contribution_trial(z: f64, k: u32) -> Result<bool> {
    if !z.is_finite() {
        return Err(Error::Data(format!("error value {z} is not finite")));
    }
    // Scaling by a power of two is exact here.
    let scaled = z.abs() * pow2(k as i32);
    if scaled >= 9_223_372_036_854_775_808.0 {
        return Err(Error::Range(format!("2^{k} * |{z:e}| does not fit in 63 bits")));
    }
    Ok((scaled as u64).is_multiple_of(2))
}

/// Smallest n such that n successes out of n certify p at confidence 1 - α.
pub fn required_samples(p: Probability, alpha: Probability) -> u64 {
    let n = (alpha.value().ln() / p.value().ln()).ceil();
    n.max(1.0) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    ExactAllSuccess,
    CltAdjusted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound {
    pub p_lower: f64,
    pub method: BoundMethod,
    /// CLT bound with fewer than 5 successes or 5 failures.
    pub low_confidence: bool,
}

/// One-sided lower confidence bound on a success probability.
pub fn bernoulli_lower_bound(successes: u64, trials: u64, alpha: Probability) -> Result<LowerBound> {
    if trials == 0 {
        return Err(Error::domain("bernoulli_lower_bound needs at least one trial"));
    }
    if successes > trials {
        return Err(Error::domain(format!("{successes} successes out of {trials} trials")));
    }
    let n = trials as f64;
    if successes == trials {
        return Ok(LowerBound {
            p_lower: (alpha.value().ln() / n).exp(),
            method: BoundMethod::ExactAllSuccess,
            low_confidence: false,
        });
    }
    let ns = successes as f64;
    let z = -normal_quantile(alpha.value())?.value;
    let center = (ns + 2.0) / (n + 4.0);
    let spread = ((ns + 2.0) * (n - ns + 2.0) / (n + 4.0).powi(3)).sqrt();
    let p_hat = ns / n;
    let p_lower = (center - z * spread).clamp(0.0, 1.0).min(p_hat);
    Ok(LowerBound {
        p_lower,
        method: BoundMethod::CltAdjusted,
        low_confidence: successes < CLT_MIN_COUNT || trials - successes < CLT_MIN_COUNT,
    })
}

fn check_nonempty(z: &[f64]) -> Result<()> {
    if z.is_empty() {
        return Err(Error::domain("no error samples"));
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("error samples must be finite".into()));
    }
    Ok(())
}

fn max_abs(z: &[f64]) -> f64 {
    z.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// ŝ_B: the largest k in [1, 53] with every |Z_i| ≤ 2^-k; 0 (flagged) if none.
pub fn s_hat_b(z: &[f64]) -> Result<BitsEstimate> {
    s_hat_b_in(z, BitRange::Binary64)
}

pub fn s_hat_b_in(z: &[f64], range: BitRange) -> Result<BitsEstimate> {
    check_nonempty(z)?;
    let max_bits = range.max_bits();
    let m = max_abs(z);
    if m == 0.0 {
        return Ok(BitsEstimate::exact_to(max_bits));
    }
    // m = f * 2^e with f in [1, 2): -log2 m is -e exactly or lies in (-e-1, -e).
    let e = crate::error_model::normalization_exponent(m)? - 1;
    let is_power = is_power_of_two(m);
    let k = if is_power { -e } else { -e - 1 };
    let raw = k as f64;
    Ok(if k < 1 {
        BitsEstimate { bits: 0.0, raw, clamp: Clamp::NoCertifiedBit }
    } else {
        BitsEstimate::clamped_to(raw, max_bits)
    })
}

fn is_power_of_two(m: f64) -> bool {
    let bits = m.to_bits();
    let frac = bits & ((1u64 << 52) - 1);
    if bits >> 52 == 0 {
        frac.is_power_of_two()
    } else {
        frac == 0
    }
}

/// Fractional ŝ_B: min_i -log2 |Z_i|, clamped to [0, 53].
pub fn s_hat_b_fractional(z: &[f64]) -> Result<BitsEstimate> {
    s_hat_b_fractional_in(z, BitRange::Binary64)
}

pub fn s_hat_b_fractional_in(z: &[f64], range: BitRange) -> Result<BitsEstimate> {
    check_nonempty(z)?;
    let m = max_abs(z);
    if m == 0.0 {
        return Ok(BitsEstimate::exact_to(range.max_bits()));
    }
    Ok(BitsEstimate::clamped_to(-m.log2(), range.max_bits()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Significance,
    Contribution,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Significance => "significance",
            CurveKind::Contribution => "contribution",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BitCurveEntry {
    pub k: u32,
    pub successes: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub p_lower: f64,
    pub method: BoundMethod,
    pub low_confidence: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BitCurve {
    pub kind: CurveKind,
    pub entries: Vec<BitCurveEntry>,
}

impl BitCurve {
    /// Bit ranks whose bound relies on the CLT with too few successes or failures.
    pub fn low_confidence_bits(&self) -> Vec<u32> {
        self.entries.iter().filter(|e| e.low_confidence).map(|e| e.k).collect()
    }

    /// Largest k whose lower bound reaches `p`, scanning from k = 0.
    pub fn last_certified(&self, p: f64) -> Option<u32> {
        self.entries.iter().take_while(|e| e.p_lower >= p).last().map(|e| e.k)
    }
}

fn entry(k: u32, successes: u64, trials: u64, alpha: Probability) -> Result<BitCurveEntry> {
    let b = bernoulli_lower_bound(successes, trials, alpha)?;
    Ok(BitCurveEntry {
        k,
        successes,
        trials,
        p_hat: successes as f64 / trials as f64,
        p_lower: b.p_lower,
        method: b.method,
        low_confidence: b.low_confidence,
    })
}

/// Significance and contribution curves for k in [0, range.max_bits()].
pub fn bernoulli_curves(z: &[f64], alpha: Probability, range: BitRange) -> Result<(BitCurve, BitCurve)> {
    check_nonempty(z)?;
    let trials = z.len() as u64;
    let mut sig = Vec::new();
    let mut con = Vec::new();
    for k in 0..=range.max_bits() {
        let s = z.iter().filter(|&&v| significance_trial(v, k)).count() as u64;
        let mut c = 0u64;
        for &v in z {
            if contribution_trial(v, k)? {
                c += 1;
            }
        }
        sig.push(entry(k, s, trials, alpha)?);
        con.push(entry(k, c, trials, alpha)?);
    }
    Ok((
        BitCurve { kind: CurveKind::Significance, entries: sig },
        BitCurve { kind: CurveKind::Contribution, entries: con },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn trials() {
        assert!(significance_trial(0.25, 2));
        assert!(!significance_trial(0.25, 3));
        assert!(significance_trial(0.0, 53));
        assert!(contribution_trial(0.15, 2).unwrap());
        assert!(!contribution_trial(0.15, 3).unwrap());
        assert!(contribution_trial(0.0, 53).unwrap());
        assert!(matches!(contribution_trial(2048.0, 53), Err(Error::Range(_))));
    }

    #[test]
    fn sample_counts() {
        assert_eq!(required_samples(pr(0.99), pr(0.05)), 299);
        assert_eq!(required_samples(pr(0.9), pr(0.05)), 29);
        assert_eq!(required_samples(pr(0.66), pr(0.34)), 3);
        assert_eq!(required_samples(pr(0.5), pr(0.5)), 1);
    }

    #[test]
    fn lower_bounds() {
        let b = bernoulli_lower_bound(59, 59, pr(0.05)).unwrap();
        assert!((b.p_lower - 0.9505).abs() < 1e-4);
        assert_eq!(b.method, BoundMethod::ExactAllSuccess);
        let b = bernoulli_lower_bound(95, 100, pr(0.05)).unwrap();
        assert!((b.p_lower - 0.8921).abs() < 1e-3, "{}", b.p_lower);
        assert_eq!(b.method, BoundMethod::CltAdjusted);
        let b = bernoulli_lower_bound(100, 100, pr(0.05)).unwrap();
        assert!((b.p_lower - 0.9705).abs() < 1e-4);
        assert!(bernoulli_lower_bound(0, 0, pr(0.05)).is_err());
        assert!(bernoulli_lower_bound(3, 2, pr(0.05)).is_err());
        assert!(bernoulli_lower_bound(97, 100, pr(0.05)).unwrap().low_confidence);
    }

    #[test]
    fn s_hat_b_examples() {
        assert_eq!(s_hat_b(&[0.0, 0.0, 0.0]).unwrap().bits, 53.0);
        assert_eq!(s_hat_b(&[0.25, 0.125]).unwrap().bits, 2.0);
        let none = s_hat_b(&[0.75]).unwrap();
        assert_eq!((none.bits, none.clamp), (0.0, Clamp::NoCertifiedBit));
        assert_eq!(s_hat_b(&[0.3]).unwrap().bits, 1.0);
        assert_eq!(s_hat_b(&[1e-300]).unwrap().bits, 53.0);
        assert_eq!(s_hat_b_in(&[0.0], BitRange::Binary32).unwrap().bits, 24.0);
        assert!(s_hat_b(&[]).is_err());
    }

    #[test]
    fn fractional_examples() {
        assert_eq!(s_hat_b_fractional(&[0.25, 0.125]).unwrap().bits, 2.0);
        assert!((s_hat_b_fractional(&[0.3]).unwrap().bits - 1.7370).abs() < 1e-4);
        assert_eq!(s_hat_b_fractional(&[0.0]).unwrap().bits, 53.0);
    }

    #[test]
    fn curves_on_zero_errors() {
        let (s, c) = bernoulli_curves(&[0.0; 4], pr(0.05), BitRange::Binary64).unwrap();
        assert_eq!(s.entries.len(), 54);
        assert!(s.entries.iter().all(|e| e.p_hat == 1.0));
        assert!(c.entries.iter().all(|e| e.p_hat == 1.0));
        assert_eq!(s.last_certified(0.4), Some(53));
        assert_eq!(s.last_certified(0.5), None);
    }
}
