//! Bit counts with explicit clamping to the binary64 mantissa.

use serde::Serialize;

/// Mantissa width of binary64, implicit bit included.
pub const MANTISSA_BITS: u32 = 53;

/// Why a bit count was clamped, if it was.
/// Exact 2^e, subnormals included; 0 below 2^-1074 and infinity above 2^1023.
pub(crate) fn pow2(e: i32) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074))
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clamp {
    None,
    /// Zero error or more than 53 bits; reported as 53.
    ExactMatch,
    /// Negative count; reported as 0, no bit certified.
    NoCertifiedBit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BitsEstimate {
    pub bits: f64,
    /// Value before clamping; infinite for an exact match.
    pub raw: f64,
    pub clamp: Clamp,
}

impl BitsEstimate {
    pub fn clamped(raw: f64) -> Self {
        Self::clamped_to(raw, MANTISSA_BITS)
    }

    pub fn clamped_to(raw: f64, max_bits: u32) -> Self {
        let max = max_bits as f64;
        if raw.is_nan() || raw > max {
            BitsEstimate { bits: max, raw, clamp: Clamp::ExactMatch }
        } else if raw < 0.0 {
            BitsEstimate { bits: 0.0, raw, clamp: Clamp::NoCertifiedBit }
        } else {
            BitsEstimate { bits: raw, raw, clamp: Clamp::None }
        }
    }

    pub fn exact() -> Self {
        Self::exact_to(MANTISSA_BITS)
    }

    pub fn exact_to(max_bits: u32) -> Self {
        BitsEstimate { bits: max_bits as f64, raw: f64::INFINITY, clamp: Clamp::ExactMatch }
    }

    pub fn is_clamped(&self) -> bool {
        self.clamp != Clamp::None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_powers_of_two() {
        assert_eq!(pow2(0), 1.0);
        assert_eq!(pow2(-1), 0.5);
        assert_eq!(pow2(-1074), f64::from_bits(1));
        assert_eq!(pow2(-1022), f64::MIN_POSITIVE);
        assert_eq!(pow2(1023), 2f64.powi(1023));
        assert_eq!(pow2(-1075), 0.0);
    }

    #[test]
    fn clamps_both_ends() {
        assert_eq!(BitsEstimate::clamped(70.0).bits, 53.0);
        assert_eq!(BitsEstimate::clamped(f64::INFINITY).clamp, Clamp::ExactMatch);
        let low = BitsEstimate::clamped(-0.5);
        assert_eq!((low.bits, low.clamp), (0.0, Clamp::NoCertifiedBit));
        assert!(!BitsEstimate::clamped(12.5).is_clamped());
        assert_eq!(BitsEstimate::clamped_to(30.0, 24).bits, 24.0);
    }
}
