//! Standard normal distribution.

use super::probability::QuantileResult;
use super::solve::newton_bracketed;
use crate::error::{Error, Result};

pub(crate) const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
// Below this the Taylor series is used, above it the continued fraction.
const SERIES_LIMIT: f64 = 3.0;

pub(crate) fn pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Upper tail `P(N > x)` for x ≥ 0, with full relative precision in the tail.
pub(crate) fn upper_tail(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < SERIES_LIMIT {
        // Φ(x) - 1/2 = φ(x) Σ x^{2k+1} / (2k+1)!!
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut denom = 1.0;
        loop {
            denom += 2.0;
            term *= x2 / denom;
            sum += term;
            if term <= sum * 1e-17 {
                break;
            }
        }
        0.5 - pdf(x) * sum
    } else if x > 40.0 {
        0.0
    } else {
        // Mills ratio continued fraction x + 1/(x + 2/(x + 3/(x + ...))).
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for i in 1..5000 {
            let a = i as f64;
            d = x + a * d;
            if d.abs() < tiny {
                d = tiny;
            }
            c = x + a / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        pdf(x) / f
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("normal_cdf argument {x} is not finite")));
    }
    Ok(if x < 0.0 { upper_tail(-x) } else { 1.0 - upper_tail(x) })
}

/// Standard normal quantile.
pub fn normal_quantile(q: f64) -> Result<QuantileResult> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("normal_quantile argument {q} is not in (0, 1)")));
    }
    if q == 0.5 {
        return Ok(QuantileResult { value: 0.0, achieved_accuracy: 0.0 });
    }
    // Solve on the lower tail; 1 - q is exact for q ≥ 1/2.
    let (tail, sign) = if q < 0.5 { (q, 1.0) } else { (1.0 - q, -1.0) };
    let x = lower_tail_quantile(tail);
    let achieved = ((upper_tail(-x) - tail) / tail).abs();
    Ok(QuantileResult { value: sign * x, achieved_accuracy: achieved })
}

/// Shorthand for callers that only need the value and have validated `q`.
pub(crate) fn quantile(q: f64) -> Result<f64> {
    normal_quantile(q).map(|r| r.value)
}

fn lower_tail_quantile(q: f64) -> f64 {
    // Rational starting point, absolute error below 4.5e-4.
    let t = (-2.0 * q.ln()).sqrt();
    let x0 = -(t - (2.515_517 + 0.802_853 * t + 0.010_328 * t * t)
        / (1.0 + 1.432_788 * t + 0.189_269 * t * t + 0.001_308 * t * t * t));
    newton_bracketed(
        |x| (upper_tail(-x) - q, pdf(x)),
        x0.min(-1e-300),
        -40.0,
        0.0,
        1e-15,
    )
}
