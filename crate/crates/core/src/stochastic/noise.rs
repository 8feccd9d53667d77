//! MCA noise, CESTAC random rounding and noisy scalar operations.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::eft::{div_rem, two_prod, two_sum, Dd};
use super::rng::RngStream;
use crate::bits::pow2;
use crate::error::{Error, Result};
use crate::error_model::normalization_exponent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    /// Noise on the result only.
    McaRr,
    /// Noise on both operands.
    McaInbound,
    /// Noise on operands and result.
    McaFull,
    /// Round up or down with probability ½.
    CestacRandomRound,
    /// Plain round to nearest.
    IeeeNominal,
}

impl NoiseModel {
    pub fn name(self) -> &'static str {
        match self {
            NoiseModel::McaRr => "mca_rr",
            NoiseModel::McaInbound => "mca_inbound",
            NoiseModel::McaFull => "mca_full",
            NoiseModel::CestacRandomRound => "cestac_random_round",
            NoiseModel::IeeeNominal => "ieee_nominal",
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "mca_rr" | "rr" => NoiseModel::McaRr,
            "mca_inbound" | "inbound" => NoiseModel::McaInbound,
            "mca_full" | "full" => NoiseModel::McaFull,
            "cestac" | "cestac_random_round" | "random_round" => NoiseModel::CestacRandomRound,
            "ieee" | "ieee_nominal" => NoiseModel::IeeeNominal,
            _ => {
                return Err(Error::Usage(format!(
                    "unknown model {s:?} (mca_rr|mca_inbound|mca_full|cestac|ieee)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NoiseConfig {
    pub model: NoiseModel,
    /// Virtual precision in [1, 53]; ignored by `IeeeNominal`.
    pub t: u32,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn new(model: NoiseModel, t: u32, seed: u64) -> Result<Self> {
        if !(1..=53).contains(&t) {
            return Err(Error::domain(format!("virtual precision must be in [1, 53], got {t}")));
        }
        Ok(NoiseConfig { model, t, seed })
    }

    pub fn ieee() -> Self {
        NoiseConfig { model: NoiseModel::IeeeNominal, t: 53, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// e_x = floor(log2 |x|) + 1.
pub fn magnitude_exponent(x: f64) -> Result<i32> {
    normalization_exponent(x)
}

fn xi(rng: &mut RngStream) -> f64 {
    rng.uniform53() - 0.5
}

/// x + 2^(e_x - t) ξ for a given ξ, rounded to nearest.
pub fn inexact_with_xi(x: f64, t: u32, xi: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let e = magnitude_exponent(x).expect("nonzero finite");
    x + pow2(e - t as i32) * xi
}

/// MCA noise function at virtual precision t; zero stays exact.
pub fn inexact(x: f64, t: u32, rng: &mut RngStream) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Data(format!("inexact of non-finite value {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(inexact_with_xi(x, t, xi(rng)))
}

fn inexact_dd(x: Dd, t: u32, rng: &mut RngStream) -> Dd {
    if x.hi == 0.0 {
        return x;
    }
    let e = magnitude_exponent(x.hi).expect("nonzero finite");
    x.add(Dd::from_f64(pow2(e - t as i32) * xi(rng)))
}

/// Given exact = hi + lo with hi = round(exact), returns hi or its neighbour toward lo.
pub fn random_round(hi: f64, lo: f64, rng: &mut RngStream) -> f64 {
    if lo == 0.0 {
        return hi;
    }
    if rng.coin() {
        hi
    } else if lo > 0.0 {
        hi.next_up()
    } else {
        hi.next_down()
    }
}

fn exact(a: f64, b: f64, op: Op) -> Dd {
    match op {
        Op::Add => {
            let (s, e) = two_sum(a, b);
            Dd { hi: s, lo: e }
        }
        Op::Sub => {
            let (s, e) = two_sum(a, -b);
            Dd { hi: s, lo: e }
        }
        Op::Mul => {
            let (p, e) = two_prod(a, b);
            Dd { hi: p, lo: e }
        }
        Op::Div => Dd::from_f64(a).div(Dd::from_f64(b)),
    }
}

fn dd_op(a: Dd, b: Dd, op: Op) -> Dd {
    match op {
        Op::Add => a.add(b),
        Op::Sub => a.sub(b),
        Op::Mul => a.mul(b),
        Op::Div => a.div(b),
    }
}

/// One floating-point operation under the configured noise model.
pub fn noisy_op(a: f64, b: f64, op: Op, cfg: &NoiseConfig, rng: &mut RngStream) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Data(format!("non-finite operand ({a}, {b})")));
    }
    if op == Op::Div && b == 0.0 {
        return Err(Error::Arithmetic("division by zero".into()));
    }
    let t = cfg.t;
    let r = match cfg.model {
        NoiseModel::IeeeNominal => match op {
            Op::Add => a + b,
            Op::Sub => a - b,
            Op::Mul => a * b,
            Op::Div => a / b,
        },
        NoiseModel::McaRr => inexact_dd(exact(a, b, op), t, rng).round(),
        NoiseModel::McaInbound => {
            let x = inexact_dd(Dd::from_f64(a), t, rng);
            let y = inexact_dd(Dd::from_f64(b), t, rng);
            dd_op(x, y, op).round()
        }
        NoiseModel::McaFull => {
            let x = inexact_dd(Dd::from_f64(a), t, rng);
            let y = inexact_dd(Dd::from_f64(b), t, rng);
            inexact_dd(dd_op(x, y, op), t, rng).round()
        }
        NoiseModel::CestacRandomRound => {
            let (hi, lo) = match op {
                Op::Add => two_sum(a, b),
                Op::Sub => two_sum(a, -b),
                Op::Mul => two_prod(a, b),
                Op::Div => {
                    let (q, r) = div_rem(a, b);
                    (q, r / b)
                }
            };
            random_round(hi, lo, rng)
        }
    };
    if !r.is_finite() {
        return Err(Error::Arithmetic(format!("{op:?} overflowed on ({a}, {b})")));
    }
    Ok(r)
}
