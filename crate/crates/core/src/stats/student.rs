//! Student-t quantiles via the regularized incomplete beta function.

use std::f64::consts::PI;

use super::normal;
use super::probability::QuantileResult;
use super::solve::newton_bracketed;
use super::special::{beta_reg, ln_beta};
use crate::error::{Error, Result};

/// Lower tail `P(T ≤ t)` for t ≤ 0.
fn lower_tail(t: f64, nu: f64) -> f64 {
    let t2 = t * t;
    let x = nu / (nu + t2);
    let y = t2 / (nu + t2);
    0.5 * beta_reg(nu / 2.0, 0.5, x, y).0
}

fn density(t: f64, nu: f64) -> f64 {
    (-ln_beta(nu / 2.0, 0.5) - 0.5 * nu.ln() - 0.5 * (nu + 1.0) * (t * t / nu).ln_1p()).exp()
}

/// Student-t CDF.
pub fn student_cdf(t: f64, dof: u64) -> f64 {
    let nu = dof as f64;
    if t <= 0.0 {
        lower_tail(t, nu)
    } else {
        1.0 - lower_tail(-t, nu)
    }
}

/// Quantile of the Student-t law with `dof` degrees of freedom.
pub fn student_quantile(q: f64, dof: u64) -> Result<QuantileResult> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("student_quantile argument {q} is not in (0, 1)")));
    }
    if dof == 0 {
        return Err(Error::domain("student_quantile needs dof >= 1"));
    }
    if q == 0.5 {
        return Ok(QuantileResult { value: 0.0, achieved_accuracy: 0.0 });
    }
    let nu = dof as f64;
    let (tail, sign) = if q < 0.5 { (q, 1.0) } else { (1.0 - q, -1.0) };
    let t0 = initial_guess(tail, dof);

    let mut lo = t0.min(-1.0) * 2.0;
    while lower_tail(lo, nu) > tail {
        lo *= 2.0;
    }
    let t = newton_bracketed(
        |t| (lower_tail(t, nu) - tail, density(t, nu)),
        t0,
        lo,
        0.0,
        1e-15,
    );
    let achieved = ((lower_tail(t, nu) - tail) / tail).abs();
    Ok(QuantileResult { value: sign * t, achieved_accuracy: achieved })
}

/// Starting point on the lower tail (negative t).
fn initial_guess(tail: f64, dof: u64) -> f64 {
    match dof {
        1 => (PI * (tail - 0.5)).tan(),
        2 => {
            let u = 2.0 * tail - 1.0;
            u * (2.0 / (1.0 - u * u)).sqrt()
        }
        _ => {
            // Cornish–Fisher expansion around the normal quantile.
            let z = normal::quantile(tail).unwrap_or(0.0);
            let nu = dof as f64;
            let z2 = z * z;
            let g1 = (z2 + 1.0) * z / 4.0;
            let g2 = ((5.0 * z2 + 16.0) * z2 + 3.0) * z / 96.0;
            let g3 = (((3.0 * z2 + 19.0) * z2 + 17.0) * z2 - 15.0) * z / 384.0;
            let g4 = ((((79.0 * z2 + 776.0) * z2 + 1482.0) * z2 - 1920.0) * z2 - 945.0) * z
                / 92_160.0;
            z + g1 / nu + g2 / nu.powi(2) + g3 / nu.powi(3) + g4 / nu.powi(4)
        }
    }
}
