//! Shapiro–Wilk W test, Royston's AS R94 approximation.

use std::f64::consts::PI;

use serde::Serialize;

use super::normal;
use crate::error::{Error, Result};

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 5000;

const C1: [f64; 6] = [0.0, 0.221_157, -0.147_981, -2.071_190, 4.434_685, -2.706_056];
const C2: [f64; 6] = [0.0, 0.042_981, -0.293_762, -1.752_461, 5.682_633, -3.582_633];
const C3: [f64; 4] = [0.5440, -0.399_78, 0.025_054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.778_57, 0.062_767, -0.002_032_2];
const C5: [f64; 4] = [-1.5861, -0.310_82, -0.083_751, 0.003_891_5];
const C6: [f64; 3] = [-0.4803, -0.082_676, 0.003_030_2];
const G: [f64; 2] = [-2.273, 0.459];
const SMALL_P: f64 = 1e-19;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapiroWilk {
    pub w: f64,
    pub p_value: f64,
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Antisymmetric weights for the lower half of the ordered sample (negative values).
fn half_weights(n: usize) -> Vec<f64> {
    let nn2 = n / 2;
    if n == 3 {
        return vec![-std::f64::consts::FRAC_1_SQRT_2];
    }
    let an = n as f64;
    let m: Vec<f64> = (0..nn2)
        .map(|i| normal::quantile((i as f64 + 1.0 - 0.375) / (an + 0.25)).unwrap_or(0.0))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();
    let a1 = m[0] / ssumm2 - poly(&C1, rsn);

    let mut a = vec![0.0; nn2];
    a[0] = a1;
    let (start, fac) = if n > 5 {
        let a2 = m[1] / ssumm2 - poly(&C2, rsn);
        a[1] = a2;
        let num = summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1];
        let den = 1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2;
        (2, (num / den).sqrt())
    } else {
        let num = summ2 - 2.0 * m[0] * m[0];
        let den = 1.0 - 2.0 * a1 * a1;
        (1, (num / den).sqrt())
    };
    for i in start..nn2 {
        a[i] = m[i] / fac;
    }
    a
}

/// Shapiro–Wilk statistic and p-value for 3 ≤ n ≤ 5000.
pub fn shapiro_wilk(samples: &[f64]) -> Result<ShapiroWilk> {
    let n = samples.len();
    if n < MIN_N {
        return Err(Error::UndefinedTest(format!("Shapiro-Wilk needs at least {MIN_N} values, got {n}")));
    }
    if n > MAX_N {
        return Err(Error::UndefinedTest(format!("Shapiro-Wilk supports at most {MAX_N} values, got {n}")));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("Shapiro-Wilk input contains a non-finite value".into()));
    }
    let mut x = samples.to_vec();
    x.sort_by(f64::total_cmp);
    if x[0] == x[n - 1] {
        return Err(Error::UndefinedTest("Shapiro-Wilk is undefined on a constant sample".into()));
    }
    let med = if n % 2 == 1 { x[n / 2] } else { 0.5 * (x[n / 2 - 1] + x[n / 2]) };
    let range = x[n - 1] - x[0];
    for v in &mut x {
        *v = (*v - med) / range;
    }

    let half = half_weights(n);
    let weight = |i: usize| {
        let j = n - 1 - i;
        if i < j {
            half[i]
        } else if i > j {
            -half[j]
        } else {
            0.0
        }
    };
    let mean = x.iter().sum::<f64>() / n as f64;
    let (mut saa, mut sxx, mut sax) = (0.0, 0.0, 0.0);
    for (i, &xi) in x.iter().enumerate() {
        let a = weight(i);
        let d = xi - mean;
        saa += a * a;
        sxx += d * d;
        sax += a * d;
    }
    // The weights sum to zero, so W is the squared correlation.
    let w = ((sax * sax) / (saa * sxx)).min(1.0);
    let w1 = 1.0 - w;

    let p = if n == 3 {
        let w = w.max(0.75);
        1.0 - 6.0 / PI * w.sqrt().acos()
    } else {
        let y = w1.ln();
        let an = n as f64;
        if n <= 11 {
            let gamma = poly(&G, an);
            if y >= gamma {
                SMALL_P
            } else {
                let y = -(gamma - y).ln();
                let m = poly(&C3, an);
                let s = poly(&C4, an).exp();
                upper(((y - m) / s).min(40.0))
            }
        } else {
            let ln_n = an.ln();
            let m = poly(&C5, ln_n);
            let s = poly(&C6, ln_n).exp();
            upper((y - m) / s)
        }
    };
    let p_value = p.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
    Ok(ShapiroWilk { w, p_value })
}

fn upper(z: f64) -> f64 {
    if z >= 0.0 {
        normal::upper_tail(z)
    } else {
        1.0 - normal::upper_tail(-z)
    }
}
