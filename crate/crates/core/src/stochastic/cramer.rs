//! Kahan's ill-conditioned 2x2 system solved by Cramer's rule.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::noise::{noisy_op, NoiseConfig, NoiseModel, Op};
use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::samples::{Provenance, SampleSet};

pub const KAHAN_A: [f64; 4] = [0.2161, 0.1441, 1.2969, 0.8648];
pub const KAHAN_B: [f64; 2] = [0.1440, 0.8642];
/// Exact solution of the Kahan system.
pub const KAHAN_SOLUTION: [f64; 2] = [2.0, -2.0];

/// Solves a·x = b with 6 products, 3 differences and 2 quotients, each noisy.
pub fn cramer_solve(a: &[f64; 4], b: &[f64; 2], cfg: &NoiseConfig, rng: &mut RngStream) -> Result<[f64; 2]> {
    if a[0] * a[3] - a[2] * a[1] == 0.0 {
        return Err(Error::SingularSystem);
    }
    let mut op = |x: f64, y: f64, o: Op| noisy_op(x, y, o, cfg, rng);
    let p = op(a[0], a[3], Op::Mul)?;
    let q = op(a[2], a[1], Op::Mul)?;
    let det = op(p, q, Op::Sub)?;
    let p = op(b[0], a[3], Op::Mul)?;
    let q = op(b[1], a[1], Op::Mul)?;
    let det0 = op(p, q, Op::Sub)?;
    let p = op(a[0], b[1], Op::Mul)?;
    let q = op(a[2], b[0], Op::Mul)?;
    let det1 = op(p, q, Op::Sub)?;
    if det == 0.0 {
        return Err(Error::SingularSystem);
    }
    Ok([op(det0, det, Op::Div)?, op(det1, det, Op::Div)?])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    CramerX0,
    CramerX1,
}

impl Benchmark {
    fn index(self) -> usize {
        match self {
            Benchmark::CramerX0 => 0,
            Benchmark::CramerX1 => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::CramerX0 => "cramer_x0",
            Benchmark::CramerX1 => "cramer_x1",
        }
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cramer_x0" | "x0" => Ok(Benchmark::CramerX0),
            "cramer_x1" | "x1" => Ok(Benchmark::CramerX1),
            _ => Err(Error::Usage(format!("unknown benchmark {s:?} (cramer_x0|cramer_x1)"))),
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Runs the Kahan system n times; run i draws from substream i only.
pub fn generate_cramer(n: usize, cfg: &NoiseConfig) -> Result<[SampleSet; 2]> {
    if n == 0 {
        return Err(Error::domain("at least one sample is needed"));
    }
    let mut x0 = Vec::with_capacity(n);
    let mut x1 = Vec::with_capacity(n);
    for i in 0..n {
        let mut rng = RngStream::new(cfg.seed, i as u64);
        let [u, v] = cramer_solve(&KAHAN_A, &KAHAN_B, cfg, &mut rng)?;
        x0.push(u);
        x1.push(v);
    }
    let tag = |b: Benchmark| Provenance {
        seed: (cfg.model != NoiseModel::IeeeNominal).then_some(cfg.seed),
        generator: Some(format!("{}/{}", b.name(), cfg.model)),
        virtual_precision: (cfg.model != NoiseModel::IeeeNominal).then_some(cfg.t),
    };
    Ok([
        SampleSet::new(x0)?.with_provenance(tag(Benchmark::CramerX0)),
        SampleSet::new(x1)?.with_provenance(tag(Benchmark::CramerX1)),
    ])
}

/// Samples of one Cramer output.
pub fn generate_samples(benchmark: Benchmark, n: usize, cfg: &NoiseConfig) -> Result<SampleSet> {
    let [x0, x1] = generate_cramer(n, cfg)?;
    Ok(if benchmark.index() == 0 { x0 } else { x1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_ieee_result_is_bit_exact() {
        let mut rng = RngStream::new(0, 0);
        let x = cramer_solve(&KAHAN_A, &KAHAN_B, &NoiseConfig::ieee(), &mut rng).unwrap();
        assert_eq!(x[0].to_bits(), 1.9999999958366637f64.to_bits());
        assert_eq!(x[1].to_bits(), (-1.9999999972244424f64).to_bits());
    }

    #[test]
    fn identity_and_singular() {
        let mut rng = RngStream::new(0, 0);
        let cfg = NoiseConfig::ieee();
        assert_eq!(cramer_solve(&[1.0, 0.0, 0.0, 1.0], &[5.0, 7.0], &cfg, &mut rng).unwrap(), [5.0, 7.0]);
        assert!(matches!(
            cramer_solve(&[1.0, 2.0, 2.0, 4.0], &[1.0, 1.0], &cfg, &mut rng),
            Err(Error::SingularSystem)
        ));
    }

    #[test]
    fn generation_is_deterministic_and_prefix_stable() {
        let cfg = NoiseConfig::new(NoiseModel::McaRr, 52, 11).unwrap();
        let a = generate_samples(Benchmark::CramerX0, 3, &cfg).unwrap();
        let b = generate_samples(Benchmark::CramerX0, 3, &cfg).unwrap();
        assert_eq!(a, b);
        let long = generate_samples(Benchmark::CramerX0, 10, &cfg).unwrap();
        assert_eq!(&long.values()[..3], a.values());
        assert!(generate_samples(Benchmark::CramerX0, 0, &cfg).is_err());
        let ieee = generate_samples(Benchmark::CramerX0, 5, &NoiseConfig::ieee()).unwrap();
        assert!(ieee.values().iter().all(|&v| v == 1.9999999958366637));
    }
}
