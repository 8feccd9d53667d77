//! Sample generators: MCA noise, CESTAC random rounding and the Cramer benchmark.

mod cramer;
mod eft;
mod noise;
mod rng;

pub use cramer::{
    cramer_solve, generate_cramer, generate_samples, Benchmark, KAHAN_A, KAHAN_B, KAHAN_SOLUTION,
};
pub use eft::{div_rem, two_prod, two_sum, Dd};
pub use noise::{
    inexact, inexact_with_xi, magnitude_exponent, noisy_op, random_round, NoiseConfig, NoiseModel, Op,
};
pub use rng::RngStream;
