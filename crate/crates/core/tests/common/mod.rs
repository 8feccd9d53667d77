#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use sigbits::bernoulli::s_hat_b;
use sigbits::cnh::{significant_bits_cnh, ConfidenceParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// p_k - ½ for Z ~ N(0, 1) and bit width h, summed stripe by stripe:
/// p_k - ½ = Σ_j ∫ over [2jh, (2j+1)h] of f(x) - f(x + h).
pub fn contribution_excess_oracle(h: f64) -> f64 {
    let nodes = gauss_legendre(8);
    let c = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let x_max = 10.0;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut j = 0u64;
    loop {
        let a = 2.0 * j as f64 * h;
        if a > x_max {
            break;
        }
        let mid = a + 0.5 * h;
        let half = 0.5 * h;
        let mut stripe = 0.0;
        for &(t, w) in &nodes {
            let x = mid + half * t;
            stripe += w * (-c * (-0.5 * x * x).exp() * (-h * (2.0 * x + h) / 2.0).exp_m1());
        }
        let v = stripe * half;
        // Neumaier summation.
        let s = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - s) + v } else { (v - s) + sum };
        sum = s;
        j += 1;
    }
    sum + comp
}

/// Fraction of trials whose ŝ_CNH, applied to fresh draws, covers at least p of them.
pub fn cnh_coverage(trials: usize, n: usize, p: f64, alpha: f64, fresh: usize, seed: u64) -> f64 {
    let sigma = 2f64.powi(-20);
    let normal = Normal::new(0.0, sigma).unwrap();
    let params = ConfidenceParams::new(n, p, alpha).unwrap();
    let mut r = rng(seed);
    let mut hits = 0;
    for _ in 0..trials {
        let z: Vec<f64> = (0..n).map(|_| normal.sample(&mut r)).collect();
        let mean = z.iter().sum::<f64>() / n as f64;
        let sd = (z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        let s = significant_bits_cnh(sd, &params).unwrap().bits;
        let bound = (-s).exp2();
        let inside = (0..fresh).filter(|_| normal.sample(&mut r).abs() <= bound).count();
        if inside as f64 / fresh as f64 >= p {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

/// Draw with P(|Z| ≤ 2^-k0) = p exactly: with probability p uniform on [-2^-k0, 2^-k0],
/// otherwise a magnitude uniform on (2^-k0, 2^-k0 + 2^(1-k0)) with a random sign.
pub fn mixture_draw(r: &mut ChaCha8Rng, k0: i32, p: f64) -> f64 {
    let h = 2f64.powi(-k0);
    if r.random::<f64>() < p {
        (2.0 * r.random::<f64>() - 1.0) * h
    } else {
        let mut m = h + r.random::<f64>() * 2.0 * h;
        if m <= h {
            m = h * (1.0 + f64::EPSILON);
        }
        if r.random::<bool>() {
            m
        } else {
            -m
        }
    }
}

/// Number of trials where ŝ_B over-certifies, i.e. reaches k0 although P(|Z| ≤ 2^-k0) = p.
pub fn bernoulli_overcertified(trials: usize, n: usize, k0: i32, p: f64, seed: u64) -> usize {
    let mut r = rng(seed);
    (0..trials)
        .filter(|_| {
            let z: Vec<f64> = (0..n).map(|_| mixture_draw(&mut r, k0, p)).collect();
            s_hat_b(&z).unwrap().bits >= k0 as f64
        })
        .count()
}

/// Spike-and-slab heavy-tailed errors: a narrow normal core plus rare Cauchy-like outliers.
pub fn heavy_tailed(r: &mut ChaCha8Rng, core: f64) -> f64 {
    if r.random::<f64>() < 0.97 {
        Normal::new(0.0, core).unwrap().sample(r)
    } else {
        let u: f64 = r.random::<f64>() - 0.5;
        core * 8.0 * (std::f64::consts::PI * u).tan().clamp(-1e3, 1e3)
    }
}
