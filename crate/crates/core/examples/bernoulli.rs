//! Distribution-free certificate on Cramer samples sized by the Rule of Three.

use sigbits::bernoulli::{bernoulli_curves, required_samples, s_hat_b, s_hat_b_fractional, BitRange};
use sigbits::error_model::{build_error_samples, ErrorKind, ErrorSpec, Reference};
use sigbits::stats::Probability;
use sigbits::stochastic::{generate_cramer, NoiseConfig, NoiseModel};

fn main() -> sigbits::Result<()> {
    let p = Probability::new(0.99)?;
    let alpha = Probability::new(0.05)?;
    let n = required_samples(p, alpha) as usize;
    println!("samples for p=0.99 at 95% confidence: {n}");

    let [x0, _] = generate_cramer(n, &NoiseConfig::new(NoiseModel::McaRr, 52, 1)?)?;
    let z = build_error_samples(&x0, &ErrorSpec::new(ErrorKind::Relative, Reference::SampleMean))?;
    println!("s_b              {}", s_hat_b(&z.z)?.bits);
    println!("s_b fractional   {:.3}", s_hat_b_fractional(&z.z)?.bits);

    let (sig, con) = bernoulli_curves(&z.z, alpha, BitRange::Binary64)?;
    println!("\n  k  significance (p_hat, p_lower)  contribution (p_hat, p_lower)");
    for (s, c) in sig.entries.iter().zip(&con.entries).skip(22).take(16) {
        println!("{:3}  {:>12.4} {:>12.4}     {:>12.4} {:>12.4}", s.k, s.p_hat, s.p_lower, c.p_hat, c.p_lower);
    }
    println!("\nlast rank certified at p=0.99: {:?}", sig.last_certified(0.99));
    Ok(())
}
