//! Kahan's ill-conditioned system solved by Cramer's rule under each arithmetic model.

use sigbits::error_model::{significant_bits_between, ErrorKind};
use sigbits::stochastic::{cramer_solve, generate_cramer, NoiseConfig, NoiseModel, RngStream, KAHAN_A, KAHAN_B};

fn main() -> sigbits::Result<()> {
    let seed = std::env::var("SIGBITS_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(1);
    let ieee = cramer_solve(&KAHAN_A, &KAHAN_B, &NoiseConfig::ieee(), &mut RngStream::new(0, 0))?;
    println!("x_ieee = ({:?}, {:?})", ieee[0], ieee[1]);
    println!(
        "bits vs (2, -2): {:.2}, {:.2}\n",
        significant_bits_between(ieee[0], 2.0, ErrorKind::Relative)?.bits,
        significant_bits_between(ieee[1], -2.0, ErrorKind::Relative)?.bits
    );

    println!("{:<20} {:>20} {:>12} {:>8}", "model", "mean x0", "std x0", "s_mca");
    for model in [NoiseModel::McaRr, NoiseModel::McaInbound, NoiseModel::McaFull, NoiseModel::CestacRandomRound] {
        let [x0, _] = generate_cramer(10000, &NoiseConfig::new(model, 52, seed)?)?;
        let (m, s) = (x0.mean(), x0.std_dev());
        println!("{:<20} {:>20.12} {:>12.3e} {:>8.2}", model.name(), m, s, -(s / m).abs().log2());
    }
    Ok(())
}
