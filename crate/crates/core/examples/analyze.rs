//! Full report on a sample file, or on a fresh Cramer run when no file is given.
//!
//!     cargo run --example analyze -- samples.txt [reference]

use sigbits::error_model::Reference;
use sigbits::report::{analyze, AnalysisConfig};
use sigbits::samples::{parse_value, SampleSet};
use sigbits::stochastic::{generate_cramer, NoiseConfig, NoiseModel};

fn main() -> sigbits::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let x = match args.first() {
        Some(path) => SampleSet::from_path(path)?,
        None => generate_cramer(1000, &NoiseConfig::new(NoiseModel::McaRr, 52, 1)?)?[0].clone(),
    };
    let reference = match args.get(1) {
        Some(r) => Reference::Scalar(parse_value(r).map_err(sigbits::Error::Usage)?),
        None => Reference::SampleMean,
    };
    let config = AnalysisConfig { p: sigbits::stats::Probability::new(0.99)?, ..Default::default() };
    let report = analyze(&x, reference, &config)?;
    print!("{}", report.to_text());
    println!();
    print!("{}", report.to_json()?);
    Ok(())
}
