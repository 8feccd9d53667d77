//! The classical estimators and what probability they actually certify.

use sigbits::legacy::{cestac_shift, equivalent_probability, legacy_estimates, CadnaPreset};
use sigbits::stats::Probability;
use sigbits::stochastic::{generate_cramer, NoiseConfig, NoiseModel};

fn main() -> sigbits::Result<()> {
    let cadna = CadnaPreset::default();
    println!("CADNA shift                 {:.5}", cadna.shift()?);
    println!("CADNA equivalent p          {:.5}", cadna.equivalent_probability()?);
    let safe = CadnaPreset::with_safety_margin();
    println!("with one digit dropped      {:.5} -> p = {:.5}", safe.shift()?, safe.equivalent_probability()?);

    let alpha = Probability::new(0.05)?;
    println!("\n     n  cestac shift  equivalent p");
    for n in [3, 5, 10, 30, 100, 1000, 10000] {
        let s = cestac_shift(n, alpha)?;
        let p = equivalent_probability(s, n, alpha).map(|p| format!("{p:.4}")).unwrap_or_else(|_| "-".into());
        println!("{n:6}  {s:12.4}  {p:>12}");
    }

    let [x0, _] = generate_cramer(10000, &NoiseConfig::new(NoiseModel::McaRr, 52, 1)?)?;
    let e = legacy_estimates(x0.mean(), x0.std_dev(), x0.len(), alpha)?;
    println!("\nCramer x0, n = 10000: s_mca = {:.2}, s_cestac = {:.2}", e.s_mca.bits, e.s_cestac.bits);
    Ok(())
}
