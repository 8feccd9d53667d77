//! Regenerates both tables and checks them against the bundled golden files.

use sigbits::tables::{compare_nsamples, compare_shift, nsamples_table, shift_table, SampleCountSpec, ShiftSpec};

fn main() -> sigbits::Result<()> {
    let counts = nsamples_table(&SampleCountSpec::standard());
    print!("{}", counts.to_text());
    println!("golden: {}\n", compare_nsamples(&counts));

    let shifts = shift_table(&ShiftSpec::standard())?;
    print!("{}", shifts.to_text());
    println!("golden: {}", compare_shift(&shifts, 0.0));
    Ok(())
}
