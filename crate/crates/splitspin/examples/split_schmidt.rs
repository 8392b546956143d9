//! Schmidt spectra and entanglement entropies of split states: the Dicke
//! state carries ~log2(N)/2 bits across an equal cut, the GHZ state exactly
//! one bit regardless of size.
//!
//! Run with: cargo run --release --example split_schmidt

use splitspin::split::{schmidt_entropy, schmidt_spectrum, split_exact};
use splitspin::states::{product_dicke, SymmetricState};

fn main() -> splitspin::Result<()> {
    for n in [4u32, 16, 64, 256, 1024] {
        let split = split_exact(&SymmetricState::dicke(n)?, n / 2)?;
        let entropy = schmidt_entropy(&split)?;
        println!(
            "Dicke N = {n:>4}: entanglement entropy {entropy:.4} bits (log2(N)/2 = {:.4})",
            (n as f64).log2() / 2.0
        );
    }

    println!();
    let split = split_exact(&SymmetricState::dicke(8)?, 4)?;
    let spectrum = schmidt_spectrum(&split)?;
    println!("Dicke N = 8 Schmidt coefficients (descending):");
    for l in &spectrum.coefficients {
        println!("  {l:.6}");
    }

    println!();
    for n in [4u32, 12, 20] {
        let ghz = split_exact(&SymmetricState::ghz(n)?, n / 2)?;
        println!("GHZ   N = {n:>4}: entropy {:.6} bits", schmidt_entropy(&ghz)?);
    }
    let pd = product_dicke(8)?;
    println!("D_4 x D_4     : entropy {:.6} bits (product state)", schmidt_entropy(&pd)?);
    Ok(())
}
