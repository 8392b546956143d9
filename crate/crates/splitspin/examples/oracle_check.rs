//! Cross-checks the symmetric-subspace moment engine against brute-force
//! expectation values on the full 2^N product space.
//!
//! Run with: cargo run --release --example oracle_check

use splitspin::oracle::{self, StateTag};
use splitspin::spin::{Axis, OperatorSpec, Side};
use splitspin::sweep::verify_oracle_equivalence;

fn main() -> splitspin::Result<()> {
    for line in verify_oracle_equivalence(&[4, 6, 8], 1e-10)? {
        println!(
            "{} {:<18} max deviation {:.3e}",
            if line.pass { "PASS" } else { "FAIL" },
            line.label,
            line.max_deviation
        );
    }

    println!();
    let jx2 = OperatorSpec::new(Axis::X, Side::Sum).squared();
    println!(
        "N=4 Dicke  <J_x²>          = {:.12}   (N/4 (N/2+1) = 3)",
        oracle::expectation(4, 2, StateTag::Dicke, &jx2)?
    );
    println!(
        "N=4 Dicke  <j_z⁽¹⁾ j_z⁽²⁾>  = {:.12}   (−1/(4(N−1)) = −1/12)",
        oracle::pair_correlation(4, StateTag::Dicke, Axis::Z, 0, 1)?
    );
    println!(
        "N=6 Dicke  <J_x^a J_x^b>   = {:.12}   (27/20)",
        oracle::half_correlation(6, 3, StateTag::Dicke, Axis::X)?
    );
    Ok(())
}
