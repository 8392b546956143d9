//! Finite-N reproduction of the large-N steering and entanglement tables
//! for the four reference states.
//!
//! Run with: cargo run --release --example criterion_tables

use splitspin::sweep::{criterion_table, SweepSplit, TableKind};

fn main() -> splitspin::Result<()> {
    let n = 400;
    for kind in [TableKind::Steering, TableKind::Entanglement] {
        let rows = criterion_table(kind, n, SweepSplit::Binomial(1e-12))?;
        println!("{} at N = {n} (binomial splitting)", kind.label());
        let cols = kind.column_names();
        println!(
            "  {:<14} {:>12} {:>12} {:>12} {:>12}",
            "state", cols[0], cols[1], cols[2], cols[3]
        );
        for row in &rows {
            println!(
                "  {:<14} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                row.state, row.computed[0], row.computed[1], row.computed[2], row.computed[3]
            );
            println!(
                "  {:<14} {:>12.6} {:>12.6} {:>12.6} {:>12.6}   (large-N)",
                "", row.asymptotic[0], row.asymptotic[1], row.asymptotic[2], row.asymptotic[3]
            );
        }
        println!();
    }
    Ok(())
}
