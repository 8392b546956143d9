//! Criterion ratio curves for split one-axis-twisted states: the steering
//! and entanglement conditions of this crate against the Reid and
//! Giovannetti-type baselines. Ratios below 1 flag detection.
//!
//! Run with: cargo run --release --example squeezing_sweep

use splitspin::criteria::{CriterionId, EntVariant, FirstMomentVariant};
use splitspin::sweep::{sweep_one_axis, SweepSplit};

fn main() -> splitspin::Result<()> {
    let n = 200;
    let grid: Vec<f64> = (0..40).map(|i| 0.4 * i as f64 / 39.0).collect();
    let criteria = [
        CriterionId::SteeringNormalized,
        CriterionId::Reid,
        CriterionId::Entanglement(EntVariant::Normalized),
        CriterionId::FirstMoment(FirstMomentVariant::Giovannetti),
    ];
    let result = sweep_one_axis(n, &grid, SweepSplit::ExactHalf, &criteria)?;

    print!("{}", result.to_csv());

    eprintln!();
    for id in &criteria {
        let window = result.violation_set(id.label());
        if window.is_empty() {
            eprintln!("{:<26} no violation on this grid", id.label());
        } else {
            eprintln!(
                "{:<26} violated for mu in [{:.4}, {:.4}] ({} grid points)",
                id.label(),
                window.first().unwrap(),
                window.last().unwrap(),
                window.len()
            );
        }
    }
    Ok(())
}
