//! Full criterion reports for a binomially split Dicke state, including the
//! optimal estimation gains.
//!
//! Run with: cargo run --release --example steering_report

use splitspin::criteria::{CriteriaEngine, CriterionId};
use splitspin::split::split_binomial;
use splitspin::states::SymmetricState;

fn main() -> splitspin::Result<()> {
    let n = 100;
    let mix = split_binomial(&SymmetricState::dicke(n)?, 1e-12)?;
    let engine = CriteriaEngine::new(&mix).with_description(format!("dicke n={n}"));

    let steering = engine.steering_normalized()?;
    let raw_gx = splitspin::moments::optimal_gain(engine.moments(), splitspin::moments::AX_X)?;
    let gains = steering.gains.unwrap();
    println!(
        "optimal raw gain at N = {n}: g_x = {:.6}   (−N/(N+4) = {:.6})",
        raw_gx,
        -(n as f64) / (n as f64 + 4.0),
    );
    println!(
        "normalized-estimator gains:  γ_x = {:.6}, γ_y = {:.6}, g_z = {:.6}",
        gains.x, gains.y, gains.z
    );
    println!();

    for id in [
        CriterionId::Uncertainty,
        CriterionId::Steering,
        CriterionId::SteeringNormalized,
        CriterionId::SteeringPlanar,
        CriterionId::Reid,
    ] {
        let r = engine.evaluate(id)?;
        match (&r.inapplicable, r.ratio) {
            (Some(reason), _) => println!("{:<22} inapplicable: {reason}", r.criterion),
            (None, Some(ratio)) => println!(
                "{:<22} lhs = {:>10.5}  rhs = {:>10.5}  lhs/rhs = {:>9.5}  violated = {}",
                r.criterion, r.lhs, r.rhs, ratio, r.violated
            ),
            (None, None) => println!("{:<22} bound vanishes", r.criterion),
        }
    }

    println!();
    println!("steering-normalized report as JSON:");
    println!("{}", serde_json::to_string_pretty(&steering)?);
    Ok(())
}
