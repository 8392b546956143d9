//! Moments of split collective spins for the reference states, checked
//! against the closed-form split-Dicke expressions.
//!
//! Run with: cargo run --release --example collective_moments

use splitspin::moments::{analytic_dicke_moments, moment_set, DickeSplit, AX_X, AX_Z};
use splitspin::split::{split_binomial, split_exact, SectorMixture};
use splitspin::states::{PolarizationAxis, SymmetricState};

fn main() -> splitspin::Result<()> {
    let n = 100;
    let dicke = SymmetricState::dicke(n)?;

    println!("split Dicke state, N = {n}");
    for (label, mix) in [
        (
            "exact 50:50",
            SectorMixture::single(split_exact(&dicke, n / 2)?),
        ),
        ("binomial   ", split_binomial(&dicke, 1e-12)?),
    ] {
        let ms = moment_set(&mix);
        println!(
            "  {label}  <(J_x^a)^2> = {:>9.4}  <J_x^a J_x^b> = {:>9.4}  var(J_x^-) = {:>8.4}  var(Jn_x^-) = {:.6}",
            ms.second_a[AX_X],
            ms.cross[AX_X],
            ms.var_diff[AX_X],
            ms.norm_var_diff[AX_X],
        );
    }

    let closed = analytic_dicke_moments(n, DickeSplit::Binomial)?;
    println!(
        "  closed form  <(J_x^a)^2> = {:>9.4}  <J_x^a J_x^b> = {:>9.4}  var(J_x^-) = {:>8.4}   (N(N+4)/32, N^2/32, N/4)",
        closed.moments.second_a[AX_X],
        closed.moments.cross[AX_X],
        closed.moments.var_diff[AX_X],
    );
    for (field, value) in &closed.large_n_approximations {
        println!("  large-N approximation {field} = {value:.6}");
    }

    println!();
    println!("coherent states, N = {n}");
    for axis in [PolarizationAxis::X, PolarizationAxis::Z] {
        let state = SymmetricState::polarized(n, axis)?;
        let ms = moment_set(&split_binomial(&state, 1e-12)?);
        println!(
            "  polarized {:?}:  var(J_z) = {:>7.3}  <J_z^a J_z^b> = {:>8.4}  E = {:.4}",
            axis,
            ms.var_sum[AX_Z],
            ms.cross[AX_Z],
            ms.e_norm(),
        );
    }
    Ok(())
}
