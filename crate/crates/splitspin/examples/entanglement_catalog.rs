//! Every entanglement condition in the catalog evaluated on one split Dicke
//! state, including the spectral square-root and absolute-value bounds.
//!
//! Run with: cargo run --release --example entanglement_catalog

use splitspin::criteria::{AppendixVariant, CriteriaEngine, CriterionId, EntVariant};
use splitspin::split::split_binomial;
use splitspin::states::SymmetricState;

fn main() -> splitspin::Result<()> {
    let n = 64;
    let mix = split_binomial(&SymmetricState::dicke(n)?, 1e-12)?;
    let engine = CriteriaEngine::new(&mix).with_description(format!("dicke n={n}"));

    println!("split Dicke state, N = {n}, binomial partition noise");
    let ids = [
        CriterionId::Entanglement(EntVariant::Raw),
        CriterionId::Entanglement(EntVariant::Sqrt),
        CriterionId::Entanglement(EntVariant::Abs),
        CriterionId::Entanglement(EntVariant::Normalized),
        CriterionId::Entanglement(EntVariant::NormalizedAbs),
        CriterionId::Entanglement(EntVariant::Planar),
        CriterionId::Appendix(AppendixVariant::CorrelationBinomial),
        CriterionId::Appendix(AppendixVariant::Singlet),
        CriterionId::Appendix(AppendixVariant::DickeVariance),
    ];
    for id in ids {
        let r = engine.evaluate(id)?;
        println!(
            "  {:<24} lhs = {:>11.5}  rhs = {:>11.5}  ratio = {:>9.5}  violated = {}",
            r.criterion,
            r.lhs,
            r.rhs,
            r.ratio.map(|v| format!("{v:.5}")).unwrap_or_default(),
            r.violated
        );
    }

    // the three bounds of the main condition are ordered: abs ≤ sqrt, raw ≤ sqrt
    let raw = engine.evaluate(CriterionId::Entanglement(EntVariant::Raw))?;
    let sqrt = engine.evaluate(CriterionId::Entanglement(EntVariant::Sqrt))?;
    let abs = engine.evaluate(CriterionId::Entanglement(EntVariant::Abs))?;
    println!();
    println!(
        "bound ordering: raw {:.5} ≤ sqrt {:.5}, abs {:.5} ≤ sqrt {:.5}",
        raw.rhs, sqrt.rhs, abs.rhs, sqrt.rhs
    );
    Ok(())
}
