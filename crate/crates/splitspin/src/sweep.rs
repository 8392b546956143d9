//! Squeezing-strength sweeps, the asymptotic criterion tables, and the
//! oracle-equivalence verification run.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{CriteriaEngine, CriterionId};
use crate::error::{Error, Result};
use crate::moments::{moment_set, MomentSet};
use crate::oracle::{self, StateTag};
use crate::spin::{Axis, OperatorSpec, Side};
use crate::split::{split_binomial, split_exact, SectorMixture};
use crate::states::{product_dicke, OneAxisTwister, PolarizationAxis, SymmetricState};

/// Largest particle number accepted by the sweep driver.
pub const SWEEP_N_LIMIT: u32 = 2000;

/// Splitting mode used by sweeps and tables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SweepSplit {
    /// Fixed 50:50 partition (N/2 rounded down).
    ExactHalf,
    /// Fixed partition with the given N_a.
    ExactAt(u32),
    /// Binomial partition noise with the given truncation tail.
    Binomial(f64),
}

impl SweepSplit {
    pub fn label(&self) -> String {
        match self {
            SweepSplit::ExactHalf => "exact-half".into(),
            SweepSplit::ExactAt(n_a) => format!("exact:{n_a}"),
            SweepSplit::Binomial(_) => "binomial".into(),
        }
    }

    pub fn apply(&self, state: &SymmetricState) -> Result<SectorMixture> {
        match self {
            SweepSplit::ExactHalf => Ok(SectorMixture::single(split_exact(
                state,
                state.n() / 2,
            )?)),
            SweepSplit::ExactAt(n_a) => Ok(SectorMixture::single(split_exact(state, *n_a)?)),
            SweepSplit::Binomial(tail) => split_binomial(state, *tail),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepPoint {
    pub mu: f64,
    /// lhs/rhs per criterion; `None` when the criterion is inapplicable.
    pub ratios: BTreeMap<String, Option<f64>>,
}

/// Criterion ratio curves over a squeezing-strength grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub n: u32,
    pub split: String,
    pub criteria: Vec<String>,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// Grid values where the criterion is clearly violated; saturation-level
    /// deficits below 1e-9 do not count.
    pub fn violation_set(&self, criterion: &str) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| matches!(p.ratios.get(criterion), Some(Some(r)) if *r < 1.0 - 1e-9))
            .map(|p| p.mu)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("mu");
        for c in &self.criteria {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for p in &self.points {
            out.push_str(&p.mu.to_string());
            for c in &self.criteria {
                out.push(',');
                if let Some(Some(r)) = p.ratios.get(c) {
                    out.push_str(&r.to_string());
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Evaluates the requested criteria on split one-axis-twisted states over a
/// strictly increasing μ grid.
pub fn sweep_one_axis(
    n: u32,
    mu_grid: &[f64],
    split: SweepSplit,
    criteria: &[CriterionId],
) -> Result<SweepResult> {
    if n > SWEEP_N_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "sweeps limited to N ≤ {SWEEP_N_LIMIT}, got {n}"
        )));
    }
    if mu_grid.is_empty() {
        return Err(Error::invalid("sweep grid must not be empty"));
    }
    if mu_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("sweep grid must be strictly increasing"));
    }
    if criteria.is_empty() {
        return Err(Error::invalid("sweep needs at least one criterion"));
    }
    let twister = OneAxisTwister::new(n)?;
    let points: Vec<SweepPoint> = mu_grid
        .par_iter()
        .map(|&mu| -> Result<SweepPoint> {
            let state = twister.state(mu);
            let mix = split.apply(&state)?;
            let engine = CriteriaEngine::new(&mix);
            let mut ratios = BTreeMap::new();
            for &id in criteria {
                let report = engine.evaluate(id)?;
                ratios.insert(id.label().to_string(), report.ratio);
            }
            Ok(SweepPoint { mu, ratios })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        n,
        split: split.label(),
        criteria: criteria.iter().map(|c| c.label().to_string()).collect(),
        points,
    })
}

/// Which asymptotic table to reproduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    /// Steering condition with normalized estimators.
    Steering,
    /// Entanglement condition with normalized components.
    Entanglement,
}

impl TableKind {
    pub fn label(&self) -> &'static str {
        match self {
            TableKind::Steering => "steering-table1",
            TableKind::Entanglement => "entanglement-table2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "steering-table1" => Ok(TableKind::Steering),
            "entanglement-table2" => Ok(TableKind::Entanglement),
            other => Err(Error::invalid(format!("unknown table '{other}'"))),
        }
    }

    pub fn column_names(&self) -> [&'static str; 4] {
        match self {
            TableKind::Steering => ["inf_var_z", "V_a", "E_a", "lhs_over_rhs"],
            TableKind::Entanglement => ["var_jz", "V", "E", "lhs_over_rhs"],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableRow {
    pub state: String,
    pub computed: [f64; 4],
    pub asymptotic: [f64; 4],
    /// Relative deviation, or absolute where the asymptotic value is zero.
    pub deviation: [f64; 4],
}

fn deviation(computed: f64, asymptotic: f64) -> f64 {
    if asymptotic == 0.0 {
        computed.abs()
    } else {
        (computed / asymptotic - 1.0).abs()
    }
}

/// Reproduces the large-N table of the requested criterion at finite N,
/// listing computed values, asymptotic targets and deviations.
pub fn criterion_table(kind: TableKind, n: u32, split: SweepSplit) -> Result<Vec<TableRow>> {
    if n < 20 {
        return Err(Error::invalid("tables need n ≥ 20"));
    }
    if n % 4 != 0 {
        return Err(Error::invalid(
            "tables need n divisible by 4 for the product-Dicke row",
        ));
    }
    let nf = n as f64;
    let states: Vec<(String, SectorMixture)> = vec![
        (
            "dicke".into(),
            split.apply(&SymmetricState::dicke(n)?)?,
        ),
        (
            "polarized-z".into(),
            split.apply(&SymmetricState::polarized(n, PolarizationAxis::Z)?)?,
        ),
        (
            "polarized-x".into(),
            split.apply(&SymmetricState::polarized(n, PolarizationAxis::X)?)?,
        ),
        (
            "product-dicke".into(),
            SectorMixture::single(product_dicke(n)?),
        ),
    ];
    let targets: [[f64; 4]; 4] = match kind {
        TableKind::Steering => [
            [0.0, 4.0 / nf, 1.0, 4.0 / nf],
            [0.0, 4.0 / nf, 4.0 / nf, 1.0],
            [nf / 8.0, 2.0 / nf, 1.0, 1.0],
            [0.0, 1.0, 1.0, 1.0],
        ],
        TableKind::Entanglement => [
            [0.0, 4.0 / nf, 4.0, 1.0 / nf],
            [0.0, 8.0 / nf, 8.0 / nf, nf / 2.0],
            [nf / 4.0, 4.0 / nf, 4.0, 1.0],
            [0.0, 2.0, 2.0, 2.0],
        ],
    };
    let rows: Vec<TableRow> = states
        .par_iter()
        .zip(targets.par_iter())
        .map(|((name, mix), target)| -> Result<TableRow> {
            let engine = CriteriaEngine::new(mix);
            let computed = match kind {
                TableKind::Steering => {
                    let r = engine.steering_normalized()?;
                    [
                        r.components["inf_var_z"],
                        r.components["v_a"],
                        r.components["e_a"],
                        r.ratio.unwrap_or(f64::NAN),
                    ]
                }
                TableKind::Entanglement => {
                    let r = engine.entanglement(crate::criteria::EntVariant::Normalized)?;
                    [
                        r.components["var_jz"],
                        r.components["v"],
                        r.components["e"],
                        r.ratio.unwrap_or(f64::NAN),
                    ]
                }
            };
            let mut dev = [0.0; 4];
            for i in 0..4 {
                dev[i] = deviation(computed[i], target[i]);
            }
            Ok(TableRow {
                state: name.clone(),
                computed,
                asymptotic: *target,
                deviation: dev,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyLine {
    pub label: String,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares every moment-catalog field against the brute-force 2^N oracle
/// for the named states, split at N/2.
pub fn verify_oracle_equivalence(ns: &[u32], tol: f64) -> Result<Vec<VerifyLine>> {
    let mut lines = Vec::new();
    for &n in ns {
        if n % 2 != 0 || n < 2 {
            return Err(Error::invalid("oracle verification needs even n ≥ 2"));
        }
        if n > oracle::MAX_QUBITS {
            return Err(Error::ResourceLimit(format!(
                "oracle verification limited to {} qubits",
                oracle::MAX_QUBITS
            )));
        }
        let n_a = n / 2;
        for tag in [
            StateTag::Dicke,
            StateTag::PolarizedX,
            StateTag::PolarizedZ,
            StateTag::Ghz,
        ] {
            let state = match tag {
                StateTag::Dicke => SymmetricState::dicke(n)?,
                StateTag::PolarizedX => SymmetricState::polarized(n, PolarizationAxis::X)?,
                StateTag::PolarizedZ => SymmetricState::polarized(n, PolarizationAxis::Z)?,
                StateTag::Ghz => SymmetricState::ghz(n)?,
            };
            let ms = moment_set(&SectorMixture::single(split_exact(&state, n_a)?));
            let dev = moment_set_oracle_deviation(&ms, n, n_a, tag)?;
            lines.push(VerifyLine {
                label: format!("n={n} {}", tag.label()),
                max_deviation: dev,
                pass: dev <= tol,
            });
        }
    }
    Ok(lines)
}

/// Largest |subspace − oracle| over the primitive moment fields.
pub fn moment_set_oracle_deviation(
    ms: &MomentSet,
    n: u32,
    n_a: u32,
    tag: StateTag,
) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut check = |got: f64, want: f64| {
        worst = worst.max((got - want).abs());
    };
    for (l, axis) in [Axis::X, Axis::Y, Axis::Z].into_iter().enumerate() {
        let mean_a = oracle::expectation(n, n_a, tag, &OperatorSpec::new(axis, Side::A))?;
        let mean_b = oracle::expectation(n, n_a, tag, &OperatorSpec::new(axis, Side::B))?;
        let sec_a = oracle::expectation(n, n_a, tag, &OperatorSpec::new(axis, Side::A).squared())?;
        let sec_b = oracle::expectation(n, n_a, tag, &OperatorSpec::new(axis, Side::B).squared())?;
        let cross = oracle::half_correlation(n, n_a, tag, axis)?;
        check(ms.mean_a[l], mean_a);
        check(ms.mean_b[l], mean_b);
        check(ms.second_a[l], sec_a);
        check(ms.second_b[l], sec_b);
        check(ms.cross[l], cross);
        let sum2 =
            oracle::expectation(n, n_a, tag, &OperatorSpec::new(axis, Side::Sum).squared())?;
        let diff2 = oracle::expectation(
            n,
            n_a,
            tag,
            &OperatorSpec::new(axis, Side::Difference).squared(),
        )?;
        check(ms.second_sum[l], sum2);
        check(ms.second_diff[l], diff2);
        if l < 2 {
            let nsec_a = oracle::expectation(
                n,
                n_a,
                tag,
                &OperatorSpec::new(axis, Side::A).normalized().squared(),
            )?;
            let nsum2 = oracle::expectation(
                n,
                n_a,
                tag,
                &OperatorSpec::new(axis, Side::Sum).normalized().squared(),
            )?;
            let ndiff2 = oracle::expectation(
                n,
                n_a,
                tag,
                &OperatorSpec::new(axis, Side::Difference)
                    .normalized()
                    .squared(),
            )?;
            check(ms.norm_second_a[l], nsec_a);
            check(ms.norm_second_sum[l], nsum2);
            check(ms.norm_second_diff[l], ndiff2);
        }
    }
    // one slanted in-plane direction exercises the planar machinery
    let alpha = 0.7;
    let planar_diff2 = oracle::expectation(
        n,
        n_a,
        tag,
        &OperatorSpec::new(Axis::Planar(alpha), Side::Difference)
            .normalized()
            .squared(),
    )?;
    let mix = match tag {
        StateTag::Dicke => SectorMixture::single(split_exact(&SymmetricState::dicke(n)?, n_a)?),
        StateTag::PolarizedX => SectorMixture::single(split_exact(
            &SymmetricState::polarized(n, PolarizationAxis::X)?,
            n_a,
        )?),
        StateTag::PolarizedZ => SectorMixture::single(split_exact(
            &SymmetricState::polarized(n, PolarizationAxis::Z)?,
            n_a,
        )?),
        StateTag::Ghz => SectorMixture::single(split_exact(&SymmetricState::ghz(n)?, n_a)?),
    };
    let planar_num = crate::moments::planar_second_moment_at_angle(
        &mix,
        alpha,
        crate::moments::PlanarCombo::Minus,
    )?;
    Ok(worst.max((planar_num - planar_diff2).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_passes_at_small_n() {
        let lines = verify_oracle_equivalence(&[4, 6], 1e-10).unwrap();
        assert_eq!(lines.len(), 8);
        for line in &lines {
            assert!(line.pass, "{} deviates by {}", line.label, line.max_deviation);
        }
    }

    #[test]
    fn table_deviations_shrink_with_n() {
        for kind in [TableKind::Steering, TableKind::Entanglement] {
            let coarse = criterion_table(kind, 200, SweepSplit::ExactHalf).unwrap();
            let fine = criterion_table(kind, 2000, SweepSplit::ExactHalf).unwrap();
            for (c, f) in coarse.iter().zip(&fine) {
                for i in 0..4 {
                    // columns that are exact at every size sit at fp noise
                    let converged = f.deviation[i] <= 1e-9 && c.deviation[i] <= 1e-9;
                    assert!(
                        f.deviation[i] < c.deviation[i] || converged,
                        "{} column {} did not improve: {} vs {}",
                        c.state,
                        i,
                        f.deviation[i],
                        c.deviation[i]
                    );
                }
            }
        }
    }

    #[test]
    fn sweep_orders_and_guards() {
        let grid = [0.0, 0.05, 0.1];
        let result = sweep_one_axis(
            40,
            &grid,
            SweepSplit::ExactHalf,
            &[
                CriterionId::SteeringNormalized,
                CriterionId::Entanglement(crate::criteria::EntVariant::Normalized),
            ],
        )
        .unwrap();
        assert_eq!(result.points.len(), 3);
        for (p, mu) in result.points.iter().zip(grid) {
            assert_eq!(p.mu, mu);
        }
        let csv = result.to_csv();
        assert!(csv.starts_with("mu,entanglement-normalized,steering-normalized\n") ||
                csv.starts_with("mu,steering-normalized,entanglement-normalized\n"));
        assert!(sweep_one_axis(40, &[0.1, 0.1], SweepSplit::ExactHalf, &[CriterionId::Reid]).is_err());
        assert!(sweep_one_axis(2400, &grid, SweepSplit::ExactHalf, &[CriterionId::Reid]).is_err());
    }

    #[test]
    fn table_input_validation() {
        assert!(criterion_table(TableKind::Steering, 16, SweepSplit::ExactHalf).is_err());
        assert!(criterion_table(TableKind::Steering, 22, SweepSplit::ExactHalf).is_err());
        assert!(TableKind::parse("steering-table1").is_ok());
        assert!(TableKind::parse("nope").is_err());
    }
}
