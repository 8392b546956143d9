//! Uncertainty, EPR-steering and bipartite-entanglement criteria.
//!
//! Every criterion returns a [`CriterionReport`] with the same convention:
//! `ratio < 1` means the state violates the condition, for product-form
//! (lower-bound) criteria as `lhs/rhs` and for correlation (upper-bound)
//! criteria as `rhs/lhs`. Saturation within 1e-12 is never counted as a
//! violation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{
    inference_variance, moment_set, moment_set_symmetric, GainVector, MomentSet, AX_X, AX_Y, AX_Z,
};
use crate::spectral::{abs_sum_moment, sqrt_xy_sum_moment};
use crate::spin::SpinSector;
use crate::split::{MixtureEntry, SectorMixture, SplitMode};
use crate::states::{SectorState, SymmetricState};

/// Variants of the main entanglement condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntVariant {
    /// Bound ⟨J_x²+J_y²⟩²/(N(N+2)).
    Raw,
    /// Bound ⟨√(J_x²+J_y²)⟩²/4.
    Sqrt,
    /// Bound (⟨|J_x|⟩+⟨|J_y|⟩)²/8.
    Abs,
    /// Normalized components, bound ⟨𝒥_x²+𝒥_y²⟩²/16.
    Normalized,
    /// Normalized components, bound (⟨|𝒥_x|⟩+⟨|𝒥_y|⟩)²/8.
    NormalizedAbs,
    /// Random-in-plane form: 2(Δ𝒥_⊥^−)² against ⟨(𝒥_⊥^+)²⟩²/16.
    Planar,
}

/// Variants of the first-moment entanglement condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstMomentVariant {
    /// var(J_z)[var(J_x^−)+var(J_y^−)] ≥ (⟨J_x⟩²+⟨J_y⟩²)/4.
    Summed,
    /// Product form var(J_z^+) var(J_v^−) ≥ ⟨C⟩²/4 with C = i[J_z, J_v];
    /// both in-plane pairings are evaluated and the sharper one reported.
    Giovannetti,
}

/// The simpler correlation- and variance-based conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AppendixVariant {
    /// Σ_l |⟨J_l^a J_l^b⟩| ≤ j_a j_b, fixed sector only.
    Correlation,
    /// Σ_l |⟨J_l^a J_l^b⟩| ≤ N(N−1)/16, valid under binomial splitting.
    CorrelationBinomial,
    /// var(J_z^+)+var(J_x^+)+var(J_y^+) ≥ N/2.
    Singlet,
    /// var(J_z^+)+var(J_x^−)+var(J_y^−) ≥ N/2.
    DickeVariance,
}

/// Identifier of one criterion in the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionId {
    /// Number-phase-like uncertainty relation; never violated.
    Uncertainty,
    /// EPR steering with raw inference variances and optimal gains.
    Steering,
    /// EPR steering with normalized in-plane estimators.
    SteeringNormalized,
    /// EPR steering in the random-in-plane measurement form.
    SteeringPlanar,
    /// Reid-type product criterion for x-polarized states.
    Reid,
    Entanglement(EntVariant),
    FirstMoment(FirstMomentVariant),
    Appendix(AppendixVariant),
}

impl CriterionId {
    pub fn label(&self) -> &'static str {
        match self {
            CriterionId::Uncertainty => "uncertainty",
            CriterionId::Steering => "steering",
            CriterionId::SteeringNormalized => "steering-normalized",
            CriterionId::SteeringPlanar => "steering-planar",
            CriterionId::Reid => "reid",
            CriterionId::Entanglement(EntVariant::Raw) => "entanglement-raw",
            CriterionId::Entanglement(EntVariant::Sqrt) => "entanglement-sqrt",
            CriterionId::Entanglement(EntVariant::Abs) => "entanglement-abs",
            CriterionId::Entanglement(EntVariant::Normalized) => "entanglement-normalized",
            CriterionId::Entanglement(EntVariant::NormalizedAbs) => "entanglement-normalized-abs",
            CriterionId::Entanglement(EntVariant::Planar) => "entanglement-planar",
            CriterionId::FirstMoment(FirstMomentVariant::Summed) => "first-moment-sum",
            CriterionId::FirstMoment(FirstMomentVariant::Giovannetti) => "giovannetti",
            CriterionId::Appendix(AppendixVariant::Correlation) => "correlation",
            CriterionId::Appendix(AppendixVariant::CorrelationBinomial) => "correlation-binomial",
            CriterionId::Appendix(AppendixVariant::Singlet) => "singlet",
            CriterionId::Appendix(AppendixVariant::DickeVariance) => "dicke-variance",
        }
    }

    /// The whole catalog.
    pub fn all() -> Vec<CriterionId> {
        use AppendixVariant::*;
        use EntVariant::*;
        use FirstMomentVariant::*;
        vec![
            CriterionId::Uncertainty,
            CriterionId::Steering,
            CriterionId::SteeringNormalized,
            CriterionId::SteeringPlanar,
            CriterionId::Reid,
            CriterionId::Entanglement(Raw),
            CriterionId::Entanglement(Sqrt),
            CriterionId::Entanglement(Abs),
            CriterionId::Entanglement(Normalized),
            CriterionId::Entanglement(NormalizedAbs),
            CriterionId::Entanglement(Planar),
            CriterionId::FirstMoment(Summed),
            CriterionId::FirstMoment(Giovannetti),
            CriterionId::Appendix(Correlation),
            CriterionId::Appendix(CorrelationBinomial),
            CriterionId::Appendix(Singlet),
            CriterionId::Appendix(DickeVariance),
        ]
    }

    /// Catalog restricted to what the given state supports: the fixed-sector
    /// correlation bound drops out for true mixtures.
    pub fn applicable_to(mix: &SectorMixture) -> Vec<CriterionId> {
        Self::all()
            .into_iter()
            .filter(|id| {
                !matches!(id, CriterionId::Appendix(AppendixVariant::Correlation))
                    || mix.is_single_sector()
            })
            .collect()
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CriterionId::all()
            .into_iter()
            .find(|id| id.label() == s)
            .ok_or_else(|| Error::invalid(format!("unknown criterion '{s}'")))
    }
}

/// Direction of the inequality a criterion states for unentangled /
/// non-steerable states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    /// lhs ≥ rhs holds; violation is lhs < rhs.
    Lower,
    /// lhs ≤ rhs holds; violation is lhs > rhs.
    Upper,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct StateMeta {
    pub n: u32,
    pub mode: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
}

/// Outcome of evaluating one criterion on one state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Normalized so that `ratio < 1` always means violation; `None` when
    /// the bound side vanishes.
    pub ratio: Option<f64>,
    pub violated: bool,
    pub sense: Sense,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inapplicable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gains: Option<GainVector>,
    /// Axes whose gain optimization hit a vanishing remote variance and
    /// fell back to zero gain.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gain_fallbacks: Vec<String>,
    pub components: BTreeMap<String, f64>,
    pub state: StateMeta,
}

impl CriterionReport {
    fn build(
        id: CriterionId,
        sense: Sense,
        lhs: f64,
        rhs: f64,
        components: BTreeMap<String, f64>,
        meta: StateMeta,
    ) -> Self {
        // saturating product states cancel large moments; below this the
        // deficit is fp noise, not violation
        let tol = 1e-10 * lhs.abs().max(rhs.abs()).max(1.0);
        let (ratio, violated) = match sense {
            Sense::Lower => (
                if rhs > 0.0 { Some(lhs / rhs) } else { None },
                rhs > 0.0 && lhs < rhs - tol,
            ),
            Sense::Upper => (
                if lhs > 0.0 { Some(rhs / lhs) } else { None },
                lhs > rhs + tol,
            ),
        };
        CriterionReport {
            criterion: id.label().into(),
            lhs,
            rhs,
            ratio,
            violated,
            sense,
            inapplicable: None,
            gains: None,
            gain_fallbacks: Vec::new(),
            components,
            state: meta,
        }
    }

    fn mark_inapplicable(mut self, reason: impl Into<String>) -> Self {
        self.inapplicable = Some(reason.into());
        self.violated = false;
        self.ratio = None;
        self
    }
}

fn components(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Threshold below which a first-moment bound is reported as inapplicable.
const MEAN_FLOOR: f64 = 1e-9;

fn raw_auto_gain(ms: &MomentSet, axis: usize) -> (f64, bool) {
    let var_b = ms.var_b[axis];
    if var_b <= 1e-12 * ms.second_b[axis].abs().max(1.0) {
        (0.0, true)
    } else {
        (-ms.cov[axis] / var_b, false)
    }
}

fn norm_auto_gain(ms: &MomentSet, axis: usize) -> (f64, bool) {
    let var_b = ms.norm_var_b[axis];
    if var_b <= 1e-12 * ms.norm_second_b[axis].abs().max(1.0) {
        (0.0, true)
    } else {
        (ms.norm_cov[axis] / var_b, false)
    }
}

/// Evaluates criteria against one state, computing the moment catalog once.
pub struct CriteriaEngine<'a> {
    mix: &'a SectorMixture,
    ms: MomentSet,
    meta: StateMeta,
}

impl<'a> CriteriaEngine<'a> {
    pub fn new(mix: &'a SectorMixture) -> Self {
        let ms = moment_set(mix);
        let meta = StateMeta {
            n: mix.n(),
            mode: mix.mode().label(),
            description: String::new(),
        };
        CriteriaEngine { mix, ms, meta }
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.meta.description = description.into();
        self
    }

    pub fn moments(&self) -> &MomentSet {
        &self.ms
    }

    pub fn evaluate(&self, id: CriterionId) -> Result<CriterionReport> {
        match id {
            CriterionId::Uncertainty => self.uncertainty(),
            CriterionId::Steering => self.steering(None),
            CriterionId::SteeringNormalized => self.steering_normalized(),
            CriterionId::SteeringPlanar => self.steering_planar(),
            CriterionId::Reid => self.reid(None),
            CriterionId::Entanglement(v) => self.entanglement(v),
            CriterionId::FirstMoment(v) => self.first_moment(v),
            CriterionId::Appendix(v) => self.appendix(v),
        }
    }

    pub fn evaluate_many(&self, ids: &[CriterionId]) -> Result<Vec<CriterionReport>> {
        ids.iter().map(|&id| self.evaluate(id)).collect()
    }

    /// [var(J_z)+1/4]·[var(J_x)+var(J_y)]/⟨J_x²+J_y²⟩ ≥ 1/4, with the
    /// cosine/sine phase-operator factorization in the components.
    pub fn uncertainty(&self) -> Result<CriterionReport> {
        let ms = &self.ms;
        let e = ms.xy_second_sum();
        if e <= 1e-14 {
            return Err(Error::DegenerateState(
                "⟨J_x²⟩+⟨J_y²⟩ vanishes; the phase side is undefined".into(),
            ));
        }
        let var_c = ms.var_sum[AX_X] / e;
        let var_s = ms.var_sum[AX_Y] / e;
        let lhs = (ms.var_sum[AX_Z] + 0.25) * (var_c + var_s);
        let comps = components(&[
            ("var_jz", ms.var_sum[AX_Z]),
            ("var_c", var_c),
            ("var_s", var_s),
            ("xy_second_sum", e),
        ]);
        Ok(CriterionReport::build(
            CriterionId::Uncertainty,
            Sense::Lower,
            lhs,
            0.25,
            comps,
            self.meta.clone(),
        ))
    }

    /// EPR steering with raw inference variances; `gains` of `None` selects
    /// the optimal gain per axis.
    pub fn steering(&self, gains: Option<GainVector>) -> Result<CriterionReport> {
        let ms = &self.ms;
        let mut fallbacks = Vec::new();
        let g = match gains {
            Some(g) => g,
            None => {
                let mut out = [0.0; 3];
                for (axis, name) in [(AX_X, "x"), (AX_Y, "y"), (AX_Z, "z")] {
                    let (gv, fell) = raw_auto_gain(ms, axis);
                    out[axis] = gv;
                    if fell {
                        fallbacks.push(name.to_string());
                    }
                }
                GainVector {
                    x: out[0],
                    y: out[1],
                    z: out[2],
                }
            }
        };
        let inf_x = inference_variance(ms, AX_X, g.x, false)?;
        let inf_y = inference_variance(ms, AX_Y, g.y, false)?;
        let inf_z = inference_variance(ms, AX_Z, g.z, false)?;
        let e_a = ms.second_a[AX_X] + ms.second_a[AX_Y];
        let lhs = (inf_z + 0.25) * (inf_x + inf_y);
        let rhs = e_a / 4.0;
        let comps = components(&[
            ("inf_var_x", inf_x),
            ("inf_var_y", inf_y),
            ("inf_var_z", inf_z),
            ("second_a_xy", e_a),
        ]);
        let mut report = CriterionReport::build(
            CriterionId::Steering,
            Sense::Lower,
            lhs,
            rhs,
            comps,
            self.meta.clone(),
        );
        report.gains = Some(g);
        report.gain_fallbacks = fallbacks;
        Ok(report)
    }

    /// EPR steering with normalized in-plane estimators 𝒥_l,est^a = γ_l 𝒥_l^b
    /// and the z estimator −g_z J_z^b, all gains optimized.
    pub fn steering_normalized(&self) -> Result<CriterionReport> {
        let ms = &self.ms;
        let mut fallbacks = Vec::new();
        let (g_z, fell_z) = raw_auto_gain(ms, AX_Z);
        if fell_z {
            fallbacks.push("z".into());
        }
        let (g_x, fell_x) = norm_auto_gain(ms, AX_X);
        if fell_x {
            fallbacks.push("x".into());
        }
        let (g_y, fell_y) = norm_auto_gain(ms, AX_Y);
        if fell_y {
            fallbacks.push("y".into());
        }
        let inf_z = inference_variance(ms, AX_Z, g_z, false)?;
        let inf_x = inference_variance(ms, AX_X, g_x, true)?;
        let inf_y = inference_variance(ms, AX_Y, g_y, true)?;
        let v_a = inf_x + inf_y;
        let e_a = ms.e_a_norm();
        let lhs = (inf_z + 0.25) * v_a;
        let rhs = e_a / 4.0;
        let comps = components(&[
            ("inf_var_z", inf_z),
            ("inf_var_x_norm", inf_x),
            ("inf_var_y_norm", inf_y),
            ("v_a", v_a),
            ("e_a", e_a),
        ]);
        let mut report = CriterionReport::build(
            CriterionId::SteeringNormalized,
            Sense::Lower,
            lhs,
            rhs,
            comps,
            self.meta.clone(),
        );
        report.gains = Some(GainVector {
            x: g_x,
            y: g_y,
            z: g_z,
        });
        report.gain_fallbacks = fallbacks;
        Ok(report)
    }

    /// Steering condition on random-in-plane averages:
    /// [var(J_z)+1/4]·2(Δ𝒥_⊥^−)² ≥ ⟨(𝒥_⊥^a)²⟩/4.
    pub fn steering_planar(&self) -> Result<CriterionReport> {
        let ms = &self.ms;
        let planar_diff = ms.planar_second_diff;
        let planar_a = ms.planar_second_a;
        let lhs = (ms.var_sum[AX_Z] + 0.25) * 2.0 * planar_diff;
        let rhs = planar_a / 4.0;
        let comps = components(&[
            ("var_jz", ms.var_sum[AX_Z]),
            ("planar_second_diff", planar_diff),
            ("planar_second_a", planar_a),
        ]);
        Ok(CriterionReport::build(
            CriterionId::SteeringPlanar,
            Sense::Lower,
            lhs,
            rhs,
            comps,
            self.meta.clone(),
        ))
    }

    /// Δ²_inf(J_z^a)·Δ²_inf(J_y^a) ≥ |⟨J_x^a⟩|²/4.
    pub fn reid(&self, gains: Option<GainVector>) -> Result<CriterionReport> {
        let ms = &self.ms;
        let mut fallbacks = Vec::new();
        let g = match gains {
            Some(g) => g,
            None => {
                let (gz, fz) = raw_auto_gain(ms, AX_Z);
                let (gy, fy) = raw_auto_gain(ms, AX_Y);
                if fz {
                    fallbacks.push("z".into());
                }
                if fy {
                    fallbacks.push("y".into());
                }
                GainVector { x: 0.0, y: gy, z: gz }
            }
        };
        let inf_z = inference_variance(ms, AX_Z, g.z, false)?;
        let inf_y = inference_variance(ms, AX_Y, g.y, false)?;
        let mean_x = ms.mean_a[AX_X];
        let lhs = inf_z * inf_y;
        let rhs = mean_x * mean_x / 4.0;
        let comps = components(&[
            ("inf_var_z", inf_z),
            ("inf_var_y", inf_y),
            ("mean_a_x", mean_x),
        ]);
        let mut report = CriterionReport::build(
            CriterionId::Reid,
            Sense::Lower,
            lhs,
            rhs,
            comps,
            self.meta.clone(),
        );
        report.gains = Some(g);
        report.gain_fallbacks = fallbacks;
        if mean_x.abs() < MEAN_FLOOR {
            report = report.mark_inapplicable("polarization-free state, criterion inapplicable");
        }
        Ok(report)
    }

    pub fn entanglement(&self, variant: EntVariant) -> Result<CriterionReport> {
        let ms = &self.ms;
        let n = ms.n_total as f64;
        let varz_plus = ms.var_sum[AX_Z] + 0.25;
        let (lhs, rhs, comps) = match variant {
            EntVariant::Raw => {
                let v = ms.var_diff[AX_X] + ms.var_diff[AX_Y];
                let e = ms.xy_second_sum();
                (
                    varz_plus * v,
                    e * e / (n * (n + 2.0)),
                    components(&[
                        ("var_jz", ms.var_sum[AX_Z]),
                        ("v_raw", v),
                        ("xy_second_sum", e),
                    ]),
                )
            }
            EntVariant::Sqrt => {
                let v = ms.var_diff[AX_X] + ms.var_diff[AX_Y];
                let root = sqrt_xy_sum_moment(self.mix)?;
                (
                    varz_plus * v,
                    root * root / 4.0,
                    components(&[
                        ("var_jz", ms.var_sum[AX_Z]),
                        ("v_raw", v),
                        ("sqrt_xy_mean", root),
                    ]),
                )
            }
            EntVariant::Abs => {
                let v = ms.var_diff[AX_X] + ms.var_diff[AX_Y];
                let abs_x = abs_sum_moment(self.mix, 0.0, false)?;
                let abs_y = abs_sum_moment(self.mix, std::f64::consts::FRAC_PI_2, false)?;
                (
                    varz_plus * v,
                    (abs_x + abs_y) * (abs_x + abs_y) / 8.0,
                    components(&[
                        ("var_jz", ms.var_sum[AX_Z]),
                        ("v_raw", v),
                        ("abs_x", abs_x),
                        ("abs_y", abs_y),
                    ]),
                )
            }
            EntVariant::Normalized => {
                let v = ms.v_norm();
                let e = ms.e_norm();
                (
                    varz_plus * v,
                    e * e / 16.0,
                    components(&[("var_jz", ms.var_sum[AX_Z]), ("v", v), ("e", e)]),
                )
            }
            EntVariant::NormalizedAbs => {
                let v = ms.v_norm();
                let abs_x = abs_sum_moment(self.mix, 0.0, true)?;
                let abs_y = abs_sum_moment(self.mix, std::f64::consts::FRAC_PI_2, true)?;
                (
                    varz_plus * v,
                    (abs_x + abs_y) * (abs_x + abs_y) / 8.0,
                    components(&[
                        ("var_jz", ms.var_sum[AX_Z]),
                        ("v", v),
                        ("abs_x_norm", abs_x),
                        ("abs_y_norm", abs_y),
                    ]),
                )
            }
            EntVariant::Planar => {
                let planar_diff = ms.planar_second_diff;
                let planar_sum = ms.planar_second_sum;
                (
                    varz_plus * 2.0 * planar_diff,
                    planar_sum * planar_sum / 16.0,
                    components(&[
                        ("var_jz", ms.var_sum[AX_Z]),
                        ("planar_second_diff", planar_diff),
                        ("planar_second_sum", planar_sum),
                    ]),
                )
            }
        };
        Ok(CriterionReport::build(
            CriterionId::Entanglement(variant),
            Sense::Lower,
            lhs,
            rhs,
            comps,
            self.meta.clone(),
        ))
    }

    pub fn first_moment(&self, variant: FirstMomentVariant) -> Result<CriterionReport> {
        let ms = &self.ms;
        match variant {
            FirstMomentVariant::Summed => {
                let v = ms.var_diff[AX_X] + ms.var_diff[AX_Y];
                let b = ms.mean_sum[AX_X] * ms.mean_sum[AX_X]
                    + ms.mean_sum[AX_Y] * ms.mean_sum[AX_Y];
                let lhs = ms.var_sum[AX_Z] * v;
                let rhs = b / 4.0;
                let comps = components(&[
                    ("var_jz", ms.var_sum[AX_Z]),
                    ("v_raw", v),
                    ("mean_x", ms.mean_sum[AX_X]),
                    ("mean_y", ms.mean_sum[AX_Y]),
                ]);
                let mut report = CriterionReport::build(
                    CriterionId::FirstMoment(variant),
                    Sense::Lower,
                    lhs,
                    rhs,
                    comps,
                    self.meta.clone(),
                );
                if ms.mean_sum[AX_X].abs() < MEAN_FLOOR && ms.mean_sum[AX_Y].abs() < MEAN_FLOOR {
                    report = report
                        .mark_inapplicable("first moments vanish, criterion inapplicable");
                }
                Ok(report)
            }
            FirstMomentVariant::Giovannetti => {
                // i[J_z, J_x] = −J_y and i[J_z, J_y] = J_x
                let pairings = [
                    (AX_X, AX_Y, "x"),
                    (AX_Y, AX_X, "y"),
                ];
                let mut best: Option<(f64, f64, &str)> = None;
                let mut comps = BTreeMap::new();
                for (v_axis, c_axis, name) in pairings {
                    let lhs = ms.var_sum[AX_Z] * ms.var_diff[v_axis];
                    let mean_c = ms.mean_sum[c_axis];
                    let rhs = mean_c * mean_c / 4.0;
                    comps.insert(format!("lhs_v{name}"), lhs);
                    comps.insert(format!("rhs_v{name}"), rhs);
                    if mean_c.abs() < MEAN_FLOOR {
                        continue;
                    }
                    let ratio = lhs / rhs;
                    if best.is_none() || ratio < best.unwrap().0 {
                        best = Some((ratio, rhs, name));
                    }
                }
                match best {
                    None => {
                        let report = CriterionReport::build(
                            CriterionId::FirstMoment(variant),
                            Sense::Lower,
                            0.0,
                            0.0,
                            comps,
                            self.meta.clone(),
                        );
                        Ok(report
                            .mark_inapplicable("first moments vanish, criterion inapplicable"))
                    }
                    Some((_, _, name)) => {
                        comps.insert("chosen_v_is_y".into(), if name == "y" { 1.0 } else { 0.0 });
                        let lhs = comps[&format!("lhs_v{name}")];
                        let rhs = comps[&format!("rhs_v{name}")];
                        Ok(CriterionReport::build(
                            CriterionId::FirstMoment(variant),
                            Sense::Lower,
                            lhs,
                            rhs,
                            comps,
                            self.meta.clone(),
                        ))
                    }
                }
            }
        }
    }

    pub fn appendix(&self, variant: AppendixVariant) -> Result<CriterionReport> {
        let ms = &self.ms;
        let n = ms.n_total as f64;
        match variant {
            AppendixVariant::Correlation => {
                let state = self.mix.single_sector_state().ok_or_else(|| {
                    Error::invalid(
                        "the fixed-sector correlation bound needs a single sector; \
                         use correlation-binomial for mixtures",
                    )
                })?;
                let sector = state.sector();
                let lhs =
                    ms.cross[AX_X].abs() + ms.cross[AX_Y].abs() + ms.cross[AX_Z].abs();
                let rhs = sector.j_a() * sector.j_b();
                let comps = components(&[
                    ("cross_x", ms.cross[AX_X]),
                    ("cross_y", ms.cross[AX_Y]),
                    ("cross_z", ms.cross[AX_Z]),
                    ("bound", rhs),
                ]);
                Ok(CriterionReport::build(
                    CriterionId::Appendix(variant),
                    Sense::Upper,
                    lhs,
                    rhs,
                    comps,
                    self.meta.clone(),
                ))
            }
            AppendixVariant::CorrelationBinomial => {
                let lhs =
                    ms.cross[AX_X].abs() + ms.cross[AX_Y].abs() + ms.cross[AX_Z].abs();
                let rhs = n * (n - 1.0) / 16.0;
                let comps = components(&[
                    ("cross_x", ms.cross[AX_X]),
                    ("cross_y", ms.cross[AX_Y]),
                    ("cross_z", ms.cross[AX_Z]),
                    ("bound", rhs),
                ]);
                Ok(CriterionReport::build(
                    CriterionId::Appendix(variant),
                    Sense::Upper,
                    lhs,
                    rhs,
                    comps,
                    self.meta.clone(),
                ))
            }
            AppendixVariant::Singlet | AppendixVariant::DickeVariance => {
                let (vx, vy) = if variant == AppendixVariant::Singlet {
                    (ms.var_sum[AX_X], ms.var_sum[AX_Y])
                } else {
                    (ms.var_diff[AX_X], ms.var_diff[AX_Y])
                };
                let lhs = ms.var_sum[AX_Z] + vx + vy;
                let rhs = n / 2.0;
                let comps = components(&[
                    ("var_z_sum", ms.var_sum[AX_Z]),
                    ("var_x_part", vx),
                    ("var_y_part", vy),
                ]);
                Ok(CriterionReport::build(
                    CriterionId::Appendix(variant),
                    Sense::Lower,
                    lhs,
                    rhs,
                    comps,
                    self.meta.clone(),
                ))
            }
        }
    }
}

/// Uncertainty relation for an unsplit symmetric state.
pub fn uncertainty_of_symmetric(state: &SymmetricState) -> Result<CriterionReport> {
    let split = crate::split::split_exact(state, state.n())?;
    let mix = SectorMixture::single(split);
    let ms = moment_set_symmetric(state)?;
    let engine = CriteriaEngine {
        mix: &mix,
        ms,
        meta: StateMeta {
            n: state.n(),
            mode: "collective".into(),
            description: String::new(),
        },
    };
    engine.uncertainty()
}

/// Seeded random separable state: a Dirichlet-weighted mixture of Haar-random
/// pure product states, optionally pinned to one sector.
pub fn random_separable_mixture(
    n: u32,
    terms: usize,
    rng: &mut impl Rng,
    fixed_n_a: Option<u32>,
) -> Result<SectorMixture> {
    let mut weights: Vec<f64> = (0..terms)
        .map(|_| -(rng.gen_range(f64::EPSILON..1.0f64)).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut entries = Vec::with_capacity(terms);
    for w in weights {
        let n_a = match fixed_n_a {
            Some(k) => k,
            None => (0..n).map(|_| rng.gen_range(0..2u32)).sum(),
        };
        let sector = SpinSector::new(n_a, n - n_a);
        let a = SymmetricState::haar_random(n_a, rng);
        let b = SymmetricState::haar_random(n - n_a, rng);
        entries.push(MixtureEntry {
            weight: w,
            state: SectorState::product(sector, a.amplitudes(), b.amplitudes())?,
        });
    }
    SectorMixture::from_entries(n, SplitMode::Fixed, entries)
}
