//! First and second moments of the split collective spin.
//!
//! Raw moments are accumulated over mixture sectors; normalized components
//! J_l^s/√(j_s(j_s+1)) are evaluated per sector before mixing, so variances
//! are always variances of the full mixture, never averages of sector
//! variances. Inference variances, optimal gains, planar averages and the
//! closed-form split-Dicke expressions live here too.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::LogFactorials;
use crate::spin::{apply_half, Axis, Half, SpinSector};
use crate::split::SectorMixture;
use crate::states::{dot, SectorBody, SectorState, SymmetricState};

pub const AX_X: usize = 0;
pub const AX_Y: usize = 1;
pub const AX_Z: usize = 2;

pub const AXES: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

/// Gains of the three estimators J_l,est^a = −g_l J_l^b.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GainVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GainVector {
    pub fn get(&self, axis: usize) -> f64 {
        [self.x, self.y, self.z][axis]
    }
}

/// Every first moment, second moment, correlation and covariance of the
/// split collective spin, raw and normalized, for one state.
///
/// Axis arrays are ordered (x, y, z); normalized arrays carry (x, y) only,
/// since normalization is defined in the plane.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MomentSet {
    pub n_total: u32,
    pub mode: String,

    pub mean_a: [f64; 3],
    pub mean_b: [f64; 3],
    pub second_a: [f64; 3],
    pub second_b: [f64; 3],
    /// ⟨J_l^a J_l^b⟩
    pub cross: [f64; 3],

    pub norm_mean_a: [f64; 2],
    pub norm_mean_b: [f64; 2],
    pub norm_second_a: [f64; 2],
    pub norm_second_b: [f64; 2],
    pub norm_cross: [f64; 2],

    pub mean_sum: [f64; 3],
    pub mean_diff: [f64; 3],
    pub second_sum: [f64; 3],
    pub second_diff: [f64; 3],
    pub var_sum: [f64; 3],
    pub var_diff: [f64; 3],
    pub var_a: [f64; 3],
    pub var_b: [f64; 3],
    pub cov: [f64; 3],

    pub norm_mean_sum: [f64; 2],
    pub norm_mean_diff: [f64; 2],
    pub norm_second_sum: [f64; 2],
    pub norm_second_diff: [f64; 2],
    pub norm_var_sum: [f64; 2],
    pub norm_var_diff: [f64; 2],
    pub norm_var_a: [f64; 2],
    pub norm_var_b: [f64; 2],
    pub norm_cov: [f64; 2],

    /// ⟨(𝒥_⊥^+)²⟩, ⟨(𝒥_⊥^−)²⟩, ⟨(𝒥_⊥^a)²⟩
    pub planar_second_sum: f64,
    pub planar_second_diff: f64,
    pub planar_second_a: f64,

    /// Fields populated from approximate closed forms (empty when numeric).
    pub approximate_fields: Vec<String>,
}

impl MomentSet {
    fn finish(&mut self) {
        for l in 0..3 {
            self.mean_sum[l] = self.mean_a[l] + self.mean_b[l];
            self.mean_diff[l] = self.mean_a[l] - self.mean_b[l];
            self.second_sum[l] = self.second_a[l] + self.second_b[l] + 2.0 * self.cross[l];
            self.second_diff[l] = self.second_a[l] + self.second_b[l] - 2.0 * self.cross[l];
            self.var_sum[l] = self.second_sum[l] - self.mean_sum[l] * self.mean_sum[l];
            self.var_diff[l] = self.second_diff[l] - self.mean_diff[l] * self.mean_diff[l];
            self.var_a[l] = self.second_a[l] - self.mean_a[l] * self.mean_a[l];
            self.var_b[l] = self.second_b[l] - self.mean_b[l] * self.mean_b[l];
            self.cov[l] = self.cross[l] - self.mean_a[l] * self.mean_b[l];
        }
        for l in 0..2 {
            self.norm_mean_sum[l] = self.norm_mean_a[l] + self.norm_mean_b[l];
            self.norm_mean_diff[l] = self.norm_mean_a[l] - self.norm_mean_b[l];
            self.norm_second_sum[l] =
                self.norm_second_a[l] + self.norm_second_b[l] + 2.0 * self.norm_cross[l];
            self.norm_second_diff[l] =
                self.norm_second_a[l] + self.norm_second_b[l] - 2.0 * self.norm_cross[l];
            self.norm_var_sum[l] =
                self.norm_second_sum[l] - self.norm_mean_sum[l] * self.norm_mean_sum[l];
            self.norm_var_diff[l] =
                self.norm_second_diff[l] - self.norm_mean_diff[l] * self.norm_mean_diff[l];
            self.norm_var_a[l] =
                self.norm_second_a[l] - self.norm_mean_a[l] * self.norm_mean_a[l];
            self.norm_var_b[l] =
                self.norm_second_b[l] - self.norm_mean_b[l] * self.norm_mean_b[l];
            self.norm_cov[l] = self.norm_cross[l] - self.norm_mean_a[l] * self.norm_mean_b[l];
        }
        self.planar_second_sum = (self.norm_second_sum[0] + self.norm_second_sum[1]) / 2.0;
        self.planar_second_diff = (self.norm_second_diff[0] + self.norm_second_diff[1]) / 2.0;
        self.planar_second_a = (self.norm_second_a[0] + self.norm_second_a[1]) / 2.0;
    }

    /// ⟨J_x²⟩ + ⟨J_y²⟩ of the whole ensemble.
    pub fn xy_second_sum(&self) -> f64 {
        self.second_sum[AX_X] + self.second_sum[AX_Y]
    }

    /// E = ⟨𝒥_x²⟩ + ⟨𝒥_y²⟩.
    pub fn e_norm(&self) -> f64 {
        self.norm_second_sum[0] + self.norm_second_sum[1]
    }

    /// E_a = ⟨(𝒥_x^a)²⟩ + ⟨(𝒥_y^a)²⟩.
    pub fn e_a_norm(&self) -> f64 {
        self.norm_second_a[0] + self.norm_second_a[1]
    }

    /// V = var(𝒥_x^−) + var(𝒥_y^−).
    pub fn v_norm(&self) -> f64 {
        self.norm_var_diff[0] + self.norm_var_diff[1]
    }

    /// Every scalar field with its name, for field-wise comparisons.
    pub fn fields(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        let axes3 = ["x", "y", "z"];
        let axes2 = ["x", "y"];
        let mut push3 = |name: &str, arr: &[f64; 3]| {
            for (l, ax) in axes3.iter().enumerate() {
                out.push((format!("{name}_{ax}"), arr[l]));
            }
        };
        push3("mean_a", &self.mean_a);
        push3("mean_b", &self.mean_b);
        push3("second_a", &self.second_a);
        push3("second_b", &self.second_b);
        push3("cross", &self.cross);
        push3("mean_sum", &self.mean_sum);
        push3("mean_diff", &self.mean_diff);
        push3("second_sum", &self.second_sum);
        push3("second_diff", &self.second_diff);
        push3("var_sum", &self.var_sum);
        push3("var_diff", &self.var_diff);
        push3("var_a", &self.var_a);
        push3("var_b", &self.var_b);
        push3("cov", &self.cov);
        let mut push2 = |name: &str, arr: &[f64; 2]| {
            for (l, ax) in axes2.iter().enumerate() {
                out.push((format!("{name}_{ax}"), arr[l]));
            }
        };
        push2("norm_mean_a", &self.norm_mean_a);
        push2("norm_mean_b", &self.norm_mean_b);
        push2("norm_second_a", &self.norm_second_a);
        push2("norm_second_b", &self.norm_second_b);
        push2("norm_cross", &self.norm_cross);
        push2("norm_mean_sum", &self.norm_mean_sum);
        push2("norm_mean_diff", &self.norm_mean_diff);
        push2("norm_second_sum", &self.norm_second_sum);
        push2("norm_second_diff", &self.norm_second_diff);
        push2("norm_var_sum", &self.norm_var_sum);
        push2("norm_var_diff", &self.norm_var_diff);
        push2("norm_var_a", &self.norm_var_a);
        push2("norm_var_b", &self.norm_var_b);
        push2("norm_cov", &self.norm_cov);
        out.push(("planar_second_sum".into(), self.planar_second_sum));
        out.push(("planar_second_diff".into(), self.planar_second_diff));
        out.push(("planar_second_a".into(), self.planar_second_a));
        out
    }
}

struct RawSector {
    mean_a: [f64; 3],
    mean_b: [f64; 3],
    second_a: [f64; 3],
    second_b: [f64; 3],
    cross: [f64; 3],
}

fn sector_raw(state: &SectorState) -> RawSector {
    let sector = state.sector();
    let mut out = RawSector {
        mean_a: [0.0; 3],
        mean_b: [0.0; 3],
        second_a: [0.0; 3],
        second_b: [0.0; 3],
        cross: [0.0; 3],
    };
    match state.body() {
        SectorBody::Pure(psi) => {
            for (l, axis) in AXES.into_iter().enumerate() {
                let u = apply_half(sector, psi, axis, Half::A);
                let v = apply_half(sector, psi, axis, Half::B);
                out.mean_a[l] = dot(psi, &u).re;
                out.mean_b[l] = dot(psi, &v).re;
                out.second_a[l] = dot(&u, &u).re;
                out.second_b[l] = dot(&v, &v).re;
                out.cross[l] = dot(&u, &v).re;
            }
        }
        SectorBody::Mixed(dm) => {
            let dim = sector.dim();
            let apply_cols = |m: &[Complex64], axis: Axis, half: Half| -> Vec<Complex64> {
                let mut res = vec![Complex64::new(0.0, 0.0); dim * dim];
                let mut col = vec![Complex64::new(0.0, 0.0); dim];
                for c in 0..dim {
                    for r in 0..dim {
                        col[r] = m[r * dim + c];
                    }
                    let applied = apply_half(sector, &col, axis, half);
                    for r in 0..dim {
                        res[r * dim + c] = applied[r];
                    }
                }
                res
            };
            let trace = |m: &[Complex64]| -> f64 {
                (0..dim).map(|i| m[i * dim + i].re).sum()
            };
            for (l, axis) in AXES.into_iter().enumerate() {
                let a_rho = apply_cols(dm, axis, Half::A);
                let b_rho = apply_cols(dm, axis, Half::B);
                out.mean_a[l] = trace(&a_rho);
                out.mean_b[l] = trace(&b_rho);
                out.second_a[l] = trace(&apply_cols(&a_rho, axis, Half::A));
                out.second_b[l] = trace(&apply_cols(&b_rho, axis, Half::B));
                out.cross[l] = trace(&apply_cols(&b_rho, axis, Half::A));
            }
        }
    }
    out
}

/// Evaluates the full moment catalog for a sector mixture.
pub fn moment_set(mix: &SectorMixture) -> MomentSet {
    let parts: Vec<(f64, SpinSector, RawSector)> = mix
        .entries()
        .par_iter()
        .map(|e| (e.weight, e.state.sector(), sector_raw(&e.state)))
        .collect();
    let mut ms = MomentSet {
        n_total: mix.n(),
        mode: mix.mode().label(),
        ..Default::default()
    };
    for (w, sector, raw) in &parts {
        let (ka, kb) = (
            sector.j_a() * (sector.j_a() + 1.0),
            sector.j_b() * (sector.j_b() + 1.0),
        );
        let (na, nb) = (ka.sqrt(), kb.sqrt());
        for l in 0..3 {
            ms.mean_a[l] += w * raw.mean_a[l];
            ms.mean_b[l] += w * raw.mean_b[l];
            ms.second_a[l] += w * raw.second_a[l];
            ms.second_b[l] += w * raw.second_b[l];
            ms.cross[l] += w * raw.cross[l];
        }
        for l in 0..2 {
            if ka > 0.0 {
                ms.norm_mean_a[l] += w * raw.mean_a[l] / na;
                ms.norm_second_a[l] += w * raw.second_a[l] / ka;
            }
            if kb > 0.0 {
                ms.norm_mean_b[l] += w * raw.mean_b[l] / nb;
                ms.norm_second_b[l] += w * raw.second_b[l] / kb;
            }
            if ka > 0.0 && kb > 0.0 {
                ms.norm_cross[l] += w * raw.cross[l] / (na * nb);
            }
        }
    }
    ms.finish();
    ms
}

/// Collective moments of an unsplit symmetric state, embedded as the
/// (n, 0) sector so the sum-side fields carry the collective values.
pub fn moment_set_symmetric(state: &SymmetricState) -> Result<MomentSet> {
    let split = crate::split::split_exact(state, state.n())?;
    Ok(moment_set(&SectorMixture::single(split)))
}

/// Variance of J_l^a + g J_l^b (raw) or of 𝒥_l^a − γ 𝒥_l^b (normalized).
pub fn inference_variance(ms: &MomentSet, axis: usize, gain: f64, normalized: bool) -> Result<f64> {
    if normalized {
        if axis == AX_Z {
            return Err(Error::invalid(
                "normalized components are defined only in the x-y plane",
            ));
        }
        let second = ms.norm_second_a[axis] + gain * gain * ms.norm_second_b[axis]
            - 2.0 * gain * ms.norm_cross[axis];
        let mean = ms.norm_mean_a[axis] - gain * ms.norm_mean_b[axis];
        Ok(second - mean * mean)
    } else {
        let second = ms.second_a[axis] + gain * gain * ms.second_b[axis]
            + 2.0 * gain * ms.cross[axis];
        let mean = ms.mean_a[axis] + gain * ms.mean_b[axis];
        Ok(second - mean * mean)
    }
}

fn degenerate(var_b: f64, scale: f64) -> bool {
    var_b <= 1e-12 * scale.abs().max(1.0)
}

/// g_l = −Cov(J_l^a, J_l^b)/var(J_l^b), the variance-minimizing gain.
///
/// When var(J_l^b) vanishes the covariance vanishes with it and every gain
/// is optimal; 0 is returned. A vanishing variance with nonzero covariance
/// is reported as a degenerate-variance error.
pub fn optimal_gain(ms: &MomentSet, axis: usize) -> Result<f64> {
    let var_b = ms.var_b[axis];
    if degenerate(var_b, ms.second_b[axis]) {
        if ms.cov[axis].abs() <= 1e-9 * ms.second_b[axis].abs().max(1.0) {
            return Ok(0.0);
        }
        return Err(Error::DegenerateVariance(format!(
            "var(J_{}^b) = {var_b:e} with nonzero covariance",
            ["x", "y", "z"][axis]
        )));
    }
    Ok(-ms.cov[axis] / var_b)
}

/// γ_l = Cov(𝒥_l^a, 𝒥_l^b)/var(𝒥_l^b) for the estimator 𝒥_l,est^a = γ_l 𝒥_l^b.
pub fn optimal_normalized_gain(ms: &MomentSet, axis: usize) -> Result<f64> {
    if axis == AX_Z {
        return Err(Error::invalid(
            "normalized components are defined only in the x-y plane",
        ));
    }
    let var_b = ms.norm_var_b[axis];
    if degenerate(var_b, ms.norm_second_b[axis]) {
        if ms.norm_cov[axis].abs() <= 1e-9 * ms.norm_second_b[axis].abs().max(1.0) {
            return Ok(0.0);
        }
        return Err(Error::DegenerateVariance(format!(
            "var(𝒥_{}^b) = {var_b:e} with nonzero covariance",
            ["x", "y"][axis]
        )));
    }
    Ok(ms.norm_cov[axis] / var_b)
}

/// Which normalized planar combination an average refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanarCombo {
    Plus,
    Minus,
    SingleA,
}

/// Angle-averaged m-th moment of 𝒥_α for the requested combination. The
/// first moment vanishes identically; the second is the half-sum of the x
/// and y moments.
pub fn planar_average(ms: &MomentSet, combo: PlanarCombo, order: u8) -> Result<f64> {
    match order {
        1 => Ok(0.0),
        2 => Ok(match combo {
            PlanarCombo::Plus => ms.planar_second_sum,
            PlanarCombo::Minus => ms.planar_second_diff,
            PlanarCombo::SingleA => ms.planar_second_a,
        }),
        _ => Err(Error::invalid("planar averages are defined for orders 1 and 2")),
    }
}

/// Numeric ⟨(𝒥_α^combo)²⟩ at a fixed angle α, for quadrature checks.
pub fn planar_second_moment_at_angle(
    mix: &SectorMixture,
    alpha: f64,
    combo: PlanarCombo,
) -> Result<f64> {
    let mut acc = 0.0;
    for e in mix.entries() {
        let psi = e
            .state
            .pure_amplitudes()
            .ok_or_else(|| Error::invalid("angle-resolved moments need pure sector bodies"))?;
        let sector = e.state.sector();
        let (fa, fb) = (
            sector.norm_factor(Half::A),
            sector.norm_factor(Half::B),
        );
        let axis = Axis::Planar(alpha);
        let ua = apply_half(sector, psi, axis, Half::A);
        let ub = apply_half(sector, psi, axis, Half::B);
        let dim = psi.len();
        let mut combined = vec![Complex64::new(0.0, 0.0); dim];
        for i in 0..dim {
            let a = if fa > 0.0 { ua[i] / fa } else { Complex64::new(0.0, 0.0) };
            let b = if fb > 0.0 { ub[i] / fb } else { Complex64::new(0.0, 0.0) };
            combined[i] = match combo {
                PlanarCombo::Plus => a + b,
                PlanarCombo::Minus => a - b,
                PlanarCombo::SingleA => a,
            };
        }
        acc += e.weight * dot(&combined, &combined).re;
    }
    Ok(acc)
}

/// Splitting model for the closed-form Dicke moments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DickeSplit {
    /// Fixed imbalance δ = N_a − N/2.
    Exact(f64),
    /// Binomially distributed N_a.
    Binomial,
}

/// Closed-form moments, exact at every N, plus coarser large-N
/// approximations of selected fields; the latter are kept out of
/// exact-equivalence tests and only enter loose-tolerance checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalyticDickeMoments {
    pub moments: MomentSet,
    pub large_n_approximations: Vec<(String, f64)>,
}

/// Closed-form split-Dicke moments at fixed δ or binomially averaged.
pub fn analytic_dicke_moments(n: u32, split: DickeSplit) -> Result<AnalyticDickeMoments> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::invalid("closed forms require an even particle count >= 2"));
    }
    let nf = n as f64;
    let mut ms = MomentSet {
        n_total: n,
        ..Default::default()
    };
    let mut approx = Vec::new();
    match split {
        DickeSplit::Exact(delta) => {
            let n_a = nf / 2.0 + delta;
            if delta.fract() != 0.0 || n_a < 0.0 || n_a > nf {
                return Err(Error::invalid(format!(
                    "imbalance {delta} does not give an integer occupation in [0, {n}]"
                )));
            }
            ms.mode = format!("exact:{}", n_a as u32);
            accumulate_exact_sector(&mut ms, nf, delta, 1.0);
            for (l, ax) in ["x", "y"].iter().enumerate() {
                let _ = l;
                approx.push((format!("var_diff_{ax}"), nf / 8.0 + delta * delta / 2.0));
                approx.push((
                    format!("norm_var_diff_{ax}"),
                    nf / (nf * nf / 2.0 - delta * delta),
                ));
                let j_a = n_a / 2.0;
                approx.push((
                    format!("norm_second_a_{ax}"),
                    1.0 / (2.0 * (j_a + 1.0)) + 4.0 * pair_corr_xy(nf),
                ));
            }
        }
        DickeSplit::Binomial => {
            ms.mode = "binomial".into();
            let lf = LogFactorials::new(n as usize);
            let ln2n = nf * std::f64::consts::LN_2;
            for k in 0..=n as usize {
                let w = (lf.ln_binomial(n as usize, k) - ln2n).exp();
                let delta = k as f64 - nf / 2.0;
                accumulate_exact_sector(&mut ms, nf, delta, w);
            }
            for ax in ["x", "y"] {
                approx.push((format!("norm_var_diff_{ax}"), 2.0 / nf));
            }
        }
    }
    ms.finish();
    Ok(AnalyticDickeMoments {
        moments: ms,
        large_n_approximations: approx,
    })
}

fn pair_corr_xy(n: f64) -> f64 {
    n / (8.0 * (n - 1.0))
}

fn pair_corr_z(n: f64) -> f64 {
    -1.0 / (4.0 * (n - 1.0))
}

/// Adds one fixed-δ sector's closed-form moments with the given weight.
fn accumulate_exact_sector(ms: &mut MomentSet, n: f64, delta: f64, w: f64) {
    let n_a = n / 2.0 + delta;
    let n_b = n / 2.0 - delta;
    let corr = [pair_corr_xy(n), pair_corr_xy(n), pair_corr_z(n)];
    let kappa_a = (n_a / 2.0) * (n_a / 2.0 + 1.0);
    let kappa_b = (n_b / 2.0) * (n_b / 2.0 + 1.0);
    for l in 0..3 {
        let sec_a = n_a / 4.0 + n_a * (n_a - 1.0) * corr[l];
        let sec_b = n_b / 4.0 + n_b * (n_b - 1.0) * corr[l];
        let cross = (n * n / 4.0 - delta * delta) * corr[l];
        ms.second_a[l] += w * sec_a;
        ms.second_b[l] += w * sec_b;
        ms.cross[l] += w * cross;
        if l < 2 {
            if kappa_a > 0.0 {
                ms.norm_second_a[l] += w * sec_a / kappa_a;
            }
            if kappa_b > 0.0 {
                ms.norm_second_b[l] += w * sec_b / kappa_b;
            }
            if kappa_a > 0.0 && kappa_b > 0.0 {
                ms.norm_cross[l] += w * cross / (kappa_a * kappa_b).sqrt();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::split::{split_binomial, split_exact, SplitMode};
    use crate::states::{product_dicke, PolarizationAxis};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dicke_mix(n: u32, binomial: bool) -> SectorMixture {
        let d = SymmetricState::dicke(n).unwrap();
        if binomial {
            split_binomial(&d, 1e-12).unwrap()
        } else {
            SectorMixture::single(split_exact(&d, n / 2).unwrap())
        }
    }

    #[test]
    fn split_dicke_cross_correlation_at_four() {
        let ms = moment_set(&dicke_mix(4, false));
        assert!((ms.cross[AX_X] - 2.0 / 3.0).abs() < 1e-12);
        assert!((ms.var_diff[AX_X] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn binomial_split_dicke_local_moments_at_hundred() {
        let ms = moment_set(&dicke_mix(100, true));
        assert!((ms.second_a[AX_X] - 325.0).abs() < 1e-9);
        assert!((ms.cross[AX_Z] + 6.25).abs() < 1e-10);
        assert!((ms.var_diff[AX_X] - 25.0).abs() < 1e-9);
        assert!(ms.cross[AX_X] > 0.0);
        assert!(ms.cross[AX_Z] < 0.0);
    }

    #[test]
    fn normalized_difference_variance_approaches_two_over_n() {
        let ms = moment_set(&dicke_mix(400, true));
        let target = 2.0 / 400.0;
        assert!((ms.norm_var_diff[0] - target).abs() / target < 0.05);
    }

    #[test]
    fn sum_variance_rule_recombines() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let state = SymmetricState::haar_random(8, &mut rng);
        let ms = moment_set(&SectorMixture::single(split_exact(&state, 3).unwrap()));
        for l in 0..3 {
            let plus = ms.var_a[l] + ms.var_b[l] - 2.0 * ms.cross[l] + 2.0 * ms.mean_a[l] * ms.mean_b[l];
            assert!((plus - ms.var_diff[l]).abs() < 1e-10);
            let minus = ms.var_a[l] + ms.var_b[l] + 2.0 * ms.cross[l] - 2.0 * ms.mean_a[l] * ms.mean_b[l];
            assert!((minus - ms.var_sum[l]).abs() < 1e-10);
            assert!(ms.second_a[l] + 1e-12 >= ms.mean_a[l] * ms.mean_a[l]);
        }
    }

    #[test]
    fn inference_variance_examples() {
        let ms4 = moment_set(&dicke_mix(4, false));
        assert!(inference_variance(&ms4, AX_Z, 1.0, false).unwrap().abs() < 1e-12);

        let x100 = split_binomial(
            &SymmetricState::polarized(100, PolarizationAxis::X).unwrap(),
            1e-12,
        )
        .unwrap();
        let msx = moment_set(&x100);
        let v = inference_variance(&msx, AX_Z, 0.0, false).unwrap();
        assert!((v - 12.5).abs() < 1e-9);

        let ms100 = moment_set(&dicke_mix(100, true));
        let g = -100.0 / 104.0;
        let inf = inference_variance(&ms100, AX_X, g, false).unwrap();
        let by_parts = ms100.second_a[AX_X]
            - ms100.cross[AX_X] * ms100.cross[AX_X] / ms100.second_b[AX_X];
        assert!((inf - by_parts).abs() < 1e-9);
    }

    #[test]
    fn optimal_gains_for_split_dicke() {
        let ms = moment_set(&dicke_mix(100, true));
        assert!((optimal_gain(&ms, AX_X).unwrap() + 100.0 / 104.0).abs() < 1e-10);
        assert!((optimal_gain(&ms, AX_Y).unwrap() + 100.0 / 104.0).abs() < 1e-10);
        assert!((optimal_gain(&ms, AX_Z).unwrap() - 1.0).abs() < 1e-10);

        let pd = moment_set(&SectorMixture::single(product_dicke(8).unwrap()));
        for axis in 0..3 {
            assert_eq!(optimal_gain(&pd, axis).unwrap(), 0.0);
        }
    }

    #[test]
    fn optimal_gain_minimizes_and_zero_gain_reduces() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ms = moment_set(&dicke_mix(20, true));
        for axis in 0..3 {
            let g_opt = optimal_gain(&ms, axis).unwrap();
            let best = inference_variance(&ms, axis, g_opt, false).unwrap();
            for _ in 0..100 {
                let g: f64 = rng.gen_range(-3.0..3.0);
                let v = inference_variance(&ms, axis, g, false).unwrap();
                assert!(best <= v + 1e-12);
            }
            let at_zero = inference_variance(&ms, axis, 0.0, false).unwrap();
            assert!((at_zero - ms.var_a[axis]).abs() < 1e-12);
        }
    }

    #[test]
    fn planar_average_matches_quadrature() {
        let mix = dicke_mix(40, true);
        let ms = moment_set(&mix);
        for combo in [PlanarCombo::Plus, PlanarCombo::Minus, PlanarCombo::SingleA] {
            assert_eq!(planar_average(&ms, combo, 1).unwrap(), 0.0);
            let closed = planar_average(&ms, combo, 2).unwrap();
            let steps = 256;
            let quad: f64 = (0..steps)
                .map(|i| {
                    let alpha = std::f64::consts::TAU * i as f64 / steps as f64;
                    planar_second_moment_at_angle(&mix, alpha, combo).unwrap()
                })
                .sum::<f64>()
                / steps as f64;
            assert!((closed - quad).abs() < 1e-10, "combo {combo:?}: {closed} vs {quad}");
        }
    }

    #[test]
    fn analytic_matches_numeric_at_small_n() {
        for n in [4u32, 6, 8] {
            for delta in [0.0, 1.0] {
                let n_a = n / 2 + delta as u32;
                let numeric = moment_set(&SectorMixture::single(
                    split_exact(&SymmetricState::dicke(n).unwrap(), n_a).unwrap(),
                ));
                let analytic = analytic_dicke_moments(n, DickeSplit::Exact(delta)).unwrap();
                for ((name, a), (_, b)) in
                    analytic.moments.fields().iter().zip(numeric.fields())
                {
                    assert!((a - b).abs() < 1e-10, "n={n} δ={delta} field {name}: {a} vs {b}");
                }
            }
            let numeric = moment_set(&dicke_mix(n, true));
            let analytic = analytic_dicke_moments(n, DickeSplit::Binomial).unwrap();
            for ((name, a), (_, b)) in analytic.moments.fields().iter().zip(numeric.fields()) {
                assert!((a - b).abs() < 1e-10, "n={n} binomial field {name}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn analytic_binomial_closed_values() {
        let a = analytic_dicke_moments(100, DickeSplit::Binomial).unwrap();
        assert!((a.moments.second_a[AX_X] - 100.0 * 104.0 / 32.0).abs() < 1e-9);
        assert!((a.moments.second_a[AX_Z] - 100.0 / 16.0).abs() < 1e-10);
        assert!((a.moments.cross[AX_X] - 10_000.0 / 32.0).abs() < 1e-9);
        assert!((a.moments.var_diff[AX_X] - 25.0).abs() < 1e-9);
        let approx: std::collections::BTreeMap<_, _> =
            a.large_n_approximations.iter().cloned().collect();
        assert!((approx["norm_var_diff_x"] - 0.02).abs() < 1e-12);
    }

    #[test]
    fn analytic_exact_delta_forms() {
        let a = analytic_dicke_moments(6, DickeSplit::Exact(0.0)).unwrap();
        let bound = 2.25;
        assert!(a.moments.cross[AX_X] < bound);
        assert!((a.moments.cross[AX_X] - 27.0 / 20.0).abs() < 1e-12);
        let a4 = analytic_dicke_moments(4, DickeSplit::Exact(0.0)).unwrap();
        assert!((a4.moments.var_diff[AX_X] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_body_agrees_with_pure_ensemble() {
        let sector = crate::spin::SpinSector::new(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let states: Vec<SectorState> = (0..2)
            .map(|_| {
                let a = SymmetricState::haar_random(2, &mut rng);
                let b = SymmetricState::haar_random(2, &mut rng);
                SectorState::product(sector, a.amplitudes(), b.amplitudes()).unwrap()
            })
            .collect();
        let weights = [0.25, 0.75];
        let dim = sector.dim();
        let mut dm = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (w, s) in weights.iter().zip(&states) {
            let amps = s.pure_amplitudes().unwrap();
            for i in 0..dim {
                for j in 0..dim {
                    dm[i * dim + j] += w * amps[i] * amps[j].conj();
                }
            }
        }
        let mixed = moment_set(&SectorMixture::single(
            SectorState::mixed(sector, dm).unwrap(),
        ));
        let ensemble = moment_set(
            &SectorMixture::from_entries(
                4,
                SplitMode::Fixed,
                weights
                    .iter()
                    .zip(states)
                    .map(|(&w, s)| crate::split::MixtureEntry { weight: w, state: s })
                    .collect(),
            )
            .unwrap(),
        );
        for ((name, a), (_, b)) in mixed.fields().iter().zip(ensemble.fields()) {
            assert!((a - b).abs() < 1e-10, "field {name}");
        }
    }

    #[test]
    fn symmetric_embedding_matches_direct_moments() {
        let s = SymmetricState::one_axis_twisted(12, 0.2).unwrap();
        let ms = moment_set_symmetric(&s).unwrap();
        for (l, axis) in AXES.into_iter().enumerate() {
            assert!((ms.mean_sum[l] - s.expect(axis, 1)).abs() < 1e-11);
            assert!((ms.second_sum[l] - s.expect(axis, 2)).abs() < 1e-11);
        }
    }
}
