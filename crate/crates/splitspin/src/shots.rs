//! Synthetic measurement shots, CSV ingestion and bootstrap estimation.
//!
//! Each shot measures one commuting pair (O^a, O^b) jointly: either the two
//! z components, or the two in-plane components J_α at a fresh uniform angle
//! shared by both halves. Estimates normalize per shot by that shot's
//! (n_a, n_b), which is what cancels partition noise in the difference
//! variance. Sampling is deterministic per (seed, shot index), so shot lists
//! are reproducible and generation parallelizes by index.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{CriterionReport, Sense, StateMeta};
use crate::error::{Error, Result};
use crate::spectral::{transform_both_sides, x_basis, XBasis};
use crate::spin::mz_of;
use crate::split::SectorMixture;

/// Hard cap on the total particle number for shot synthesis.
pub const MAX_SHOT_N: u32 = 200;

/// Exact header of the shot-record CSV schema.
pub const CSV_HEADER: &str = "shot_id,setting,alpha_rad,n_a,n_b,value_a,value_b";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Z,
    Planar,
}

impl Setting {
    fn label(&self) -> &'static str {
        match self {
            Setting::Z => "z",
            Setting::Planar => "planar",
        }
    }
}

/// One joint measurement outcome on the two halves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub shot_id: u64,
    pub setting: Setting,
    /// Present exactly for planar shots.
    pub alpha: Option<f64>,
    pub n_a: u32,
    pub n_b: u32,
    pub value_a: f64,
    pub value_b: f64,
}

impl ShotRecord {
    fn validate(&self) -> Result<()> {
        for (v, n) in [(self.value_a, self.n_a), (self.value_b, self.n_b)] {
            if (2.0 * v - (2.0 * v).round()).abs() > 1e-9 || v.abs() > n as f64 / 2.0 + 1e-9 {
                return Err(Error::invalid(format!(
                    "outcome {v} is not an eigenvalue for n = {n}"
                )));
            }
        }
        match (self.setting, self.alpha) {
            (Setting::Z, None) => Ok(()),
            (Setting::Planar, Some(a)) if (0.0..std::f64::consts::TAU).contains(&a) => Ok(()),
            (Setting::Planar, Some(a)) => {
                Err(Error::invalid(format!("angle {a} outside [0, 2π)")))
            }
            _ => Err(Error::invalid("angle must be present exactly for planar shots")),
        }
    }
}

fn shot_rng(seed: u64, index: u64) -> ChaCha8Rng {
    // splitmix64 of the pair keeps per-index streams independent
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

fn snap_half_integer(v: f64) -> f64 {
    (2.0 * v).round() / 2.0
}

fn draw_index(cdf: &[f64], u: f64) -> usize {
    match cdf.binary_search_by(|p| p.partial_cmp(&u).unwrap()) {
        Ok(i) => (i + 1).min(cdf.len() - 1),
        Err(i) => i.min(cdf.len() - 1),
    }
}

/// Samples joint measurement shots from a sector mixture: `n_z` shots of
/// (J_z^a, J_z^b) followed by `n_planar` shots of (J_α^a, J_α^b) at fresh
/// uniform angles.
pub fn sample_shots(
    mix: &SectorMixture,
    n_z: usize,
    n_planar: usize,
    seed: u64,
) -> Result<Vec<ShotRecord>> {
    if mix.n() > MAX_SHOT_N {
        return Err(Error::ResourceLimit(format!(
            "shot synthesis limited to N ≤ {MAX_SHOT_N}, got {}",
            mix.n()
        )));
    }
    let entries = mix.entries();
    let mut sector_cdf = Vec::with_capacity(entries.len());
    let mut acc = 0.0;
    for e in entries {
        acc += e.weight;
        sector_cdf.push(acc);
    }
    // per-sector z-basis outcome distributions
    let mut z_cdfs = Vec::with_capacity(entries.len());
    let mut bases: HashMap<usize, XBasis> = HashMap::new();
    for e in entries {
        let psi = e
            .state
            .pure_amplitudes()
            .ok_or_else(|| Error::invalid("shot synthesis needs pure sector bodies"))?;
        let mut cdf = Vec::with_capacity(psi.len());
        let mut run = 0.0;
        for a in psi {
            run += a.norm_sqr();
            cdf.push(run);
        }
        z_cdfs.push(cdf);
        let s = e.state.sector();
        bases.entry(s.dim_a()).or_insert_with(|| x_basis(s.dim_a()));
        bases.entry(s.dim_b()).or_insert_with(|| x_basis(s.dim_b()));
    }

    let total = n_z + n_planar;
    let records: Vec<ShotRecord> = (0..total as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rng = shot_rng(seed, idx);
            let which = draw_index(&sector_cdf, rng.gen::<f64>());
            let state = &entries[which].state;
            let sector = state.sector();
            let (da, db) = (sector.dim_a(), sector.dim_b());
            if (idx as usize) < n_z {
                let flat = draw_index(&z_cdfs[which], rng.gen::<f64>());
                let (ka, kb) = (flat / db, flat % db);
                ShotRecord {
                    shot_id: idx,
                    setting: Setting::Z,
                    alpha: None,
                    n_a: sector.n_a,
                    n_b: sector.n_b,
                    value_a: snap_half_integer(mz_of(da, ka)),
                    value_b: snap_half_integer(mz_of(db, kb)),
                }
            } else {
                let alpha = rng.gen_range(0.0..std::f64::consts::TAU);
                let psi = state.pure_amplitudes().unwrap();
                // measuring J_α is measuring J_x on the state rotated by −α about z
                let mut rotated = vec![Complex64::new(0.0, 0.0); da * db];
                for ka in 0..da {
                    let pa = Complex64::from_polar(1.0, alpha * mz_of(da, ka));
                    for kb in 0..db {
                        let pb = Complex64::from_polar(1.0, alpha * mz_of(db, kb));
                        rotated[ka * db + kb] = psi[ka * db + kb] * pa * pb;
                    }
                }
                let ba = &bases[&da];
                let bb = &bases[&db];
                let phi = transform_both_sides(da, db, &ba.vectors, &bb.vectors, &rotated);
                let mut u = rng.gen::<f64>();
                let mut flat = phi.len() - 1;
                for (i, amp) in phi.iter().enumerate() {
                    u -= amp.norm_sqr();
                    if u <= 0.0 {
                        flat = i;
                        break;
                    }
                }
                let (ra, rb) = (flat / db, flat % db);
                ShotRecord {
                    shot_id: idx,
                    setting: Setting::Planar,
                    alpha: Some(alpha),
                    n_a: sector.n_a,
                    n_b: sector.n_b,
                    value_a: snap_half_integer(ba.values[ra]),
                    value_b: snap_half_integer(bb.values[rb]),
                }
            }
        })
        .collect();
    Ok(records)
}

pub fn write_csv(records: &[ShotRecord], mut w: impl Write) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        let alpha = r.alpha.map(|a| a.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.shot_id,
            r.setting.label(),
            alpha,
            r.n_a,
            r.n_b,
            r.value_a,
            r.value_b
        )?;
    }
    Ok(())
}

pub fn write_csv_path(records: &[ShotRecord], path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(records, std::io::BufWriter::new(file))
}

pub fn read_csv(r: impl BufRead) -> Result<Vec<ShotRecord>> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Csv("empty shot file".into()))??;
    if header.trim_end() != CSV_HEADER {
        return Err(Error::Csv(format!(
            "unexpected header '{header}', expected '{CSV_HEADER}'"
        )));
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Csv(format!(
                "line {}: expected 7 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse_f = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Csv(format!("line {}: bad {what} '{s}'", lineno + 2)))
        };
        let setting = match fields[1] {
            "z" => Setting::Z,
            "planar" => Setting::Planar,
            other => {
                return Err(Error::Csv(format!(
                    "line {}: unknown setting '{other}'",
                    lineno + 2
                )))
            }
        };
        let alpha = if fields[2].is_empty() {
            None
        } else {
            Some(parse_f(fields[2], "angle")?)
        };
        let rec = ShotRecord {
            shot_id: parse_f(fields[0], "shot id")? as u64,
            setting,
            alpha,
            n_a: parse_f(fields[3], "n_a")? as u32,
            n_b: parse_f(fields[4], "n_b")? as u32,
            value_a: parse_f(fields[5], "value_a")?,
            value_b: parse_f(fields[6], "value_b")?,
        };
        rec.validate()
            .map_err(|e| Error::Csv(format!("line {}: {e}", lineno + 2)))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Vec<ShotRecord>> {
    let file = std::fs::File::open(path)?;
    read_csv(std::io::BufReader::new(file))
}

/// A point estimate with a percentile bootstrap interval.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Estimated planar-protocol quantities with bootstrap replicates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EstimateSet {
    pub var_jz: Option<Estimate>,
    /// (Δ𝒥_⊥^−)²
    pub planar_var_diff: Option<Estimate>,
    /// ⟨(𝒥_⊥^+)²⟩
    pub planar_second_sum: Option<Estimate>,
    /// ⟨(𝒥_⊥^a)²⟩
    pub planar_second_a: Option<Estimate>,
    pub count_z: usize,
    pub count_planar: usize,
    pub mean_total_n: f64,
    /// Bootstrap replicates (var_jz, var_diff, second_sum, second_a).
    pub replicates: Vec<[f64; 4]>,
}

fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn percentile_interval(mut reps: Vec<f64>, point: f64) -> Estimate {
    reps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = |q: f64| ((reps.len() - 1) as f64 * q).round() as usize;
    let lo = reps[idx(0.16)];
    let hi = reps[idx(0.84)];
    Estimate {
        value: point,
        lo: lo.min(point),
        hi: hi.max(point),
    }
}

struct PlanarShotValues {
    diff: Vec<f64>,
    sum_sq: Vec<f64>,
    a_sq: Vec<f64>,
}

fn normalize_planar(records: &[&ShotRecord]) -> PlanarShotValues {
    let mut out = PlanarShotValues {
        diff: Vec::with_capacity(records.len()),
        sum_sq: Vec::with_capacity(records.len()),
        a_sq: Vec::with_capacity(records.len()),
    };
    for r in records {
        let norm = |v: f64, n: u32| -> f64 {
            let j = n as f64 / 2.0;
            let f = (j * (j + 1.0)).sqrt();
            if f > 0.0 {
                v / f
            } else {
                0.0
            }
        };
        let a = norm(r.value_a, r.n_a);
        let b = norm(r.value_b, r.n_b);
        out.diff.push(a - b);
        out.sum_sq.push((a + b) * (a + b));
        out.a_sq.push(a * a);
    }
    out
}

/// Point estimates and stratified percentile-bootstrap intervals from shot
/// records. Normalization uses each shot's own (n_a, n_b).
pub fn estimate(records: &[ShotRecord], bootstrap_reps: usize, seed: u64) -> Result<EstimateSet> {
    for r in records {
        r.validate()?;
    }
    let z_shots: Vec<&ShotRecord> = records.iter().filter(|r| r.setting == Setting::Z).collect();
    let planar_shots: Vec<&ShotRecord> = records
        .iter()
        .filter(|r| r.setting == Setting::Planar)
        .collect();
    if z_shots.len() == 1 || planar_shots.len() == 1 {
        return Err(Error::invalid("each used setting needs at least 2 shots"));
    }
    if z_shots.is_empty() && planar_shots.is_empty() {
        return Err(Error::invalid("no shots supplied"));
    }
    let total_n: f64 = records
        .iter()
        .map(|r| (r.n_a + r.n_b) as f64)
        .sum::<f64>()
        / records.len() as f64;

    let z_values: Vec<f64> = z_shots.iter().map(|r| r.value_a + r.value_b).collect();
    let planar = normalize_planar(&planar_shots);

    let point = [
        if z_values.is_empty() { f64::NAN } else { sample_variance(&z_values) },
        if planar.diff.is_empty() { f64::NAN } else { sample_variance(&planar.diff) },
        if planar.sum_sq.is_empty() { f64::NAN } else { mean(&planar.sum_sq) },
        if planar.a_sq.is_empty() { f64::NAN } else { mean(&planar.a_sq) },
    ];

    let replicates: Vec<[f64; 4]> = (0..bootstrap_reps as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = shot_rng(seed ^ 0x626f_6f74, rep);
            let resample = |values: &[f64], rng: &mut ChaCha8Rng| -> Vec<f64> {
                (0..values.len())
                    .map(|_| values[rng.gen_range(0..values.len())])
                    .collect()
            };
            let mut row = [f64::NAN; 4];
            if !z_values.is_empty() {
                row[0] = sample_variance(&resample(&z_values, &mut rng));
            }
            if !planar.diff.is_empty() {
                let idx: Vec<usize> = (0..planar.diff.len())
                    .map(|_| rng.gen_range(0..planar.diff.len()))
                    .collect();
                let d: Vec<f64> = idx.iter().map(|&i| planar.diff[i]).collect();
                let s: Vec<f64> = idx.iter().map(|&i| planar.sum_sq[i]).collect();
                let a: Vec<f64> = idx.iter().map(|&i| planar.a_sq[i]).collect();
                row[1] = sample_variance(&d);
                row[2] = mean(&s);
                row[3] = mean(&a);
            }
            row
        })
        .collect();

    let pick = |k: usize| -> Option<Estimate> {
        if point[k].is_nan() {
            None
        } else {
            Some(percentile_interval(
                replicates.iter().map(|r| r[k]).collect(),
                point[k],
            ))
        }
    };
    Ok(EstimateSet {
        var_jz: pick(0),
        planar_var_diff: pick(1),
        planar_second_sum: pick(2),
        planar_second_a: pick(3),
        count_z: z_shots.len(),
        count_planar: planar_shots.len(),
        mean_total_n: total_n,
        replicates,
    })
}

/// The two criteria evaluable from planar-protocol estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanarCriterion {
    /// [var(J_z)+1/4]·2(Δ𝒥_⊥^−)² ≥ ⟨(𝒥_⊥^+)²⟩/16.
    Entanglement,
    /// [var(J_z)+1/4]·2(Δ𝒥_⊥^−)² ≥ ⟨(𝒥_⊥^a)²⟩/4.
    Steering,
}

/// Bootstrap intervals attached to an estimator-level criterion report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportIntervals {
    pub lhs: (f64, f64),
    pub rhs: (f64, f64),
    pub ratio: (f64, f64),
}

/// Criterion report from estimates, including bootstrap intervals and the
/// fully-polarized reference values N/4 and 2/N.
pub fn evaluate_from_estimates(
    est: &EstimateSet,
    criterion: PlanarCriterion,
) -> Result<(CriterionReport, ReportIntervals)> {
    let var_jz = est
        .var_jz
        .ok_or_else(|| Error::invalid("estimate set lacks var(J_z)"))?;
    let pvd = est
        .planar_var_diff
        .ok_or_else(|| Error::invalid("estimate set lacks (Δ𝒥_⊥^−)²"))?;
    let (bound, divisor, label) = match criterion {
        PlanarCriterion::Entanglement => (
            est.planar_second_sum
                .ok_or_else(|| Error::invalid("estimate set lacks ⟨(𝒥_⊥^+)²⟩"))?,
            16.0,
            "planar-entanglement",
        ),
        PlanarCriterion::Steering => (
            est.planar_second_a
                .ok_or_else(|| Error::invalid("estimate set lacks ⟨(𝒥_⊥^a)²⟩"))?,
            4.0,
            "planar-steering",
        ),
    };
    let lhs = (var_jz.value + 0.25) * 2.0 * pvd.value;
    let rhs = bound.value / divisor;
    let n = est.mean_total_n;
    let mut components = std::collections::BTreeMap::new();
    components.insert("var_jz".into(), var_jz.value);
    components.insert("planar_var_diff".into(), pvd.value);
    components.insert("bound_moment".into(), bound.value);
    components.insert("reference_var_jz_fp".into(), n / 4.0);
    components.insert("reference_planar_var_diff_fp".into(), 2.0 / n);

    let mut lhs_reps = Vec::with_capacity(est.replicates.len());
    let mut rhs_reps = Vec::with_capacity(est.replicates.len());
    let mut ratio_reps = Vec::with_capacity(est.replicates.len());
    let bound_idx = match criterion {
        PlanarCriterion::Entanglement => 2,
        PlanarCriterion::Steering => 3,
    };
    for rep in &est.replicates {
        let l = (rep[0] + 0.25) * 2.0 * rep[1];
        let r = rep[bound_idx] / divisor;
        lhs_reps.push(l);
        rhs_reps.push(r);
        if r > 0.0 {
            ratio_reps.push(l / r);
        }
    }
    let tol = 1e-12 * lhs.abs().max(rhs.abs()).max(1.0);
    let report = CriterionReport {
        criterion: label.into(),
        lhs,
        rhs,
        ratio: if rhs > 0.0 { Some(lhs / rhs) } else { None },
        violated: rhs > 0.0 && lhs < rhs - tol,
        sense: Sense::Lower,
        inapplicable: None,
        gains: None,
        gain_fallbacks: Vec::new(),
        components,
        state: StateMeta {
            n: n.round() as u32,
            mode: "shots".into(),
            description: format!("{} z + {} planar shots", est.count_z, est.count_planar),
        },
    };
    let spread = |mut reps: Vec<f64>, point: f64| -> (f64, f64) {
        if reps.is_empty() {
            return (point, point);
        }
        reps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let idx = |q: f64| ((reps.len() - 1) as f64 * q).round() as usize;
        (reps[idx(0.16)].min(point), reps[idx(0.84)].max(point))
    };
    let intervals = ReportIntervals {
        lhs: spread(lhs_reps, lhs),
        rhs: spread(rhs_reps, rhs),
        ratio: spread(ratio_reps, report.ratio.unwrap_or(f64::NAN)),
    };
    Ok((report, intervals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{moment_set, planar_average, PlanarCombo};
    use crate::split::split_binomial;
    use crate::states::{PolarizationAxis, SymmetricState};

    fn dicke_mix(n: u32) -> SectorMixture {
        split_binomial(&SymmetricState::dicke(n).unwrap(), 1e-12).unwrap()
    }

    #[test]
    fn dicke_z_outcomes_cancel_exactly() {
        let shots = sample_shots(&dicke_mix(40), 500, 0, 7).unwrap();
        assert_eq!(shots.len(), 500);
        for s in &shots {
            assert_eq!(s.setting, Setting::Z);
            assert_eq!(s.value_a + s.value_b, 0.0);
        }
    }

    #[test]
    fn z_polarized_outcomes_are_maximal() {
        let mix = split_binomial(
            &SymmetricState::polarized(40, PolarizationAxis::Z).unwrap(),
            1e-12,
        )
        .unwrap();
        for s in sample_shots(&mix, 200, 0, 3).unwrap() {
            assert_eq!(s.value_a, s.n_a as f64 / 2.0);
            assert_eq!(s.value_b, s.n_b as f64 / 2.0);
        }
    }

    #[test]
    fn planar_sample_mean_tracks_operator_value() {
        let mix = dicke_mix(40);
        let shots = sample_shots(&mix, 0, 20_000, 11).unwrap();
        let planar: Vec<&ShotRecord> = shots.iter().collect();
        let vals = normalize_planar(&planar);
        let sample_mean = mean(&vals.diff.iter().map(|d| d * d).collect::<Vec<_>>());
        let truth = planar_average(&moment_set(&mix), PlanarCombo::Minus, 2).unwrap();
        let se = (sample_variance(&vals.diff.iter().map(|d| d * d).collect::<Vec<_>>())
            / planar.len() as f64)
            .sqrt();
        assert!(
            (sample_mean - truth).abs() < 4.0 * se,
            "mean {sample_mean} vs {truth} (se {se})"
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        let mix = dicke_mix(20);
        let a = sample_shots(&mix, 50, 50, 123).unwrap();
        let b = sample_shots(&mix, 50, 50, 123).unwrap();
        assert_eq!(a, b);
        let c = sample_shots(&mix, 50, 50, 124).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let mix = dicke_mix(12);
        let shots = sample_shots(&mix, 20, 20, 5).unwrap();
        let mut buf = Vec::new();
        write_csv(&shots, &mut buf).unwrap();
        let parsed = read_csv(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(shots, parsed);
        let mut buf2 = Vec::new();
        write_csv(&parsed, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn csv_rejects_bad_headers_and_values() {
        assert!(read_csv(std::io::Cursor::new("shot,setting\n")).is_err());
        let bad = format!("{CSV_HEADER}\n0,z,,4,4,2.7,0\n");
        assert!(read_csv(std::io::Cursor::new(bad)).is_err());
        let bad_angle = format!("{CSV_HEADER}\n0,planar,7.0,4,4,1,0\n");
        assert!(read_csv(std::io::Cursor::new(bad_angle)).is_err());
    }

    #[test]
    fn degenerate_planar_sample_gives_zero_interval() {
        let records: Vec<ShotRecord> = (0..10)
            .map(|i| ShotRecord {
                shot_id: i,
                setting: Setting::Planar,
                alpha: Some(1.0),
                n_a: 4,
                n_b: 4,
                value_a: 1.0,
                value_b: 1.0,
            })
            .collect();
        let est = estimate(&records, 200, 1).unwrap();
        let pvd = est.planar_var_diff.unwrap();
        assert_eq!(pvd.value, 0.0);
        assert_eq!((pvd.lo, pvd.hi), (0.0, 0.0));
        assert!(est.var_jz.is_none());
    }

    #[test]
    fn estimation_needs_two_shots_per_setting() {
        let one = vec![ShotRecord {
            shot_id: 0,
            setting: Setting::Z,
            alpha: None,
            n_a: 2,
            n_b: 2,
            value_a: 1.0,
            value_b: -1.0,
        }];
        assert!(estimate(&one, 10, 0).is_err());
    }

    #[test]
    fn pipeline_detects_entanglement_in_split_dicke() {
        let mix = dicke_mix(40);
        let shots = sample_shots(&mix, 4_000, 4_000, 21).unwrap();
        let est = estimate(&shots, 400, 9).unwrap();
        let (report, intervals) =
            evaluate_from_estimates(&est, PlanarCriterion::Entanglement).unwrap();
        assert!(report.violated, "ratio {:?}", report.ratio);
        assert!(intervals.ratio.1 < 1.0);
        let (steer, _) = evaluate_from_estimates(&est, PlanarCriterion::Steering).unwrap();
        assert!(steer.ratio.unwrap() < 1.0);
        assert!((report.components["reference_var_jz_fp"] - 10.0).abs() < 1e-12);
        let missing = EstimateSet {
            var_jz: None,
            ..est.clone()
        };
        assert!(evaluate_from_estimates(&missing, PlanarCriterion::Steering).is_err());
    }
}
