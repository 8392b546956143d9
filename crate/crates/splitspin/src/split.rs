//! Splitting a symmetric N-particle state into two halves.
//!
//! An exact split fixes N_a and produces one bipartite sector state; the
//! binomial split models beam-splitter partition noise and produces a
//! weighted mixture over sectors with p(N_a) = binom(N, N_a)/2^N and
//! var(N_a) = N/4.

use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{self, LogFactorials};
use crate::spin::SpinSector;
use crate::states::{SectorBody, SectorState, SymmetricState};

const Z0: Complex64 = Complex64::new(0.0, 0.0);

/// Default discarded probability of the binomial sector truncation. Keeps
/// the sector count O(√N) while staying invisible at 1e-10 tolerances.
pub const DEFAULT_TAIL_MASS: f64 = 1e-12;

/// How a symmetric state was distributed over the two halves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SplitMode {
    /// Fixed particle number in half a.
    Exact { n_a: u32 },
    /// Binomial partition noise, truncated to the stated tail mass.
    Binomial { tail_mass: f64 },
    /// The state was constructed directly on one sector.
    Fixed,
}

impl SplitMode {
    pub fn label(&self) -> String {
        match self {
            SplitMode::Exact { n_a } => format!("exact:{n_a}"),
            SplitMode::Binomial { .. } => "binomial".into(),
            SplitMode::Fixed => "fixed".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MixtureEntry {
    pub weight: f64,
    pub state: SectorState,
}

/// Weighted collection of sector states sharing one total particle number.
#[derive(Clone, Debug)]
pub struct SectorMixture {
    n: u32,
    mode: SplitMode,
    entries: Vec<MixtureEntry>,
    delta_variance: f64,
}

impl SectorMixture {
    pub fn from_entries(n: u32, mode: SplitMode, entries: Vec<MixtureEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("a mixture needs at least one sector entry"));
        }
        let mut total = 0.0;
        for e in &entries {
            if e.weight < 0.0 {
                return Err(Error::invalid("mixture weights must be non-negative"));
            }
            if e.state.sector().total() != n {
                return Err(Error::invalid("mixture entries must share the total particle number"));
            }
            total += e.weight;
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(SectorMixture {
            n,
            mode,
            entries,
            delta_variance: 0.0,
        })
    }

    /// Wraps a single fixed-sector state as a trivial mixture.
    pub fn single(state: SectorState) -> Self {
        let n = state.sector().total();
        SectorMixture {
            n,
            mode: SplitMode::Fixed,
            entries: vec![MixtureEntry { weight: 1.0, state }],
            delta_variance: 0.0,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mode(&self) -> SplitMode {
        self.mode
    }

    pub fn entries(&self) -> &[MixtureEntry] {
        &self.entries
    }

    /// var(δ) of the splitting distribution before truncation.
    pub fn delta_variance(&self) -> f64 {
        self.delta_variance
    }

    pub fn is_single_sector(&self) -> bool {
        self.entries.len() == 1
    }

    pub fn single_sector_state(&self) -> Option<&SectorState> {
        if self.is_single_sector() {
            Some(&self.entries[0].state)
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let amps = e.state.pure_amplitudes().ok_or_else(|| {
                Error::invalid("only pure-body mixtures serialize to the fixture schema")
            })?;
            entries.push(json!({
                "n_a": e.state.sector().n_a,
                "weight": e.weight,
                "amplitudes": amps.iter().map(|a| vec![a.re, a.im]).collect::<Vec<_>>(),
            }));
        }
        Ok(json!({
            "n": self.n,
            "mode": self.mode.label(),
            "entries": entries,
        }))
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let n = v["n"].as_u64().ok_or_else(|| Error::invalid("missing field n"))? as u32;
        let raw = v["entries"]
            .as_array()
            .ok_or_else(|| Error::invalid("missing entries"))?;
        let mut entries = Vec::with_capacity(raw.len());
        for e in raw {
            let n_a = e["n_a"].as_u64().ok_or_else(|| Error::invalid("missing n_a"))? as u32;
            if n_a > n {
                return Err(Error::invalid("entry n_a exceeds total n"));
            }
            let weight = e["weight"]
                .as_f64()
                .ok_or_else(|| Error::invalid("missing weight"))?;
            let amp_raw = e["amplitudes"]
                .as_array()
                .ok_or_else(|| Error::invalid("missing amplitudes"))?;
            let mut amps = Vec::with_capacity(amp_raw.len());
            for pair in amp_raw {
                let re = pair[0].as_f64().ok_or_else(|| Error::invalid("bad amplitude"))?;
                let im = pair[1].as_f64().ok_or_else(|| Error::invalid("bad amplitude"))?;
                amps.push(Complex64::new(re, im));
            }
            entries.push(MixtureEntry {
                weight,
                state: SectorState::pure(SpinSector::new(n_a, n - n_a), amps)?,
            });
        }
        let mode = match v["mode"].as_str() {
            Some("binomial") => SplitMode::Binomial { tail_mass: 0.0 },
            Some(s) if s.starts_with("exact:") => SplitMode::Exact {
                n_a: s[6..].parse().map_err(|_| Error::invalid("bad mode tag"))?,
            },
            _ => SplitMode::Fixed,
        };
        let mut out = SectorMixture::from_entries(n, mode, entries)?;
        if matches!(mode, SplitMode::Binomial { .. }) {
            out.delta_variance = n as f64 / 4.0;
        }
        Ok(out)
    }
}

/// Splits a symmetric state at fixed N_a.
///
/// The amplitude on |k, N_a⟩ ⊗ |m−k, N_b⟩ is
/// c_m · √(binom(N_a,k) binom(N_b,m−k) / binom(N,m)), which for Dicke input
/// reproduces the Schmidt coefficients of the bipartition in closed form.
pub fn split_exact(state: &SymmetricState, n_a: u32) -> Result<SectorState> {
    let n = state.n();
    if n_a > n {
        return Err(Error::invalid(format!("n_a = {n_a} out of range for n = {n}")));
    }
    let sector = SpinSector::new(n_a, n - n_a);
    let (da, db) = (sector.dim_a(), sector.dim_b());
    let lf = LogFactorials::new(n as usize);
    let mut amps = vec![Z0; da * db];
    for (m, &cm) in state.amplitudes().iter().enumerate() {
        if cm == Z0 {
            continue;
        }
        let ln_nm = lf.ln_binomial(n as usize, m);
        let lo = m.saturating_sub(db - 1);
        let hi = m.min(da - 1);
        for ka in lo..=hi {
            let kb = m - ka;
            let w = 0.5
                * (lf.ln_binomial(da - 1, ka) + lf.ln_binomial(db - 1, kb) - ln_nm);
            amps[ka * db + kb] = cm * w.exp();
        }
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    SectorState::pure(sector, amps)
}

/// Binomial splitting weights binom(n, n_a)/2^n over n_a = 0..=n.
pub(crate) fn binomial_weights(n: u32) -> Vec<f64> {
    let lf = LogFactorials::new(n as usize);
    let ln2n = n as f64 * std::f64::consts::LN_2;
    (0..=n as usize)
        .map(|k| (lf.ln_binomial(n as usize, k) - ln2n).exp())
        .collect()
}

/// Splits with binomial partition noise, keeping the symmetric δ-range whose
/// discarded probability is at most `tail_mass`, then renormalizing.
pub fn split_binomial(state: &SymmetricState, tail_mass: f64) -> Result<SectorMixture> {
    if !(tail_mass > 0.0 && tail_mass <= 1e-6) {
        return Err(Error::invalid(format!(
            "tail mass must lie in (0, 1e-6], got {tail_mass}"
        )));
    }
    let n = state.n();
    let weights = binomial_weights(n);
    // visit sectors center-outward and stop once the kept mass suffices
    let mut order: Vec<usize> = (0..=n as usize).collect();
    order.sort_by_key(|&k| (2 * k as i64 - n as i64).abs() as u64 * 2 + (k as u64 & 1));
    let mut kept = Vec::new();
    let mut mass = 0.0;
    for &k in &order {
        kept.push(k);
        mass += weights[k];
        if mass >= 1.0 - tail_mass {
            break;
        }
    }
    kept.sort_unstable();
    let mut entries = Vec::with_capacity(kept.len());
    for k in kept {
        entries.push(MixtureEntry {
            weight: weights[k] / mass,
            state: split_exact(state, k as u32)?,
        });
    }
    Ok(SectorMixture {
        n,
        mode: SplitMode::Binomial { tail_mass },
        entries,
        delta_variance: n as f64 / 4.0,
    })
}

/// Non-negative Schmidt coefficients of a pure bipartite state, descending.
#[derive(Clone, Debug)]
pub struct SchmidtSpectrum {
    pub coefficients: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn squared_sum(&self) -> f64 {
        self.coefficients.iter().map(|l| l * l).sum()
    }

    /// −Σ λ² log₂ λ².
    pub fn entropy_bits(&self) -> f64 {
        let s = -self
            .coefficients
            .iter()
            .map(|l| l * l)
            .filter(|&p| p > 0.0)
            .map(|p| p * p.log2())
            .sum::<f64>();
        s.max(0.0)
    }
}

pub fn schmidt_spectrum(state: &SectorState) -> Result<SchmidtSpectrum> {
    let amps = match state.body() {
        SectorBody::Pure(v) => v,
        SectorBody::Mixed(_) => {
            return Err(Error::invalid("Schmidt data is defined for pure states only"))
        }
    };
    let sector = state.sector();
    let (da, db) = (sector.dim_a(), sector.dim_b());
    // Gram matrix on the smaller half
    let small = da.min(db);
    let real = amps.iter().all(|a| a.im == 0.0);
    let mut evs = if real {
        let mut gram = vec![0.0f64; small * small];
        gram_real(amps, da, db, small, &mut gram);
        linalg::eig_sym_dense(&gram, small, false).values
    } else {
        let mut gram = vec![Z0; small * small];
        gram_complex(amps, da, db, small, &mut gram);
        linalg::hermitian_eigenvalues(&gram, small)
    };
    evs.iter_mut().for_each(|p| *p = p.max(0.0));
    let mut coeffs: Vec<f64> = evs.into_iter().map(f64::sqrt).collect();
    coeffs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(SchmidtSpectrum { coefficients: coeffs })
}

fn gram_real(amps: &[Complex64], da: usize, db: usize, small: usize, out: &mut [f64]) {
    let a_small = small == da;
    for i in 0..small {
        for j in 0..=i {
            let mut acc = 0.0;
            if a_small {
                // rows of A
                for k in 0..db {
                    acc += amps[i * db + k].re * amps[j * db + k].re;
                }
            } else {
                for k in 0..da {
                    acc += amps[k * db + i].re * amps[k * db + j].re;
                }
            }
            out[i * small + j] = acc;
            out[j * small + i] = acc;
        }
    }
}

fn gram_complex(amps: &[Complex64], da: usize, db: usize, small: usize, out: &mut [Complex64]) {
    let a_small = small == da;
    for i in 0..small {
        for j in 0..small {
            let mut acc = Z0;
            if a_small {
                for k in 0..db {
                    acc += amps[i * db + k] * amps[j * db + k].conj();
                }
            } else {
                for k in 0..da {
                    acc += amps[k * db + i].conj() * amps[k * db + j];
                }
            }
            out[i * small + j] = acc;
        }
    }
}

/// Entanglement entropy of the bipartition in bits.
pub fn schmidt_entropy(state: &SectorState) -> Result<f64> {
    Ok(schmidt_spectrum(state)?.entropy_bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{apply_half, Axis, Half};
    use crate::states::PolarizationAxis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dicke_split_coefficients(n: u32, n_a: u32) -> Vec<f64> {
        let lf = LogFactorials::new(n as usize);
        let half = n as usize / 2;
        let (na, nb) = (n_a as usize, (n - n_a) as usize);
        (0..=half)
            .filter(|&m| m <= na && half - m <= nb)
            .map(|m| {
                (0.5 * (lf.ln_binomial(na, m) + lf.ln_binomial(nb, half - m)
                    - lf.ln_binomial(n as usize, half)))
                .exp()
            })
            .collect()
    }

    #[test]
    fn dicke_four_schmidt_coefficients() {
        let split = split_exact(&SymmetricState::dicke(4).unwrap(), 2).unwrap();
        let amps = split.pure_amplitudes().unwrap();
        let s6 = 6f64.sqrt();
        for ka in 0..3usize {
            let kb = 2 - ka;
            let expect = if ka == 1 { 2.0 / s6 } else { 1.0 / s6 };
            assert!((amps[ka * 3 + kb].re - expect).abs() < 1e-12);
        }
        let spectrum = schmidt_spectrum(&split).unwrap();
        let mut closed = dicke_split_coefficients(4, 2);
        closed.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in spectrum.coefficients.iter().zip(&closed) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((spectrum.squared_sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dicke_four_entropy_matches_closed_form() {
        let split = split_exact(&SymmetricState::dicke(4).unwrap(), 2).unwrap();
        let s = schmidt_entropy(&split).unwrap();
        let closed: f64 = {
            let probs = [1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0];
            -probs.iter().map(|p: &f64| p * p.log2()).sum::<f64>()
        };
        assert!((s - closed).abs() < 1e-12);
        assert!((s - 1.2516).abs() < 1e-4);
    }

    #[test]
    fn ghz_and_product_entropies() {
        let ghz = split_exact(&SymmetricState::ghz(6).unwrap(), 3).unwrap();
        assert!((schmidt_entropy(&ghz).unwrap() - 1.0).abs() < 1e-12);
        let pd = crate::states::product_dicke(8).unwrap();
        assert!(schmidt_entropy(&pd).unwrap().abs() < 1e-12);
    }

    #[test]
    fn polarized_split_stays_product() {
        let z = SymmetricState::polarized(4, PolarizationAxis::Z).unwrap();
        let split = split_exact(&z, 2).unwrap();
        let amps = split.pure_amplitudes().unwrap();
        for (idx, a) in amps.iter().enumerate() {
            let expect = if idx == 2 * 3 + 2 { 1.0 } else { 0.0 };
            assert!((a.re - expect).abs() < 1e-13);
        }
        let spectrum = schmidt_spectrum(&split).unwrap();
        assert!((spectrum.coefficients[0] - 1.0).abs() < 1e-12);
        assert!(spectrum.coefficients.iter().skip(1).all(|&l| l < 1e-10));
    }

    #[test]
    fn large_equal_split_entropy_near_half_log() {
        let split = split_exact(&SymmetricState::dicke(1024).unwrap(), 512).unwrap();
        let s = schmidt_entropy(&split).unwrap();
        let target = 1024f64.log2() / 2.0;
        assert!((s - target).abs() / target < 0.15, "entropy {s} vs {target}");
    }

    #[test]
    fn binomial_weights_at_four() {
        let mix = split_binomial(&SymmetricState::dicke(4).unwrap(), 1e-6).unwrap();
        let expect = [1.0, 4.0, 6.0, 4.0, 1.0];
        assert_eq!(mix.entries().len(), 5);
        for (e, w) in mix.entries().iter().zip(expect) {
            assert!((e.weight - w / 16.0).abs() < 1e-13);
        }
        assert!((mix.delta_variance() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn binomial_weights_follow_log_space_formula() {
        let n = 144u32;
        let mix = split_binomial(&SymmetricState::dicke(n).unwrap(), 1e-12).unwrap();
        let lf = LogFactorials::new(n as usize);
        let ln2n = n as f64 * std::f64::consts::LN_2;
        let total: f64 = mix.entries().iter().map(|e| e.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let mut raw_mass = 0.0;
        for e in mix.entries() {
            let raw = (lf.ln_binomial(n as usize, e.state.sector().n_a as usize) - ln2n).exp();
            raw_mass += raw;
        }
        assert!(1.0 - raw_mass <= 1e-12);
        for e in mix.entries() {
            let raw = (lf.ln_binomial(n as usize, e.state.sector().n_a as usize) - ln2n).exp();
            assert!((e.weight * raw_mass - raw).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_totals_split_binomially() {
        let s = SymmetricState::polarized(5, PolarizationAxis::X).unwrap();
        let mix = split_binomial(&s, 1e-6).unwrap();
        assert_eq!(mix.entries().len(), 6);
        let total: f64 = mix.entries().iter().map(|e| e.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn splitting_preserves_collective_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let state = SymmetricState::haar_random(9, &mut rng);
            let pre = [
                state.expect(Axis::X, 1),
                state.expect(Axis::Y, 1),
                state.expect(Axis::Z, 1),
                state.expect(Axis::X, 2),
                state.expect(Axis::Y, 2),
                state.expect(Axis::Z, 2),
            ];
            for n_a in 0..=9u32 {
                let split = split_exact(&state, n_a).unwrap();
                let amps = split.pure_amplitudes().unwrap();
                let sector = split.sector();
                for (i, axis) in [Axis::X, Axis::Y, Axis::Z].into_iter().enumerate() {
                    let ua = apply_half(sector, amps, axis, Half::A);
                    let ub = apply_half(sector, amps, axis, Half::B);
                    let sum: Vec<Complex64> =
                        ua.iter().zip(&ub).map(|(a, b)| a + b).collect();
                    let mean = crate::states::dot(amps, &sum).re;
                    let second = crate::states::dot(&sum, &sum).re;
                    assert!((mean - pre[i]).abs() < 1e-10);
                    assert!((second - pre[i + 3]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn schmidt_coefficients_follow_gaussian_envelope() {
        let n = 400u32;
        let split = split_exact(&SymmetricState::dicke(n).unwrap(), 200).unwrap();
        let spectrum = {
            let amps = split.pure_amplitudes().unwrap();
            // anti-diagonal of the amplitude matrix, indexed by k_a
            (0..=200usize)
                .map(|ka| amps[ka * 201 + (200 - ka)].re)
                .collect::<Vec<f64>>()
        };
        let half = 200f64;
        let center = half / 2.0;
        let sigma2 = half / 4.0;
        let peak = spectrum[center as usize];
        let width = half.sqrt() as usize;
        for ka in (center as usize - width)..=(center as usize + width) {
            let gauss = peak * (-((ka as f64 - center).powi(2)) / (2.0 * sigma2)).exp();
            let ratio = spectrum[ka] / gauss;
            assert!((ratio - 1.0).abs() < 0.02, "ratio {ratio} at k_a={ka}");
        }
    }

    #[test]
    fn mixture_json_round_trip() {
        let mix = split_binomial(&SymmetricState::dicke(6).unwrap(), 1e-6).unwrap();
        let v = mix.to_json().unwrap();
        let back = SectorMixture::from_json(&v).unwrap();
        assert_eq!(back.n(), 6);
        assert_eq!(back.entries().len(), mix.entries().len());
        for (a, b) in mix.entries().iter().zip(back.entries()) {
            assert!((a.weight - b.weight).abs() < 1e-15);
            assert_eq!(a.state.sector(), b.state.sector());
        }
    }

    #[test]
    fn tail_mass_is_validated() {
        let s = SymmetricState::dicke(4).unwrap();
        assert!(split_binomial(&s, 0.0).is_err());
        assert!(split_binomial(&s, 1e-3).is_err());
    }
}
