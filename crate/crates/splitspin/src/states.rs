//! Reference states in the symmetric basis of N spin-1/2 particles and
//! fixed-sector bipartite states.
//!
//! Symmetric states are stored over the basis |m, N⟩ with m = number of 1s,
//! ascending, so index k carries the J_z eigenvalue k − N/2.

use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{self, half_binomial_amplitude, LogFactorials};
use crate::spin::{apply_collective, Axis, SpinSector};

const Z0: Complex64 = Complex64::new(0.0, 0.0);

/// Polarization direction of a spin-coherent product state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolarizationAxis {
    X,
    Y,
    Z,
}

/// A pure state of N spin-1/2 particles in the symmetric subspace.
#[derive(Clone, Debug)]
pub struct SymmetricState {
    n: u32,
    amps: Vec<Complex64>,
}

impl SymmetricState {
    /// Wraps an amplitude vector over |m, N⟩, m ascending; must be unit norm.
    pub fn from_amplitudes(n: u32, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != n as usize + 1 {
            return Err(Error::invalid(format!(
                "expected {} amplitudes for n={n}, got {}",
                n + 1,
                amps.len()
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "state norm² deviates from one by {:e}",
                (norm - 1.0).abs()
            )));
        }
        Ok(SymmetricState { n, amps })
    }

    /// The unpolarized Dicke state with N/2 excitations.
    pub fn dicke(n: u32) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::invalid(format!(
                "Dicke state needs an even particle count of at least 2, got {n}"
            )));
        }
        let mut amps = vec![Z0; n as usize + 1];
        amps[n as usize / 2] = Complex64::new(1.0, 0.0);
        Ok(SymmetricState { n, amps })
    }

    /// Spin-coherent state fully polarized along the given axis.
    pub fn polarized(n: u32, axis: PolarizationAxis) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("polarized state needs at least one particle"));
        }
        let dim = n as usize + 1;
        let mut amps = vec![Z0; dim];
        match axis {
            PolarizationAxis::Z => {
                amps[dim - 1] = Complex64::new(1.0, 0.0);
            }
            PolarizationAxis::X | PolarizationAxis::Y => {
                let lf = LogFactorials::new(n as usize);
                for (k, a) in amps.iter_mut().enumerate() {
                    let mag = half_binomial_amplitude(&lf, n as usize, k);
                    *a = match axis {
                        PolarizationAxis::X => Complex64::new(mag, 0.0),
                        _ => (-Complex64::i()).powu(k as u32) * mag,
                    };
                }
            }
        }
        Ok(SymmetricState { n, amps })
    }

    /// (|0…0⟩ + |1…1⟩)/√2.
    pub fn ghz(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("GHZ state needs at least two particles"));
        }
        let mut amps = vec![Z0; n as usize + 1];
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = amp;
        amps[n as usize] = amp;
        Ok(SymmetricState { n, amps })
    }

    /// One-axis-twisted spin-squeezed state, see [`OneAxisTwister`].
    pub fn one_axis_twisted(n: u32, mu: f64) -> Result<Self> {
        Ok(OneAxisTwister::new(n)?.state(mu))
    }

    /// Haar-random pure state on the symmetric subspace.
    pub fn haar_random(n: u32, rng: &mut impl rand::Rng) -> Self {
        let dim = n as usize + 1;
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        SymmetricState { n, amps }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// ⟨J_axis^power⟩ of the collective component, power 1 or 2.
    pub fn expect(&self, axis: Axis, power: u8) -> f64 {
        let u = apply_collective(&self.amps, axis);
        match power {
            1 => dot(&self.amps, &u).re,
            _ => dot(&u, &u).re,
        }
    }

    pub fn variance(&self, axis: Axis) -> f64 {
        let mean = self.expect(axis, 1);
        self.expect(axis, 2) - mean * mean
    }

    /// ⟨J_x² + J_y² + J_z²⟩, constant (N/2)(N/2+1) on the symmetric subspace.
    pub fn casimir_expectation(&self) -> f64 {
        self.expect(Axis::X, 2) + self.expect(Axis::Y, 2) + self.expect(Axis::Z, 2)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "basis": "dicke-m-ascending",
            "amplitudes": self.amps.iter().map(|a| vec![a.re, a.im]).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let n = v["n"]
            .as_u64()
            .ok_or_else(|| Error::invalid("missing field n"))? as u32;
        if v["basis"].as_str() != Some("dicke-m-ascending") {
            return Err(Error::invalid("unsupported basis tag"));
        }
        let raw = v["amplitudes"]
            .as_array()
            .ok_or_else(|| Error::invalid("missing amplitudes"))?;
        let mut amps = Vec::with_capacity(raw.len());
        for pair in raw {
            let re = pair[0].as_f64().ok_or_else(|| Error::invalid("bad amplitude"))?;
            let im = pair[1].as_f64().ok_or_else(|| Error::invalid("bad amplitude"))?;
            amps.push(Complex64::new(re, im));
        }
        SymmetricState::from_amplitudes(n, amps)
    }
}

fn gaussian(rng: &mut impl rand::Rng) -> f64 {
    // Box-Muller
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

pub(crate) fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// One-axis-twisting evolution exp(−i μ J_z²/2) applied to the x-polarized
/// coherent state, followed by the x-rotation that moves the squeezed
/// quadrature onto the z axis.
///
/// Precomputes the collective J_x eigenbasis once, so sweeping μ at fixed N
/// reuses the expensive part.
pub struct OneAxisTwister {
    n: u32,
    xvals: Vec<f64>,
    /// row-major: xvecs[k * dim + r] = ⟨k|x_r⟩
    xvecs: Vec<f64>,
}

impl OneAxisTwister {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("one-axis twisting needs at least two particles"));
        }
        let dim = n as usize + 1;
        let diag = vec![0.0; dim];
        let off: Vec<f64> = (0..dim - 1)
            .map(|k| crate::spin::ladder_up(dim, k) / 2.0)
            .collect();
        let eig = linalg::eig_sym_tridiagonal(&diag, &off, true);
        Ok(OneAxisTwister {
            n,
            xvals: eig.values,
            xvecs: eig.vectors,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The twisted state before the orienting rotation.
    pub fn twisted_unrotated(&self, mu: f64) -> SymmetricState {
        let dim = self.n as usize + 1;
        let base = SymmetricState::polarized(self.n, PolarizationAxis::X).unwrap();
        let mut amps = base.amps;
        for (k, a) in amps.iter_mut().enumerate() {
            let m = k as f64 - self.n as f64 / 2.0;
            *a *= Complex64::from_polar(1.0, -mu * m * m / 2.0);
        }
        debug_assert_eq!(amps.len(), dim);
        SymmetricState { n: self.n, amps }
    }

    /// exp(−iθ J_x) applied through the precomputed eigenbasis.
    pub fn rotate_x(&self, amps: &[Complex64], theta: f64) -> Vec<Complex64> {
        let dim = amps.len();
        let mut c = vec![Z0; dim];
        for r in 0..dim {
            let mut acc = Z0;
            for k in 0..dim {
                acc += self.xvecs[k * dim + r] * amps[k];
            }
            c[r] = acc * Complex64::from_polar(1.0, -theta * self.xvals[r]);
        }
        let mut out = vec![Z0; dim];
        for k in 0..dim {
            let mut acc = Z0;
            for r in 0..dim {
                acc += self.xvecs[k * dim + r] * c[r];
            }
            out[k] = acc;
        }
        out
    }

    fn z_variance_after(&self, amps: &[Complex64], theta: f64) -> f64 {
        let rotated = self.rotate_x(amps, theta);
        let u = apply_collective(&rotated, Axis::Z);
        let mean = dot(&rotated, &u).re;
        dot(&u, &u).re - mean * mean
    }

    /// Golden-section minimization of var(J_z) over the rotation angle,
    /// bracketed by a coarse scan of [0, π).
    pub fn optimal_angle(&self, amps: &[Complex64]) -> f64 {
        let scan = 32usize;
        let step = std::f64::consts::PI / scan as f64;
        let mut best = (0usize, f64::INFINITY);
        for i in 0..scan {
            let v = self.z_variance_after(amps, i as f64 * step);
            if v < best.1 {
                best = (i, v);
            }
        }
        let mut lo = best.0 as f64 * step - step;
        let mut hi = best.0 as f64 * step + step;
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let mut f1 = self.z_variance_after(amps, x1);
        let mut f2 = self.z_variance_after(amps, x2);
        while hi - lo > 1e-12 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = self.z_variance_after(amps, x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = self.z_variance_after(amps, x2);
            }
        }
        (lo + hi) / 2.0
    }

    /// Twisted and rotated state with a canonical global phase (largest
    /// amplitude real positive).
    pub fn state(&self, mu: f64) -> SymmetricState {
        let twisted = self.twisted_unrotated(mu);
        let theta = self.optimal_angle(&twisted.amps);
        let mut amps = self.rotate_x(&twisted.amps, theta);
        let mut lead = 0usize;
        let mut best = 0.0;
        for (k, a) in amps.iter().enumerate() {
            if a.norm_sqr() > best {
                best = a.norm_sqr();
                lead = k;
            }
        }
        let phase = amps[lead] / amps[lead].norm();
        amps.iter_mut().for_each(|a| *a /= phase);
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        SymmetricState { n: self.n, amps }
    }
}

/// Pure amplitude vector or density matrix on one sector's product basis,
/// row-major over (kₐ, k_b), excitation ascending on both halves.
#[derive(Clone, Debug)]
pub enum SectorBody {
    Pure(Vec<Complex64>),
    Mixed(Vec<Complex64>),
}

/// A state with definite particle numbers in both halves.
#[derive(Clone, Debug)]
pub struct SectorState {
    sector: SpinSector,
    body: SectorBody,
}

/// Largest dimension accepted for density-matrix bodies.
pub const MIXED_DIM_LIMIT: usize = 512;

impl SectorState {
    pub fn pure(sector: SpinSector, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != sector.dim() {
            return Err(Error::invalid(format!(
                "expected {} amplitudes for sector ({}, {})",
                sector.dim(),
                sector.n_a,
                sector.n_b
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "sector state norm² deviates from one by {:e}",
                (norm - 1.0).abs()
            )));
        }
        Ok(SectorState {
            sector,
            body: SectorBody::Pure(amps),
        })
    }

    /// Density-matrix body; must be Hermitian, unit trace and PSD to 1e-10.
    pub fn mixed(sector: SpinSector, dm: Vec<Complex64>) -> Result<Self> {
        let dim = sector.dim();
        if dim > MIXED_DIM_LIMIT {
            return Err(Error::ResourceLimit(format!(
                "density-matrix bodies limited to dimension {MIXED_DIM_LIMIT}"
            )));
        }
        if dm.len() != dim * dim {
            return Err(Error::invalid("density matrix has the wrong shape"));
        }
        let trace: Complex64 = (0..dim).map(|i| dm[i * dim + i]).sum();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return Err(Error::invalid("density matrix must have unit trace"));
        }
        let mut herm_err = 0.0f64;
        for i in 0..dim {
            for j in 0..=i {
                herm_err = herm_err.max((dm[i * dim + j] - dm[j * dim + i].conj()).norm());
            }
        }
        if herm_err > 1e-10 {
            return Err(Error::invalid("density matrix must be Hermitian"));
        }
        let min_eig = linalg::hermitian_eigenvalues(&dm, dim)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::invalid(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(SectorState {
            sector,
            body: SectorBody::Mixed(dm),
        })
    }

    /// Tensor product of two local pure states.
    pub fn product(sector: SpinSector, a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        if a.len() != sector.dim_a() || b.len() != sector.dim_b() {
            return Err(Error::invalid("local state dimensions do not match the sector"));
        }
        let mut amps = Vec::with_capacity(sector.dim());
        for za in a {
            for zb in b {
                amps.push(za * zb);
            }
        }
        SectorState::pure(sector, amps)
    }

    pub fn sector(&self) -> SpinSector {
        self.sector
    }

    pub fn body(&self) -> &SectorBody {
        &self.body
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.body, SectorBody::Pure(_))
    }

    pub fn pure_amplitudes(&self) -> Option<&[Complex64]> {
        match &self.body {
            SectorBody::Pure(v) => Some(v),
            SectorBody::Mixed(_) => None,
        }
    }
}

/// |D_{N/2}⟩ ⊗ |D_{N/2}⟩ on the (N/2, N/2) sector.
pub fn product_dicke(n: u32) -> Result<SectorState> {
    if n % 4 != 0 || n == 0 {
        return Err(Error::invalid(format!(
            "product Dicke state needs a particle count divisible by 4, got {n}"
        )));
    }
    let half = SymmetricState::dicke(n / 2)?;
    let sector = SpinSector::new(n / 2, n / 2);
    SectorState::product(sector, half.amplitudes(), half.amplitudes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dicke_amplitudes_and_moments() {
        let d = SymmetricState::dicke(4).unwrap();
        let expect = [0.0, 0.0, 1.0, 0.0, 0.0];
        for (a, e) in d.amplitudes().iter().zip(expect) {
            assert!((a - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
        assert!(d.expect(Axis::Z, 2).abs() < 1e-14);
        assert!((d.casimir_expectation() - 6.0).abs() < 1e-12);
        assert!(SymmetricState::dicke(5).is_err());
    }

    #[test]
    fn polarized_states_have_coherent_moments() {
        let z = SymmetricState::polarized(4, PolarizationAxis::Z).unwrap();
        assert!((z.expect(Axis::Z, 1) - 2.0).abs() < 1e-13);
        assert!(z.variance(Axis::Z).abs() < 1e-13);

        let x = SymmetricState::polarized(4, PolarizationAxis::X).unwrap();
        assert!((x.expect(Axis::X, 1) - 2.0).abs() < 1e-13);

        let y = SymmetricState::polarized(5, PolarizationAxis::Y).unwrap();
        assert!((y.expect(Axis::Y, 1) - 2.5).abs() < 1e-13);

        let big = SymmetricState::polarized(100, PolarizationAxis::X).unwrap();
        assert!((big.variance(Axis::Z) - 25.0).abs() < 1e-10);
    }

    #[test]
    fn ghz_amplitudes() {
        let g = SymmetricState::ghz(4).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((g.amplitudes()[4].re - r).abs() < 1e-15);
        let g6 = SymmetricState::ghz(6).unwrap();
        assert!(g6.expect(Axis::Z, 1).abs() < 1e-13);
    }

    #[test]
    fn twisting_at_zero_is_the_coherent_state() {
        let tw = OneAxisTwister::new(20).unwrap();
        let s = tw.state(0.0);
        let x = SymmetricState::polarized(20, PolarizationAxis::X).unwrap();
        for (a, b) in s.amplitudes().iter().zip(x.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn twisting_squeezes_below_the_coherent_variance() {
        let tw = OneAxisTwister::new(500).unwrap();
        let s = tw.state(0.02);
        assert!(s.variance(Axis::Z) < 125.0);
        assert!((s.casimir_expectation() - 250.0 * 251.0).abs() < 1e-6);
    }

    #[test]
    fn golden_section_matches_brute_angle_scan() {
        let tw = OneAxisTwister::new(20).unwrap();
        let twisted = tw.twisted_unrotated(0.1);
        let theta = tw.optimal_angle(twisted.amplitudes());
        let var_opt = {
            let rotated = tw.rotate_x(twisted.amplitudes(), theta);
            let s = SymmetricState::from_amplitudes(20, rotated).unwrap();
            s.variance(Axis::Z)
        };
        let mut best = f64::INFINITY;
        let steps = (std::f64::consts::PI / 1e-4) as usize;
        for i in 0..steps {
            let rotated = tw.rotate_x(twisted.amplitudes(), i as f64 * 1e-4);
            let u = apply_collective(&rotated, Axis::Z);
            let mean = dot(&rotated, &u).re;
            let v = dot(&u, &u).re - mean * mean;
            if v < best {
                best = v;
            }
        }
        assert!((var_opt - best).abs() < 1e-8);
        assert!(var_opt <= best + 1e-12);
    }

    #[test]
    fn random_states_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let s = SymmetricState::haar_random(11, &mut rng);
            let norm: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let s = SymmetricState::one_axis_twisted(8, 0.3).unwrap();
        let back = SymmetricState::from_json(&s.to_json()).unwrap();
        for (a, b) in s.amplitudes().iter().zip(back.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn product_dicke_lives_on_the_central_sector() {
        let s = product_dicke(8).unwrap();
        assert_eq!(s.sector(), SpinSector::new(4, 4));
        let amps = s.pure_amplitudes().unwrap();
        for (idx, a) in amps.iter().enumerate() {
            let expect = if idx == 2 * 5 + 2 { 1.0 } else { 0.0 };
            assert!((a.re - expect).abs() < 1e-15);
        }
        assert!(product_dicke(6).is_err());
    }

    #[test]
    fn mixed_bodies_are_validated() {
        let sector = SpinSector::new(1, 1);
        let dim = sector.dim();
        let mut dm = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            dm[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        assert!(SectorState::mixed(sector, dm.clone()).is_ok());
        dm[1] = Complex64::new(0.9, 0.0);
        dm[dim] = Complex64::new(0.9, 0.0);
        assert!(SectorState::mixed(sector, dm).is_err());
    }
}
