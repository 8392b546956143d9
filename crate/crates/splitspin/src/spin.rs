//! Angular-momentum representations and bipartite collective operators.
//!
//! Two basis conventions meet here. Dense matrices from [`spin_matrices`] and
//! [`realize_operator`] use the |j, m⟩ basis with m descending (serialization
//! and test-vector order), while state vectors elsewhere in the crate are
//! stored excitation-ascending (k = number of 1s, m = k − j). The structured
//! ladder actions in this module work on the excitation-ascending layout and
//! never materialize an operator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

const Z0: Complex64 = Complex64::new(0.0, 0.0);

/// Largest product-space dimension realized as a dense matrix.
pub const DENSE_DIM_LIMIT: usize = 4096;

/// ⟨k+1|J₊|k⟩ in the excitation-ascending basis of the given dimension.
#[inline]
pub(crate) fn ladder_up(dim: usize, k: usize) -> f64 {
    ((dim - 1 - k) as f64 * (k + 1) as f64).sqrt()
}

/// m-eigenvalue of basis index k: k − j.
#[inline]
pub(crate) fn mz_of(dim: usize, k: usize) -> f64 {
    k as f64 - (dim as f64 - 1.0) / 2.0
}

/// Raising/lowering coefficients of J_axis = c₊ J₊ + c₋ J₋ for planar axes.
#[inline]
pub(crate) fn planar_coeffs(axis: Axis) -> (Complex64, Complex64) {
    match axis {
        Axis::X => (Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)),
        Axis::Y => (Complex64::new(0.0, -0.5), Complex64::new(0.0, 0.5)),
        Axis::Planar(alpha) => {
            let e = Complex64::from_polar(0.5, -alpha);
            (e, e.conj())
        }
        Axis::Z => unreachable!("z axis is diagonal"),
    }
}

/// Applies a collective component to a ladder-space vector (excitation
/// ascending), returning the new vector.
pub(crate) fn apply_collective(amps: &[Complex64], axis: Axis) -> Vec<Complex64> {
    let dim = amps.len();
    let mut out = vec![Z0; dim];
    match axis {
        Axis::Z => {
            for (k, a) in amps.iter().enumerate() {
                out[k] = a * mz_of(dim, k);
            }
        }
        _ => {
            let (cp, cm) = planar_coeffs(axis);
            for k in 0..dim {
                let a = amps[k];
                if k + 1 < dim {
                    out[k + 1] += cp * ladder_up(dim, k) * a;
                }
                if k > 0 {
                    out[k - 1] += cm * ladder_up(dim, k - 1) * a;
                }
            }
        }
    }
    out
}

/// One half of a bipartite sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Half {
    A,
    B,
}

/// Applies J_axis of one subsystem to a sector vector stored row-major over
/// (kₐ, k_b), both excitation ascending.
pub(crate) fn apply_half(
    sector: SpinSector,
    psi: &[Complex64],
    axis: Axis,
    half: Half,
) -> Vec<Complex64> {
    let da = sector.dim_a();
    let db = sector.dim_b();
    debug_assert_eq!(psi.len(), da * db);
    let mut out = vec![Z0; da * db];
    match (axis, half) {
        (Axis::Z, Half::A) => {
            for ka in 0..da {
                let m = mz_of(da, ka);
                for kb in 0..db {
                    out[ka * db + kb] = psi[ka * db + kb] * m;
                }
            }
        }
        (Axis::Z, Half::B) => {
            for ka in 0..da {
                for kb in 0..db {
                    out[ka * db + kb] = psi[ka * db + kb] * mz_of(db, kb);
                }
            }
        }
        (_, Half::A) => {
            let (cp, cm) = planar_coeffs(axis);
            for ka in 0..da {
                let up = if ka + 1 < da {
                    Some(cp * ladder_up(da, ka))
                } else {
                    None
                };
                let down = if ka > 0 {
                    Some(cm * ladder_up(da, ka - 1))
                } else {
                    None
                };
                for kb in 0..db {
                    let a = psi[ka * db + kb];
                    if let Some(c) = up {
                        out[(ka + 1) * db + kb] += c * a;
                    }
                    if let Some(c) = down {
                        out[(ka - 1) * db + kb] += c * a;
                    }
                }
            }
        }
        (_, Half::B) => {
            let (cp, cm) = planar_coeffs(axis);
            for ka in 0..da {
                let row = ka * db;
                for kb in 0..db {
                    let a = psi[row + kb];
                    if kb + 1 < db {
                        out[row + kb + 1] += cp * ladder_up(db, kb) * a;
                    }
                    if kb > 0 {
                        out[row + kb - 1] += cm * ladder_up(db, kb - 1) * a;
                    }
                }
            }
        }
    }
    out
}

/// A dense operator on a (2j+1)- or product-dimensional spin space, stored
/// row-major in the m-descending basis.
#[derive(Clone, Debug)]
pub struct SpinMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl SpinMatrix {
    pub fn zeros(dim: usize) -> Self {
        SpinMatrix {
            dim,
            data: vec![Z0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_data(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        SpinMatrix { dim, data }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Spin quantum number when this is a single-spin matrix.
    pub fn j(&self) -> f64 {
        (self.dim as f64 - 1.0) / 2.0
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SpinMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &SpinMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        SpinMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &SpinMatrix) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &SpinMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = vec![Z0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Z0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        SpinMatrix { dim: n, data: out }
    }

    pub fn kron(&self, other: &SpinMatrix) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = vec![Z0; n * n];
        for ia in 0..na {
            for ja in 0..na {
                let a = self.data[ia * na + ja];
                if a == Z0 {
                    continue;
                }
                for ib in 0..nb {
                    for jb in 0..nb {
                        out[(ia * nb + ib) * n + ja * nb + jb] = a * other.data[ib * nb + jb];
                    }
                }
            }
        }
        SpinMatrix { dim: n, data: out }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        let mut out = vec![Z0; n];
        for i in 0..n {
            let mut acc = Z0;
            for j in 0..n {
                acc += self.data[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// ⟨v|M|v⟩ for a unit vector in the same (m-descending) basis.
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        let mv = self.apply(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..=i {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &SpinMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues (ascending) assuming hermiticity.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.data, self.dim)
    }
}

/// Builds J_axis for a single spin of the given dimension, m descending.
fn single_spin_axis(dim: usize, axis: Axis) -> SpinMatrix {
    let j = (dim as f64 - 1.0) / 2.0;
    let mut m = SpinMatrix::zeros(dim);
    match axis {
        Axis::Z => {
            for i in 0..dim {
                m.set(i, i, Complex64::new(j - i as f64, 0.0));
            }
        }
        _ => {
            let (cp, cm) = planar_coeffs(axis);
            // J₊ couples index i to i−1 in the m-descending layout
            for i in 1..dim {
                let c = (i as f64 * (2.0 * j + 1.0 - i as f64)).sqrt();
                let up = m.get(i - 1, i) + cp * c;
                m.set(i - 1, i, up);
                let down = m.get(i, i - 1) + cm * c;
                m.set(i, i - 1, down);
            }
        }
    }
    m
}

/// The spin-j matrices (J_x, J_y, J_z) in the |j, m⟩ basis, m = j … −j.
pub fn spin_matrices(j: f64) -> Result<(SpinMatrix, SpinMatrix, SpinMatrix)> {
    let twice = 2.0 * j;
    if j < 0.0 || j.is_nan() || (twice - twice.round()).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "spin quantum number must be a non-negative half-integer, got {j}"
        )));
    }
    let dim = twice.round() as usize + 1;
    Ok((
        single_spin_axis(dim, Axis::X),
        single_spin_axis(dim, Axis::Y),
        single_spin_axis(dim, Axis::Z),
    ))
}

/// A fixed particle-number bipartition (N_a, N_b) with local spins n/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinSector {
    pub n_a: u32,
    pub n_b: u32,
}

impl SpinSector {
    pub fn new(n_a: u32, n_b: u32) -> Self {
        SpinSector { n_a, n_b }
    }

    pub fn total(&self) -> u32 {
        self.n_a + self.n_b
    }

    pub fn j_a(&self) -> f64 {
        self.n_a as f64 / 2.0
    }

    pub fn j_b(&self) -> f64 {
        self.n_b as f64 / 2.0
    }

    /// Occupation imbalance δ = (N_a − N_b)/2.
    pub fn delta(&self) -> f64 {
        (self.n_a as f64 - self.n_b as f64) / 2.0
    }

    pub fn dim_a(&self) -> usize {
        self.n_a as usize + 1
    }

    pub fn dim_b(&self) -> usize {
        self.n_b as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.dim_a() * self.dim_b()
    }

    /// √(j(j+1)) divisor of the normalized components; 0 for an empty half,
    /// for which the normalized operator is the zero operator.
    pub fn norm_factor(&self, half: Half) -> f64 {
        let j = match half {
            Half::A => self.j_a(),
            Half::B => self.j_b(),
        };
        (j * (j + 1.0)).sqrt()
    }
}

/// Measurement axis of a collective component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Axis {
    X,
    Y,
    Z,
    /// J_x cos α + J_y sin α.
    Planar(f64),
}

impl Axis {
    pub fn label(&self) -> String {
        match self {
            Axis::X => "x".into(),
            Axis::Y => "y".into(),
            Axis::Z => "z".into(),
            Axis::Planar(a) => format!("alpha={a}"),
        }
    }
}

/// Which combination of the two halves an observable acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
    Sum,
    Difference,
}

/// Spectral function applied on top of the realized component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecFunc {
    None,
    /// Entrywise absolute value of the spectrum.
    Abs,
    /// √(J_x² + J_y²) built from the same side/normalization; the axis
    /// field is ignored.
    SqrtSumXY,
}

/// Spectral function tag for [`matrix_function`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFunc {
    Abs,
    Sqrt,
}

/// Symbolic descriptor of a bipartite collective observable.
#[derive(Clone, Copy, Debug)]
pub struct OperatorSpec {
    pub axis: Axis,
    pub side: Side,
    pub power: u8,
    pub normalized: bool,
    pub func: SpecFunc,
}

impl OperatorSpec {
    pub fn new(axis: Axis, side: Side) -> Self {
        OperatorSpec {
            axis,
            side,
            power: 1,
            normalized: false,
            func: SpecFunc::None,
        }
    }

    pub fn squared(mut self) -> Self {
        self.power = 2;
        self
    }

    pub fn normalized(mut self) -> Self {
        self.normalized = true;
        self
    }

    pub fn with_func(mut self, func: SpecFunc) -> Self {
        self.func = func;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.power != 1 && self.power != 2 {
            return Err(Error::invalid(format!(
                "operator power must be 1 or 2, got {}",
                self.power
            )));
        }
        if self.normalized && matches!(self.axis, Axis::Z) && self.func != SpecFunc::SqrtSumXY {
            return Err(Error::invalid(
                "normalized components are defined only in the x-y plane",
            ));
        }
        Ok(())
    }
}

/// Dense realization of a bipartite observable on the sector product space,
/// row-major over (m_a, m_b) with both m descending.
pub fn realize_operator(sector: SpinSector, spec: &OperatorSpec) -> Result<SpinMatrix> {
    spec.validate()?;
    let dim = sector.dim();
    if dim > DENSE_DIM_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "dense realization limited to dimension {DENSE_DIM_LIMIT}, sector has {dim}"
        )));
    }
    let base = match spec.func {
        SpecFunc::None => realize_component(sector, spec.axis, spec.side, spec.normalized),
        SpecFunc::Abs => {
            let raw = realize_component(sector, spec.axis, spec.side, spec.normalized);
            matrix_function(&raw, MatrixFunc::Abs)?
        }
        SpecFunc::SqrtSumXY => {
            let jx = realize_component(sector, Axis::X, spec.side, spec.normalized);
            let jy = realize_component(sector, Axis::Y, spec.side, spec.normalized);
            let sum = jx.mul(&jx).add(&jy.mul(&jy));
            matrix_function(&sum, MatrixFunc::Sqrt)?
        }
    };
    Ok(if spec.power == 2 {
        base.mul(&base)
    } else {
        base
    })
}

fn realize_component(sector: SpinSector, axis: Axis, side: Side, normalized: bool) -> SpinMatrix {
    let half_op = |half: Half| -> SpinMatrix {
        let dim = match half {
            Half::A => sector.dim_a(),
            Half::B => sector.dim_b(),
        };
        let mut op = single_spin_axis(dim, axis);
        if normalized {
            let f = sector.norm_factor(half);
            op = if f > 0.0 {
                op.scale(Complex64::new(1.0 / f, 0.0))
            } else {
                SpinMatrix::zeros(dim)
            };
        }
        op
    };
    let ia = SpinMatrix::identity(sector.dim_a());
    let ib = SpinMatrix::identity(sector.dim_b());
    match side {
        Side::A => half_op(Half::A).kron(&ib),
        Side::B => ia.kron(&half_op(Half::B)),
        Side::Sum => half_op(Half::A)
            .kron(&ib)
            .add(&ia.kron(&half_op(Half::B))),
        Side::Difference => half_op(Half::A)
            .kron(&ib)
            .sub(&ia.kron(&half_op(Half::B))),
    }
}

/// Spectral function of a Hermitian operator via eigendecomposition.
///
/// Square roots clamp eigenvalues in [−1e-10, 0) to zero and reject anything
/// below −1e-10.
pub fn matrix_function(op: &SpinMatrix, func: MatrixFunc) -> Result<SpinMatrix> {
    let scale: f64 = op.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if op.hermiticity_error() > 1e-12 * scale.max(1.0) {
        return Err(Error::invalid("matrix function requires a Hermitian operator"));
    }
    let data = linalg::hermitian_apply_spectral(&op.data, op.dim, |lambda| match func {
        MatrixFunc::Abs => Ok(lambda.abs()),
        MatrixFunc::Sqrt => {
            if lambda < -1e-10 {
                Err(Error::Domain(format!(
                    "square root of operator with eigenvalue {lambda}"
                )))
            } else {
                Ok(lambda.max(0.0).sqrt())
            }
        }
    })?;
    Ok(SpinMatrix::from_data(op.dim, data))
}

/// Reorders an excitation-ascending sector vector into the m-descending
/// product basis used by dense realizations.
pub fn excitation_to_m_descending(sector: SpinSector, psi: &[Complex64]) -> Vec<Complex64> {
    let da = sector.dim_a();
    let db = sector.dim_b();
    assert_eq!(psi.len(), da * db);
    let mut out = vec![Z0; da * db];
    for ka in 0..da {
        for kb in 0..db {
            out[(da - 1 - ka) * db + (db - 1 - kb)] = psi[ka * db + kb];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn casimir(jx: &SpinMatrix, jy: &SpinMatrix, jz: &SpinMatrix) -> SpinMatrix {
        jx.mul(jx).add(&jy.mul(jy)).add(&jz.mul(jz))
    }

    #[test]
    fn jz_is_diagonal_in_descending_m() {
        let (_, _, jz) = spin_matrices(0.5).unwrap();
        assert!((jz.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((jz.get(1, 1).re + 0.5).abs() < 1e-15);
        let (_, _, jz) = spin_matrices(1.0).unwrap();
        let diag: Vec<f64> = (0..3).map(|i| jz.get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn casimir_identity_at_three_halves() {
        let (jx, jy, jz) = spin_matrices(1.5).unwrap();
        let c = casimir(&jx, &jy, &jz);
        let expect = SpinMatrix::identity(4).scale(Complex64::new(15.0 / 4.0, 0.0));
        assert!(c.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn commutation_and_casimir_hold_up_to_j_six() {
        let mut twice = 0u32;
        while twice <= 12 {
            let j = twice as f64 / 2.0;
            let (jx, jy, jz) = spin_matrices(j).unwrap();
            let comm = jx.mul(&jy).sub(&jy.mul(&jx));
            let izjz = jz.scale(Complex64::new(0.0, 1.0));
            assert!(comm.max_abs_diff(&izjz) < 1e-12, "commutator at j={j}");
            let c = casimir(&jx, &jy, &jz);
            let expect = SpinMatrix::identity(jx.dim()).scale(Complex64::new(j * (j + 1.0), 0.0));
            assert!(c.max_abs_diff(&expect) < 1e-12, "casimir at j={j}");
            twice += 1;
        }
    }

    #[test]
    fn non_half_integer_spin_is_rejected() {
        assert!(spin_matrices(0.3).is_err());
        assert!(spin_matrices(-0.5).is_err());
    }

    #[test]
    fn sum_z_spectrum_on_two_by_two_sector() {
        let sector = SpinSector::new(2, 2);
        let spec = OperatorSpec::new(Axis::Z, Side::Sum);
        let op = realize_operator(sector, &spec).unwrap();
        assert_eq!(op.dim(), 9);
        let mut evs = op.eigenvalues();
        evs.iter_mut().for_each(|v| *v = v.round());
        assert_eq!(
            evs,
            vec![-2.0, -1.0, -1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 2.0]
        );
    }

    #[test]
    fn planar_quarter_turn_is_y() {
        let sector = SpinSector::new(1, 1);
        let planar = realize_operator(
            sector,
            &OperatorSpec::new(Axis::Planar(std::f64::consts::FRAC_PI_2), Side::A),
        )
        .unwrap();
        let y = realize_operator(sector, &OperatorSpec::new(Axis::Y, Side::A)).unwrap();
        assert!(planar.max_abs_diff(&y) < 1e-12);
    }

    #[test]
    fn abs_of_diagonal_matrix() {
        let m = SpinMatrix::from_diagonal(&[1.0, -2.0, 0.0]);
        let a = matrix_function(&m, MatrixFunc::Abs).unwrap();
        let expect = SpinMatrix::from_diagonal(&[1.0, 2.0, 0.0]);
        assert!(a.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn sqrt_clamps_fp_drift_and_rejects_negatives() {
        let m = SpinMatrix::from_diagonal(&[4.0, -5e-11]);
        let s = matrix_function(&m, MatrixFunc::Sqrt).unwrap();
        assert!((s.get(0, 0).re - 2.0).abs() < 1e-12);
        assert_eq!(s.get(1, 1).re, 0.0);
        let bad = SpinMatrix::from_diagonal(&[1.0, -1e-6]);
        assert!(matches!(
            matrix_function(&bad, MatrixFunc::Sqrt),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn normalized_z_component_is_rejected() {
        let spec = OperatorSpec::new(Axis::Z, Side::Sum).normalized();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn empty_half_normalizes_to_zero_operator() {
        let sector = SpinSector::new(0, 2);
        let spec = OperatorSpec::new(Axis::X, Side::A).normalized();
        let op = realize_operator(sector, &spec).unwrap();
        assert!(op.max_abs_diff(&SpinMatrix::zeros(3)) < 1e-15);
    }

    #[test]
    fn structured_apply_matches_dense_realization() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let sector = SpinSector::new(3, 2);
        let dim = sector.dim();
        let mut psi: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|z| *z /= norm);

        for axis in [Axis::X, Axis::Y, Axis::Z, Axis::Planar(0.7)] {
            for (half, side) in [(Half::A, Side::A), (Half::B, Side::B)] {
                let structured = apply_half(sector, &psi, axis, half);
                let dense = realize_operator(sector, &OperatorSpec::new(axis, side)).unwrap();
                let dense_applied = dense.apply(&excitation_to_m_descending(sector, &psi));
                let back = excitation_to_m_descending(sector, &structured);
                for (a, b) in back.iter().zip(&dense_applied) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }
}
