//! Brute-force expectation values on the full 2^N qubit space.
//!
//! Collective components are sums of single-site spin actions, J_l = Σ j_l⁽ⁿ⁾,
//! evaluated directly on product-basis state vectors. This path is independent
//! of the symmetric-subspace machinery and serves as its verification oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, LogFactorials};
use crate::spin::{Axis, OperatorSpec, Side, SpecFunc};

/// Hard cap on the brute-force register size.
pub const MAX_QUBITS: u32 = 12;

/// Qubit count above which dense spectral functions are refused.
const MAX_FUNC_QUBITS: u32 = 8;

/// Named reference states available to the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateTag {
    Dicke,
    PolarizedX,
    PolarizedZ,
    Ghz,
}

impl StateTag {
    pub fn label(&self) -> &'static str {
        match self {
            StateTag::Dicke => "dicke",
            StateTag::PolarizedX => "polarized-x",
            StateTag::PolarizedZ => "polarized-z",
            StateTag::Ghz => "ghz",
        }
    }
}

fn guard(n: u32) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "brute-force oracle limited to {MAX_QUBITS} qubits, got {n}"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("oracle needs at least one qubit"));
    }
    Ok(())
}

/// Builds the full product-space vector of a named state. Bit value 1 is
/// spin-up, so the all-ones index is the z-polarized state.
pub fn build_state(n: u32, tag: StateTag) -> Result<Vec<Complex64>> {
    guard(n)?;
    let dim = 1usize << n;
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    match tag {
        StateTag::Dicke => {
            if n % 2 != 0 {
                return Err(Error::invalid("Dicke state needs an even particle count"));
            }
            let lf = LogFactorials::new(n as usize);
            let amp = (-0.5 * lf.ln_binomial(n as usize, n as usize / 2)).exp();
            for (s, a) in psi.iter_mut().enumerate() {
                if (s as u64).count_ones() == n / 2 {
                    *a = Complex64::new(amp, 0.0);
                }
            }
        }
        StateTag::PolarizedZ => {
            psi[dim - 1] = Complex64::new(1.0, 0.0);
        }
        StateTag::PolarizedX => {
            let amp = 0.5f64.powi(n as i32).sqrt();
            psi.iter_mut().for_each(|a| *a = Complex64::new(amp, 0.0));
        }
        StateTag::Ghz => {
            let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            psi[0] = amp;
            psi[dim - 1] = amp;
        }
    }
    Ok(psi)
}

/// w += c · j_axis⁽ˢⁱᵗᵉ⁾ ψ
fn add_site_action(w: &mut [Complex64], psi: &[Complex64], site: u32, axis: Axis, c: Complex64) {
    let mask = 1usize << site;
    match axis {
        Axis::Z => {
            for (s, p) in psi.iter().enumerate() {
                let half = if s & mask != 0 { 0.5 } else { -0.5 };
                w[s] += c * half * p;
            }
        }
        Axis::X => {
            for s in 0..psi.len() {
                w[s] += c * 0.5 * psi[s ^ mask];
            }
        }
        Axis::Y => {
            for s in 0..psi.len() {
                let coeff = if s & mask != 0 {
                    Complex64::new(0.0, -0.5)
                } else {
                    Complex64::new(0.0, 0.5)
                };
                w[s] += c * coeff * psi[s ^ mask];
            }
        }
        Axis::Planar(alpha) => {
            add_site_action(w, psi, site, Axis::X, c * alpha.cos());
            add_site_action(w, psi, site, Axis::Y, c * alpha.sin());
        }
    }
}

/// Applies one half's collective component, with the per-half normalization
/// divisor when requested (zero action for an empty half).
fn apply_half_collective(
    psi: &[Complex64],
    sites: std::ops::Range<u32>,
    axis: Axis,
    normalized: bool,
    sign: f64,
) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(0.0, 0.0); psi.len()];
    let count = sites.end.saturating_sub(sites.start);
    let scale = if normalized {
        let j = count as f64 / 2.0;
        let f = (j * (j + 1.0)).sqrt();
        if f == 0.0 {
            return w;
        }
        sign / f
    } else {
        sign
    };
    let c = Complex64::new(scale, 0.0);
    for site in sites {
        add_site_action(&mut w, psi, site, axis, c);
    }
    w
}

fn apply_component(psi: &[Complex64], n: u32, n_a: u32, spec: &OperatorSpec) -> Vec<Complex64> {
    let (a_range, b_range) = (0..n_a, n_a..n);
    match spec.side {
        Side::A => apply_half_collective(psi, a_range, spec.axis, spec.normalized, 1.0),
        Side::B => apply_half_collective(psi, b_range, spec.axis, spec.normalized, 1.0),
        Side::Sum | Side::Difference => {
            let sign = if spec.side == Side::Sum { 1.0 } else { -1.0 };
            let mut w = apply_half_collective(psi, a_range, spec.axis, spec.normalized, 1.0);
            let wb = apply_half_collective(psi, b_range, spec.axis, spec.normalized, sign);
            w.iter_mut().zip(&wb).for_each(|(x, y)| *x += y);
            w
        }
    }
}

fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Expectation of a bipartite observable on the full 2^N representation,
/// with the first `n_a` qubits forming subsystem a.
pub fn expectation(n: u32, n_a: u32, tag: StateTag, spec: &OperatorSpec) -> Result<f64> {
    guard(n)?;
    if n_a > n {
        return Err(Error::invalid("subsystem a larger than the register"));
    }
    spec.validate()?;
    let psi = build_state(n, tag)?;
    if spec.func == SpecFunc::None {
        let u = apply_component(&psi, n, n_a, spec);
        return Ok(match spec.power {
            1 => inner(&psi, &u).re,
            _ => inner(&u, &u).re,
        });
    }
    if n > MAX_FUNC_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "spectral functions on the full space limited to {MAX_FUNC_QUBITS} qubits"
        )));
    }
    // materialize the base operator column by column, then apply the function
    let dim = psi.len();
    let base_spec = OperatorSpec {
        func: SpecFunc::None,
        power: 1,
        ..*spec
    };
    let mut dense = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut basis = vec![Complex64::new(0.0, 0.0); dim];
    for col in 0..dim {
        basis[col] = Complex64::new(1.0, 0.0);
        let (mx, my);
        let column: &[Complex64] = match spec.func {
            SpecFunc::Abs => {
                mx = apply_component(&basis, n, n_a, &base_spec);
                &mx
            }
            SpecFunc::SqrtSumXY => {
                let sx = OperatorSpec {
                    axis: Axis::X,
                    ..base_spec
                };
                let sy = OperatorSpec {
                    axis: Axis::Y,
                    ..base_spec
                };
                let x1 = apply_component(&basis, n, n_a, &sx);
                let x2 = apply_component(&x1, n, n_a, &sx);
                let y1 = apply_component(&basis, n, n_a, &sy);
                let y2 = apply_component(&y1, n, n_a, &sy);
                my = x2.iter().zip(&y2).map(|(a, b)| a + b).collect::<Vec<_>>();
                &my
            }
            SpecFunc::None => unreachable!(),
        };
        for row in 0..dim {
            dense[row * dim + col] = column[row];
        }
        basis[col] = Complex64::new(0.0, 0.0);
    }
    let func = linalg::hermitian_apply_spectral(&dense, dim, |lambda| match spec.func {
        SpecFunc::Abs => Ok(lambda.abs()),
        _ => {
            if lambda < -1e-10 {
                Err(Error::Domain(format!(
                    "square root of operator with eigenvalue {lambda}"
                )))
            } else {
                Ok(lambda.max(0.0).sqrt())
            }
        }
    })?;
    let mut u = vec![Complex64::new(0.0, 0.0); dim];
    for row in 0..dim {
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..dim {
            acc += func[row * dim + col] * psi[col];
        }
        u[row] = acc;
    }
    Ok(match spec.power {
        1 => inner(&psi, &u).re,
        _ => inner(&u, &u).re,
    })
}

/// ⟨J_l^a J_l^b⟩ on the full representation.
pub fn half_correlation(n: u32, n_a: u32, tag: StateTag, axis: Axis) -> Result<f64> {
    guard(n)?;
    let psi = build_state(n, tag)?;
    let ua = apply_half_collective(&psi, 0..n_a, axis, false, 1.0);
    let ub = apply_half_collective(&psi, n_a..n, axis, false, 1.0);
    Ok(inner(&ua, &ub).re)
}

/// Two-site correlation ⟨j_l⁽ⁱ⁾ j_l⁽ʲ⁾⟩.
pub fn pair_correlation(n: u32, tag: StateTag, axis: Axis, site_i: u32, site_j: u32) -> Result<f64> {
    guard(n)?;
    if site_i >= n || site_j >= n || site_i == site_j {
        return Err(Error::invalid("pair correlation needs two distinct sites"));
    }
    let psi = build_state(n, tag)?;
    let one = Complex64::new(1.0, 0.0);
    let mut u = vec![Complex64::new(0.0, 0.0); psi.len()];
    add_site_action(&mut u, &psi, site_i, axis, one);
    let mut v = vec![Complex64::new(0.0, 0.0); psi.len()];
    add_site_action(&mut v, &psi, site_j, axis, one);
    Ok(inner(&u, &v).re)
}
