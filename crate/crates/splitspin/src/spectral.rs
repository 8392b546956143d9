//! Spectral functionals of collective components on sector mixtures.
//!
//! ⟨|J_α^+|⟩ uses the local-rotation structure: J_α^a + J_α^b is diagonal in
//! the product of single-side J_α eigenbases, and those eigenbases come from
//! one small tridiagonal eigenproblem per side dimension. ⟨√(J_x²+J_y²)⟩
//! uses that J_x²+J_y² = J² − J_z² preserves the total-M blocks, inside
//! which J² is symmetric tridiagonal.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::spin::{ladder_up, mz_of, Half, SpinSector};
use crate::split::SectorMixture;
use crate::states::SectorState;

/// Largest sector dimension accepted by the spectral paths.
pub const SPECTRAL_DIM_LIMIT: usize = 40_000;

const Z0: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenbasis of the collective J_x on one side, values ascending (−j … j).
pub(crate) struct XBasis {
    pub(crate) values: Vec<f64>,
    /// row-major: vectors[k * dim + r]
    pub(crate) vectors: Vec<f64>,
}

pub(crate) fn x_basis(dim: usize) -> XBasis {
    let diag = vec![0.0; dim];
    let off: Vec<f64> = (0..dim.saturating_sub(1))
        .map(|k| ladder_up(dim, k) / 2.0)
        .collect();
    let eig = linalg::eig_sym_tridiagonal(&diag, &off, true);
    XBasis {
        values: eig.values,
        vectors: eig.vectors,
    }
}

fn guard(sector: SpinSector) -> Result<()> {
    if sector.dim() > SPECTRAL_DIM_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "spectral evaluation limited to sector dimension {SPECTRAL_DIM_LIMIT}, got {}",
            sector.dim()
        )));
    }
    Ok(())
}

fn pure_amps(state: &SectorState) -> Result<&[Complex64]> {
    state
        .pure_amplitudes()
        .ok_or_else(|| Error::invalid("spectral functionals need pure sector bodies"))
}

/// Φ = Vaᵀ Ψ V_b for real per-side basis matrices.
pub(crate) fn transform_both_sides(
    da: usize,
    db: usize,
    va: &[f64],
    vb: &[f64],
    psi: &[Complex64],
) -> Vec<Complex64> {
    let mut t = vec![Z0; da * db];
    for ka in 0..da {
        for kb in 0..db {
            let p = psi[ka * db + kb];
            if p == Z0 {
                continue;
            }
            let row = &vb[kb * db..(kb + 1) * db];
            let out = &mut t[ka * db..(ka + 1) * db];
            for (o, &v) in out.iter_mut().zip(row) {
                *o += p * v;
            }
        }
    }
    let mut phi = vec![Z0; da * db];
    for ka in 0..da {
        for ra in 0..da {
            let w = va[ka * da + ra];
            if w == 0.0 {
                continue;
            }
            let src = &t[ka * db..(ka + 1) * db];
            let dst = &mut phi[ra * db..(ra + 1) * db];
            for (o, &s) in dst.iter_mut().zip(src) {
                *o += w * s;
            }
        }
    }
    phi
}

/// ⟨|J_α^a + J_α^b|⟩, optionally with per-side normalization.
pub fn abs_sum_moment(mix: &SectorMixture, alpha: f64, normalized: bool) -> Result<f64> {
    let mut bases: HashMap<usize, XBasis> = HashMap::new();
    for e in mix.entries() {
        guard(e.state.sector())?;
        let s = e.state.sector();
        bases.entry(s.dim_a()).or_insert_with(|| x_basis(s.dim_a()));
        bases.entry(s.dim_b()).or_insert_with(|| x_basis(s.dim_b()));
    }
    let parts: Vec<f64> = mix
        .entries()
        .par_iter()
        .map(|e| -> Result<f64> {
            let sector = e.state.sector();
            let psi = pure_amps(&e.state)?;
            let (da, db) = (sector.dim_a(), sector.dim_b());
            // measuring J_α is measuring J_x on the state rotated by −α about z
            let mut rotated = vec![Z0; da * db];
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
            let (fa, fb) = (sector.norm_factor(Half::A), sector.norm_factor(Half::B));
            let mut acc = 0.0;
            for ra in 0..da {
                let va = if normalized {
                    if fa > 0.0 {
                        ba.values[ra] / fa
                    } else {
                        0.0
                    }
                } else {
                    ba.values[ra]
                };
                for rb in 0..db {
                    let p = phi[ra * db + rb].norm_sqr();
                    if p == 0.0 {
                        continue;
                    }
                    let vb = if normalized {
                        if fb > 0.0 {
                            bb.values[rb] / fb
                        } else {
                            0.0
                        }
                    } else {
                        bb.values[rb]
                    };
                    acc += p * (va + vb).abs();
                }
            }
            Ok(e.weight * acc)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.iter().sum())
}

/// One fixed-M block of J_x²+J_y² = J² − J_z²: indices, diagonal, subdiagonal.
fn xy_block(sector: SpinSector, s: usize) -> (usize, usize, Vec<f64>, Vec<f64>) {
    let (da, db) = (sector.dim_a(), sector.dim_b());
    let lo = s.saturating_sub(db - 1);
    let hi = s.min(da - 1);
    let len = hi - lo + 1;
    let ca = sector.j_a() * (sector.j_a() + 1.0);
    let cb = sector.j_b() * (sector.j_b() + 1.0);
    let m_total = s as f64 - sector.j_a() - sector.j_b();
    let mut diag = Vec::with_capacity(len);
    let mut off = Vec::with_capacity(len.saturating_sub(1));
    for t in 0..len {
        let ka = lo + t;
        let kb = s - ka;
        let (ma, mb) = (mz_of(da, ka), mz_of(db, kb));
        diag.push(ca + cb + 2.0 * ma * mb - m_total * m_total);
        if t + 1 < len {
            // ⟨ka+1, kb−1| J₊ᵃJ₋ᵇ |ka, kb⟩
            off.push(ladder_up(da, ka) * ladder_up(db, kb - 1));
        }
    }
    (lo, len, diag, off)
}

/// ⟨√(J_x² + J_y²)⟩ of the whole ensemble.
pub fn sqrt_xy_sum_moment(mix: &SectorMixture) -> Result<f64> {
    for e in mix.entries() {
        guard(e.state.sector())?;
    }
    let parts: Vec<f64> = mix
        .entries()
        .par_iter()
        .map(|e| -> Result<f64> {
            let sector = e.state.sector();
            let psi = pure_amps(&e.state)?;
            let (da, db) = (sector.dim_a(), sector.dim_b());
            let mut acc = 0.0;
            for s in 0..(da + db - 1) {
                let (lo, len, diag, off) = xy_block(sector, s);
                let block: Vec<Complex64> =
                    (0..len).map(|t| psi[(lo + t) * db + (s - lo - t)]).collect();
                if block.iter().all(|z| *z == Z0) {
                    continue;
                }
                let eig = linalg::eig_sym_tridiagonal(&diag, &off, true);
                for (r, &lambda) in eig.values.iter().enumerate() {
                    if lambda < -1e-10 {
                        return Err(Error::Domain(format!(
                            "J_x²+J_y² block eigenvalue {lambda}"
                        )));
                    }
                    let root = lambda.max(0.0).sqrt();
                    let mut amp = Z0;
                    for t in 0..len {
                        amp += eig.vectors[t * len + r] * block[t];
                    }
                    acc += root * amp.norm_sqr();
                }
            }
            Ok(e.weight * acc)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.iter().sum())
}

/// Largest eigenvalue of J_x²+J_y² on a sector, (N/2)(N/2+1) at M = 0.
pub fn max_xy_sum_eigenvalue(sector: SpinSector) -> f64 {
    let (da, db) = (sector.dim_a(), sector.dim_b());
    let mut best = f64::NEG_INFINITY;
    for s in 0..(da + db - 1) {
        let (_, _, diag, off) = xy_block(sector, s);
        let eig = linalg::eig_sym_tridiagonal(&diag, &off, false);
        best = best.max(*eig.values.last().unwrap());
    }
    best
}
