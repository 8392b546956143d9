//! Dense symmetric / Hermitian eigensolvers and log-domain combinatorics.
//!
//! The solvers are the classic EISPACK pair: Householder reduction to
//! tridiagonal form (`tred2`) followed by QL iteration with implicit shifts
//! (`tql2`). Hermitian matrices go through the real embedding
//! `[[X, -Y], [Y, X]]` of `A = X + iY`, which doubles every eigenvalue and
//! turns spectral functions of `A` into spectral functions of the embedding.

use num_complex::Complex64;

use crate::error::Result;

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
///
/// `vectors` is row-major: `vectors[i * n + r]` is component `i` of the
/// eigenvector belonging to `values[r]`.
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

/// QL iteration with implicit shifts on a symmetric tridiagonal matrix.
///
/// `diag` has length `n`, `off` length `n - 1` (subdiagonal). The rotations
/// are accumulated onto an identity, so the returned vectors diagonalize the
/// tridiagonal matrix itself.
pub fn eig_sym_tridiagonal(diag: &[f64], off: &[f64], want_vectors: bool) -> SymEig {
    let n = diag.len();
    assert!(n > 0 && off.len() + 1 == n);
    let mut d = diag.to_vec();
    let mut e = Vec::with_capacity(n);
    e.extend_from_slice(off);
    e.push(0.0);
    let mut z = if want_vectors {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    } else {
        Vec::new()
    };
    ql_implicit(&mut d, &mut e, n, &mut z, want_vectors);
    sort_eig(&mut d, &mut z, n, want_vectors);
    SymEig {
        values: d,
        vectors: z,
    }
}

/// Eigen-decomposition of a dense real symmetric matrix (row-major).
pub fn eig_sym_dense(a: &[f64], n: usize, want_vectors: bool) -> SymEig {
    assert_eq!(a.len(), n * n);
    let mut q = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut q, n, &mut d, &mut e);
    // after tred2, q holds the accumulated orthogonal transform
    ql_implicit(&mut d, &mut e, n, &mut q, true);
    sort_eig(&mut d, &mut q, n, true);
    SymEig {
        values: d,
        vectors: if want_vectors { q } else { Vec::new() },
    }
}

/// Eigenvalues of a complex Hermitian matrix, ascending, each once.
pub fn hermitian_eigenvalues(a: &[Complex64], n: usize) -> Vec<f64> {
    let eig = eig_sym_dense(&embed_hermitian(a, n), 2 * n, false);
    // the embedding doubles every eigenvalue; keep one of each pair
    eig.values.iter().step_by(2).copied().collect()
}

/// Applies a spectral function to a complex Hermitian matrix.
///
/// `f` sees each eigenvalue of the real embedding and may reject it, which
/// is how domain checks (negative eigenvalue under a square root) surface.
pub fn hermitian_apply_spectral(
    a: &[Complex64],
    n: usize,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<Vec<Complex64>> {
    let m = 2 * n;
    let eig = eig_sym_dense(&embed_hermitian(a, n), m, true);
    let mut fvals = Vec::with_capacity(m);
    for &lambda in &eig.values {
        fvals.push(f(lambda)?);
    }
    // B = V f(Λ) Vᵀ on the embedding, then un-embed the top-left block
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            let mut re = 0.0;
            let mut im = 0.0;
            for r in 0..m {
                let w = fvals[r] * eig.vectors[k * m + r];
                re += eig.vectors[j * m + r] * w;
                im += eig.vectors[(j + n) * m + r] * w;
            }
            out[j * n + k] = Complex64::new(re, im);
        }
    }
    Ok(out)
}

fn embed_hermitian(a: &[Complex64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let m = 2 * n;
    let mut big = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = a[i * n + j];
            big[i * m + j] = z.re;
            big[(i + n) * m + j + n] = z.re;
            big[i * m + j + n] = -z.im;
            big[(i + n) * m + j] = z.im;
        }
    }
    big
}

fn sort_eig(d: &mut [f64], z: &mut [f64], n: usize, with_vectors: bool) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&r| d[r]).collect();
    d.copy_from_slice(&sorted);
    if with_vectors {
        let old = z.to_vec();
        for i in 0..n {
            for (new_col, &old_col) in order.iter().enumerate() {
                z[i * n + new_col] = old[i * n + old_col];
            }
        }
    }
}

fn ql_implicit(d: &mut [f64], e: &mut [f64], n: usize, z: &mut [f64], with_vectors: bool) {
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 60, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut fv = s * e[i];
                let b = c * e[i];
                r = fv.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = fv / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if with_vectors {
                    for k in 0..n {
                        fv = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * fv;
                        z[k * n + i] = c * z[k * n + i] - s * fv;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Householder reduction of a dense symmetric matrix to tridiagonal form,
/// accumulating the orthogonal transform in `a`.
fn tred2(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i;
        let mut h = 0.0;
        if l > 1 {
            let mut scale = 0.0;
            for k in 0..l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l - 1];
            } else {
                for k in 0..l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l - 1];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l - 1] = f - g;
                let mut fsum = 0.0;
                for j in 0..l {
                    a[j * n + i] = a[i * n + j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    fsum += e[j] * a[i * n + j];
                }
                let hh = fsum / (h + h);
                for j in 0..l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l - 1];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        let l = i;
        if d[i] != 0.0 {
            for j in 0..l {
                let mut g = 0.0;
                for k in 0..l {
                    g += a[i * n + k] * a[k * n + j];
                }
                for k in 0..l {
                    a[k * n + j] -= g * a[k * n + i];
                }
            }
        }
        d[i] = a[i * n + i];
        a[i * n + i] = 1.0;
        for j in 0..l {
            a[j * n + i] = 0.0;
            a[i * n + j] = 0.0;
        }
    }
    // shift the subdiagonal into e[0..n-1] for the QL stage
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
}

/// Log-factorials with compensated summation, for binomials up to large n.
pub struct LogFactorials {
    table: Vec<f64>,
}

impl LogFactorials {
    pub fn new(n_max: usize) -> Self {
        let mut table = Vec::with_capacity(n_max + 1);
        table.push(0.0);
        let mut sum = 0.0;
        let mut comp = 0.0;
        for i in 1..=n_max {
            let term = (i as f64).ln() - comp;
            let t = sum + term;
            comp = (t - sum) - term;
            sum = t;
            table.push(sum);
        }
        LogFactorials { table }
    }

    pub fn ln_factorial(&self, n: usize) -> f64 {
        self.table[n]
    }

    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        assert!(k <= n && n < self.table.len());
        self.table[n] - self.table[k] - self.table[n - k]
    }

    pub fn binomial(&self, n: usize, k: usize) -> f64 {
        self.ln_binomial(n, k).exp()
    }
}

/// `sqrt(binom(n, k) / 2^n)`, the coherent-state amplitude, in log space.
pub fn half_binomial_amplitude(lf: &LogFactorials, n: usize, k: usize) -> f64 {
    (0.5 * (lf.ln_binomial(n, k) - n as f64 * std::f64::consts::LN_2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut impl Rng) -> Vec<f64> {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = rng.gen_range(-1.0..1.0);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        a
    }

    fn check_eigenpairs(a: &[f64], n: usize, eig: &SymEig, tol: f64) {
        for r in 0..n {
            for i in 0..n {
                let mut av = 0.0;
                for j in 0..n {
                    av += a[i * n + j] * eig.vectors[j * n + r];
                }
                assert!(
                    (av - eig.values[r] * eig.vectors[i * n + r]).abs() < tol,
                    "eigenpair residual too large"
                );
            }
        }
        // orthonormality
        for r in 0..n {
            for s in 0..n {
                let mut dot = 0.0;
                for i in 0..n {
                    dot += eig.vectors[i * n + r] * eig.vectors[i * n + s];
                }
                let expect = if r == s { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < tol);
            }
        }
    }

    #[test]
    fn tridiagonal_eigenpairs_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[1usize, 2, 3, 8, 33, 60] {
            let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let off: Vec<f64> = (0..n.saturating_sub(1))
                .map(|_| rng.gen_range(-2.0..2.0))
                .collect();
            let eig = eig_sym_tridiagonal(&diag, &off, true);
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                a[i * n + i] = diag[i];
                if i + 1 < n {
                    a[i * n + i + 1] = off[i];
                    a[(i + 1) * n + i] = off[i];
                }
            }
            check_eigenpairs(&a, n, &eig, 1e-10);
        }
    }

    #[test]
    fn dense_symmetric_eigenpairs_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &n in &[2usize, 5, 17, 40] {
            let a = random_symmetric(n, &mut rng);
            let eig = eig_sym_dense(&a, n, true);
            check_eigenpairs(&a, n, &eig, 1e-9);
            let mut sorted = eig.values.clone();
            sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
            assert_eq!(sorted, eig.values);
        }
    }

    #[test]
    fn hermitian_identity_function_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 12;
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..i {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                a[i * n + j] = z;
                a[j * n + i] = z.conj();
            }
            a[i * n + i] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        }
        let b = hermitian_apply_spectral(&a, n, Ok).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-10);
        }
        let evs = hermitian_eigenvalues(&a, n);
        assert_eq!(evs.len(), n);
        let tr: f64 = a.iter().step_by(n + 1).map(|z| z.re).sum();
        assert!((evs.iter().sum::<f64>() - tr).abs() < 1e-9);
    }

    #[test]
    fn binomials_match_exact_integers() {
        let lf = LogFactorials::new(60);
        for n in 0..=60usize {
            let mut exact: u128 = 1;
            for k in 0..=n {
                let approx = lf.binomial(n, k);
                let rel = (approx - exact as f64).abs() / exact as f64;
                assert!(rel < 1e-12, "binom({n},{k}) off by {rel}");
                if k < n {
                    exact = exact * (n - k) as u128 / (k + 1) as u128;
                }
            }
        }
    }

    #[test]
    fn binomial_weights_normalize_at_large_n() {
        // ln-factorial differences cancel to ~n·ε, so the raw sum drifts with n
        for (n, tol) in [(400usize, 1e-12), (10_000, 1e-10)] {
            let lf = LogFactorials::new(n);
            let ln2n = n as f64 * std::f64::consts::LN_2;
            let total: f64 = (0..=n).map(|k| (lf.ln_binomial(n, k) - ln2n).exp()).sum();
            assert!((total - 1.0).abs() < tol, "n={n} sum={total}");
        }
    }
}
