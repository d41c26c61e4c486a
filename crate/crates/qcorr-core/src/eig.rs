//! Hermitian eigendecomposition and the spectral functions built on it.
//!
//! The solver is a cyclic complex Jacobi iteration: repeatedly apply plane
//! unitaries that zero one off-diagonal entry at a time until the remaining
//! off-diagonal mass is negligible. Jacobi is quadratically convergent near
//! the end, unconditionally stable, and — unlike Householder tridiagonal
//! approaches — short enough to audit line by line, which matters more here
//! than peak speed: every matrix this crate touches is small (products of
//! two factor dimensions).
//!
//! Output is deterministic: eigenvalues ascending, degenerate clusters
//! re-based against the canonical coordinate axes, and each eigenvector's
//! largest-modulus entry rotated to be real positive.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::LinalgError;
use crate::matrix::{c64, ComplexMatrix};
use crate::tol;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Eigendecomposition of a Hermitian matrix: `values` ascending, column `k`
/// of `vectors` the eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermEigen {
    /// Smallest eigenvalue (`values` is ascending).
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Largest eigenvalue.
    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Rebuild `U f(Λ) U†` from the decomposition.
    pub fn apply(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &v) in self.values.iter().enumerate() {
            let fv = f(v);
            for r in 0..n {
                scaled[(r, k)] = scaled[(r, k)].scale(fv);
            }
        }
        &scaled * &self.vectors.adjoint()
    }
}

/// Eigendecomposition with the default hermiticity tolerance.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermEigen, LinalgError> {
    herm_eig_with(m, tol::HERMITICITY)
}

/// Eigendecomposition, accepting inputs whose scaled hermiticity residual is
/// at most `herm_tol`; the Hermitian part is what gets diagonalized.
pub fn herm_eig_with(m: &ComplexMatrix, herm_tol: f64) -> Result<HermEigen, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let norm = m.hs_norm();
    let residual = m.hermiticity_residual();
    if residual > herm_tol * norm.max(1.0) {
        return Err(LinalgError::NotHermitian { residual });
    }

    let n = m.rows();
    let mut work = m.hermitize();
    let mut q = ComplexMatrix::identity(n);
    let stop = tol::JACOBI_OFF_DIAGONAL * norm;

    let max_sweeps = 100;
    let mut converged = off_diagonal_norm(&work) <= stop;
    let mut sweeps = 0;
    while !converged && sweeps < max_sweeps {
        for p in 0..n {
            for qq in (p + 1)..n {
                rotate(&mut work, &mut q, p, qq);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&work) <= stop;
    }
    if !converged {
        return Err(LinalgError::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| work[(i, i)].re).collect();
    order.sort_by(|&a, &b| diag[a].partial_cmp(&diag[b]).unwrap_or(core::cmp::Ordering::Equal));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &q.column(src));
    }

    rebase_degenerate_clusters(&values, &mut vectors);
    fix_column_phases(&mut vectors);

    Ok(HermEigen { values, vectors })
}

/// Frobenius norm of the strictly off-diagonal part.
pub(crate) fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += m[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation zeroing `work[(p, q)]`, accumulated into `q_mat`.
///
/// For pivot `a_pq = r·e^{iφ}` and diagonal entries `α, γ`, the plane unitary
///
/// ```text
/// V[p][p] = c          V[p][q] = −s
/// V[q][p] = s·e^{−iφ}  V[q][q] = c·e^{−iφ}
/// ```
///
/// with `c = 1/√(1+t²)`, `s = t·c`, and `t` the smaller-magnitude root of
/// `t² − 2τt − 1 = 0`, `τ = (γ−α)/(2r)`, sends the pivot of `V† A V` to
/// `r(c²−s²) + cs(γ−α) = c²·r·(1 − t² + 2τt) = 0`.
fn rotate(work: &mut ComplexMatrix, q_mat: &mut ComplexMatrix, p: usize, q: usize) {
    let n = work.rows();
    let a_pq = work[(p, q)];
    let r = a_pq.norm();
    if r == 0.0 {
        return;
    }
    let phase = a_pq.unscale(r); // e^{iφ}
    let alpha = work[(p, p)].re;
    let gamma = work[(q, q)].re;
    let tau = (gamma - alpha) / (2.0 * r);
    let hyp = (tau * tau + 1.0).sqrt();
    let t = if tau >= 0.0 {
        -1.0 / (tau + hyp)
    } else {
        1.0 / (hyp - tau)
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let e_m = phase.conj(); // e^{−iφ}
    let e_p = phase; // e^{+iφ}

    // Columns: (A V)[·][p] = c·col_p + s e^{−iφ}·col_q,
    //          (A V)[·][q] = −s·col_p + c e^{−iφ}·col_q.
    for i in 0..n {
        let ap = work[(i, p)];
        let aq = work[(i, q)];
        work[(i, p)] = ap.scale(c) + (e_m * aq).scale(s);
        work[(i, q)] = (e_m * aq).scale(c) - ap.scale(s);
    }
    // Rows: (V† B)[p][·] = c·row_p + s e^{+iφ}·row_q,
    //       (V† B)[q][·] = −s·row_p + c e^{+iφ}·row_q.
    for j in 0..n {
        let bp = work[(p, j)];
        let bq = work[(q, j)];
        work[(p, j)] = bp.scale(c) + (e_p * bq).scale(s);
        work[(q, j)] = (e_p * bq).scale(c) - bp.scale(s);
    }
    // Kill rounding drift on the entries the rotation fixes exactly.
    work[(p, q)] = Complex64::ZERO;
    work[(q, p)] = Complex64::ZERO;
    work[(p, p)] = c64(work[(p, p)].re, 0.0);
    work[(q, q)] = c64(work[(q, q)].re, 0.0);

    for i in 0..n {
        let qp = q_mat[(i, p)];
        let qq = q_mat[(i, q)];
        q_mat[(i, p)] = qp.scale(c) + (e_m * qq).scale(s);
        q_mat[(i, q)] = (e_m * qq).scale(c) - qp.scale(s);
    }
}

/// Group indices of an ascending value list into runs separated by gaps below
/// `gap`; returns half-open `(start, end)` ranges covering `0..values.len()`.
pub fn cluster_by_gap(values: &[f64], gap: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if values.is_empty() {
        return out;
    }
    let mut start = 0;
    for i in 1..values.len() {
        if values[i] - values[i - 1] >= gap {
            out.push((start, i));
            start = i;
        }
    }
    out.push((start, values.len()));
    out
}

/// Replace the basis of every degenerate eigenvalue cluster by projecting the
/// canonical coordinate axes onto the cluster subspace and orthonormalizing
/// in index order. The subspace (hence the decomposition) is unchanged, but
/// the representative basis becomes independent of iteration history.
fn rebase_degenerate_clusters(values: &[f64], vectors: &mut ComplexMatrix) {
    let n = values.len();
    if n == 0 {
        return;
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let gap = tol::EIGEN_CLUSTER_GAP * scale;
    for (start, end) in cluster_by_gap(values, gap) {
        let size = end - start;
        if size < 2 {
            continue;
        }
        // Projector columns: P e_j = Σ_k v_k ⟨v_k, e_j⟩ has i-th component
        // Σ_k V[i][k]·conj(V[j][k]).
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(size);
        for j in 0..n {
            if basis.len() == size {
                break;
            }
            let mut cand: Vec<Complex64> = (0..n)
                .map(|i| {
                    (start..end)
                        .map(|k| vectors[(i, k)] * vectors[(j, k)].conj())
                        .sum()
                })
                .collect();
            for b in &basis {
                let ip: Complex64 = b.iter().zip(cand.iter()).map(|(x, y)| x.conj() * y).sum();
                for (cv, bv) in cand.iter_mut().zip(b.iter()) {
                    *cv -= ip * bv;
                }
            }
            let nrm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 1e-8 {
                for z in cand.iter_mut() {
                    *z = z.unscale(nrm);
                }
                basis.push(cand);
            }
        }
        if basis.len() == size {
            for (offset, b) in basis.iter().enumerate() {
                vectors.set_column(start + offset, b);
            }
        }
    }
}

/// Rotate each column so its largest-modulus entry (lowest index on ties)
/// is real positive.
pub(crate) fn fix_column_phases(vectors: &mut ComplexMatrix) {
    let n = vectors.rows();
    for k in 0..vectors.cols() {
        let mut best = 0;
        let mut best_mod = 0.0;
        for i in 0..n {
            let m = vectors[(i, k)].norm();
            if m > best_mod + 1e-12 {
                best_mod = m;
                best = i;
            }
        }
        if best_mod == 0.0 {
            continue;
        }
        let phase = vectors[(best, k)].unscale(vectors[(best, k)].norm());
        let correct = phase.conj();
        for i in 0..n {
            vectors[(i, k)] *= correct;
        }
    }
}

/// PSD square root with the default positivity tolerance.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    psd_sqrt_with(m, tol::POSITIVITY)
}

/// PSD square root: eigenvalues within `[−psd_tol·max(1,‖M‖), 0)` are clamped
/// to zero, anything more negative is an error.
pub fn psd_sqrt_with(m: &ComplexMatrix, psd_tol: f64) -> Result<ComplexMatrix, LinalgError> {
    let eig = herm_eig(m)?;
    let floor = -psd_tol * m.hs_norm().max(1.0);
    if eig.min() < floor {
        return Err(LinalgError::NotPsd {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig.apply(|v| if v > 0.0 { v.sqrt() } else { 0.0 }))
}

/// Moore–Penrose pseudo-inverse with relative singular-value cutoff
/// `rank_tol` (singular values below `rank_tol·σ_max` are treated as zero).
pub fn pseudo_inverse(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix, LinalgError> {
    Ok(pseudo_inverse_with_rank(m, rank_tol)?.0)
}

/// Pseudo-inverse together with the numerical rank it used.
pub fn pseudo_inverse_with_rank(
    m: &ComplexMatrix,
    rank_tol: f64,
) -> Result<(ComplexMatrix, usize), LinalgError> {
    // Eigen-decompose M†M: right singular vectors v_i with σ_i² = λ_i, and
    // M⁺ = Σ_{σ_i > cutoff} v_i (M v_i)† / λ_i  since  M v_i = σ_i u_i.
    let gram = &m.adjoint() * m;
    let eig = herm_eig(&gram)?;
    let sigma_max = eig.max().max(0.0).sqrt();
    let mut out = ComplexMatrix::zeros(m.cols(), m.rows());
    if sigma_max == 0.0 {
        return Ok((out, 0));
    }
    let cutoff = rank_tol * sigma_max;
    let mut rank = 0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        let sigma = lambda.max(0.0).sqrt();
        if sigma <= cutoff {
            continue;
        }
        rank += 1;
        let v = eig.vectors.column(k);
        let mv = m.mul_vec(&v);
        // out += v (M v)† / λ
        for r in 0..m.cols() {
            for c in 0..m.rows() {
                out[(r, c)] += v[r] * mv[c].conj().unscale(lambda);
            }
        }
    }
    Ok((out, rank))
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    let gram = &m.adjoint() * m;
    let eig = herm_eig(&gram)?;
    let mut out: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    out.reverse();
    Ok(out)
}

/// Trace norm (sum of singular values).
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(singular_values(m)?.iter().sum())
}

/// Operator norm (largest singular value).
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}
