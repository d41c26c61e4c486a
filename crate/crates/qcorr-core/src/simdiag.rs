//! Joint diagonalization of commuting normal families.
//!
//! Several predicates in this crate reduce to the same linear-algebra core:
//! given operators that pairwise commute and are individually normal, find
//! one unitary whose columns are joint eigenvectors of all of them. The
//! approach is the standard randomized one — diagonalize a random real
//! combination of the Hermitian parts, whose eigenspaces almost surely equal
//! the joint eigenspaces — plus a recursive split of any degenerate cluster
//! with fresh coefficients, and an explicit verification that every family
//! member really is diagonal in the computed basis.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eig::{cluster_by_gap, fix_column_phases, off_diagonal_norm};
use crate::error::LinalgError;
use crate::matrix::{c64, ComplexMatrix};
use crate::tol;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Frobenius norm of `M M† − M† M`.
pub fn normality_residual(m: &ComplexMatrix) -> f64 {
    let left = m * &m.adjoint();
    let right = &m.adjoint() * m;
    left.hs_distance(&right)
}

/// Whether `M` is normal: the normality residual, scaled by `max(1, ‖M‖²)`
/// since the commutator is quadratic in `M`, stays within `tol`.
pub fn is_normal(m: &ComplexMatrix, tol: f64) -> bool {
    let scale = {
        let n = m.hs_norm();
        (n * n).max(1.0)
    };
    normality_residual(m) <= tol * scale
}

/// Frobenius norm of the commutator `PQ − QP`.
pub fn commutator_norm(p: &ComplexMatrix, q: &ComplexMatrix) -> f64 {
    (p * q).hs_distance(&(q * p))
}

/// Options for [`simultaneous_diagonalize`].
#[derive(Debug, Clone)]
pub struct SimDiagOpts {
    /// Seed for the random combination coefficients.
    pub seed: u64,
    /// Scaled tolerance for the commutativity pre-check and the final
    /// diagonality verification.
    pub tol: f64,
    /// Fresh attempts before giving up with `NoConvergence`.
    pub max_redraws: usize,
}

impl Default for SimDiagOpts {
    fn default() -> Self {
        Self {
            seed: 0x5EED_0BA5,
            tol: tol::COMMUTATIVITY,
            max_redraws: 8,
        }
    }
}

const MAX_DEPTH: usize = 8;

/// Worst scaled violation of "commuting normal family": normality residuals
/// scaled by `max(1, ‖M‖²)`, and for each pair both `‖[P,Q]‖` and `‖[P,Q†]‖`
/// scaled by `max(1, ‖P‖·‖Q‖)`.
pub fn family_violation(family: &[ComplexMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for m in family {
        let n = m.hs_norm();
        worst = worst.max(normality_residual(m) / (n * n).max(1.0));
    }
    for (i, p) in family.iter().enumerate() {
        for q in family.iter().skip(i + 1) {
            let scale = (p.hs_norm() * q.hs_norm()).max(1.0);
            worst = worst.max(commutator_norm(p, q) / scale);
            worst = worst.max(commutator_norm(p, &q.adjoint()) / scale);
        }
    }
    worst
}

/// Find a unitary `U` with `U† M U` diagonal for every member of `family`.
///
/// The family must be non-empty, square, of one common dimension, and
/// commuting normal within `opts.tol`; otherwise `NotCommutingFamily` (or
/// `ShapeMismatch`) is returned. The result is deterministic for a fixed
/// seed: columns are ordered by the eigenvalues of the random combination and
/// each column's largest entry is rotated real positive.
pub fn simultaneous_diagonalize(
    family: &[ComplexMatrix],
    opts: &SimDiagOpts,
) -> Result<ComplexMatrix, LinalgError> {
    let Some(first) = family.first() else {
        return Err(LinalgError::ShapeMismatch {
            rows_a: 0,
            cols_a: 0,
            rows_b: 0,
            cols_b: 0,
        });
    };
    if !first.is_square() {
        return Err(LinalgError::NonSquare {
            rows: first.rows(),
            cols: first.cols(),
        });
    }
    let n = first.rows();
    for m in family {
        if m.rows() != n || m.cols() != n {
            return Err(LinalgError::ShapeMismatch {
                rows_a: n,
                cols_a: n,
                rows_b: m.rows(),
                cols_b: m.cols(),
            });
        }
    }

    let violation = family_violation(family);
    if violation > opts.tol {
        return Err(LinalgError::NotCommutingFamily {
            residual: violation,
        });
    }

    // Hermitian and anti-Hermitian parts; both are diagonal exactly when the
    // normal member is.
    let mut herms: Vec<ComplexMatrix> = Vec::with_capacity(2 * family.len());
    for m in family {
        let adj = m.adjoint();
        herms.push((m + &adj).scale_re(0.5));
        herms.push((m - &adj).scale(c64(0.0, -0.5)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut attempts = 0;
    loop {
        attempts += 1;
        let mut u = refine(&herms, ComplexMatrix::identity(n), &mut rng, 0)?;
        let mut ok = true;
        for m in family {
            let d = &(&u.adjoint() * m) * &u;
            if off_diagonal_norm(&d) > opts.tol * m.hs_norm().max(1.0) {
                ok = false;
                break;
            }
        }
        if ok {
            fix_column_phases(&mut u);
            return Ok(u);
        }
        if attempts > opts.max_redraws {
            return Err(LinalgError::NoConvergence { sweeps: attempts });
        }
    }
}

/// Refine an isometry `basis` (n×k, orthonormal columns spanning an invariant
/// subspace) into joint eigenvector columns.
fn refine(
    herms: &[ComplexMatrix],
    basis: ComplexMatrix,
    rng: &mut ChaCha8Rng,
    depth: usize,
) -> Result<ComplexMatrix, LinalgError> {
    let k = basis.cols();
    if k <= 1 {
        return Ok(basis);
    }

    let compressed: Vec<ComplexMatrix> = herms
        .iter()
        .map(|h| &(&basis.adjoint() * h) * &basis)
        .collect();

    // If every member is scalar on this subspace, any orthonormal basis of it
    // is a joint eigenbasis; keep the current one.
    let all_scalar = compressed.iter().all(|c| {
        let mean = c.trace().re / k as f64;
        let dev = c - &ComplexMatrix::identity(k).scale_re(mean);
        dev.hs_norm() <= 1e-10 * c.hs_norm().max(1.0)
    });
    if all_scalar || depth >= MAX_DEPTH {
        return Ok(basis);
    }

    let mut combo = ComplexMatrix::zeros(k, k);
    for c in &compressed {
        let coeff: f64 = rng.random_range(-1.0..1.0);
        combo = &combo + &c.scale_re(coeff);
    }
    let eig = herm_eig_loose(&combo)?;

    let scale = eig
        .values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let clusters = cluster_by_gap(&eig.values, tol::EIGEN_CLUSTER_GAP * scale);

    let mut out = ComplexMatrix::zeros(basis.rows(), k);
    let mut col = 0;
    for (start, end) in clusters {
        let sub = eig.vectors.block(0, start, k, end - start);
        let cols_basis = &basis * &sub;
        let refined = if end - start == 1 {
            cols_basis
        } else {
            refine(herms, cols_basis, rng, depth + 1)?
        };
        for j in 0..refined.cols() {
            out.set_column(col, &refined.column(j));
            col += 1;
        }
    }
    Ok(out)
}

/// Compressions of Hermitian matrices pick up rounding; diagonalize the
/// Hermitian part without insisting on an exact input.
fn herm_eig_loose(m: &ComplexMatrix) -> Result<crate::eig::HermEigen, LinalgError> {
    crate::eig::herm_eig_with(&m.hermitize(), 1.0)
}
