//! Decision procedures for the structural layers of a bipartite state:
//! positivity of the partial transpose, classical–quantum (CQ) and
//! quantum–classical (QC) form, vanishing measurement-induced asymmetry,
//! commutation with the marginal, and product structure.
//!
//! The CQ test is the workhorse: a state is CQ up to A exactly when its
//! B-indexed block family `{A_ij}` (operators on H_A) consists of mutually
//! commuting normal matrices — equivalently, when all blocks share one
//! orthonormal eigenbasis `{|u_k⟩}`, which then carries the decomposition
//! `ρ = Σ_k p_k |u_k⟩⟨u_k| ⊗ σ_k`.

use alloc::vec;
use alloc::vec::Vec;

use crate::eig::{cluster_by_gap, herm_eig, trace_norm};
use crate::error::CriteriaError;
use crate::matrix::ComplexMatrix;
use crate::simdiag::{commutator_norm, normality_residual, simultaneous_diagonalize, SimDiagOpts};
use crate::state::BipartiteState;
use crate::tol;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Above this B-dimension the block-pair scan stops at the first violation
/// instead of reporting the global maximum (the scan is quartic in dim_b).
const SHORT_CIRCUIT_DIM: usize = 16;

/// Outcome of the positive-partial-transpose test.
#[derive(Debug, Clone, PartialEq)]
pub struct PptWitness {
    /// True when the smallest eigenvalue of ρ^{T_A} is ≥ −tol.
    pub is_ppt: bool,
    /// Smallest eigenvalue of the partially transposed matrix.
    pub min_eigenvalue: f64,
}

/// True iff the partial transpose of the state stays positive semidefinite
/// within `tol` (the A-side transpose is used; both sides give the same
/// verdict because one is the full transpose of the other).
pub fn is_ppt(s: &BipartiteState, tol: f64) -> Result<PptWitness, CriteriaError> {
    let eig = herm_eig(&s.partial_transpose_a()).map_err(CriteriaError::Numeric)?;
    Ok(PptWitness {
        is_ppt: eig.min() >= -tol,
        min_eigenvalue: eig.min(),
    })
}

/// Outcome of the classical–quantum structure test.
///
/// When `is_cq` holds the state equals `Σ_k weights[k] · P_k ⊗ sigmas[k]`
/// with `P_k` the projector onto column `k` of `basis`, up to
/// `reconstruction_residual` in Frobenius norm.
#[derive(Debug, Clone, PartialEq)]
pub struct CqWitness {
    /// Verdict of the block-family commutativity test.
    pub is_cq: bool,
    /// Common eigenbasis of the block family (columns), present on success.
    pub basis: Option<ComplexMatrix>,
    /// Probabilities `p_k = ⟨u_k| ρ_A |u_k⟩`, aligned with the basis columns.
    pub weights: Vec<f64>,
    /// Conditional states on the other factor, aligned with the basis
    /// columns; columns of negligible weight get the maximally mixed state.
    pub sigmas: Vec<ComplexMatrix>,
    /// Largest scaled normality / commutator residual seen during the scan.
    pub max_violation: f64,
    /// Frobenius distance between ρ and its reconstruction from the witness.
    pub reconstruction_residual: f64,
}

/// Test whether the state is classical–quantum up to factor A, i.e. of the
/// form `Σ_k p_k |u_k⟩⟨u_k| ⊗ σ_k` with orthonormal `|u_k⟩`.
///
/// Every B-index block `A_ij` (`i ≤ j` suffices since `A_ji = A_ij†`) must
/// be normal and commute with every other block and its adjoint, all within
/// `tol` after scaling by the block norms. On success the common eigenbasis
/// is computed, weights and conditional states are read off, and the
/// reconstruction is verified; a rebuild error above `10·tol` is reported as
/// [`CriteriaError::ReconstructionFailed`] rather than silently accepted.
pub fn is_cq(s: &BipartiteState, tol: f64) -> Result<CqWitness, CriteriaError> {
    let (da, db) = (s.dim_a(), s.dim_b());
    let mut blocks = Vec::with_capacity(db * (db + 1) / 2);
    for i in 0..db {
        for j in i..db {
            blocks.push(s.block_a(i, j).expect("block indices within range"));
        }
    }
    let norms: Vec<f64> = blocks.iter().map(|b| b.hs_norm()).collect();
    let bail_early = db > SHORT_CIRCUIT_DIM;
    let mut max_violation = 0.0f64;
    'scan: for (u, p) in blocks.iter().enumerate() {
        let scale = (norms[u] * norms[u]).max(1.0);
        max_violation = max_violation.max(normality_residual(p) / scale);
        if bail_early && max_violation > tol {
            break 'scan;
        }
        for (v, q) in blocks.iter().enumerate().skip(u + 1) {
            let scale = (norms[u] * norms[v]).max(1.0);
            let direct = commutator_norm(p, q) / scale;
            let crossed = commutator_norm(p, &q.adjoint()) / scale;
            max_violation = max_violation.max(direct).max(crossed);
            if bail_early && max_violation > tol {
                break 'scan;
            }
        }
    }
    if max_violation > tol {
        return Ok(CqWitness {
            is_cq: false,
            basis: None,
            weights: Vec::new(),
            sigmas: Vec::new(),
            max_violation,
            reconstruction_residual: f64::INFINITY,
        });
    }

    // The family commutes: extract the common eigenbasis. The solver gets a
    // looser target than the scan because the final authority on quality is
    // the reconstruction check below.
    let opts = SimDiagOpts {
        tol: 10.0 * tol,
        ..SimDiagOpts::default()
    };
    let basis = simultaneous_diagonalize(&blocks, &opts).map_err(CriteriaError::Numeric)?;

    // Unnormalized conditionals σ̃_k[i,j] = (U† A_ij U)[k,k]; these are the
    // compressions (⟨u_k|⊗I) ρ (|u_k⟩⊗I), so σ̃_k ⪰ 0 and Tr σ̃_k = p_k.
    let mut sigma_tilde = vec![ComplexMatrix::zeros(db, db); da];
    let mut block_iter = blocks.iter();
    for i in 0..db {
        for j in i..db {
            let block = block_iter.next().expect("block list length");
            let in_basis = &(&basis.adjoint() * block) * &basis;
            for (k, st) in sigma_tilde.iter_mut().enumerate() {
                st[(i, j)] = in_basis[(k, k)];
                if i != j {
                    st[(j, i)] = in_basis[(k, k)].conj();
                }
            }
        }
    }
    for st in sigma_tilde.iter_mut() {
        *st = st.hermitize();
    }

    // Rebuild Σ_k P_k ⊗ σ̃_k and compare against the original matrix.
    let n = da * db;
    let rebuilt = ComplexMatrix::from_fn(n, n, |r, c| {
        let (a, i) = (r / db, r % db);
        let (b, j) = (c / db, c % db);
        (0..da)
            .map(|k| basis[(a, k)] * basis[(b, k)].conj() * sigma_tilde[k][(i, j)])
            .sum()
    });
    let reconstruction_residual = s.rho().hs_distance(&rebuilt);
    if reconstruction_residual > 10.0 * tol {
        return Err(CriteriaError::ReconstructionFailed {
            residual: reconstruction_residual,
        });
    }

    let weights: Vec<f64> = sigma_tilde.iter().map(|st| st.trace().re).collect();
    let sigmas: Vec<ComplexMatrix> = sigma_tilde
        .iter()
        .zip(weights.iter())
        .map(|(st, &p)| {
            if p > tol::WEIGHT_FLOOR {
                st.scale_re(1.0 / p)
            } else {
                ComplexMatrix::identity(db).scale_re(1.0 / db as f64)
            }
        })
        .collect();

    Ok(CqWitness {
        is_cq: true,
        basis: Some(basis),
        weights,
        sigmas,
        max_violation,
        reconstruction_residual,
    })
}

/// Mirror of [`is_cq`] for quantum–classical structure (`Σ_k p_k σ_k ⊗
/// |u_k⟩⟨u_k|`): the factors are swapped and the witness basis lives on H_B.
pub fn is_qc(s: &BipartiteState, tol: f64) -> Result<CqWitness, CriteriaError> {
    is_cq(&s.swap_factors(), tol)
}

/// True iff ρ commutes with `ρ_A ⊗ I` within `tol` (Frobenius norm of the
/// commutator, unscaled). Necessary for CQ structure but not sufficient —
/// any state with a maximally mixed marginal passes trivially.
pub fn marginal_commutes_a(s: &BipartiteState, tol: f64) -> bool {
    let big = s.partial_trace_b().kron(&ComplexMatrix::identity(s.dim_b()));
    let commutator = &(s.rho() * &big) - &(&big * s.rho());
    commutator.hs_norm() <= tol
}

/// Mirror of [`marginal_commutes_a`] on the B factor.
pub fn marginal_commutes_b(s: &BipartiteState, tol: f64) -> bool {
    marginal_commutes_a(&s.swap_factors(), tol)
}

/// Eigenvalue clusters of a Hermitian matrix together with orthonormal
/// bases of the corresponding eigenspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenspaceDecomposition {
    /// Distinct (clustered) eigenvalues, ascending; each is the mean of its
    /// cluster.
    pub values: Vec<f64>,
    /// Dimension of each eigenspace; sums to the matrix dimension.
    pub multiplicities: Vec<usize>,
    /// Orthonormal basis of each eigenspace, one matrix of columns per
    /// cluster.
    pub bases: Vec<ComplexMatrix>,
}

/// Cluster the spectrum of a Hermitian matrix with relative gap `gap_tol`
/// and return per-eigenspace bases.
pub fn eigenspace_decomposition(
    m: &ComplexMatrix,
    gap_tol: f64,
) -> Result<EigenspaceDecomposition, CriteriaError> {
    let eig = herm_eig(m).map_err(CriteriaError::Numeric)?;
    let scale = eig
        .values
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let ranges = cluster_by_gap(&eig.values, gap_tol * scale);
    let n = m.rows();
    let mut values = Vec::with_capacity(ranges.len());
    let mut multiplicities = Vec::with_capacity(ranges.len());
    let mut bases = Vec::with_capacity(ranges.len());
    for (lo, hi) in ranges {
        let mult = hi - lo;
        values.push(eig.values[lo..hi].iter().sum::<f64>() / mult as f64);
        multiplicities.push(mult);
        bases.push(eig.vectors.block(0, lo, n, mult));
    }
    Ok(EigenspaceDecomposition {
        values,
        multiplicities,
        bases,
    })
}

/// Outcome of the zero measurement-induced-asymmetry test.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroMinWitness {
    /// True when every marginal-preserving local measurement on the tested
    /// factor leaves the state invariant.
    pub is_zero_min: bool,
    /// The underlying structure test; failure there forces `false` here.
    pub cq: CqWitness,
    /// Basis-column indices of a conditional-state pair that shares a
    /// weight cluster but differs beyond `tol`, when one exists.
    pub violating_pair: Option<(usize, usize)>,
    /// Largest within-cluster trace-norm distance between conditionals.
    pub max_sigma_distance: f64,
    /// Smallest gap between adjacent weight clusters (infinite when the
    /// positive weights form a single cluster); small values flag verdicts
    /// that sit close to the clustering threshold.
    pub min_weight_gap: f64,
}

/// Test whether no marginal-preserving local measurement on factor A can
/// disturb the state.
///
/// The state must be CQ up to A, and within every cluster of (numerically)
/// equal weights the conditional states must coincide in trace norm within
/// `tol` — measurements may rotate freely inside a degenerate eigenspace of
/// ρ_A, so invariance forces the conditionals attached to that eigenspace
/// to agree. Weights below the global floor carry no mass and are ignored.
pub fn is_zero_min_a(s: &BipartiteState, tol: f64) -> Result<ZeroMinWitness, CriteriaError> {
    let cq = is_cq(s, tol)?;
    if !cq.is_cq {
        return Ok(ZeroMinWitness {
            is_zero_min: false,
            cq,
            violating_pair: None,
            max_sigma_distance: 0.0,
            min_weight_gap: f64::INFINITY,
        });
    }
    let mut order: Vec<usize> = (0..cq.weights.len())
        .filter(|&k| cq.weights[k] > tol::WEIGHT_FLOOR)
        .collect();
    order.sort_by(|&a, &b| {
        cq.weights[a]
            .partial_cmp(&cq.weights[b])
            .expect("weights are finite")
    });

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut min_weight_gap = f64::INFINITY;
    for &k in &order {
        let extend = clusters.last().is_some_and(|c| {
            cq.weights[k] - cq.weights[*c.last().expect("nonempty cluster")]
                <= tol::WEIGHT_CLUSTER_GAP
        });
        if extend {
            clusters.last_mut().expect("just checked").push(k);
        } else {
            if let Some(c) = clusters.last() {
                let gap = cq.weights[k] - cq.weights[*c.last().expect("nonempty cluster")];
                min_weight_gap = min_weight_gap.min(gap);
            }
            clusters.push(vec![k]);
        }
    }

    let mut violating_pair = None;
    let mut max_sigma_distance = 0.0f64;
    'clusters: for cluster in &clusters {
        for (pos, &k) in cluster.iter().enumerate() {
            for &l in cluster.iter().skip(pos + 1) {
                let distance = trace_norm(&(&cq.sigmas[k] - &cq.sigmas[l]))
                    .map_err(CriteriaError::Numeric)?;
                max_sigma_distance = max_sigma_distance.max(distance);
                if distance > tol {
                    violating_pair = Some((k, l));
                    break 'clusters;
                }
            }
        }
    }

    Ok(ZeroMinWitness {
        is_zero_min: violating_pair.is_none(),
        cq,
        violating_pair,
        max_sigma_distance,
        min_weight_gap,
    })
}

/// Mirror of [`is_zero_min_a`] for measurements on factor B.
pub fn is_zero_min_b(s: &BipartiteState, tol: f64) -> Result<ZeroMinWitness, CriteriaError> {
    is_zero_min_a(&s.swap_factors(), tol)
}

/// True iff the state equals the product of its marginals within `tol`
/// (Frobenius norm).
pub fn is_product(s: &BipartiteState, tol: f64) -> bool {
    product_residual(s) <= tol
}

/// Frobenius distance between the state and the product of its marginals.
pub fn product_residual(s: &BipartiteState) -> f64 {
    let product = s.partial_trace_b().kron(&s.partial_trace_a());
    s.rho().hs_distance(&product)
}
