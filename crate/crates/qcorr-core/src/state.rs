//! Validated bipartite states, block views, partial operations, and the
//! constructors for the structured families used throughout the crate.
//!
//! Index convention (fixed everywhere): the basis vector `|i⟩⊗|k′⟩` maps to
//! flat index `i·dim_b + k` — factor A is the slow ("major") index. The two
//! block views of the same matrix are
//!
//! * `block_a(i, j)`: a `dim_a × dim_a` operator on H_A for each pair of
//!   B-indices, entries `rho[a·dim_b + i, b·dim_b + j]`;
//! * `block_b(k, l)`: a `dim_b × dim_b` operator on H_B for each pair of
//!   A-indices — the contiguous `(k, l)` tile of the matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::eig::{herm_eig, operator_norm, psd_sqrt, singular_values};
use crate::error::StateError;
use crate::matrix::{c64, ComplexMatrix};
use crate::sampling::{random_density, rng_from_seed};
use crate::tol;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// A validated density matrix on H_A ⊗ H_B.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    rho: ComplexMatrix,
}

impl BipartiteState {
    /// Validate and wrap a matrix: square of size `dim_a·dim_b`, finite,
    /// Hermitian within a scaled 1e−9 (then symmetrized exactly), unit trace
    /// within 1e−9, eigenvalues ≥ −1e−9.
    pub fn new(matrix: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self, StateError> {
        let n = dim_a * dim_b;
        if !matrix.is_square() || matrix.rows() != n {
            return Err(StateError::ShapeMismatch {
                expected: n,
                got: matrix.rows(),
            });
        }
        if !matrix.all_finite() {
            return Err(StateError::NotFinite);
        }
        // herm_eig rejects matrices whose hermiticity residual exceeds the
        // scaled tolerance and diagonalizes the Hermitian part otherwise.
        let eig = herm_eig(&matrix).map_err(StateError::Numeric)?;
        let rho = matrix.hermitize();
        let trace = rho.trace().re;
        if (trace - 1.0).abs() > tol::TRACE {
            return Err(StateError::TraceNotOne { trace });
        }
        if eig.min() < -tol::POSITIVITY {
            return Err(StateError::NotPositive {
                min_eigenvalue: eig.min(),
            });
        }
        Ok(Self { dim_a, dim_b, rho })
    }

    #[inline]
    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    #[inline]
    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Total dimension `dim_a · dim_b`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// The density matrix.
    #[inline]
    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// Internal constructor for matrices valid by construction (exact
    /// permutations / conjugations of an already validated state).
    pub(crate) fn trusted(rho: ComplexMatrix, dim_a: usize, dim_b: usize) -> Self {
        Self { dim_a, dim_b, rho }
    }

    /// The A-side block at B-indices `(i, j)`: a `dim_a × dim_a` operator,
    /// entries `rho[a·dim_b + i, b·dim_b + j]`.
    pub fn block_a(&self, i: usize, j: usize) -> Result<ComplexMatrix, StateError> {
        if i >= self.dim_b || j >= self.dim_b {
            return Err(StateError::IndexOutOfRange {
                index: i.max(j),
                bound: self.dim_b,
            });
        }
        let db = self.dim_b;
        Ok(ComplexMatrix::from_fn(self.dim_a, self.dim_a, |a, b| {
            self.rho[(a * db + i, b * db + j)]
        }))
    }

    /// The B-side block at A-indices `(k, l)`: the contiguous `dim_b × dim_b`
    /// tile `rho[k·dim_b + i, l·dim_b + j]`.
    pub fn block_b(&self, k: usize, l: usize) -> Result<ComplexMatrix, StateError> {
        if k >= self.dim_a || l >= self.dim_a {
            return Err(StateError::IndexOutOfRange {
                index: k.max(l),
                bound: self.dim_a,
            });
        }
        let db = self.dim_b;
        Ok(self.rho.block(k * db, l * db, db, db))
    }

    /// Partial transpose on factor A:
    /// `ρ^{T_A}[(a,i),(b,j)] = ρ[(b,i),(a,j)]` — an exact entry permutation.
    pub fn partial_transpose_a(&self) -> ComplexMatrix {
        let db = self.dim_b;
        ComplexMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            let (a, i) = (r / db, r % db);
            let (b, j) = (c / db, c % db);
            self.rho[(b * db + i, a * db + j)]
        })
    }

    /// Partial transpose on factor B:
    /// `ρ^{T_B}[(a,i),(b,j)] = ρ[(a,j),(b,i)]`.
    pub fn partial_transpose_b(&self) -> ComplexMatrix {
        let db = self.dim_b;
        ComplexMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            let (a, i) = (r / db, r % db);
            let (b, j) = (c / db, c % db);
            self.rho[(a * db + j, b * db + i)]
        })
    }

    /// Trace out factor A, returning the reduced state ρ_B:
    /// `ρ_B[i,j] = Σ_a ρ[(a,i),(a,j)]`.
    pub fn partial_trace_a(&self) -> ComplexMatrix {
        let (da, db) = (self.dim_a, self.dim_b);
        ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|a| self.rho[(a * db + i, a * db + j)]).sum()
        })
    }

    /// Trace out factor B, returning the reduced state ρ_A:
    /// `ρ_A[a,b] = Σ_i ρ[(a,i),(b,i)]`.
    pub fn partial_trace_b(&self) -> ComplexMatrix {
        let (da, db) = (self.dim_a, self.dim_b);
        ComplexMatrix::from_fn(da, da, |a, b| {
            (0..db).map(|i| self.rho[(a * db + i, b * db + i)]).sum()
        })
    }

    /// The same state with the tensor factors exchanged:
    /// `swap(ρ)[(i,a),(j,b)] = ρ[(a,i),(b,j)]` — an exact permutation, so
    /// every basis-independent property carries over verbatim.
    pub fn swap_factors(&self) -> BipartiteState {
        let (da, db) = (self.dim_a, self.dim_b);
        let rho = ComplexMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            let (i, a) = (r / da, r % da);
            let (j, b) = (c / da, c % da);
            self.rho[(a * db + i, b * db + j)]
        });
        BipartiteState::trusted(rho, db, da)
    }

    /// `Tr ρ²` (equals the squared Frobenius norm for Hermitian ρ).
    pub fn purity(&self) -> f64 {
        let n = self.rho.hs_norm();
        n * n
    }

    /// Purity within `tol` of one.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity() >= 1.0 - tol
    }

    /// Conjugate by a local unitary pair: `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
    pub fn conjugate_local(
        &self,
        u_a: &ComplexMatrix,
        u_b: &ComplexMatrix,
    ) -> Result<BipartiteState, StateError> {
        check_unitary(u_a, self.dim_a)?;
        check_unitary(u_b, self.dim_b)?;
        let u = u_a.kron(u_b);
        let rho = (&(&u * &self.rho) * &u.adjoint()).hermitize();
        Ok(BipartiteState::trusted(rho, self.dim_a, self.dim_b))
    }
}

fn check_unitary(u: &ComplexMatrix, dim: usize) -> Result<(), StateError> {
    if !u.is_square() || u.rows() != dim {
        return Err(StateError::ShapeMismatch {
            expected: dim,
            got: u.rows(),
        });
    }
    let residual = (&u.adjoint() * u).hs_distance(&ComplexMatrix::identity(dim));
    if residual > 1e-9 {
        return Err(StateError::NotOrthonormal { residual });
    }
    Ok(())
}

/// Validate a raw density matrix (square of size `dim`, Hermitian, unit
/// trace, PSD) without wrapping it.
fn check_density(m: &ComplexMatrix, dim: usize) -> Result<(), StateError> {
    if !m.is_square() || m.rows() != dim {
        return Err(StateError::ShapeMismatch {
            expected: dim,
            got: m.rows(),
        });
    }
    if !m.all_finite() {
        return Err(StateError::NotFinite);
    }
    let eig = herm_eig(m).map_err(StateError::Numeric)?;
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol::TRACE {
        return Err(StateError::TraceNotOne { trace });
    }
    if eig.min() < -tol::POSITIVITY {
        return Err(StateError::NotPositive {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(())
}

/// Product state `ρ_A ⊗ ρ_B` from two validated factors.
pub fn make_product(
    rho_a: &ComplexMatrix,
    rho_b: &ComplexMatrix,
) -> Result<BipartiteState, StateError> {
    check_density(rho_a, rho_a.rows())?;
    check_density(rho_b, rho_b.rows())?;
    BipartiteState::new(rho_a.kron(rho_b), rho_a.rows(), rho_b.rows())
}

/// Classical–quantum state `Σ_k p_k |u_k⟩⟨u_k| ⊗ σ_k`: `kets` holds the
/// orthonormal columns `|u_k⟩` in H_A (as many columns as weights), `sigmas`
/// the conditional B-states.
pub fn make_cq(
    weights: &[f64],
    kets: &ComplexMatrix,
    sigmas: &[ComplexMatrix],
) -> Result<BipartiteState, StateError> {
    let m = weights.len();
    if kets.cols() != m || sigmas.len() != m || m == 0 {
        return Err(StateError::ShapeMismatch {
            expected: m.max(1),
            got: kets.cols().min(sigmas.len()),
        });
    }
    let dim_a = kets.rows();
    let sum: f64 = weights.iter().sum();
    let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
    if (sum - 1.0).abs() > tol::TRACE || min < -tol::TRACE {
        return Err(StateError::BadProbabilities { sum, min });
    }
    let gram_residual = (&kets.adjoint() * kets).hs_distance(&ComplexMatrix::identity(m));
    if gram_residual > 1e-9 {
        return Err(StateError::NotOrthonormal {
            residual: gram_residual,
        });
    }
    let dim_b = sigmas[0].rows();
    for (idx, sigma) in sigmas.iter().enumerate() {
        if sigma.rows() != dim_b || sigma.cols() != dim_b {
            return Err(StateError::BadSigma {
                index: idx,
                detail: format!("expected {dim_b}x{dim_b}, got {}x{}", sigma.rows(), sigma.cols()),
            });
        }
        check_density(sigma, dim_b).map_err(|e| StateError::BadSigma {
            index: idx,
            detail: format!("{e}"),
        })?;
    }
    let mut rho = ComplexMatrix::zeros(dim_a * dim_b, dim_a * dim_b);
    for (k, (&p, sigma)) in weights.iter().zip(sigmas.iter()).enumerate() {
        let ket = kets.column(k);
        let projector = ComplexMatrix::outer(&ket, &ket);
        rho = &rho + &projector.kron(sigma).scale_re(p);
    }
    BipartiteState::new(rho, dim_a, dim_b)
}

/// Quantum–classical state `Σ_k p_k σ_k ⊗ |u_k⟩⟨u_k|`: mirror of
/// [`make_cq`] with `kets` in H_B and `sigmas` conditional A-states.
pub fn make_qc(
    weights: &[f64],
    kets: &ComplexMatrix,
    sigmas: &[ComplexMatrix],
) -> Result<BipartiteState, StateError> {
    let swapped = make_cq(weights, kets, sigmas)?;
    Ok(swapped.swap_factors())
}

/// Circulant 2⊗2 state. In A-major coordinates the matrix is
///
/// ```text
/// [ a11   0    0   a12 ]
/// [  0   b11  b12   0  ]
/// [  0   b̄12  b22   0  ]
/// [ ā12   0    0   a22 ]
/// ```
///
/// i.e. one 2×2 minor `[[a11,a12],[ā12,a22]]` on the {|00⟩,|11⟩} pair and one
/// `[[b11,b12],[b̄12,b22]]` on the {|01⟩,|10⟩} pair.
pub fn make_circulant(
    a11: f64,
    a22: f64,
    b11: f64,
    b22: f64,
    a12: Complex64,
    b12: Complex64,
) -> Result<BipartiteState, StateError> {
    let mut rho = ComplexMatrix::zeros(4, 4);
    rho[(0, 0)] = c64(a11, 0.0);
    rho[(3, 3)] = c64(a22, 0.0);
    rho[(1, 1)] = c64(b11, 0.0);
    rho[(2, 2)] = c64(b22, 0.0);
    rho[(0, 3)] = a12;
    rho[(3, 0)] = a12.conj();
    rho[(1, 2)] = b12;
    rho[(2, 1)] = b12.conj();
    BipartiteState::new(rho, 2, 2)
}

/// 2⊗n block-contraction family: for PSD `rho11` and contractions `d`, `t`
/// (operator norm ≤ 1), with `K = [√ρ₁₁ D D† √ρ₁₁]^{1/2}`, builds
///
/// ```text
/// ρ = 1/N · [ ρ₁₁        √ρ₁₁·T·K ]
///           [ K·T†·√ρ₁₁  K²       ]
/// ```
///
/// normalized by `N = Tr(ρ₁₁ + K²)`. By construction the lower diagonal
/// block never exceeds the upper one: `K² ⪯ ρ₁₁`.
pub fn make_block_contraction(
    rho11: &ComplexMatrix,
    d: &ComplexMatrix,
    t: &ComplexMatrix,
) -> Result<BipartiteState, StateError> {
    let n = rho11.rows();
    for m in [rho11, d, t] {
        if !m.is_square() || m.rows() != n {
            return Err(StateError::ShapeMismatch {
                expected: n,
                got: m.rows(),
            });
        }
    }
    let sq11 = psd_sqrt(rho11).map_err(|e| match e {
        crate::error::LinalgError::NotPsd { min_eigenvalue } => {
            StateError::NotPsd { min_eigenvalue }
        }
        other => StateError::Numeric(other),
    })?;
    for contraction in [d, t] {
        let norm = operator_norm(contraction).map_err(StateError::Numeric)?;
        if norm > 1.0 + 1e-9 {
            return Err(StateError::NotContraction { norm });
        }
    }
    let kk = &(&sq11 * &(d * &d.adjoint())) * &sq11;
    let k = psd_sqrt(&kk).map_err(StateError::Numeric)?;
    let rho12 = &(&sq11 * t) * &k;
    let rho22 = &k * &k;
    let trace = (rho11.trace() + rho22.trace()).re;
    if trace <= tol::TRACE {
        return Err(StateError::TraceNotOne { trace });
    }
    let mut rho = ComplexMatrix::zeros(2 * n, 2 * n);
    rho.set_block(0, 0, rho11);
    rho.set_block(0, n, &rho12);
    rho.set_block(n, 0, &rho12.adjoint());
    rho.set_block(n, n, &rho22);
    BipartiteState::new(rho.scale_re(1.0 / trace), 2, n)
}

/// 3⊗2 family with diagonal coherences: in A-major coordinates the state is
/// block-diagonal over the A index with 2×2 blocks
///
/// ```text
/// [[a, e], [ē, c]],  [[a, f], [f̄, c]],  [[b, g], [ḡ, d]]
/// ```
///
/// so the B-side block views are `diag(a,a,b)`, `diag(e,f,g)`, `diag(c,c,d)`.
/// Trace requires `2a + b + 2c + d = 1`. This family is classical–quantum
/// for every valid parameter choice.
pub fn make_diag_coherence(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: Complex64,
    f: Complex64,
    g: Complex64,
) -> Result<BipartiteState, StateError> {
    let upper = [c64(a, 0.0), c64(a, 0.0), c64(b, 0.0)];
    let lower = [c64(c, 0.0), c64(c, 0.0), c64(d, 0.0)];
    let coher = [e, f, g];
    let mut rho = ComplexMatrix::zeros(6, 6);
    for alpha in 0..3 {
        rho[(2 * alpha, 2 * alpha)] = upper[alpha];
        rho[(2 * alpha + 1, 2 * alpha + 1)] = lower[alpha];
        rho[(2 * alpha, 2 * alpha + 1)] = coher[alpha];
        rho[(2 * alpha + 1, 2 * alpha)] = coher[alpha].conj();
    }
    BipartiteState::new(rho, 3, 2)
}

/// A pure bipartite vector with its Schmidt data.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<Complex64>,
    schmidt: Vec<f64>,
}

impl PureState {
    /// Wrap an amplitude vector (A-major, unit norm within 1e−10); Schmidt
    /// coefficients are the singular values of the `dim_a × dim_b` reshape.
    pub fn from_amplitudes(
        dim_a: usize,
        dim_b: usize,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, StateError> {
        if amplitudes.len() != dim_a * dim_b || dim_a == 0 || dim_b == 0 {
            return Err(StateError::ShapeMismatch {
                expected: dim_a * dim_b,
                got: amplitudes.len(),
            });
        }
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(StateError::NotFinite);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(StateError::BadNormalization {
                detail: format!("amplitude norm is {norm:.12}, expected 1"),
            });
        }
        let reshaped = ComplexMatrix::from_fn(dim_a, dim_b, |a, i| amplitudes[a * dim_b + i]);
        let mut schmidt = singular_values(&reshaped).map_err(StateError::Numeric)?;
        schmidt.truncate(dim_a.min(dim_b));
        Ok(Self {
            dim_a,
            dim_b,
            amplitudes,
            schmidt,
        })
    }

    #[inline]
    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    #[inline]
    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// A-major amplitude vector.
    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Schmidt coefficients, descending; their squares sum to one.
    #[inline]
    pub fn schmidt(&self) -> &[f64] {
        &self.schmidt
    }

    /// The rank-one density matrix `|ψ⟩⟨ψ|` as a validated state.
    pub fn to_density(&self) -> Result<BipartiteState, StateError> {
        let rho = ComplexMatrix::outer(&self.amplitudes, &self.amplitudes);
        BipartiteState::new(rho, self.dim_a, self.dim_b)
    }
}

/// Pure state `|ψ⟩ = Σ_k λ_k |k⟩|k′⟩` in canonical bases from descending
/// positive Schmidt coefficients with `Σ λ_k² = 1` (within 1e−10); the
/// factor dimensions both equal the coefficient count.
pub fn make_pure_schmidt(lambdas: &[f64]) -> Result<PureState, StateError> {
    let r = lambdas.len();
    if r == 0 {
        return Err(StateError::BadNormalization {
            detail: String::from("need at least one coefficient"),
        });
    }
    for w in lambdas.windows(2) {
        if w[0] < w[1] {
            return Err(StateError::BadNormalization {
                detail: String::from("coefficients must be descending"),
            });
        }
    }
    if lambdas.iter().any(|&l| l <= 0.0 || !l.is_finite()) {
        return Err(StateError::BadNormalization {
            detail: String::from("coefficients must be positive"),
        });
    }
    let sq_sum: f64 = lambdas.iter().map(|&l| l * l).sum();
    if (sq_sum - 1.0).abs() > 1e-10 {
        return Err(StateError::BadNormalization {
            detail: format!("squared coefficients sum to {sq_sum:.12}, expected 1"),
        });
    }
    let mut amplitudes = vec![Complex64::ZERO; r * r];
    for (k, &l) in lambdas.iter().enumerate() {
        amplitudes[k * r + k] = c64(l, 0.0);
    }
    Ok(PureState {
        dim_a: r,
        dim_b: r,
        amplitudes,
        schmidt: lambdas.to_vec(),
    })
}

/// Seeded random state of the given rank: `G G† / Tr(G G†)` for a complex
/// Gaussian `(dim_a·dim_b) × rank` matrix `G`; deterministic per seed.
pub fn random_state(
    dim_a: usize,
    dim_b: usize,
    rank: usize,
    seed: u64,
) -> Result<BipartiteState, StateError> {
    let n = dim_a * dim_b;
    if rank == 0 || rank > n {
        return Err(StateError::BadRank { rank, max: n });
    }
    let mut rng = rng_from_seed(seed);
    BipartiteState::new(random_density(n, rank, &mut rng), dim_a, dim_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::herm_eig;

    fn re(x: f64) -> Complex64 {
        c64(x, 0.0)
    }

    fn bell() -> BipartiteState {
        make_pure_schmidt(&[core::f64::consts::FRAC_1_SQRT_2; 2])
            .unwrap()
            .to_density()
            .unwrap()
    }

    fn werner(p: f64) -> BipartiteState {
        let mixed = ComplexMatrix::identity(4).scale_re((1.0 - p) / 4.0);
        let rho = &bell().rho().scale_re(p) + &mixed;
        BipartiteState::new(rho, 2, 2).unwrap()
    }

    #[test]
    fn validates_maximally_mixed() {
        let s = BipartiteState::new(ComplexMatrix::identity(4).scale_re(0.25), 2, 2).unwrap();
        assert_eq!(s.dim_a(), 2);
        assert_eq!(s.dim_b(), 2);
        assert!((s.purity() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn validates_pure_product_diagonal() {
        let s = BipartiteState::new(ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]), 2, 2)
            .unwrap();
        assert!(s.is_pure(1e-9));
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let m = ComplexMatrix::from_real_diag(&[1.0, -0.5, 0.5, 0.0]);
        let err = BipartiteState::new(m, 2, 2);
        assert!(matches!(err, Err(StateError::NotPositive { .. })));
    }

    #[test]
    fn rejects_wrong_trace_and_shape() {
        let m = ComplexMatrix::identity(4).scale_re(0.5);
        assert!(matches!(
            BipartiteState::new(m, 2, 2),
            Err(StateError::TraceNotOne { .. })
        ));
        let m = ComplexMatrix::identity(3).scale_re(1.0 / 3.0);
        assert!(matches!(
            BipartiteState::new(m, 2, 2),
            Err(StateError::ShapeMismatch { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn rejects_grossly_non_hermitian() {
        let mut m = ComplexMatrix::identity(4).scale_re(0.25);
        m[(0, 1)] = re(0.3);
        let err = BipartiteState::new(m, 2, 2);
        assert!(matches!(
            err,
            Err(StateError::Numeric(crate::error::LinalgError::NotHermitian { .. }))
        ));
    }

    #[test]
    fn symmetrizes_small_residuals() {
        let mut m = ComplexMatrix::identity(4).scale_re(0.25);
        m[(0, 1)] = c64(1e-13, 1e-13);
        let s = BipartiteState::new(m, 2, 2).unwrap();
        assert!(s.rho().hermiticity_residual() == 0.0);
    }

    #[test]
    fn product_state_block_views() {
        let rho_a = ComplexMatrix::from_rows(&[
            &[re(0.7), c64(0.1, 0.2)],
            &[c64(0.1, -0.2), re(0.3)],
        ]);
        let rho_b = ComplexMatrix::from_rows(&[
            &[re(0.6), c64(0.0, 0.1), re(0.0)],
            &[c64(0.0, -0.1), re(0.3), re(0.05)],
            &[re(0.0), re(0.05), re(0.1)],
        ]);
        let s = make_product(&rho_a, &rho_b).unwrap();
        assert_eq!(s.dim_a(), 2);
        assert_eq!(s.dim_b(), 3);
        // block_b(k,l) = (ρ_A)[k,l]·ρ_B
        for k in 0..2 {
            for l in 0..2 {
                let block = s.block_b(k, l).unwrap();
                assert!(block.hs_distance(&rho_b.scale(rho_a[(k, l)])) < 1e-14);
            }
        }
        // block_a(i,j) = (ρ_B)[i,j]·ρ_A
        for i in 0..3 {
            for j in 0..3 {
                let block = s.block_a(i, j).unwrap();
                assert!(block.hs_distance(&rho_a.scale(rho_b[(i, j)])) < 1e-14);
            }
        }
        // Partial traces recover the exact factors.
        assert!(s.partial_trace_b().hs_distance(&rho_a) < 1e-14);
        assert!(s.partial_trace_a().hs_distance(&rho_b) < 1e-14);
        // Partial transpose of a product transposes one factor.
        let pt = s.partial_transpose_a();
        assert!(pt.hs_distance(&rho_a.transpose().kron(&rho_b)) < 1e-14);
        // Swap exchanges the factors.
        let swapped = s.swap_factors();
        assert!(swapped.rho().hs_distance(&rho_b.kron(&rho_a)) < 1e-14);
        assert!(swapped.swap_factors().rho().hs_distance(s.rho()) < 1e-15);
    }

    #[test]
    fn maximally_mixed_off_blocks_vanish() {
        let s = BipartiteState::new(ComplexMatrix::identity(4).scale_re(0.25), 2, 2).unwrap();
        assert_eq!(s.block_a(0, 1).unwrap().hs_norm(), 0.0);
        assert!(matches!(
            s.block_a(0, 2),
            Err(StateError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn bell_state_blocks_and_transpose() {
        let s = bell();
        // block_b(0,1) = (1/2)|0′⟩⟨1′|.
        let b01 = s.block_b(0, 1).unwrap();
        let mut expect = ComplexMatrix::zeros(2, 2);
        expect[(0, 1)] = re(0.5);
        assert!(b01.hs_distance(&expect) < 1e-14);
        // Partial transpose spectrum (1/2, 1/2, 1/2, −1/2).
        let eig = herm_eig(&s.partial_transpose_a()).unwrap();
        assert!((eig.values[0] + 0.5).abs() < 1e-12);
        for v in &eig.values[1..] {
            assert!((v - 0.5).abs() < 1e-12);
        }
        // Marginals are maximally mixed.
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(s.partial_trace_b().hs_distance(&half) < 1e-14);
        assert!(s.partial_trace_a().hs_distance(&half) < 1e-14);
    }

    #[test]
    fn partial_transpose_is_involution_bit_exact() {
        let s = random_state(2, 3, 6, 42).unwrap();
        let pt = s.partial_transpose_a();
        let back = BipartiteState::trusted(pt, 2, 3).partial_transpose_a();
        assert_eq!(&back, s.rho());
        let pt_b = s.partial_transpose_b();
        let back_b = BipartiteState::trusted(pt_b, 2, 3).partial_transpose_b();
        assert_eq!(&back_b, s.rho());
    }

    #[test]
    fn werner_transpose_eigenvalue_pattern() {
        // Eigenvalues (1−p)/4 + p/2 (×3) and (1−p)/4 − p/2 (×1); the minimum
        // crosses zero at p = 1/3.
        let s = werner(1.0 / 3.0);
        let eig = herm_eig(&s.partial_transpose_a()).unwrap();
        assert!(eig.min().abs() < 1e-12);
        let s = werner(0.5);
        let eig = herm_eig(&s.partial_transpose_a()).unwrap();
        assert!((eig.min() - (0.125 - 0.25)).abs() < 1e-12);
        assert!((eig.max() - (0.125 + 0.25)).abs() < 1e-12);
    }

    #[test]
    fn cq_constructor_and_marginal_weights() {
        let s2 = core::f64::consts::FRAC_1_SQRT_2;
        let kets = ComplexMatrix::from_rows(&[&[re(s2), re(s2)], &[re(s2), re(-s2)]]);
        let sigma0 = ComplexMatrix::from_real_diag(&[0.9, 0.1]);
        let sigma1 = ComplexMatrix::from_rows(&[&[re(0.5), re(0.5)], &[re(0.5), re(0.5)]]);
        let weights = [0.3, 0.7];
        let s = make_cq(&weights, &kets, &[sigma0.clone(), sigma1.clone()]).unwrap();
        // ρ_A in the ket basis is diagonal with the input weights.
        let rho_a = s.partial_trace_b();
        let in_basis = &(&kets.adjoint() * &rho_a) * &kets;
        assert!((in_basis[(0, 0)].re - 0.3).abs() < 1e-12);
        assert!((in_basis[(1, 1)].re - 0.7).abs() < 1e-12);
        assert!(in_basis[(0, 1)].norm() < 1e-12);
        // Direct assembly agrees.
        let k0 = kets.column(0);
        let k1 = kets.column(1);
        let expect = &ComplexMatrix::outer(&k0, &k0).kron(&sigma0).scale_re(0.3)
            + &ComplexMatrix::outer(&k1, &k1).kron(&sigma1).scale_re(0.7);
        assert!(s.rho().hs_distance(&expect) < 1e-14);
    }

    #[test]
    fn cq_single_term_is_product() {
        let kets = ComplexMatrix::from_rows(&[&[re(1.0)], &[re(0.0)]]);
        let sigma = ComplexMatrix::from_real_diag(&[0.25, 0.75]);
        let s = make_cq(&[1.0], &kets, core::slice::from_ref(&sigma)).unwrap();
        let expect = make_product(&ComplexMatrix::from_real_diag(&[1.0, 0.0]), &sigma).unwrap();
        assert!(s.rho().hs_distance(expect.rho()) < 1e-14);
    }

    #[test]
    fn cq_equal_sigmas_is_product() {
        let kets = ComplexMatrix::identity(2);
        let sigma = ComplexMatrix::from_real_diag(&[0.6, 0.4]);
        let s = make_cq(&[0.5, 0.5], &kets, &[sigma.clone(), sigma.clone()]).unwrap();
        let expect =
            make_product(&ComplexMatrix::identity(2).scale_re(0.5), &sigma).unwrap();
        assert!(s.rho().hs_distance(expect.rho()) < 1e-14);
    }

    #[test]
    fn cq_rejects_bad_inputs() {
        let kets = ComplexMatrix::identity(2);
        let sigma = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        assert!(matches!(
            make_cq(&[0.6, 0.6], &kets, &[sigma.clone(), sigma.clone()]),
            Err(StateError::BadProbabilities { .. })
        ));
        let skewed = ComplexMatrix::from_rows(&[&[re(1.0), re(1.0)], &[re(0.0), re(0.0)]]);
        assert!(matches!(
            make_cq(&[0.5, 0.5], &skewed, &[sigma.clone(), sigma.clone()]),
            Err(StateError::NotOrthonormal { .. })
        ));
        let not_a_state = ComplexMatrix::from_real_diag(&[1.5, -0.5]);
        assert!(matches!(
            make_cq(&[0.5, 0.5], &kets, &[sigma, not_a_state]),
            Err(StateError::BadSigma { index: 1, .. })
        ));
    }

    #[test]
    fn qc_mirrors_cq() {
        let kets = ComplexMatrix::identity(2);
        let sigma0 = ComplexMatrix::from_real_diag(&[0.8, 0.2]);
        let sigma1 = ComplexMatrix::from_real_diag(&[0.1, 0.9]);
        let qc = make_qc(&[0.4, 0.6], &kets, &[sigma0.clone(), sigma1.clone()]).unwrap();
        // Σ p_k σ_k ⊗ |k⟩⟨k| directly.
        let e0 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let e1 = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        let expect = &sigma0.kron(&e0).scale_re(0.4) + &sigma1.kron(&e1).scale_re(0.6);
        assert!(qc.rho().hs_distance(&expect) < 1e-14);
    }

    #[test]
    fn circulant_layout_and_special_points() {
        let mixed = make_circulant(0.25, 0.25, 0.25, 0.25, re(0.0), re(0.0)).unwrap();
        assert!(mixed
            .rho()
            .hs_distance(&ComplexMatrix::identity(4).scale_re(0.25))
            < 1e-15);
        let bell_c = make_circulant(0.5, 0.5, 0.0, 0.0, re(0.5), re(0.0)).unwrap();
        assert!(bell_c.rho().hs_distance(bell().rho()) < 1e-12);
        assert!(matches!(
            make_circulant(0.3, 0.3, 0.2, 0.2, re(0.35), re(0.0)),
            Err(StateError::NotPositive { .. })
        ));
    }

    #[test]
    fn circulant_block_structure() {
        let s = make_circulant(0.3, 0.25, 0.25, 0.2, c64(0.1, 0.05), c64(0.0, 0.12)).unwrap();
        let b00 = s.block_b(0, 0).unwrap();
        assert_eq!(b00[(0, 0)], re(0.3));
        assert_eq!(b00[(1, 1)], re(0.25));
        assert_eq!(b00[(0, 1)], re(0.0));
        let b01 = s.block_b(0, 1).unwrap();
        assert_eq!(b01[(0, 1)], c64(0.1, 0.05));
        assert_eq!(b01[(1, 0)], c64(0.0, 0.12));
        assert_eq!(b01[(0, 0)], re(0.0));
        let b11 = s.block_b(1, 1).unwrap();
        assert_eq!(b11[(0, 0)], re(0.2));
        assert_eq!(b11[(1, 1)], re(0.25));
    }

    #[test]
    fn block_contraction_degenerate_corners() {
        let n = 3;
        let id = ComplexMatrix::identity(n);
        let zero = ComplexMatrix::zeros(n, n);
        // D = 0, T = 0: (I ⊕ 0)/n — product with a pure A factor.
        let s = make_block_contraction(&id, &zero, &zero).unwrap();
        let mut expect = ComplexMatrix::zeros(2 * n, 2 * n);
        expect.set_block(0, 0, &id.scale_re(1.0 / n as f64));
        assert!(s.rho().hs_distance(&expect) < 1e-12);
        // D = I, T = 0: maximally mixed.
        let s = make_block_contraction(&id, &id, &zero).unwrap();
        assert!(s
            .rho()
            .hs_distance(&ComplexMatrix::identity(2 * n).scale_re(1.0 / (2.0 * n as f64)))
            < 1e-12);
    }

    #[test]
    fn block_contraction_rejects_expansions() {
        let id = ComplexMatrix::identity(2);
        let big = ComplexMatrix::identity(2).scale_re(1.5);
        assert!(matches!(
            make_block_contraction(&id, &big, &ComplexMatrix::zeros(2, 2)),
            Err(StateError::NotContraction { .. })
        ));
        let indefinite = ComplexMatrix::from_real_diag(&[1.0, -0.2]);
        assert!(matches!(
            make_block_contraction(&indefinite, &id, &id),
            Err(StateError::NotPsd { .. })
        ));
    }

    #[test]
    fn diag_coherence_layout() {
        let sixth = 1.0 / 6.0;
        let mixed = make_diag_coherence(sixth, sixth, sixth, sixth, re(0.0), re(0.0), re(0.0))
            .unwrap();
        assert!(mixed
            .rho()
            .hs_distance(&ComplexMatrix::identity(6).scale_re(sixth))
            < 1e-15);

        let (a, b, c, d) = (0.2, 0.15, 0.1, 0.25);
        let (e, f, g) = (c64(0.05, 0.02), c64(0.03, -0.04), c64(0.0, 0.1));
        let s = make_diag_coherence(a, b, c, d, e, f, g).unwrap();
        assert_eq!(s.dim_a(), 3);
        assert_eq!(s.dim_b(), 2);
        // B-side block views are the advertised diagonal families.
        assert!(s
            .block_a(0, 0)
            .unwrap()
            .hs_distance(&ComplexMatrix::from_real_diag(&[a, a, b]))
            < 1e-15);
        assert!(s
            .block_a(0, 1)
            .unwrap()
            .hs_distance(&ComplexMatrix::from_diag(&[e, f, g]))
            < 1e-15);
        assert!(s
            .block_a(1, 1)
            .unwrap()
            .hs_distance(&ComplexMatrix::from_real_diag(&[c, c, d]))
            < 1e-15);
    }

    #[test]
    fn diag_coherence_without_coherences_is_cq_assembly() {
        let (a, b, c, d) = (0.2, 0.15, 0.1, 0.25);
        let zero = re(0.0);
        let s = make_diag_coherence(a, b, c, d, zero, zero, zero).unwrap();
        let p0 = a + c;
        let p2 = b + d;
        let sig0 = ComplexMatrix::from_real_diag(&[a / p0, c / p0]);
        let sig2 = ComplexMatrix::from_real_diag(&[b / p2, d / p2]);
        let cq = make_cq(
            &[p0, p0, p2],
            &ComplexMatrix::identity(3),
            &[sig0.clone(), sig0, sig2],
        )
        .unwrap();
        assert!(s.rho().hs_distance(cq.rho()) < 1e-14);
    }

    #[test]
    fn pure_schmidt_cases() {
        let trivial = make_pure_schmidt(&[1.0]).unwrap();
        assert_eq!(trivial.dim_a(), 1);
        assert!(trivial.to_density().unwrap().is_pure(1e-12));

        let skew = make_pure_schmidt(&[0.9f64.sqrt(), 0.1f64.sqrt()]).unwrap();
        let rho_a = skew.to_density().unwrap().partial_trace_b();
        assert!((rho_a[(0, 0)].re - 0.9).abs() < 1e-12);
        assert!((rho_a[(1, 1)].re - 0.1).abs() < 1e-12);
        assert!(rho_a[(0, 1)].norm() < 1e-14);

        assert!(matches!(
            make_pure_schmidt(&[0.8, 0.5]),
            Err(StateError::BadNormalization { .. })
        ));
        assert!(matches!(
            make_pure_schmidt(&[0.1f64.sqrt(), 0.9f64.sqrt()]),
            Err(StateError::BadNormalization { .. })
        ));
    }

    #[test]
    fn pure_amplitudes_schmidt_matches_marginal_spectrum() {
        // A rotated (non-canonical) pure vector on 2⊗3.
        let mut amps = vec![Complex64::ZERO; 6];
        amps[0] = c64(0.6, 0.2);
        amps[1] = c64(0.0, 0.4);
        amps[4] = c64(0.5, 0.0);
        amps[5] = c64(-0.3, 0.2);
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in amps.iter_mut() {
            *z = z.unscale(norm);
        }
        let p = PureState::from_amplitudes(2, 3, amps).unwrap();
        let rho_a = p.to_density().unwrap().partial_trace_b();
        let eig = herm_eig(&rho_a).unwrap();
        // Marginal spectrum equals squared Schmidt coefficients.
        assert_eq!(p.schmidt().len(), 2);
        let descending: Vec<f64> = eig.values.iter().rev().copied().collect();
        for (lambda, l) in descending.iter().zip(p.schmidt().iter()) {
            assert!((lambda - l * l).abs() < 1e-10);
        }
        let sum: f64 = p.schmidt().iter().map(|l| l * l).sum();
        assert!((sum - 1.0).abs() < 1e-10);
    }

    #[test]
    fn random_state_contract() {
        let s1 = random_state(2, 3, 6, 99).unwrap();
        let s2 = random_state(2, 3, 6, 99).unwrap();
        assert_eq!(s1.rho(), s2.rho());
        let eig = herm_eig(s1.rho()).unwrap();
        assert!(eig.min() > 0.0);

        let pure = random_state(2, 2, 1, 5).unwrap();
        assert!(pure.is_pure(1e-10));

        assert!(matches!(
            random_state(2, 2, 5, 1),
            Err(StateError::BadRank { rank: 5, max: 4 })
        ));
        assert!(matches!(
            random_state(2, 2, 0, 1),
            Err(StateError::BadRank { .. })
        ));
    }

    #[test]
    fn local_conjugation_preserves_spectrum() {
        let s = random_state(2, 3, 4, 7).unwrap();
        let mut rng = rng_from_seed(8);
        let u = crate::sampling::random_unitary(2, &mut rng);
        let v = crate::sampling::random_unitary(3, &mut rng);
        let t = s.conjugate_local(&u, &v).unwrap();
        let before = herm_eig(s.rho()).unwrap().values;
        let after = herm_eig(t.rho()).unwrap().values;
        for (x, y) in before.iter().zip(after.iter()) {
            assert!((x - y).abs() < 1e-10);
        }
        let skewed = ComplexMatrix::from_rows(&[&[re(1.0), re(1.0)], &[re(0.0), re(1.0)]]);
        assert!(matches!(
            s.conjugate_local(&skewed, &ComplexMatrix::identity(3)),
            Err(StateError::NotOrthonormal { .. })
        ));
    }
}
