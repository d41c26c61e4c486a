//! Variational correlation measures: measurement-induced disturbance
//! maxima (with the marginal held fixed), geometric discord, entropic
//! discord, entropies, and measurement application.
//!
//! All three variational quantities reduce to optimizing a sum of per-block
//! scores over an orthonormal measurement basis `{|u_k⟩}` on the measured
//! factor, where block k is the compression `M_kk = (⟨u_k|⊗I) ρ (|u_k⟩⊗I)`:
//!
//! - disturbance (used by both the max- and min-type measures):
//!   `‖ρ − Π(ρ)‖² = ‖ρ‖² − Σ_k ‖M_kk‖²`, so optimizing the disturbance is
//!   optimizing `Σ_k ‖M_kk‖²`;
//! - classical correlation (entropic discord): `S(ρ_B) − Σ_k p_k S(M_kk/p_k)`
//!   with `p_k = tr M_kk`.
//!
//! The optimizer is coordinate ascent over two-angle Givens rotations of
//! basis-column pairs (a coarse grid per pair followed by a deterministic
//! shrinking pattern search), swept until the objective gain drops below
//! `sweep_tol`, restarted from seeded random bases. Results carry a
//! certificate: `Exact` when the optimum is forced (closed form or a unique
//! admissible measurement), otherwise `Bound` in the direction stated by
//! each measure's documentation.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::eig::{cluster_by_gap, herm_eig};
use crate::error::{LinalgError, MeasureError};
use crate::matrix::{c64, ComplexMatrix};
use crate::sampling::{random_unitary, rng_from_seed};
use crate::state::{BipartiteState, PureState};
use crate::tol;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Unitarity tolerance for user-supplied measurement bases.
const MEASUREMENT_UNITARITY: f64 = 1e-10;
/// Two restart outcomes agreeing within this distance count as one optimum.
const AGREEMENT: f64 = 1e-8;
/// Coarse per-pair grid: rotation angles × phase angles.
const GRID_THETA: usize = 12;
const GRID_PHI: usize = 12;
/// Bloch-sphere grid edge for the qubit fast path.
const BLOCH_GRID: usize = 64;
const MAX_SWEEPS: usize = 100;
const REFINE_STEPS: usize = 80;

/// A complete projective measurement, stored as the unitary whose columns
/// are the measured basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    basis: ComplexMatrix,
}

impl Measurement {
    /// Validate a basis: square and unitary within `1e-10`.
    pub fn new(basis: ComplexMatrix) -> Result<Self, MeasureError> {
        if !basis.is_square() {
            return Err(MeasureError::ShapeMismatch {
                expected: basis.rows(),
                got: basis.cols(),
            });
        }
        let n = basis.rows();
        let residual = (&(&basis.adjoint() * &basis) - &ComplexMatrix::identity(n)).hs_norm();
        if residual > MEASUREMENT_UNITARITY {
            return Err(MeasureError::NotUnitary { residual });
        }
        Ok(Self { basis })
    }

    fn trusted(basis: ComplexMatrix) -> Self {
        Self { basis }
    }

    /// The unitary whose k-th column is the k-th measurement vector.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// Number of outcomes (= dimension of the measured factor).
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
}

/// Which kind of guarantee a [`MeasureResult`] value carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// The optimum is forced (closed form or unique admissible
    /// measurement); the value is exact up to floating point.
    Exact,
    /// The value came out of the restart/sweep optimizer: a lower bound
    /// for maximization problems, an upper bound for minimization.
    Bound,
}

/// Optimizer knobs shared by all variational measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureOpts {
    /// Seed for the restart bases; fixed seed ⇒ bit-identical results.
    pub seed: u64,
    /// Number of optimizer starts (the first two are the marginal
    /// eigenbasis and the canonical basis, the rest seeded random).
    pub restarts: usize,
    /// A full Givens sweep improving the objective by less than this stops
    /// the sweep loop.
    pub sweep_tol: f64,
}

impl Default for MeasureOpts {
    fn default() -> Self {
        Self {
            seed: 0x5EED_C0DE,
            restarts: 16,
            sweep_tol: 1e-10,
        }
    }
}

/// Outcome of a variational measure evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureResult {
    /// The measure value (clamped into its proven range).
    pub value: f64,
    /// The value before clamping, for diagnostics.
    pub raw_value: f64,
    /// The measurement achieving `value` on the measured factor.
    pub optimizer: Measurement,
    /// Whether `value` is forced or an optimization bound.
    pub certificate: Certificate,
    /// Total Givens sweeps (plus qubit-grid refinement passes) performed.
    pub iterations: usize,
    /// Seed the optimizer ran with.
    pub seed: u64,
    /// Restarts whose final objective agreed with the best within `1e-8`
    /// (0 for closed-form results, where no restarts run).
    pub restarts_agreeing: usize,
}

/// Project a state onto the given measurement on the A factor:
/// `Σ_k (Π_k ⊗ I) ρ (Π_k ⊗ I)` with `Π_k = |u_k⟩⟨u_k|`. The output is
/// always a valid state and is classical on A in the measurement basis.
pub fn apply_measurement_a(
    s: &BipartiteState,
    m: &Measurement,
) -> Result<BipartiteState, MeasureError> {
    if m.dim() != s.dim_a() {
        return Err(MeasureError::ShapeMismatch {
            expected: s.dim_a(),
            got: m.dim(),
        });
    }
    let db = s.dim_b();
    let rotation = m.basis.kron(&ComplexMatrix::identity(db));
    let in_basis = &(&rotation.adjoint() * s.rho()) * &rotation;
    let mut pinched = ComplexMatrix::zeros(s.dim(), s.dim());
    for k in 0..s.dim_a() {
        pinched.set_block(k * db, k * db, &in_basis.block(k * db, k * db, db, db));
    }
    let back = (&(&rotation * &pinched) * &rotation.adjoint()).hermitize();
    // Pinching preserves trace and positivity exactly, so no re-validation.
    Ok(BipartiteState::trusted(back, s.dim_a(), s.dim_b()))
}

/// Mirror of [`apply_measurement_a`] for the B factor.
pub fn apply_measurement_b(
    s: &BipartiteState,
    m: &Measurement,
) -> Result<BipartiteState, MeasureError> {
    if m.dim() != s.dim_b() {
        return Err(MeasureError::ShapeMismatch {
            expected: s.dim_b(),
            got: m.dim(),
        });
    }
    Ok(apply_measurement_a(&s.swap_factors(), m)?.swap_factors())
}

/// `−x·log₂x`, extended by 0 at and below zero.
fn eta(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

fn spectrum_entropy(m: &ComplexMatrix) -> Result<f64, LinalgError> {
    let eig = herm_eig(m)?;
    Ok(eig.values.iter().map(|&v| eta(v.max(0.0))).sum())
}

/// Von Neumann entropy `−Σ λ log₂ λ` of a unit-trace PSD matrix.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64, MeasureError> {
    let eig = herm_eig(m)?;
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol::TRACE {
        return Err(MeasureError::TraceNotOne { trace });
    }
    if eig.min() < -tol::POSITIVITY {
        return Err(MeasureError::NotPsd {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig.values.iter().map(|&v| eta(v.max(0.0))).sum())
}

/// Mutual information `S(ρ_A) + S(ρ_B) − S(ρ)` in bits.
pub fn mutual_information(s: &BipartiteState) -> Result<f64, MeasureError> {
    let s_a = spectrum_entropy(&s.partial_trace_b())?;
    let s_b = spectrum_entropy(&s.partial_trace_a())?;
    let s_ab = spectrum_entropy(s.rho())?;
    Ok(s_a + s_b - s_ab)
}

/// Per-state cache for the optimizer: the `db×db` tiles of ρ indexed by
/// the A-side pair `(a,b)`, from which every measured block is a
/// sesquilinear combination.
struct MeasureContext {
    tiles: Vec<ComplexMatrix>,
    da: usize,
    db: usize,
}

impl MeasureContext {
    fn new(s: &BipartiteState) -> Self {
        let (da, db) = (s.dim_a(), s.dim_b());
        let tiles = (0..da * da)
            .map(|idx| s.rho().block((idx / da) * db, (idx % da) * db, db, db))
            .collect();
        Self { tiles, da, db }
    }

    /// `Σ_ab conj(x_a)·y_b·T_ab` — the (x,y) block of ρ compressed on A.
    fn quad(&self, x: &[Complex64], y: &[Complex64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.db, self.db);
        for (a, &x_a) in x.iter().enumerate().take(self.da) {
            let xa = x_a.conj();
            for (b, &y_b) in y.iter().enumerate().take(self.da) {
                let w = xa * y_b;
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                let t = &self.tiles[a * self.da + b];
                for i in 0..self.db {
                    for j in 0..self.db {
                        out[(i, j)] += w * t[(i, j)];
                    }
                }
            }
        }
        out
    }

    fn total_score(&self, basis: &ComplexMatrix, score: &dyn Fn(&ComplexMatrix) -> f64) -> f64 {
        (0..self.da)
            .map(|k| {
                let col = basis.column(k);
                score(&self.quad(&col, &col))
            })
            .sum()
    }
}

fn combine4(mats: [&ComplexMatrix; 4], coeffs: [Complex64; 4], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        coeffs[0] * mats[0][(i, j)]
            + coeffs[1] * mats[1][(i, j)]
            + coeffs[2] * mats[2][(i, j)]
            + coeffs[3] * mats[3][(i, j)]
    })
}

/// Maximize `Σ_k score(M_kk)` by coordinate ascent over Givens rotations of
/// the listed column pairs. Returns the final objective and sweep count.
fn givens_sweeps(
    ctx: &MeasureContext,
    basis: &mut ComplexMatrix,
    pairs: &[(usize, usize)],
    score: &dyn Fn(&ComplexMatrix) -> f64,
    sweep_tol: f64,
) -> (f64, usize) {
    let mut total = ctx.total_score(basis, score);
    let mut sweeps = 0;
    if pairs.is_empty() {
        return (total, sweeps);
    }
    loop {
        let previous = total;
        for &(p, q) in pairs {
            let up = basis.column(p);
            let uq = basis.column(q);
            let m_pp = ctx.quad(&up, &up);
            let m_pq = ctx.quad(&up, &uq);
            let m_qp = ctx.quad(&uq, &up);
            let m_qq = ctx.quad(&uq, &uq);
            let pair_score = |theta: f64, phi: f64| -> f64 {
                let (c, s) = (theta.cos(), theta.sin());
                let cs = c * s;
                let e_pos = Complex64::from_polar(1.0, phi);
                let e_neg = e_pos.conj();
                let new_pp = combine4(
                    [&m_pp, &m_pq, &m_qp, &m_qq],
                    [
                        c64(c * c, 0.0),
                        e_neg.scale(cs),
                        e_pos.scale(cs),
                        c64(s * s, 0.0),
                    ],
                    ctx.db,
                );
                let new_qq = combine4(
                    [&m_pp, &m_pq, &m_qp, &m_qq],
                    [
                        c64(s * s, 0.0),
                        e_neg.scale(-cs),
                        e_pos.scale(-cs),
                        c64(c * c, 0.0),
                    ],
                    ctx.db,
                );
                score(&new_pp) + score(&new_qq)
            };
            let baseline = pair_score(0.0, 0.0);
            let mut best = (0.0f64, 0.0f64, baseline);
            for i in 1..=GRID_THETA {
                let theta = i as f64 * core::f64::consts::FRAC_PI_2 / (GRID_THETA + 1) as f64;
                for j in 0..GRID_PHI {
                    let phi = j as f64 * core::f64::consts::TAU / GRID_PHI as f64;
                    let value = pair_score(theta, phi);
                    if value > best.2 {
                        best = (theta, phi, value);
                    }
                }
            }
            let mut step_theta = core::f64::consts::FRAC_PI_2 / (GRID_THETA + 1) as f64;
            let mut step_phi = core::f64::consts::TAU / GRID_PHI as f64;
            for _ in 0..REFINE_STEPS {
                if step_theta < 1e-9 {
                    break;
                }
                let candidates = [
                    (best.0 + step_theta, best.1),
                    (best.0 - step_theta, best.1),
                    (best.0, best.1 + step_phi),
                    (best.0, best.1 - step_phi),
                ];
                let mut improved = false;
                for &(theta, phi) in &candidates {
                    let value = pair_score(theta, phi);
                    if value > best.2 {
                        best = (theta, phi, value);
                        improved = true;
                    }
                }
                if !improved {
                    step_theta *= 0.5;
                    step_phi *= 0.5;
                }
            }
            if best.2 > baseline {
                let (theta, phi) = (best.0, best.1);
                let (c, s) = (theta.cos(), theta.sin());
                let e_pos = Complex64::from_polar(1.0, phi);
                let e_neg = e_pos.conj();
                let new_p: Vec<Complex64> = up
                    .iter()
                    .zip(uq.iter())
                    .map(|(&a, &b)| a.scale(c) + b * e_neg.scale(s))
                    .collect();
                let new_q: Vec<Complex64> = up
                    .iter()
                    .zip(uq.iter())
                    .map(|(&a, &b)| -a * e_pos.scale(s) + b.scale(c))
                    .collect();
                basis.set_column(p, &new_p);
                basis.set_column(q, &new_q);
            }
        }
        total = ctx.total_score(basis, score);
        sweeps += 1;
        if total - previous <= sweep_tol || sweeps >= MAX_SWEEPS {
            break;
        }
    }
    (total, sweeps)
}

struct Optimized {
    basis: ComplexMatrix,
    score: f64,
    iterations: usize,
    agreeing: usize,
}

/// Run the sweep from every start, keep the best final objective (ties
/// stay with the earliest restart), and count agreeing restarts.
fn optimize_over_starts(
    ctx: &MeasureContext,
    starts: Vec<ComplexMatrix>,
    pairs: &[(usize, usize)],
    score: &dyn Fn(&ComplexMatrix) -> f64,
    sweep_tol: f64,
) -> Optimized {
    let mut best: Option<(ComplexMatrix, f64)> = None;
    let mut iterations = 0;
    let mut finals = Vec::with_capacity(starts.len());
    for start in starts {
        let mut basis = start;
        let (value, sweeps) = givens_sweeps(ctx, &mut basis, pairs, score, sweep_tol);
        iterations += sweeps;
        finals.push(value);
        let replace = match &best {
            None => true,
            Some((_, best_value)) => value > *best_value,
        };
        if replace {
            best = Some((basis, value));
        }
    }
    let (basis, score_value) = best.expect("at least one optimizer start");
    let agreeing = finals
        .iter()
        .filter(|&&v| score_value - v <= AGREEMENT)
        .count();
    Optimized {
        basis,
        score: score_value,
        iterations,
        agreeing,
    }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for p in 0..n {
        for q in (p + 1)..n {
            pairs.push((p, q));
        }
    }
    pairs
}

/// Default start list: marginal eigenbasis, canonical basis, then seeded
/// random unitaries, `restarts` in total.
fn standard_starts(
    marginal_basis: &ComplexMatrix,
    dim: usize,
    restarts: usize,
    seed: u64,
) -> Vec<ComplexMatrix> {
    let mut rng = rng_from_seed(seed);
    let mut starts = vec![marginal_basis.clone(), ComplexMatrix::identity(dim)];
    while starts.len() < restarts.max(1) {
        starts.push(random_unitary(dim, &mut rng));
    }
    starts.truncate(restarts.max(1));
    starts
}

fn purity_score(m: &ComplexMatrix) -> f64 {
    let n = m.hs_norm();
    n * n
}

/// Measured-basis column unitary on the Bloch sphere.
fn bloch_basis(theta: f64, phi: f64) -> ComplexMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e_pos = Complex64::from_polar(1.0, phi);
    ComplexMatrix::from_rows(&[
        &[c64(c, 0.0), -e_pos.conj().scale(s)],
        &[e_pos.scale(s), c64(c, 0.0)],
    ])
}

/// Qubit fast path: dense Bloch-angle grid plus shrinking pattern search,
/// maximizing the block score. Independent of the Givens machinery.
fn bloch_search(
    ctx: &MeasureContext,
    score: &dyn Fn(&ComplexMatrix) -> f64,
) -> (ComplexMatrix, f64, usize) {
    let eval = |theta: f64, phi: f64| {
        let basis = bloch_basis(theta, phi);
        ctx.total_score(&basis, score)
    };
    let mut best = (0.0f64, 0.0f64, eval(0.0, 0.0));
    for i in 0..BLOCH_GRID {
        let theta = i as f64 * core::f64::consts::PI / BLOCH_GRID as f64;
        for j in 0..BLOCH_GRID {
            let phi = j as f64 * core::f64::consts::TAU / BLOCH_GRID as f64;
            let value = eval(theta, phi);
            if value > best.2 {
                best = (theta, phi, value);
            }
        }
    }
    let mut step_theta = core::f64::consts::PI / BLOCH_GRID as f64;
    let mut step_phi = core::f64::consts::TAU / BLOCH_GRID as f64;
    let mut passes = 0;
    for _ in 0..200 {
        if step_theta < 1e-10 {
            break;
        }
        passes += 1;
        let candidates = [
            (best.0 + step_theta, best.1),
            (best.0 - step_theta, best.1),
            (best.0, best.1 + step_phi),
            (best.0, best.1 - step_phi),
        ];
        let mut improved = false;
        for &(theta, phi) in &candidates {
            let value = eval(theta, phi);
            if value > best.2 {
                best = (theta, phi, value);
                improved = true;
            }
        }
        if !improved {
            step_theta *= 0.5;
            step_phi *= 0.5;
        }
    }
    (bloch_basis(best.0, best.1), best.2, passes)
}

/// Maximal measurement disturbance `max ‖ρ − Π^A(ρ)‖₂²` over measurements
/// on A that leave the A marginal invariant.
///
/// When the marginal is nondegenerate the admissible measurement is its
/// eigenbasis, unique up to permutation and phases — both irrelevant to
/// the value — so the result is `Exact`. Degenerate marginals leave one
/// unitary free per eigenvalue cluster (relative gap below `1e-7`); the
/// optimizer searches those block unitaries and reports a `Bound` (a lower
/// bound on the supremum).
pub fn min_a(s: &BipartiteState, opts: &MeasureOpts) -> Result<MeasureResult, MeasureError> {
    let marginal = s.partial_trace_b();
    let eig = herm_eig(&marginal)?;
    let clusters = cluster_by_gap(&eig.values, tol::WEIGHT_CLUSTER_GAP);
    let ctx = MeasureContext::new(s);
    let purity = s.purity();
    if clusters.iter().all(|&(lo, hi)| hi - lo == 1) {
        let raw = purity - ctx.total_score(&eig.vectors, &purity_score);
        return Ok(MeasureResult {
            value: raw.max(0.0),
            raw_value: raw,
            optimizer: Measurement::trusted(eig.vectors),
            certificate: Certificate::Exact,
            iterations: 0,
            seed: opts.seed,
            restarts_agreeing: 0,
        });
    }
    // Free directions: rotations inside each degenerate eigenspace keep
    // the marginal fixed exactly.
    let mut pairs = Vec::new();
    for &(lo, hi) in &clusters {
        for p in lo..hi {
            for q in (p + 1)..hi {
                pairs.push((p, q));
            }
        }
    }
    let mut rng = rng_from_seed(opts.seed);
    let mut starts = vec![eig.vectors.clone()];
    while starts.len() < opts.restarts.max(1) {
        let mut block_rotation = ComplexMatrix::identity(s.dim_a());
        for &(lo, hi) in &clusters {
            if hi - lo >= 2 {
                block_rotation.set_block(lo, lo, &random_unitary(hi - lo, &mut rng));
            }
        }
        starts.push(&eig.vectors * &block_rotation);
    }
    // The disturbance is purity − Σ‖M_kk‖², so maximizing it means
    // minimizing the block score.
    let negated = |m: &ComplexMatrix| -purity_score(m);
    let out = optimize_over_starts(&ctx, starts, &pairs, &negated, opts.sweep_tol);
    let raw = purity + out.score;
    Ok(MeasureResult {
        value: raw.max(0.0),
        raw_value: raw,
        optimizer: Measurement::trusted(out.basis),
        certificate: Certificate::Bound,
        iterations: out.iterations,
        seed: opts.seed,
        restarts_agreeing: out.agreeing,
    })
}

/// Mirror of [`min_a`] with the measurement on B; the optimizer in the
/// result acts on H_B.
pub fn min_b(s: &BipartiteState, opts: &MeasureOpts) -> Result<MeasureResult, MeasureError> {
    min_a(&s.swap_factors(), opts)
}

/// Closed-form maximal disturbance for pure states with the marginal held
/// fixed: `1 − Σ λ_k⁴` over the Schmidt coefficients.
pub fn min_pure(p: &PureState) -> f64 {
    1.0 - p.schmidt().iter().map(|&l| l.powi(4)).sum::<f64>()
}

/// Geometric discord on A: `min ‖ρ − Π^A(ρ)‖₂²` over all complete
/// projective measurements on A. Certificate `Bound` (an upper bound on
/// the infimum). For qubit A a dense Bloch grid backs up the Givens
/// optimizer and the better value wins.
pub fn gmqd_a(s: &BipartiteState, opts: &MeasureOpts) -> Result<MeasureResult, MeasureError> {
    let marginal = s.partial_trace_b();
    let eig = herm_eig(&marginal)?;
    let ctx = MeasureContext::new(s);
    let purity = s.purity();
    let starts = standard_starts(&eig.vectors, s.dim_a(), opts.restarts, opts.seed);
    let pairs = all_pairs(s.dim_a());
    let out = optimize_over_starts(&ctx, starts, &pairs, &purity_score, opts.sweep_tol);
    let mut best_basis = out.basis;
    let mut best_score = out.score;
    let mut iterations = out.iterations;
    if s.dim_a() == 2 {
        let (basis, score, passes) = bloch_search(&ctx, &purity_score);
        iterations += passes;
        if score > best_score {
            best_score = score;
            best_basis = basis;
        }
    }
    let raw = purity - best_score;
    Ok(MeasureResult {
        value: raw.max(0.0),
        raw_value: raw,
        optimizer: Measurement::trusted(best_basis),
        certificate: Certificate::Bound,
        iterations,
        seed: opts.seed,
        restarts_agreeing: out.agreeing,
    })
}

/// Mirror of [`gmqd_a`] with the measurement on B.
pub fn gmqd_b(s: &BipartiteState, opts: &MeasureOpts) -> Result<MeasureResult, MeasureError> {
    gmqd_a(&s.swap_factors(), opts)
}

/// Entropy score of one measured block, written so that the classical
/// correlation is `S(ρ_B) − Σ_k blocks`: for `p = tr M`,
/// `p·S(M/p) = Σ_i η(μ_i) − η(p)` over the eigenvalues μ of M.
fn conditional_entropy_block(m: &ComplexMatrix) -> f64 {
    let p = m.trace().re;
    if p < tol::WEIGHT_FLOOR {
        return 0.0;
    }
    let eig = herm_eig(m).expect("measured blocks are Hermitian");
    let spectral: f64 = eig.values.iter().map(|&v| eta(v.max(0.0))).sum();
    spectral - eta(p)
}

/// Entropic discord on A: mutual information minus the best classical
/// correlation `S(ρ_B) − Σ_k p_k S(M_kk/p_k)` over measurements on A.
/// Supported for `dim_a ≤ 3`. Negative rounding artifacts are clamped to
/// zero with the raw value retained. Certificate `Bound` (an upper bound
/// on the discord, since the classical correlation is maximized from
/// below).
pub fn discord_a(s: &BipartiteState, opts: &MeasureOpts) -> Result<MeasureResult, MeasureError> {
    if s.dim_a() > 3 {
        return Err(MeasureError::UnsupportedDimension {
            dim: s.dim_a(),
            max: 3,
        });
    }
    let information = mutual_information(s)?;
    let entropy_b = spectrum_entropy(&s.partial_trace_a())?;
    let marginal = s.partial_trace_b();
    let eig = herm_eig(&marginal)?;
    let ctx = MeasureContext::new(s);
    // Maximizing the classical correlation means minimizing the summed
    // block entropies.
    let negated = |m: &ComplexMatrix| -conditional_entropy_block(m);
    let starts = standard_starts(&eig.vectors, s.dim_a(), opts.restarts, opts.seed);
    let pairs = all_pairs(s.dim_a());
    let out = optimize_over_starts(&ctx, starts, &pairs, &negated, opts.sweep_tol);
    let mut best_basis = out.basis;
    let mut best_score = out.score;
    let mut iterations = out.iterations;
    if s.dim_a() == 2 {
        let (basis, score, passes) = bloch_search(&ctx, &negated);
        iterations += passes;
        if score > best_score {
            best_score = score;
            best_basis = basis;
        }
    }
    let classical = entropy_b + best_score;
    let raw = information - classical;
    Ok(MeasureResult {
        value: raw.max(0.0),
        raw_value: raw,
        optimizer: Measurement::trusted(best_basis),
        certificate: Certificate::Bound,
        iterations,
        seed: opts.seed,
        restarts_agreeing: out.agreeing,
    })
}

/// Mirror of [`discord_a`] with the measurement on B (`dim_b ≤ 3`).
pub fn discord_b(s: &BipartiteState, opts: &MeasureOpts) -> Result<MeasureResult, MeasureError> {
    discord_a(&s.swap_factors(), opts)
}
