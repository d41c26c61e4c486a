//! Property batteries for the structure predicates: generator round-trips,
//! one-directional implications along the inclusion chain, local-unitary
//! invariance, limit behavior of the CQ family, and an independent
//! eigenspace-containment oracle for the zero-disturbance verdict.

use qcorr_core::{
    cluster_by_gap, herm_eig, is_cq, is_ppt, is_product, is_qc, is_zero_min_a,
    make_circulant, make_cq, make_product, make_qc, marginal_commutes_a, random_density,
    random_state, random_unitary, rng_from_seed, BipartiteState, ComplexMatrix,
};
use rand::Rng;

const TOL: f64 = 1e-8;

fn random_cq(
    da: usize,
    db: usize,
    clusters: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> BipartiteState {
    let m = clusters.min(da);
    let weights = qcorr_core::sampling::random_probability_vector(m, rng);
    let basis = random_unitary(da, rng);
    let kets = basis.block(0, 0, da, m);
    let sigmas: Vec<ComplexMatrix> = (0..m).map(|_| random_density(db, db, rng)).collect();
    make_cq(&weights, &kets, &sigmas).expect("valid CQ inputs")
}

// ═══════════════════════════════════════════════════════════════════
// Generator batteries: 100% recognition
// ═══════════════════════════════════════════════════════════════════

#[test]
fn cq_battery_is_recognized_in_full() {
    let dims = [(2, 2), (2, 3), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3), (4, 4)];
    let mut hits = 0usize;
    for k in 0..200u64 {
        let (da, db) = dims[(k as usize) % dims.len()];
        let mut rng = rng_from_seed(0xC0_0000 + k);
        let count = 1 + (k as usize) % da;
        let s = random_cq(da, db, count, &mut rng);
        let witness = is_cq(&s, TOL).unwrap();
        assert!(
            witness.is_cq,
            "CQ generator escaped recognition at iteration {k} ({da}x{db}), \
             violation {:.3e}",
            witness.max_violation
        );
        // The witness must rebuild the state it certified.
        assert!(witness.reconstruction_residual <= 10.0 * TOL);
        hits += 1;
    }
    assert_eq!(hits, 200);
}

#[test]
fn qc_battery_is_recognized_in_full() {
    for k in 0..60u64 {
        let mut rng = rng_from_seed(0xD0_0000 + k);
        let db = 2 + (k as usize) % 3;
        let da = 2 + (k as usize) % 2;
        let m = 1 + (k as usize) % db;
        let weights = qcorr_core::sampling::random_probability_vector(m, &mut rng);
        let basis = random_unitary(db, &mut rng);
        let kets = basis.block(0, 0, db, m);
        let sigmas: Vec<ComplexMatrix> =
            (0..m).map(|_| random_density(da, da, &mut rng)).collect();
        let s = make_qc(&weights, &kets, &sigmas).unwrap();
        assert!(is_qc(&s, TOL).unwrap().is_cq, "QC generator escaped at {k}");
    }
}

// ═══════════════════════════════════════════════════════════════════
// One-directional implications along the chain
// ═══════════════════════════════════════════════════════════════════

#[test]
fn cq_implies_commuting_marginal_blocks() {
    for k in 0..40u64 {
        let mut rng = rng_from_seed(0xE0_0000 + k);
        let s = random_cq(3, 3, 1 + (k as usize) % 3, &mut rng);
        if is_cq(&s, TOL).unwrap().is_cq {
            assert!(marginal_commutes_a(&s, TOL), "commutation gap at {k}");
        }
    }
}

#[test]
fn zero_disturbance_implies_cq() {
    for k in 0..60u64 {
        let mut rng = rng_from_seed(0xF0_0000 + k);
        // Mix decisive CQ states with degenerate-weight variants so both
        // verdict branches are exercised.
        let s = match k % 3 {
            0 => random_cq(3, 2, 2, &mut rng),
            1 => degenerate_weight_cq(&mut rng, true),
            _ => degenerate_weight_cq(&mut rng, false),
        };
        let witness = is_zero_min_a(&s, TOL).unwrap();
        if witness.is_zero_min {
            assert!(is_cq(&s, TOL).unwrap().is_cq, "chain inversion at {k}");
        }
    }
}

/// CQ state on 3⊗3 with a two-fold degenerate weight cluster; the cluster's
/// conditional states are equal when `aligned`, decisively different
/// otherwise.
fn degenerate_weight_cq(rng: &mut rand_chacha::ChaCha8Rng, aligned: bool) -> BipartiteState {
    let p = rng.random_range(0.15..0.3);
    let weights = [p, p, 1.0 - 2.0 * p];
    let basis = random_unitary(3, rng);
    let sigma = random_density(3, 3, rng);
    let tau = random_density(3, 3, rng);
    let second = if aligned { sigma.clone() } else { random_density(3, 3, rng) };
    let sigmas = [sigma, second, tau];
    make_cq(&weights, &basis, &sigmas).expect("valid CQ inputs")
}

// ═══════════════════════════════════════════════════════════════════
// Independent eigenspace-containment oracle for zero disturbance
// ═══════════════════════════════════════════════════════════════════

/// Direct oracle: every eigenspace of ρ_A must lie inside an eigenspace of
/// every A-side block. For an eigenspace basis V (columns) and block A this
/// means A·V = μ·V for one scalar μ.
fn eigenspaces_sit_inside_block_eigenspaces(s: &BipartiteState, tol: f64) -> bool {
    let rho_a = s.partial_trace_b();
    let eig = herm_eig(&rho_a).expect("hermitian marginal");
    let scale = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let clusters = cluster_by_gap(&eig.values, 1e-7 * scale);
    let da = s.dim_a();
    let db = s.dim_b();
    for (lo, hi) in clusters {
        let mult = hi - lo;
        let mut v = ComplexMatrix::zeros(da, mult);
        for (col, k) in (lo..hi).enumerate() {
            v.set_column(col, &eig.vectors.column(k));
        }
        for i in 0..db {
            for j in 0..db {
                let block = s.block_a(i, j).expect("in range");
                let av = &block * &v;
                // μ = tr(V†AV)/mult; containment ⟺ AV = μV.
                let compressed = &v.adjoint() * &av;
                let mu = compressed.trace().unscale(mult as f64);
                let residual = (&av - &v.scale(mu)).hs_norm();
                if residual > tol {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn zero_disturbance_verdict_matches_eigenspace_oracle() {
    let mut disagreements = Vec::new();
    for k in 0..120u64 {
        let mut rng = rng_from_seed(0x10_0000 + k);
        let s = match k % 4 {
            0 => degenerate_weight_cq(&mut rng, true),
            1 => degenerate_weight_cq(&mut rng, false),
            2 => random_cq(3, 3, 3, &mut rng),
            _ => {
                // Fully degenerate weights: zero disturbance iff all the
                // conditional states coincide.
                let basis = random_unitary(3, &mut rng);
                let sigma = random_density(3, 3, &mut rng);
                let aligned = k % 8 == 3;
                let sigmas = if aligned {
                    [sigma.clone(), sigma.clone(), sigma.clone()]
                } else {
                    [
                        sigma.clone(),
                        random_density(3, 3, &mut rng),
                        random_density(3, 3, &mut rng),
                    ]
                };
                make_cq(&[1.0 / 3.0; 3], &basis, &sigmas).unwrap()
            }
        };
        let verdict = is_zero_min_a(&s, TOL).unwrap().is_zero_min;
        let oracle = eigenspaces_sit_inside_block_eigenspaces(&s, 1e-6);
        if verdict != oracle {
            disagreements.push(k);
        }
    }
    assert!(
        disagreements.is_empty(),
        "verdict and eigenspace oracle split on iterations {disagreements:?}"
    );
}

// ═══════════════════════════════════════════════════════════════════
// Local-unitary invariance of all five predicates
// ═══════════════════════════════════════════════════════════════════

#[test]
fn predicates_are_local_unitary_invariant() {
    for k in 0..40u64 {
        let mut rng = rng_from_seed(0x20_0000 + k);
        let s = match k % 5 {
            0 => {
                let a = random_density(2, 2, &mut rng);
                let b = random_density(3, 3, &mut rng);
                make_product(&a, &b).unwrap()
            }
            1 => random_cq(2, 3, 2, &mut rng),
            2 => random_cq(3, 2, 2, &mut rng).swap_factors(),
            3 => make_circulant(
                0.3,
                0.2,
                0.3,
                0.2,
                qcorr_core::c64(0.1, 0.08),
                qcorr_core::c64(0.05, -0.02),
            )
            .unwrap(),
            _ => random_state(2, 3, 6, 0x21_0000 + k).unwrap(),
        };
        let u = random_unitary(s.dim_a(), &mut rng);
        let v = random_unitary(s.dim_b(), &mut rng);
        let conjugated = s.conjugate_local(&u, &v).unwrap();

        // Conjugation adds floating-point dust, so the rotated copy is
        // tested at 10× the base tolerance; generator states are decisively
        // inside or outside each class, never marginal.
        assert_eq!(
            is_product(&s, TOL),
            is_product(&conjugated, 10.0 * TOL),
            "product verdict moved at {k}"
        );
        assert_eq!(
            is_cq(&s, TOL).unwrap().is_cq,
            is_cq(&conjugated, 10.0 * TOL).unwrap().is_cq,
            "cq verdict moved at {k}"
        );
        assert_eq!(
            is_qc(&s, TOL).unwrap().is_cq,
            is_qc(&conjugated, 10.0 * TOL).unwrap().is_cq,
            "qc verdict moved at {k}"
        );
        assert_eq!(
            is_zero_min_a(&s, TOL).unwrap().is_zero_min,
            is_zero_min_a(&conjugated, 10.0 * TOL).unwrap().is_zero_min,
            "zero-disturbance verdict moved at {k}"
        );
        assert_eq!(
            is_ppt(&s, TOL).unwrap().is_ppt,
            is_ppt(&conjugated, 10.0 * TOL).unwrap().is_ppt,
            "ppt verdict moved at {k}"
        );
    }
}

// ═══════════════════════════════════════════════════════════════════
// The CQ family is closed under limits
// ═══════════════════════════════════════════════════════════════════

#[test]
fn cq_limits_stay_cq() {
    let mut rng = rng_from_seed(0x30_0000);
    let weights = [0.5, 0.3, 0.2];
    let basis = random_unitary(3, &mut rng);
    let sigmas: Vec<ComplexMatrix> =
        (0..3).map(|_| random_density(2, 2, &mut rng)).collect();
    let perturbations: Vec<ComplexMatrix> =
        (0..3).map(|_| random_density(2, 2, &mut rng)).collect();

    let limit = make_cq(&weights, &basis, &sigmas).unwrap();
    let mut last_distance = f64::INFINITY;
    for n in 1..=12u32 {
        let eps = 0.5f64.powi(n as i32);
        let mixed: Vec<ComplexMatrix> = sigmas
            .iter()
            .zip(perturbations.iter())
            .map(|(s, p)| (&s.scale_re(1.0 - eps) + &p.scale_re(eps)).hermitize())
            .collect();
        let element = make_cq(&weights, &basis, &mixed).unwrap();
        assert!(is_cq(&element, TOL).unwrap().is_cq, "sequence left CQ at n={n}");
        let distance = element.rho().hs_distance(limit.rho());
        assert!(distance < last_distance, "sequence stopped converging at n={n}");
        last_distance = distance;
    }
    assert!(last_distance <= 1e-3);
    assert!(is_cq(&limit, TOL).unwrap().is_cq, "limit escaped the CQ family");
}
