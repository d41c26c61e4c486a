//! Seeded random generators for matrices, unitaries, and density operators.
//!
//! Everything is driven by an explicit `u64` seed through ChaCha8 so tests
//! and command-line runs are exactly reproducible across platforms.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{c64, ComplexMatrix};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// The crate's deterministic generator.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im)
    })
}

/// Haar-distributed unitary: orthonormalize a Gaussian matrix column by
/// column (modified Gram–Schmidt, which for Gaussian input gives Haar
/// measure up to column phases).
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let g = random_gaussian(n, n, rng);
        if let Some(u) = gram_schmidt(&g) {
            return u;
        }
        // Astronomically unlikely rank deficiency: draw again.
    }
}

fn gram_schmidt(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = m.rows();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = m.column(j);
        for b in &cols {
            let ip: Complex64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b.iter()) {
                *vi -= ip * bi;
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm < 1e-12 {
            return None;
        }
        for z in v.iter_mut() {
            *z = z.unscale(nrm);
        }
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, v) in cols.iter().enumerate() {
        u.set_column(j, v);
    }
    Some(u)
}

/// Random positive semidefinite matrix `G G† / n` from a Gaussian `G` with
/// `rank` columns.
pub fn random_psd(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = random_gaussian(n, rank, rng);
    (&g * &g.adjoint()).scale_re(1.0 / n as f64)
}

/// Random density matrix of the given rank (Hilbert–Schmidt-type ensemble:
/// normalized Wishart).
pub fn random_density(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let p = random_psd(n, rank, rng);
    let tr = p.trace().re;
    p.scale_re(1.0 / tr)
}

/// Random probability vector (flat Dirichlet via normalized exponentials).
pub fn random_probability_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(1e-12..1.0);
            -u.ln()
        })
        .collect();
    let total: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= total;
    }
    v
}
