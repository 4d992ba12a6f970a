//! Seeded random instances for property suites: states, ensembles,
//! measurements, and protocol trees.
//!
//! The suites are deterministic: [`seeded_rng`] reads the `QLOCC_SEED`
//! environment variable (a decimal `u64`) and falls back to a fixed default,
//! so a failing run can be replayed by exporting the same seed.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ensemble::{Ensemble, QuantumState};
use crate::linalg::{c64, ComplexMatrix, SystemLayout};
use crate::sim::{LocalMeasurement, ProtocolTree};

/// Seed used when `QLOCC_SEED` is not set.
pub const DEFAULT_SEED: u64 = 0x10cc_0001;

/// Deterministic generator for the property suites, overridable through the
/// `QLOCC_SEED` environment variable.
pub fn seeded_rng() -> ChaCha8Rng {
    let seed = std::env::var("QLOCC_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED);
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Normalized complex Gaussian amplitude vector (Haar-like pure state).
pub fn random_pure_state(rng: &mut impl Rng, layout: &SystemLayout) -> QuantumState {
    let dim = layout.total_dim();
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| c64(gaussian(rng), gaussian(rng)))
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z /= norm;
    }
    QuantumState::pure(layout.clone(), amps).expect("normalized by construction")
}

/// Random density matrix `G G' / tr(G G')` from a complex Gaussian `G`.
pub fn random_mixed_state(rng: &mut impl Rng, layout: &SystemLayout) -> QuantumState {
    let dim = layout.total_dim();
    let mut g = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            g.set(i, j, c64(gaussian(rng), gaussian(rng)));
        }
    }
    let rho = g.matmul(&g.adjoint());
    let rho = rho.scale_real(1.0 / rho.trace().re);
    QuantumState::mixed(layout.clone(), rho).expect("positive with unit trace by construction")
}

/// Random probability vector of length `n` (normalized uniforms).
pub fn random_probabilities(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut probs: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    probs
}

/// Random ensemble of `num_members` states; mixed members appear with the
/// given probability per member.
pub fn random_ensemble(
    rng: &mut impl Rng,
    layout: &SystemLayout,
    num_members: usize,
    mixed_fraction: f64,
) -> Ensemble {
    let probs = random_probabilities(rng, num_members);
    let members = probs
        .into_iter()
        .map(|p| {
            let state = if rng.random::<f64>() < mixed_fraction {
                random_mixed_state(rng, layout)
            } else {
                random_pure_state(rng, layout)
            };
            (p, state)
        })
        .collect();
    Ensemble::new(members).expect("probabilities normalized by construction")
}

/// Haar-like random unitary: complex Gaussian matrix orthonormalized by
/// modified Gram-Schmidt.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while columns.len() < dim {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| c64(gaussian(rng), gaussian(rng)))
            .collect();
        for u in &columns {
            let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= overlap * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // essentially collinear draw, retry
        }
        for z in &mut v {
            *z /= norm;
        }
        columns.push(v);
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, col) in columns.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u.set(i, j, z);
        }
    }
    u
}

/// Rank-1 projective measurement onto a random orthonormal basis of the
/// party's local space.
pub fn random_basis_measurement(
    rng: &mut impl Rng,
    layout: &SystemLayout,
    party: usize,
) -> LocalMeasurement {
    let idx = layout.party_index(party).expect("party in range");
    let d = layout.dims()[idx];
    let u = random_unitary(rng, d);
    let kraus = (0..d)
        .map(|j| {
            let column: Vec<Complex64> = (0..d).map(|i| u.get(i, j)).collect();
            ComplexMatrix::outer(&column)
        })
        .collect();
    LocalMeasurement::new(party, kraus).expect("projectors resolve the identity")
}

/// Random adaptive protocol of at most `max_depth` rounds: each node
/// measures a uniformly drawn party in a random basis, and each branch
/// either continues or stops early.
pub fn random_protocol(
    rng: &mut impl Rng,
    layout: &SystemLayout,
    max_depth: usize,
) -> ProtocolTree {
    if max_depth == 0 {
        return ProtocolTree::leaf();
    }
    let party = rng.random_range(1..=layout.num_parties());
    let measurement = random_basis_measurement(rng, layout, party);
    let children = (0..measurement.num_outcomes())
        .map(|_| {
            if rng.random::<f64>() < 0.25 {
                ProtocolTree::leaf()
            } else {
                random_protocol(rng, layout, max_depth - 1)
            }
        })
        .collect();
    ProtocolTree::measure(measurement, children).expect("arity matches outcomes")
}
