//! Seeded random generators for states, ensembles, Hamiltonians, and
//! channels. All randomness in the crate flows through [`ChaCha8Rng`] streams
//! derived from a user-visible seed, so every solver run and every test corpus
//! is exactly reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::KrausChannel;
use crate::ensembles::Ensemble;
use crate::error::Result;
use crate::numerics::matrix::{CMatrix, CVector, C64};
use crate::numerics::states::{DensityMatrix, Hamiltonian, PureState};

/// RNG stream for a given seed.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent RNG stream for restart `k` of a solver seeded with `seed`.
/// Streams are decorrelated by hashing the pair rather than offsetting.
pub fn restart_rng(seed: u64, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x1234_5678))
}

/// One standard-normal sample (Box–Muller on two uniforms).
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Complex standard-normal sample.
fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    C64::new(standard_normal(rng), standard_normal(rng))
}

/// Matrix with i.i.d. complex-normal entries.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-ish random unit vector (normalized complex Gaussian).
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> PureState {
    loop {
        let v = CVector::from_fn(dim, |_, _| complex_normal(rng));
        if v.norm() > 1e-6 {
            return PureState::normalized(v).expect("nonzero vector normalizes");
        }
    }
}

/// Random isometry: thin Q factor of a complex Gaussian matrix (`rows ≥ cols`),
/// with the R-diagonal phase fixed so the factor is a deterministic function
/// of the Gaussian sample.
pub fn random_isometry<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    loop {
        let g = gaussian_matrix(rng, rows, cols);
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        let mut ok = true;
        for j in 0..cols {
            let d = r[(j, j)];
            if d.norm() < 1e-10 {
                ok = false;
                break;
            }
            let phase = d / d.norm();
            for i in 0..rows {
                q[(i, j)] *= phase;
            }
        }
        if ok {
            return q;
        }
    }
}

/// Haar-ish random unitary.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> CMatrix {
    random_isometry(rng, dim, dim)
}

/// Random density matrix of the given rank: GG†/Tr with G of shape dim×rank.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let rank = rank.clamp(1, dim);
    let g = gaussian_matrix(rng, dim, rank);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::trusted(m * C64::new(1.0 / tr, 0.0))
}

/// Random ensemble with Dirichlet(1) weights and a mix of pure and low-rank
/// mixed member states.
pub fn random_ensemble<R: Rng>(rng: &mut R, dim: usize, members: usize) -> Result<Ensemble> {
    let members = members.max(1);
    let mut weights: Vec<f64> = (0..members)
        .map(|_| -(rng.random::<f64>().max(1e-300)).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let states: Vec<DensityMatrix> = (0..members)
        .map(|_| {
            let rank = rng.random_range(1..=dim);
            random_density(rng, dim, rank)
        })
        .collect();
    Ensemble::new(weights.into_iter().zip(states).collect())
}

/// Random channel A(d_in) → B(d_out) with environment dimension `d_env`:
/// slices a Haar-ish isometry V: d_in → d_out·d_env into Kraus operators.
pub fn random_channel<R: Rng>(
    rng: &mut R,
    d_in: usize,
    d_out: usize,
    d_env: usize,
) -> Result<KrausChannel> {
    let v = random_isometry(rng, d_out * d_env, d_in);
    let mut kraus = Vec::with_capacity(d_env);
    for i in 0..d_env {
        let mut k = CMatrix::zeros(d_out, d_in);
        for beta in 0..d_out {
            for alpha in 0..d_in {
                k[(beta, alpha)] = v[(beta * d_env + i, alpha)];
            }
        }
        kraus.push(k);
    }
    KrausChannel::new(kraus)
}

/// Random positive-semidefinite Hamiltonian with spectrum in [0, ~2].
pub fn random_hamiltonian<R: Rng>(rng: &mut R, dim: usize) -> Result<Hamiltonian> {
    let g = gaussian_matrix(rng, dim, dim);
    let m = &g * g.adjoint() * C64::new(1.0 / dim as f64, 0.0);
    Hamiltonian::new(m)
}
