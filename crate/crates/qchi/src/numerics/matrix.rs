//! Complex matrix primitives: Hermitian eigendecomposition, Kronecker products,
//! and small helpers shared by every other module.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar type used throughout: double-precision complex.
pub type C64 = Complex64;
/// Dense dynamically-sized complex matrix.
pub type CMatrix = DMatrix<C64>;
/// Dense dynamically-sized complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Deterministic Hermitian eigendecomposition.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvalues sorted in
/// **descending** order (ties broken by original index) and each eigenvector
/// phase-fixed so that its first component of modulus > 1e-10 is real and
/// positive. Column `j` of the returned matrix is the eigenvector of
/// `eigenvalues[j]`. The input is symmetrized as `(M + M†)/2` first, so tiny
/// non-Hermitian noise never reaches the solver.
///
/// This is the single spectral routine in the crate: every entropy, support
/// projector, and spectral floor goes through it, so ordering and phase
/// conventions are uniform everywhere.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let h = hermitize(m);
    let se = h.symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[b]
            .partial_cmp(&se.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut vals = Vec::with_capacity(n);
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vals.push(se.eigenvalues[src]);
        let mut col = se.eigenvectors.column(src).clone_owned();
        // Phase convention: first component with modulus > 1e-10 made real positive.
        if let Some(pivot) = col.iter().find(|c| c.norm() > 1e-10) {
            let phase = pivot / pivot.norm();
            col.scale_mut(1.0);
            for c in col.iter_mut() {
                *c /= phase;
            }
        }
        vecs.set_column(dst, &col);
    }
    Ok((vals, vecs))
}

/// `(M + M†)/2` — the Hermitian part of a matrix.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Kronecker product `a ⊗ b` with row-major composite index `(i_a, i_b) ↦ i_a·rows(b) + i_b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Frobenius distance ‖A − B‖_F.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Trace norm ‖M‖₁ = Σ singular values. For Hermitian input this is Σ|λ_i|.
pub fn trace_norm(m: &CMatrix) -> f64 {
    // Singular values of M = eigenvalues^(1/2) of M†M; M†M is Hermitian PSD.
    let gram = m.adjoint() * m;
    match hermitian_eigen(&gram) {
        Ok((vals, _)) => vals.iter().map(|v| v.max(0.0).sqrt()).sum(),
        Err(_) => f64::NAN,
    }
}

/// Real part of the trace (traces of Hermitian products are real up to noise).
pub fn trace_re(m: &CMatrix) -> f64 {
    m.trace().re
}

/// Identity matrix of size `n`.
pub fn eye(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Matrix logarithm of a positive-definite Hermitian matrix with a spectral
/// floor: eigenvalues below `floor` are clamped to `floor` before taking logs.
/// Used by gradient computations where strict positivity is enforced upstream
/// by ε-mixing with the maximally mixed state.
pub fn ln_floor(m: &CMatrix, floor: f64) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let n = vals.len();
    let mut diag = CMatrix::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        diag[(i, i)] = C64::new(v.max(floor).ln(), 0.0);
    }
    Ok(&vecs * diag * vecs.adjoint())
}

/// Matrix exponential of a Hermitian matrix via eigendecomposition.
pub fn exp_hermitian(m: &CMatrix) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let n = vals.len();
    let mut diag = CMatrix::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        diag[(i, i)] = C64::new(v.exp(), 0.0);
    }
    Ok(&vecs * diag * vecs.adjoint())
}

/// Hermiticity deviation ‖M − M†‖_F.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}
