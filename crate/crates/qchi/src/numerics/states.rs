//! Quantum states: density matrices, pure states, bipartite states,
//! partial traces, purification, and Hamiltonians.

use super::matrix::{hermitian_eigen, hermiticity_deviation, CMatrix, CVector, C64};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// A validated density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a candidate density matrix using default tolerances.
    pub fn new(mat: CMatrix) -> Result<Self> {
        Self::new_with(mat, &Tolerances::default())
    }

    /// Validate and wrap with explicit tolerances.
    pub fn new_with(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let dev = hermiticity_deviation(&mat);
        if dev > tol.herm {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tol.herm,
            });
        }
        let (vals, _) = hermitian_eigen(&mat)?;
        if let Some(&min) = vals.last() {
            if min < -tol.psd {
                return Err(Error::NotPsd {
                    min_eig: min,
                    tol: tol.psd,
                });
            }
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::BadTrace {
                expected: 1.0,
                got: tr,
                tol: tol.trace,
            });
        }
        Ok(Self {
            dim: mat.nrows(),
            mat,
        })
    }

    /// Wrap a matrix that is known valid by construction (internal fast path).
    pub(crate) fn trusted(mat: CMatrix) -> Self {
        Self {
            dim: mat.nrows(),
            mat,
        }
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty { what: "dimension" });
        }
        Ok(Self::trusted(
            CMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        ))
    }

    /// Diagonal density matrix from a probability vector (clipped/renormalized
    /// is *not* applied here: the vector must already be a distribution).
    pub fn from_probabilities(p: &[f64]) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Empty {
                what: "probability vector",
            });
        }
        let sum: f64 = p.iter().sum();
        if p.iter().any(|&x| x < -1e-12) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::BadWeights {
                detail: format!("entries must be ≥ 0 and sum to 1 (sum = {sum})"),
            });
        }
        let n = p.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &x) in p.iter().enumerate() {
            m[(i, i)] = C64::new(x.max(0.0), 0.0);
        }
        Ok(Self::trusted(m))
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Borrow the underlying matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Consume and return the underlying matrix.
    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Eigenvalues (descending) and eigenvectors.
    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        hermitian_eigen(&self.mat).expect("validated density matrix is square")
    }

    /// Spectrum clipped at `tol_eig` and renormalized to sum 1. This is the
    /// canonical cleanup applied before any `x ln x` evaluation.
    pub fn clipped_spectrum(&self, tol_eig: f64) -> Vec<f64> {
        let (vals, _) = self.eigen();
        clip_and_renormalize(&vals, tol_eig)
    }

    /// Rank at tolerance: number of eigenvalues > `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigen().0.iter().filter(|&&v| v > tol).count()
    }

    /// Projector onto the support (span of eigenvectors with eigenvalue > `tol`).
    pub fn support_projector(&self, tol: f64) -> CMatrix {
        let (vals, vecs) = self.eigen();
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for (i, &v) in vals.iter().enumerate() {
            if v > tol {
                let col = vecs.column(i);
                p += col * col.adjoint();
            }
        }
        p
    }

    /// Expected value Tr(Hρ) of a Hermitian observable.
    pub fn expectation(&self, h: &Hamiltonian) -> Result<f64> {
        if h.dim() != self.dim {
            return Err(Error::DimMismatch {
                context: "observable vs state",
                expected: self.dim,
                got: h.dim(),
            });
        }
        Ok((h.matrix() * &self.mat).trace().re)
    }

    /// Convex mixture (1−ε)ρ + ε·I/d, used to keep solver iterates strictly
    /// inside the state space.
    pub fn mix_with_maximally_mixed(&self, eps: f64) -> Self {
        let d = self.dim as f64;
        let m = &self.mat * C64::new(1.0 - eps, 0.0)
            + CMatrix::identity(self.dim, self.dim) * C64::new(eps / d, 0.0);
        Self::trusted(m)
    }
}

/// Clip entries below `tol_eig` to zero and renormalize the rest to sum 1.
pub fn clip_and_renormalize(vals: &[f64], tol_eig: f64) -> Vec<f64> {
    let clipped: Vec<f64> = vals.iter().map(|&v| if v > tol_eig { v } else { 0.0 }).collect();
    let sum: f64 = clipped.iter().sum();
    if sum <= 0.0 {
        return clipped;
    }
    clipped.into_iter().map(|v| v / sum).collect()
}

/// A normalized pure state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vec: CVector,
}

impl PureState {
    /// Validate a candidate state vector (norm 1 within 1e-8).
    pub fn new(vec: CVector) -> Result<Self> {
        let norm = vec.norm();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { vec })
    }

    /// Normalize a nonzero vector into a pure state.
    pub fn normalized(vec: CVector) -> Result<Self> {
        let norm = vec.norm();
        if norm < 1e-300 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { vec: vec / C64::new(norm, 0.0) })
    }

    /// Computational basis state |k⟩ in dimension `dim`.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimMismatch {
                context: "basis index vs dimension",
                expected: dim,
                got: k,
            });
        }
        let mut v = CVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        Ok(Self { vec: v })
    }

    /// The qubit state |+⟩ = (|0⟩ + |1⟩)/√2.
    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = CVector::zeros(2);
        v[0] = C64::new(s, 0.0);
        v[1] = C64::new(s, 0.0);
        Self { vec: v }
    }

    /// Dimension of the underlying space.
    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    /// Borrow the state vector.
    pub fn vector(&self) -> &CVector {
        &self.vec
    }

    /// Rank-one projector |ψ⟩⟨ψ| as a density matrix.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::trusted(&self.vec * self.vec.adjoint())
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> C64 {
        (self.vec.adjoint() * &other.vec)[(0, 0)]
    }
}

/// Which factor of a bipartite system B ⊗ E to keep or trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    /// First factor (output system).
    B,
    /// Second factor (environment).
    E,
}

/// A state on a bipartite system B ⊗ E with the composite index b·d_E + e.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    d_b: usize,
    d_e: usize,
    state: DensityMatrix,
}

impl BipartiteState {
    /// Wrap a density matrix on a space of dimension `d_b · d_e`.
    pub fn new(d_b: usize, d_e: usize, state: DensityMatrix) -> Result<Self> {
        if state.dim() != d_b * d_e {
            return Err(Error::DimMismatch {
                context: "bipartite state vs factor dimensions",
                expected: d_b * d_e,
                got: state.dim(),
            });
        }
        Ok(Self { d_b, d_e, state })
    }

    /// Dimension of factor B.
    pub fn dim_b(&self) -> usize {
        self.d_b
    }

    /// Dimension of factor E.
    pub fn dim_e(&self) -> usize {
        self.d_e
    }

    /// The joint state.
    pub fn joint(&self) -> &DensityMatrix {
        &self.state
    }

    /// Reduced state on the kept subsystem.
    pub fn marginal(&self, keep: Subsystem) -> DensityMatrix {
        partial_trace(self.state.matrix(), self.d_b, self.d_e, keep)
    }
}

/// Partial trace of a matrix on B ⊗ E (composite index b·d_E + e).
///
/// `keep = Subsystem::B` returns Tr_E, `keep = Subsystem::E` returns Tr_B.
pub fn partial_trace(joint: &CMatrix, d_b: usize, d_e: usize, keep: Subsystem) -> DensityMatrix {
    match keep {
        Subsystem::B => {
            let mut out = CMatrix::zeros(d_b, d_b);
            for b in 0..d_b {
                for bp in 0..d_b {
                    let mut acc = C64::new(0.0, 0.0);
                    for e in 0..d_e {
                        acc += joint[(b * d_e + e, bp * d_e + e)];
                    }
                    out[(b, bp)] = acc;
                }
            }
            DensityMatrix::trusted(out)
        }
        Subsystem::E => {
            let mut out = CMatrix::zeros(d_e, d_e);
            for e in 0..d_e {
                for ep in 0..d_e {
                    let mut acc = C64::new(0.0, 0.0);
                    for b in 0..d_b {
                        acc += joint[(b * d_e + e, b * d_e + ep)];
                    }
                    out[(e, ep)] = acc;
                }
            }
            DensityMatrix::trusted(out)
        }
    }
}

/// Purification of ρ on A ⊗ R with d_R = dim(A) and composite index a·d + r:
/// |φ_ρ⟩ = Σ_j √λ_j |u_j⟩_A ⊗ |j⟩_R with λ_j the descending eigenvalues.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let d = rho.dim();
    let (vals, vecs) = rho.eigen();
    let mut v = CVector::zeros(d * d);
    for (j, &lam) in vals.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        let s = lam.sqrt();
        let col = vecs.column(j);
        for a in 0..d {
            v[a * d + j] += col[a] * C64::new(s, 0.0);
        }
    }
    // Normalize defensively (eigenvalues sum to 1 up to rounding).
    PureState::normalized(v).expect("purification of a unit-trace state is nonzero")
}

/// A Hermitian observable (typically an input Hamiltonian).
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    dim: usize,
    mat: CMatrix,
}

impl Hamiltonian {
    /// Validate Hermiticity and positive semidefiniteness (energies are
    /// measured from a nonnegative scale; the ground energy is min eigenvalue).
    pub fn new(mat: CMatrix) -> Result<Self> {
        Self::new_with(mat, &Tolerances::default())
    }

    /// Validate with explicit tolerances.
    pub fn new_with(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let dev = hermiticity_deviation(&mat);
        if dev > tol.herm {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tol.herm,
            });
        }
        let (vals, _) = hermitian_eigen(&mat)?;
        if let Some(&min) = vals.last() {
            if min < -tol.psd {
                return Err(Error::NotPsd {
                    min_eig: min,
                    tol: tol.psd,
                });
            }
        }
        Ok(Self {
            dim: mat.nrows(),
            mat,
        })
    }

    /// Diagonal Hamiltonian with the given real (nonnegative) energies.
    pub fn diagonal(energies: &[f64]) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::Empty { what: "energy list" });
        }
        let n = energies.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &e) in energies.iter().enumerate() {
            m[(i, i)] = C64::new(e, 0.0);
        }
        Self::new(m)
    }

    /// Conjugate by a unitary: U H U†.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim || u.ncols() != self.dim {
            return Err(Error::DimMismatch {
                context: "unitary vs Hamiltonian",
                expected: self.dim,
                got: u.nrows(),
            });
        }
        Self::new(u * &self.mat * u.adjoint())
    }

    /// Number operator diag(0, 1, …, d−1).
    pub fn number_operator(dim: usize) -> Result<Self> {
        Self::diagonal(&(0..dim).map(|k| k as f64).collect::<Vec<_>>())
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Borrow the matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Eigenvalues (descending) and eigenvectors.
    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        hermitian_eigen(&self.mat).expect("validated Hamiltonian is square")
    }

    /// Smallest eigenvalue (ground energy).
    pub fn ground_energy(&self) -> f64 {
        *self
            .eigen()
            .0
            .last()
            .expect("Hamiltonian has at least one eigenvalue")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::kron;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn density_matrix_rejects_bad_inputs() {
        // Not Hermitian.
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian { .. })));
        // Not PSD.
        let m = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPsd { .. })));
        // Bad trace.
        let m = CMatrix::from_row_slice(2, 2, &[c(0.9, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.9, 0.0)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::BadTrace { .. })));
    }

    #[test]
    fn clip_and_renormalize_matches_hand_computation() {
        let spectrum = [0.7, 0.3 - 1e-15, 5e-13, -3e-13];
        let cleaned = clip_and_renormalize(&spectrum, 1e-12);
        assert_eq!(cleaned.len(), 4);
        assert!((cleaned.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(cleaned[2], 0.0);
        assert_eq!(cleaned[3], 0.0);
        assert!((cleaned[0] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factors() {
        let rho_b = DensityMatrix::from_probabilities(&[0.8, 0.2]).unwrap();
        let herm = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.6, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.4, 0.0)],
        );
        let rho_e = DensityMatrix::new(herm).unwrap();
        let joint = kron(rho_b.matrix(), rho_e.matrix());
        let tb = partial_trace(&joint, 2, 2, Subsystem::B);
        let te = partial_trace(&joint, 2, 2, Subsystem::E);
        assert!((tb.matrix() - rho_b.matrix()).norm() < 1e-12);
        assert!((te.matrix() - rho_e.matrix()).norm() < 1e-12);
    }

    #[test]
    fn purification_reduces_to_the_original_state() {
        let rho = DensityMatrix::from_probabilities(&[0.8, 0.2]).unwrap();
        let phi = purify(&rho);
        assert_eq!(phi.dim(), 4);
        // Expect √0.8|00⟩ + √0.2|11⟩ with index a·d + r.
        assert!((phi.vector()[0].re - 0.8_f64.sqrt()).abs() < 1e-12);
        assert!((phi.vector()[3].re - 0.2_f64.sqrt()).abs() < 1e-12);
        let joint = phi.projector();
        let back = partial_trace(joint.matrix(), 2, 2, Subsystem::B);
        assert!((back.matrix() - rho.matrix()).norm() < 1e-12);
    }

    #[test]
    fn support_projector_spans_nonzero_eigenvectors() {
        let rho = DensityMatrix::from_probabilities(&[0.5, 0.5, 0.0]).unwrap();
        let p = rho.support_projector(1e-12);
        assert!((p.trace().re - 2.0).abs() < 1e-12);
        assert!((&p * rho.matrix() - rho.matrix()).norm() < 1e-12);
    }

    #[test]
    fn hamiltonian_expectation_and_ground_energy() {
        let h = Hamiltonian::number_operator(3).unwrap();
        let rho = DensityMatrix::from_probabilities(&[0.5, 0.25, 0.25]).unwrap();
        assert!((rho.expectation(&h).unwrap() - 0.75).abs() < 1e-12);
        assert!((h.ground_energy() - 0.0).abs() < 1e-15);
    }
}
