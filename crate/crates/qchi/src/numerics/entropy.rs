//! Entropic functionals: von Neumann entropy, quantum relative entropy,
//! and bipartite mutual information. All values are in nats.

use super::matrix::hermitian_eigen;
use super::states::{clip_and_renormalize, BipartiteState, DensityMatrix, Subsystem};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// η(x) = −x ln x with η(0) = 0.
pub fn eta(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Shannon entropy of a probability vector, in nats. Entries are clipped at
/// `1e-12` and renormalized first, matching the matrix-valued entropy.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    clip_and_renormalize(p, 1e-12).iter().map(|&x| eta(x)).sum()
}

/// Von Neumann entropy H(ρ) = −Tr ρ ln ρ in nats, with the default spectral
/// clip at 1e-12.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    von_neumann_entropy_with(rho, &Tolerances::default())
}

/// Von Neumann entropy with explicit tolerances (the spectral clip `tol.eig`).
pub fn von_neumann_entropy_with(rho: &DensityMatrix, tol: &Tolerances) -> f64 {
    rho.clipped_spectrum(tol.eig).iter().map(|&x| eta(x)).sum()
}

/// Quantum relative entropy H(ρ‖σ) = Tr ρ(ln ρ − ln σ) in nats.
///
/// Returns `f64::INFINITY` when the support of ρ is not contained in the
/// support of σ: concretely, when the ρ-mass leaking into the kernel of σ,
/// Tr(Q_σ ρ Q_σ) with Q_σ the kernel projector, exceeds `tol.supp`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    relative_entropy_with(rho, sigma, &Tolerances::default())
}

/// Relative entropy with explicit tolerances (`tol.eig` for the spectral clip,
/// `tol.supp` for the support-containment test).
pub fn relative_entropy_with(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            context: "relative entropy arguments",
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let (p_raw, u) = rho.eigen();
    let p = clip_and_renormalize(&p_raw, tol.eig);
    let (q_raw, v) = sigma.eigen();
    let q = clip_and_renormalize(&q_raw, tol.eig);

    // Support check: mass of ρ inside ker σ.
    let mut leaked = 0.0;
    for (j, &qj) in q.iter().enumerate() {
        if qj > 0.0 {
            continue;
        }
        let vj = v.column(j);
        let overlap = (vj.adjoint() * rho.matrix() * vj)[(0, 0)].re;
        leaked += overlap.max(0.0);
    }
    if leaked > tol.supp {
        return Ok(f64::INFINITY);
    }

    // H(ρ‖σ) = Σ_i p_i ln p_i − Σ_{i,j: q_j>0} p_i |⟨u_i|v_j⟩|² ln q_j.
    let mut value: f64 = p.iter().map(|&x| -eta(x)).sum();
    for (i, &pi) in p.iter().enumerate() {
        if pi <= 0.0 {
            continue;
        }
        let ui = u.column(i);
        for (j, &qj) in q.iter().enumerate() {
            if qj <= 0.0 {
                continue;
            }
            let amp = (v.column(j).adjoint() * ui)[(0, 0)].norm_sqr();
            value -= pi * amp * qj.ln();
        }
    }
    // Clamp tiny negative rounding (relative entropy is nonnegative).
    Ok(value.max(0.0))
}

/// Mutual information I(B:E) = H(ω_B) + H(ω_E) − H(ω_BE) of a bipartite state,
/// in nats. Always finite and bounded by 2·min{H(ω_B), H(ω_E)}.
pub fn mutual_information(omega: &BipartiteState) -> f64 {
    mutual_information_with(omega, &Tolerances::default())
}

/// Mutual information with explicit tolerances.
pub fn mutual_information_with(omega: &BipartiteState, tol: &Tolerances) -> f64 {
    let hb = von_neumann_entropy_with(&omega.marginal(Subsystem::B), tol);
    let he = von_neumann_entropy_with(&omega.marginal(Subsystem::E), tol);
    let hbe = von_neumann_entropy_with(omega.joint(), tol);
    (hb + he - hbe).max(0.0)
}

/// Entropy of the clipped spectrum of an arbitrary Hermitian PSD matrix that
/// may have trace ≠ 1 (the spectrum is renormalized first). Used internally
/// where subnormalized blocks appear.
pub fn entropy_of_spectrum(m: &nalgebra::DMatrix<num_complex::Complex64>, tol_eig: f64) -> Result<f64> {
    let (vals, _) = hermitian_eigen(m)?;
    Ok(clip_and_renormalize(&vals, tol_eig).iter().map(|&x| eta(x)).sum())
}
