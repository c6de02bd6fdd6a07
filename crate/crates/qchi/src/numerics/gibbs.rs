//! Gibbs states: the maximum-entropy state at a given mean energy.
//!
//! For a Hamiltonian H with eigenvalues {e_i} and a target mean energy ℰ, the
//! maximizer of H(ρ) subject to Tr(Hρ) = ℰ is the Gibbs state
//! e^{−λH}/Tr e^{−λH}, with λ ≥ 0 chosen so that the energy constraint holds
//! with equality (λ = 0, the maximally mixed state, when ℰ is at or above the
//! unconstrained mean Tr H / d).

use super::matrix::{CMatrix, C64};
use super::states::{DensityMatrix, Hamiltonian};
use crate::error::{Error, Result};

/// Result of a Gibbs-state solve.
#[derive(Debug, Clone)]
pub struct GibbsResult {
    /// The Gibbs state e^{−λH}/Z.
    pub state: DensityMatrix,
    /// The inverse-temperature multiplier λ*.
    pub lambda: f64,
    /// Achieved mean energy Tr(Hρ).
    pub energy: f64,
    /// Entropy of the state in nats.
    pub entropy: f64,
}

/// Solve for the Gibbs state of `h` with mean energy exactly `energy`.
///
/// Errors with [`Error::InfeasibleConstraint`] when `energy` is at or below
/// the ground energy: no state ends strictly below it, and equality is only
/// reached in the λ → ∞ limit, outside the exponential family. Budgets at or
/// above the mean eigenvalue make the constraint `Tr Hρ ≤ ℰ` inactive and
/// return the maximally mixed state with λ = 0 (in particular, budgets above
/// the largest eigenvalue are vacuous rather than an error). The energy
/// residual of a λ > 0 solution is below `1e-10`.
pub fn gibbs_state(h: &Hamiltonian, energy: f64) -> Result<GibbsResult> {
    let (evals, evecs) = h.eigen(); // descending
    let d = evals.len();
    let e_min = evals[d - 1];
    let e_mean = evals.iter().sum::<f64>() / d as f64;

    // λ = 0 ⇒ maximally mixed; that already meets (or exceeds) the energy
    // when ℰ ≥ mean(H). The entropy maximizer under Tr Hρ ≤ ℰ is then I/d.
    if energy >= e_mean - 1e-14 {
        let state = DensityMatrix::maximally_mixed(d)?;
        let achieved = state.expectation(h)?;
        let entropy = (d as f64).ln();
        return Ok(GibbsResult {
            state,
            lambda: 0.0,
            energy: achieved,
            entropy,
        });
    }

    if energy <= e_min + 1e-12 {
        return Err(Error::InfeasibleConstraint {
            detail: format!(
                "target energy {energy} is at or below the ground energy {e_min}; \
                 no Gibbs state with finite λ reaches it"
            ),
        });
    }

    // Weights w_i(λ) = exp(−λ(e_i − e_min)) keep the largest Boltzmann factor
    // at 1, so no overflow for any λ ≥ 0. φ(λ) = Σ e_i w_i / Σ w_i is strictly
    // decreasing from mean(H) at λ=0 toward e_min as λ→∞.
    let phi = |lambda: f64| -> f64 {
        let mut z = 0.0;
        let mut num = 0.0;
        for &e in &evals {
            let w = (-(lambda) * (e - e_min)).exp();
            z += w;
            num += e * w;
        }
        num / z
    };

    // Bracket: double λ_hi until φ(λ_hi) < energy.
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut guard = 0;
    while phi(hi) > energy {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NoConvergence {
                detail: format!("could not bracket the Gibbs multiplier for energy {energy}"),
            });
        }
    }
    // Bisect to high precision; φ is monotone.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) > energy {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 * (1.0 + hi.abs()) {
            break;
        }
    }
    let lambda = 0.5 * (lo + hi);

    // Assemble the state in the eigenbasis of H.
    let mut z = 0.0;
    let mut weights = Vec::with_capacity(d);
    for &e in &evals {
        let w = (-(lambda) * (e - e_min)).exp();
        weights.push(w);
        z += w;
    }
    let mut diag = CMatrix::zeros(d, d);
    for (i, w) in weights.iter().enumerate() {
        diag[(i, i)] = C64::new(w / z, 0.0);
    }
    let mat = &evecs * diag * evecs.adjoint();
    let state = DensityMatrix::trusted(mat);
    let achieved = state.expectation(h)?;
    if (achieved - energy).abs() > 1e-10 {
        return Err(Error::NoConvergence {
            detail: format!(
                "Gibbs energy residual {:.3e} exceeds 1e-10",
                (achieved - energy).abs()
            ),
        });
    }
    let entropy = super::entropy::von_neumann_entropy(&state);
    Ok(GibbsResult {
        state,
        lambda,
        energy: achieved,
        entropy,
    })
}
