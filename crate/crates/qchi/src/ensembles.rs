//! Discrete ensembles of quantum states, the χ-quantity, the entropic
//! disturbance of a channel, and the exact dilation identity connecting them.

use crate::channels::KrausChannel;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numerics::entropy::{
    mutual_information_with, relative_entropy_with, von_neumann_entropy_with,
};
use crate::numerics::matrix::CMatrix;
use crate::numerics::states::DensityMatrix;
use num_complex::Complex64;

/// A discrete ensemble {π_i, ρ_i}: positive weights summing to one, states of
/// a common dimension.
#[derive(Debug, Clone)]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    /// Validate weights (positive, sum to 1 within 1e-9) and dimensions.
    pub fn new(members: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Empty { what: "ensemble" });
        }
        let sum: f64 = members.iter().map(|(w, _)| *w).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::BadWeights {
                detail: format!("weights sum to {sum}, expected 1"),
            });
        }
        if let Some((w, _)) = members.iter().find(|(w, _)| *w <= 0.0) {
            return Err(Error::BadWeights {
                detail: format!("weights must be strictly positive, got {w}"),
            });
        }
        let dim = members[0].1.dim();
        if let Some((_, s)) = members.iter().find(|(_, s)| s.dim() != dim) {
            return Err(Error::DimMismatch {
                context: "ensemble member dimensions",
                expected: dim,
                got: s.dim(),
            });
        }
        let (weights, states) = members.into_iter().unzip();
        Ok(Self { weights, states })
    }

    /// Uniform ensemble over the given states.
    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::Empty { what: "ensemble" });
        }
        let w = 1.0 / n as f64;
        Self::new(states.into_iter().map(|s| (w, s)).collect())
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// True when the ensemble has no members (never constructible).
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Common dimension of the member states.
    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Weights π_i.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Member states ρ_i.
    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// Iterate (π_i, ρ_i) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.weights.iter().copied().zip(self.states.iter())
    }

    /// Average (barycenter) state ρ̄ = Σ π_i ρ_i.
    pub fn average_state(&self) -> DensityMatrix {
        let d = self.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (w, s) in self.iter() {
            acc += s.matrix() * Complex64::new(w, 0.0);
        }
        DensityMatrix::trusted(acc)
    }

    /// Image ensemble {π_i, Φ(ρ_i)} under a channel.
    pub fn map(&self, phi: &KrausChannel) -> Result<Ensemble> {
        let states = self
            .states
            .iter()
            .map(|s| phi.apply(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble {
            weights: self.weights.clone(),
            states,
        })
    }

    /// Drop members with weight below `threshold` and renormalize.
    pub fn pruned(&self, threshold: f64) -> Result<Ensemble> {
        let members: Vec<(f64, DensityMatrix)> = self
            .iter()
            .filter(|(w, _)| *w >= threshold)
            .map(|(w, s)| (w, s.clone()))
            .collect();
        if members.is_empty() {
            return Err(Error::Empty { what: "pruned ensemble" });
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        Ensemble::new(
            members
                .into_iter()
                .map(|(w, s)| (w / total, s))
                .collect(),
        )
    }
}

/// χ-quantity χ(μ) = Σ_i π_i H(ρ_i ‖ ρ̄) = H(ρ̄) − Σ_i π_i H(ρ_i), in nats.
///
/// Computed through the entropy form (always finite for finite ensembles);
/// the relative-entropy form is exposed separately for cross-checking.
pub fn chi_quantity(mu: &Ensemble) -> f64 {
    chi_quantity_with(mu, &Tolerances::default())
}

/// χ-quantity with explicit tolerances.
pub fn chi_quantity_with(mu: &Ensemble, tol: &Tolerances) -> f64 {
    let avg = mu.average_state();
    let h_avg = von_neumann_entropy_with(&avg, tol);
    let mean_h: f64 = mu
        .iter()
        .map(|(w, s)| w * von_neumann_entropy_with(s, tol))
        .sum();
    (h_avg - mean_h).max(0.0)
}

/// χ-quantity via the relative-entropy form Σ_i π_i H(ρ_i ‖ ρ̄). Agrees with
/// [`chi_quantity`] to within numerical tolerance; used as an internal
/// cross-check and in tests.
pub fn chi_quantity_relative_form(mu: &Ensemble, tol: &Tolerances) -> Result<f64> {
    let avg = mu.average_state();
    let mut acc = 0.0;
    for (w, s) in mu.iter() {
        let r = relative_entropy_with(s, &avg, tol)?;
        if r.is_infinite() {
            // supp ρ_i ⊆ supp ρ̄ always holds for members of the average;
            // an infinity here indicates tolerance starvation, not physics.
            return Err(Error::NoConvergence {
                detail: "relative-entropy form hit a spurious support violation".into(),
            });
        }
        acc += w * r;
    }
    Ok(acc)
}

/// Entropic disturbance Δ(Φ, μ) = χ(μ) − χ(Φ(μ)) in nats: how much of the
/// ensemble's χ the channel destroys. Nonnegative by monotonicity and bounded
/// by min{ln d_A, 2 ln d_E} with d_E the minimal environment dimension.
pub fn entropic_disturbance(phi: &KrausChannel, mu: &Ensemble) -> Result<f64> {
    entropic_disturbance_with(phi, mu, &Tolerances::default())
}

/// Entropic disturbance with explicit tolerances.
pub fn entropic_disturbance_with(
    phi: &KrausChannel,
    mu: &Ensemble,
    tol: &Tolerances,
) -> Result<f64> {
    if mu.dim() != phi.dim_in() {
        return Err(Error::DimMismatch {
            context: "ensemble vs channel input",
            expected: phi.dim_in(),
            got: mu.dim(),
        });
    }
    let chi_in = chi_quantity_with(mu, tol);
    let chi_out = chi_quantity_with(&mu.map(phi)?, tol);
    Ok(chi_in - chi_out)
}

/// The six terms of the exact dilation identity
///
/// χ(μ) + I(B:E)_{Vρ̄V*} = χ(Φ(μ)) + χ(Φ̂(μ)) + Σ_i π_i I(B:E)_{Vρ_iV*},
///
/// evaluated with a common Stinespring dilation V of Φ.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DilationIdentityReport {
    /// χ(μ) at the channel input.
    pub chi_input: f64,
    /// I(B:E) of the dilated average state Vρ̄V*.
    pub mi_average: f64,
    /// χ(Φ(μ)) at the channel output.
    pub chi_output: f64,
    /// χ(Φ̂(μ)) at the environment.
    pub chi_environment: f64,
    /// Σ_i π_i I(B:E) of the dilated members Vρ_iV*.
    pub mean_mi_members: f64,
    /// |LHS − RHS| of the identity.
    pub residual: f64,
}

impl DilationIdentityReport {
    /// Left-hand side χ(μ) + I(B:E)_{Vρ̄V*}.
    pub fn lhs(&self) -> f64 {
        self.chi_input + self.mi_average
    }

    /// Right-hand side χ(Φ(μ)) + χ(Φ̂(μ)) + Σ π_i I(B:E)_{Vρ_iV*}.
    pub fn rhs(&self) -> f64 {
        self.chi_output + self.chi_environment + self.mean_mi_members
    }

    /// Entropic disturbance χ(μ) − χ(Φ(μ)) implied by the terms.
    pub fn disturbance(&self) -> f64 {
        self.chi_input - self.chi_output
    }
}

/// Evaluate all six terms of the dilation identity for (Φ, μ).
pub fn dilation_identity(
    phi: &KrausChannel,
    mu: &Ensemble,
    tol: &Tolerances,
) -> Result<DilationIdentityReport> {
    if mu.dim() != phi.dim_in() {
        return Err(Error::DimMismatch {
            context: "ensemble vs channel input",
            expected: phi.dim_in(),
            got: mu.dim(),
        });
    }
    let chi_input = chi_quantity_with(mu, tol);
    let chi_output = chi_quantity_with(&mu.map(phi)?, tol);
    let comp = phi.complementary();
    let chi_environment = chi_quantity_with(&mu.map(&comp)?, tol);
    let avg = mu.average_state();
    let mi_average = mutual_information_with(&phi.dilated_state(&avg)?, tol);
    let mut mean_mi_members = 0.0;
    for (w, s) in mu.iter() {
        mean_mi_members += w * mutual_information_with(&phi.dilated_state(s)?, tol);
    }
    let report = DilationIdentityReport {
        chi_input,
        mi_average,
        chi_output,
        chi_environment,
        mean_mi_members,
        residual: 0.0,
    };
    let residual = (report.lhs() - report.rhs()).abs();
    Ok(DilationIdentityReport { residual, ..report })
}

/// Private-information functional χ(Φ(μ)) − χ(Φ̂(μ)): the gap between what
/// the output and the environment learn about the ensemble label.
#[derive(Debug, Clone, Copy)]
pub struct PrivateInformation {
    /// χ(Φ(μ)) at the channel output.
    pub chi_output: f64,
    /// χ(Φ̂(μ)) at the environment.
    pub chi_environment: f64,
    /// The difference χ(Φ(μ)) − χ(Φ̂(μ)).
    pub value: f64,
}

/// χ(Φ(μ)) − χ(Φ̂(μ)) with both terms reported.
pub fn private_information(
    phi: &KrausChannel,
    mu: &Ensemble,
    tol: &Tolerances,
) -> Result<PrivateInformation> {
    if mu.dim() != phi.dim_in() {
        return Err(Error::DimMismatch {
            context: "ensemble vs channel input",
            expected: phi.dim_in(),
            got: mu.dim(),
        });
    }
    let chi_output = chi_quantity_with(&mu.map(phi)?, tol);
    let chi_environment = chi_quantity_with(&mu.map(&phi.complementary())?, tol);
    Ok(PrivateInformation {
        chi_output,
        chi_environment,
        value: chi_output - chi_environment,
    })
}

/// Upper bound min{ln d_A, 2 ln d_E} on the entropic disturbance, where d_E
/// is the minimal environment dimension (Choi rank) of the channel.
pub fn disturbance_upper_bound(phi: &KrausChannel, tol: &Tolerances) -> f64 {
    let d_a = phi.dim_in() as f64;
    let d_e = phi.choi_rank(tol).max(1) as f64;
    d_a.ln().min(2.0 * d_e.ln())
}
