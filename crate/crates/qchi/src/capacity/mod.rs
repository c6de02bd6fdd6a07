//! Constrained capacity quantities of a channel: the χ-function at a fixed
//! average input, the energy-constrained χ-capacity with a Lagrangian
//! optimality certificate, the entanglement-assisted classical capacity, the
//! coherent information, and a gap classifier that reports which sufficient
//! conditions for a strict χ-capacity / entanglement-assisted gap hold.

mod chi;
mod coherent;
mod ea;
mod gap;

pub use chi::{certify_optimality, chi_capacity, chi_function};
pub use coherent::{ci_via_chi, coherent_information};
pub use ea::{
    channel_mutual_information, channel_mutual_information_report, ea_capacity,
    mutual_info_gradient, MutualInformationReport,
};
pub use gap::{capacity_gap, GapReport, GapTrigger, GapVerdict};

use serde::Serialize;

use crate::config::{Config, Tolerances};
use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::numerics::matrix::{CVector, C64};
use crate::numerics::states::{DensityMatrix, Hamiltonian};

/// Linear energy constraint `Tr H ρ ≤ energy`.
///
/// Construction fails unless the budget exceeds the ground energy of `H`,
/// since no input state can otherwise satisfy the constraint (and the
/// exponential-family machinery cannot realize equality at the ground energy
/// with a finite multiplier).
#[derive(Debug, Clone)]
pub struct ConstraintSpec {
    hamiltonian: Hamiltonian,
    energy: f64,
}

impl ConstraintSpec {
    /// New constraint; requires `energy > ground energy of H`.
    pub fn new(hamiltonian: Hamiltonian, energy: f64) -> Result<Self> {
        let ground = hamiltonian.ground_energy();
        if energy <= ground || !energy.is_finite() {
            return Err(Error::InfeasibleConstraint {
                detail: format!(
                    "energy budget {energy} must exceed the ground energy {ground}"
                ),
            });
        }
        Ok(Self { hamiltonian, energy })
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn ground_energy(&self) -> f64 {
        self.hamiltonian.ground_energy()
    }

    /// Signed constraint residual `Tr H ρ − energy` (≤ 0 means feasible).
    pub fn residual(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(rho.expectation(&self.hamiltonian)? - self.energy)
    }

    pub fn is_satisfied_by(&self, rho: &DensityMatrix, slack: f64) -> Result<bool> {
        Ok(self.residual(rho)? <= slack)
    }
}

/// Shared solver options. `restarts` counts optimizer starts (the first is a
/// deterministic spectral start, the rest are seeded random starts); `seed`
/// drives every random start; ties between equally good restarts go to the
/// lowest restart index.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub record_trace: bool,
    pub tol: Tolerances,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            seed: 0,
            max_iterations: 2000,
            record_trace: false,
            tol: Tolerances::default(),
        }
    }
}

impl From<&Config> for SolverOptions {
    fn from(cfg: &Config) -> Self {
        Self {
            restarts: cfg.restarts,
            seed: cfg.seed,
            max_iterations: cfg.max_iterations,
            record_trace: false,
            tol: cfg.tolerances.clone(),
        }
    }
}

/// Program that achieved the reported value: an input ensemble (χ quantities)
/// or a single input state (entanglement-assisted / coherent quantities).
#[derive(Debug, Clone)]
pub enum Optimizer {
    Ensemble(Ensemble),
    State(DensityMatrix),
}

impl Optimizer {
    /// Barycenter of an ensemble optimizer, or the state itself.
    pub fn average_state(&self) -> DensityMatrix {
        match self {
            Optimizer::Ensemble(mu) => mu.average_state(),
            Optimizer::State(rho) => rho.clone(),
        }
    }

    pub fn as_ensemble(&self) -> Option<&Ensemble> {
        match self {
            Optimizer::Ensemble(mu) => Some(mu),
            Optimizer::State(_) => None,
        }
    }

    pub fn as_state(&self) -> Option<&DensityMatrix> {
        match self {
            Optimizer::Ensemble(_) => None,
            Optimizer::State(rho) => Some(rho),
        }
    }
}

/// Karush–Kuhn–Tucker style certificate for a constrained maximizer.
///
/// `lagrangian_gap` is `max_φ f(φ) − f̄` where `f` is the Lagrangian score of
/// a pure input against the candidate optimizer and `f̄` the value achieved by
/// the candidate's own members; the max is estimated by multi-start Riemannian
/// ascent over pure states. `slackness_residual` is `|λ·(Tr Hρ̄ − E)|`.
#[derive(Debug, Clone, Serialize)]
pub struct OptimalityCertificate {
    pub lagrangian_gap: f64,
    pub member_deviation: f64,
    pub slackness_residual: f64,
    pub n_probe_restarts: usize,
    pub passed: bool,
}

/// One objective sample along a solver trajectory.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub objective: f64,
}

/// Outcome of a capacity solve.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    /// Value in nats.
    pub value: f64,
    pub optimizer: Optimizer,
    /// Lagrange multiplier of the energy constraint (0 when inactive).
    pub lambda: f64,
    /// Total inner iterations spent.
    pub iterations: usize,
    pub certificate: Option<OptimalityCertificate>,
    pub converged: bool,
    /// Objective trace of the winning run when `record_trace` was set.
    pub history: Vec<IterationRecord>,
}

/// Tangential component of an ambient gradient `g` at a unit vector `psi`
/// (sphere geometry): `g − ψ⟨ψ,g⟩`.
pub(crate) fn sphere_tangent(psi: &CVector, g: &CVector) -> CVector {
    let overlap = psi.dotc(g);
    g - psi * overlap
}

/// Normalize a vector; errors on (numerically) zero input.
pub(crate) fn unit(v: &CVector) -> Result<CVector> {
    let n = v.norm();
    if n < 1e-14 {
        return Err(Error::NotNormalized { norm: n });
    }
    Ok(v / C64::new(n, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::CMatrix;

    fn diag_h(values: &[f64]) -> Hamiltonian {
        Hamiltonian::diagonal(values).unwrap()
    }

    #[test]
    fn constraint_requires_energy_above_ground() {
        let h = diag_h(&[0.0, 1.0]);
        assert!(ConstraintSpec::new(h.clone(), 0.2).is_ok());
        assert!(matches!(
            ConstraintSpec::new(h.clone(), 0.0),
            Err(Error::InfeasibleConstraint { .. })
        ));
        assert!(matches!(
            ConstraintSpec::new(h, -0.5),
            Err(Error::InfeasibleConstraint { .. })
        ));
    }

    #[test]
    fn constraint_residual_and_feasibility() {
        let h = diag_h(&[0.0, 1.0]);
        let c = ConstraintSpec::new(h, 0.2).unwrap();
        let rho = DensityMatrix::from_probabilities(&[0.8, 0.2]).unwrap();
        assert!(c.residual(&rho).unwrap().abs() < 1e-12);
        assert!(c.is_satisfied_by(&rho, 1e-10).unwrap());
        let hot = DensityMatrix::from_probabilities(&[0.5, 0.5]).unwrap();
        assert!(!c.is_satisfied_by(&hot, 1e-10).unwrap());
        assert!((c.residual(&hot).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn optimizer_average_state() {
        let mu = Ensemble::uniform(vec![
            DensityMatrix::from_probabilities(&[1.0, 0.0]).unwrap(),
            DensityMatrix::from_probabilities(&[0.0, 1.0]).unwrap(),
        ])
        .unwrap();
        let avg = Optimizer::Ensemble(mu).average_state();
        assert!((avg.matrix() - CMatrix::identity(2, 2) * C64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn sphere_tangent_is_orthogonal() {
        let psi = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let g = CVector::from_vec(vec![C64::new(0.3, 0.1), C64::new(0.2, -0.4)]);
        let t = sphere_tangent(&psi, &g);
        assert!(psi.dotc(&t).norm() < 1e-14);
    }
}
