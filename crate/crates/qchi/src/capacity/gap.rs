//! Classifier for the gap between the entanglement-assisted capacity and the
//! χ-capacity: computes both quantities and evaluates the testable sufficient
//! conditions under which the gap is provably strictly positive.

use std::fmt;

use serde::Serialize;

use crate::channels::{
    is_discrete_cq, is_discrete_cq_in_basis, verify_degrading, DegradabilityCertificate,
    KrausChannel,
};
use crate::error::Result;
use crate::numerics::matrix::CMatrix;
use crate::sampling::{random_unitary, restart_rng};

use super::chi::chi_capacity;
use super::ea::ea_capacity;
use super::{CapacityResult, ConstraintSpec, SolverOptions};

/// Sufficient conditions for a strict C_ea > C̄ gap that the classifier can
/// test. Each variant carries its numeric evidence.
#[derive(Debug, Clone, Serialize)]
pub enum GapTrigger {
    /// No orthonormal pair with vanishing image was found among the input
    /// Hamiltonian's eigenvector pairs plus `pairs_tested` seeded random
    /// pairs. Sampled evidence for the all-pairs condition, not a proof.
    OffDiagonalNonvanishing { min_image_norm: f64, pairs_tested: usize },
    /// The channel is degradable (certified by the supplied degrading map)
    /// and is not discrete classical-quantum in any tested basis.
    DegradableNotCq { cq_residual: f64 },
    /// The channel is degradable and some pair of input-Hamiltonian
    /// eigenvectors with distinct eigenvalues has a nonvanishing image.
    DegradableEigenpairNonvanishing { witness_norm: f64 },
    /// The channel is not discrete classical-quantum (in the tested bases)
    /// and the χ-capacity optimizer's average input has full rank.
    NotCqFullRankOptimizer { optimizer_rank: usize, dim: usize },
}

impl fmt::Display for GapTrigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapTrigger::OffDiagonalNonvanishing { min_image_norm, pairs_tested } => write!(
                f,
                "off-diagonal images nonvanishing on all {pairs_tested} tested pairs \
                 (min norm {min_image_norm:.3e}; sampled evidence)"
            ),
            GapTrigger::DegradableNotCq { cq_residual } => write!(
                f,
                "degradable and not discrete c-q in tested bases (c-q residual {cq_residual:.3e})"
            ),
            GapTrigger::DegradableEigenpairNonvanishing { witness_norm } => write!(
                f,
                "degradable with a nonvanishing image of a distinct-eigenvalue \
                 Hamiltonian eigenvector pair (witness norm {witness_norm:.3e})"
            ),
            GapTrigger::NotCqFullRankOptimizer { optimizer_rank, dim } => write!(
                f,
                "not discrete c-q and the χ-capacity optimizer average has full rank \
                 ({optimizer_rank}/{dim})"
            ),
        }
    }
}

/// Overall classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GapVerdict {
    /// A decisive sufficient condition fired.
    GapGuaranteed,
    /// Only the sampled all-pairs condition fired.
    GapIndicatedSampled,
    /// No tested condition fired; nothing is claimed either way.
    NoConclusion,
}

impl fmt::Display for GapVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapVerdict::GapGuaranteed => write!(f, "gap>0 guaranteed"),
            GapVerdict::GapIndicatedSampled => write!(f, "gap>0 indicated (sampled pairs)"),
            GapVerdict::NoConclusion => write!(f, "no conclusion"),
        }
    }
}

/// Joint report of both capacities, their gap, and the structural evidence.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub chi: CapacityResult,
    pub ea: CapacityResult,
    /// C_ea − C̄ in nats.
    pub gap: f64,
    /// Discrete c-q verdict and off-diagonal residual in the canonical basis.
    pub cq_canonical: (bool, f64),
    /// Same test in the input-Hamiltonian eigenbasis.
    pub cq_hamiltonian_basis: (bool, f64),
    /// Certificate for the user-supplied degrading map, when one was given.
    pub degradability: Option<DegradabilityCertificate>,
    pub triggers: Vec<GapTrigger>,
    pub verdict: GapVerdict,
}

/// Compute C̄ and C_ea under the same constraint and classify the gap.
///
/// `degrading` is an optional map Θ: B → E; when supplied and
/// Θ∘Φ = Φ̂ holds (verified on all matrix units), the degradability-based
/// conditions become testable. Structural tests use the canonical and
/// Hamiltonian eigenbases only; no search over all bases is attempted.
pub fn capacity_gap(
    phi: &KrausChannel,
    c: &ConstraintSpec,
    degrading: Option<&KrausChannel>,
    opts: &SolverOptions,
) -> Result<GapReport> {
    let chi = chi_capacity(phi, c, opts)?;
    let ea = ea_capacity(phi, c, opts)?;
    let gap = ea.value - chi.value;

    let structural_tol = 1e-8;
    let cq_canonical = is_discrete_cq(phi, structural_tol);
    let (h_vals, h_vecs) = c.hamiltonian().eigen();
    let cq_hamiltonian_basis = is_discrete_cq_in_basis(phi, &h_vecs, structural_tol)?;
    let is_cq_tested = cq_canonical.0 || cq_hamiltonian_basis.0;

    let degradability = match degrading {
        Some(theta) => Some(verify_degrading(phi, theta, 1e-8)?),
        None => None,
    };
    let degradable = degradability.as_ref().map(|c| c.holds).unwrap_or(false);

    let d = phi.dim_in();
    let mut triggers = Vec::new();

    // Condition: every tested orthonormal pair has a nonvanishing image.
    let mut min_image_norm = f64::INFINITY;
    let mut pairs_tested = 0usize;
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let unit = h_vecs.column(i) * h_vecs.column(j).adjoint();
            min_image_norm = min_image_norm.min(phi.apply_op(&unit).norm());
            pairs_tested += 1;
        }
    }
    let mut rng = restart_rng(opts.seed, 0x6A9);
    for _ in 0..64 {
        let u = random_unitary(&mut rng, d);
        let unit: CMatrix = u.column(0) * u.column(1).adjoint();
        min_image_norm = min_image_norm.min(phi.apply_op(&unit).norm());
        pairs_tested += 1;
    }
    if min_image_norm > structural_tol {
        triggers.push(GapTrigger::OffDiagonalNonvanishing { min_image_norm, pairs_tested });
    }

    // Condition: degradable and not discrete c-q.
    if degradable && !is_cq_tested {
        triggers.push(GapTrigger::DegradableNotCq {
            cq_residual: cq_canonical.1.min(cq_hamiltonian_basis.1),
        });
    }

    // Condition: degradable with a nonvanishing distinct-eigenvalue pair.
    if degradable {
        let mut witness_norm: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i == j || (h_vals[i] - h_vals[j]).abs() <= 1e-10 {
                    continue;
                }
                let unit = h_vecs.column(i) * h_vecs.column(j).adjoint();
                witness_norm = witness_norm.max(phi.apply_op(&unit).norm());
            }
        }
        if witness_norm > structural_tol {
            triggers.push(GapTrigger::DegradableEigenpairNonvanishing { witness_norm });
        }
    }

    // Condition: not c-q with a full-rank χ optimizer average.
    let optimizer_rank = chi.optimizer.average_state().rank(1e-8);
    if !is_cq_tested && optimizer_rank == d {
        triggers.push(GapTrigger::NotCqFullRankOptimizer { optimizer_rank, dim: d });
    }

    let decisive = triggers
        .iter()
        .any(|t| !matches!(t, GapTrigger::OffDiagonalNonvanishing { .. }));
    let verdict = if decisive {
        GapVerdict::GapGuaranteed
    } else if !triggers.is_empty() {
        GapVerdict::GapIndicatedSampled
    } else {
        GapVerdict::NoConclusion
    };

    Ok(GapReport {
        chi,
        ea,
        gap,
        cq_canonical,
        cq_hamiltonian_basis,
        degradability,
        triggers,
        verdict,
    })
}
