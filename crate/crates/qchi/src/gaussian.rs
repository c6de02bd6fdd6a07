//! Matrix-level classifier for bosonic Gaussian channel specifications.
//!
//! A Gaussian channel between systems with `s_b` input and `s_a` output
//! modes is described here only through the real matrices (K, α) of its
//! action on Weyl operators; this module checks the two-sided validity
//! inequality α ≥ ±(i/2)(Δ_B − KᵀΔ_A K) and evaluates structural triggers
//! that guarantee a strictly positive gap between the entanglement-assisted
//! and unassisted classical capacities. No Gaussian state evolution is
//! performed: everything is finite real/complex linear algebra on the
//! parameter matrices.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::matrix::{hermitian_eigen, hermitize, CMatrix, C64};

/// Real dense matrix.
pub type RMatrix = DMatrix<f64>;

/// Default tolerance on singular values when deciding the rank of K.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Default tolerance when testing the validity matrices for positive
/// semidefiniteness.
pub const DEFAULT_PSD_TOL: f64 = 1e-10;

/// Canonical symplectic form for `modes` modes: block diagonal with
/// [[0, 1], [−1, 0]] per mode. Never user-supplied.
pub fn symplectic_form(modes: usize) -> RMatrix {
    let mut delta = RMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        delta[(2 * m, 2 * m + 1)] = 1.0;
        delta[(2 * m + 1, 2 * m)] = -1.0;
    }
    delta
}

/// Parameter matrices of a bosonic Gaussian channel with `s_b` input modes
/// and `s_a` output modes: K is the 2s_A×2s_B Weyl-symbol transformation,
/// α the real symmetric 2s_B×2s_B noise form, and l a displacement vector
/// that classifications ignore (a displacement unitary removes it) but that
/// is stored for round-tripping.
#[derive(Debug, Clone)]
pub struct GaussianChannelSpec {
    s_a: usize,
    s_b: usize,
    k: RMatrix,
    alpha: RMatrix,
    l: Vec<f64>,
}

/// Outcome of the validity inequality: minimum eigenvalues of the two
/// Hermitian sign branches α ∓ (i/2)(Δ_B − KᵀΔ_A K).
#[derive(Debug, Clone, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    /// Minimum eigenvalue of α − (i/2)(Δ_B − KᵀΔ_A K).
    pub min_eigenvalue_minus: f64,
    /// Minimum eigenvalue of α + (i/2)(Δ_B − KᵀΔ_A K).
    pub min_eigenvalue_plus: f64,
    /// PSD tolerance the verdict used.
    pub psd_tol: f64,
}

/// Structural conditions the classifier can detect or pass through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GaussianTrigger {
    /// rank K = 2s_A: the symbol map has full range.
    #[serde(rename = "full-range-K")]
    FullRangeK,
    /// ‖K‖ ≤ tol: the channel is a discrete classical-quantum channel in
    /// disguise (completely noisy symbol map).
    #[serde(rename = "zero-K/discrete-c-q")]
    ZeroKDiscreteCq,
    /// Caller-asserted degradability, passed through unverified.
    #[serde(rename = "degradable")]
    DegradableAsserted,
}

/// Classifier verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GaussianVerdict {
    #[serde(rename = "gap>0 guaranteed")]
    GapGuaranteed,
    #[serde(rename = "no conclusion")]
    NoConclusion,
}

/// Full classifier report.
#[derive(Debug, Clone, Serialize)]
pub struct GaussianGapReport {
    pub validity: ValidityReport,
    /// Numerical rank of K (singular values above `rank_tol`).
    pub k_rank: usize,
    /// Full row rank would be 2s_A.
    pub k_full_range: usize,
    /// Frobenius norm of K.
    pub k_norm: f64,
    pub rank_tol: f64,
    pub triggers: Vec<GaussianTrigger>,
    /// The condition "capacity optimum attained at a full-rank state"
    /// requires continuous-variable capacity data this crate does not
    /// compute; it is reported verbatim as not evaluated.
    pub full_rank_optimizer: &'static str,
    pub verdict: GaussianVerdict,
}

impl GaussianChannelSpec {
    /// Validate shapes and the symmetry of α, and store the spec.
    pub fn new(
        s_a: usize,
        s_b: usize,
        k: RMatrix,
        alpha: RMatrix,
        l: Vec<f64>,
    ) -> Result<Self> {
        if s_a == 0 || s_b == 0 {
            return Err(Error::BadGaussianSpec {
                detail: "mode counts must be positive".into(),
            });
        }
        if k.nrows() != 2 * s_a || k.ncols() != 2 * s_b {
            return Err(Error::BadGaussianSpec {
                detail: format!(
                    "K must be {}×{}, got {}×{}",
                    2 * s_a,
                    2 * s_b,
                    k.nrows(),
                    k.ncols()
                ),
            });
        }
        if alpha.nrows() != 2 * s_b || alpha.ncols() != 2 * s_b {
            return Err(Error::BadGaussianSpec {
                detail: format!(
                    "alpha must be {}×{}, got {}×{}",
                    2 * s_b,
                    2 * s_b,
                    alpha.nrows(),
                    alpha.ncols()
                ),
            });
        }
        let asym = (&alpha - alpha.transpose()).norm();
        if asym > 1e-8 {
            return Err(Error::BadGaussianSpec {
                detail: format!("alpha is not symmetric (deviation {asym:.3e})"),
            });
        }
        if !l.is_empty() && l.len() != 2 * s_b {
            return Err(Error::BadGaussianSpec {
                detail: format!("l must have length {} (or be empty), got {}", 2 * s_b, l.len()),
            });
        }
        Ok(Self { s_a, s_b, k, alpha, l })
    }

    pub fn output_modes(&self) -> usize {
        self.s_a
    }

    pub fn input_modes(&self) -> usize {
        self.s_b
    }

    pub fn k(&self) -> &RMatrix {
        &self.k
    }

    pub fn alpha(&self) -> &RMatrix {
        &self.alpha
    }

    pub fn displacement(&self) -> &[f64] {
        &self.l
    }

    /// The real antisymmetric difference Δ_B − KᵀΔ_A K.
    fn symplectic_defect(&self) -> RMatrix {
        let delta_a = symplectic_form(self.s_a);
        let delta_b = symplectic_form(self.s_b);
        delta_b - self.k.transpose() * delta_a * &self.k
    }

    /// Hermitian matrix α + (sign/2)·i·(Δ_B − KᵀΔ_A K).
    fn validity_branch(&self, sign: f64) -> CMatrix {
        let defect = self.symplectic_defect();
        let n = 2 * self.s_b;
        CMatrix::from_fn(n, n, |i, j| {
            C64::new(self.alpha[(i, j)], 0.5 * sign * defect[(i, j)])
        })
    }

    /// Check the two-sided validity inequality α ≥ ±(i/2)(Δ_B − KᵀΔ_A K)
    /// and report the minimum eigenvalue of each sign branch.
    pub fn validate(&self, psd_tol: f64) -> ValidityReport {
        let min_eig = |m: &CMatrix| -> f64 {
            // The branches are Hermitian by construction (symmetric α plus i
            // times an antisymmetric real form), so this cannot fail.
            let (vals, _) = hermitian_eigen(&hermitize(m)).expect("hermitized");
            vals.last().copied().unwrap_or(0.0)
        };
        let min_eigenvalue_minus = min_eig(&self.validity_branch(-1.0));
        let min_eigenvalue_plus = min_eig(&self.validity_branch(1.0));
        ValidityReport {
            valid: min_eigenvalue_minus >= -psd_tol && min_eigenvalue_plus >= -psd_tol,
            min_eigenvalue_minus,
            min_eigenvalue_plus,
            psd_tol,
        }
    }

    /// Numerical rank of K: singular values above `rank_tol`.
    pub fn k_rank(&self, rank_tol: f64) -> usize {
        self.k
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .filter(|s| **s > rank_tol)
            .count()
    }

    /// Evaluate the structural gap triggers. `degradable_asserted` is a
    /// caller-supplied claim passed through unverified (this crate does not
    /// certify Gaussian degradability). Errors if the spec fails the
    /// validity inequality.
    ///
    /// Verdict policy: "gap>0 guaranteed" when the full-range trigger fires,
    /// or when degradability is asserted for a channel that is not in the
    /// zero-K (classical-quantum) class; the zero-K trigger itself is
    /// informational and never guarantees a gap. The full-rank-optimizer
    /// condition is reported as not evaluated.
    pub fn classify_gap(
        &self,
        degradable_asserted: bool,
        rank_tol: f64,
        psd_tol: f64,
    ) -> Result<GaussianGapReport> {
        let validity = self.validate(psd_tol);
        if !validity.valid {
            return Err(Error::BadGaussianSpec {
                detail: format!(
                    "spec violates the validity inequality (min eigenvalues {:.3e}, {:.3e})",
                    validity.min_eigenvalue_minus, validity.min_eigenvalue_plus
                ),
            });
        }
        let k_rank = self.k_rank(rank_tol);
        let k_norm = self.k.norm();
        let mut triggers = Vec::new();
        let zero_k = k_norm <= rank_tol;
        if k_rank == 2 * self.s_a && !zero_k {
            triggers.push(GaussianTrigger::FullRangeK);
        }
        if zero_k {
            triggers.push(GaussianTrigger::ZeroKDiscreteCq);
        }
        if degradable_asserted {
            triggers.push(GaussianTrigger::DegradableAsserted);
        }
        let gap = triggers.contains(&GaussianTrigger::FullRangeK)
            || (degradable_asserted && !zero_k);
        Ok(GaussianGapReport {
            validity,
            k_rank,
            k_full_range: 2 * self.s_a,
            k_norm,
            rank_tol,
            triggers,
            full_rank_optimizer: "not-evaluated",
            verdict: if gap {
                GaussianVerdict::GapGuaranteed
            } else {
                GaussianVerdict::NoConclusion
            },
        })
    }
}
