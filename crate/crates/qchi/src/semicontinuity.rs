//! Finite-size experiments around approximation and lower semicontinuity:
//! truncation sweeps of bipartite ensembles, witnesses for lower
//! semicontinuity of the entropic disturbance, a rank sweep of the truncated
//! dilation identity, and coherent-information semicontinuity checks for
//! certified degradable channels.
//!
//! These are finite witnesses: they corroborate semicontinuity claims on
//! concrete sequences and can never refute a statement quantified over all
//! converging sequences. Report headers carry that caveat via the flags'
//! documented semantics.

use serde::Serialize;

use crate::channels::{verify_degrading, KrausChannel};
use crate::config::Tolerances;
use crate::ensembles::{
    chi_quantity_with, dilation_identity, entropic_disturbance_with, Ensemble,
};
use crate::error::{Error, Result};
use crate::numerics::entropy::{mutual_information_with, von_neumann_entropy_with};
use crate::numerics::matrix::{trace_norm, CMatrix};
use crate::numerics::states::{partial_trace, BipartiteState, DensityMatrix, Subsystem};

/// Slack for "χ may not exceed its untruncated value" style dominations.
const DOMINATION_TOL: f64 = 1e-9;
/// Generous Fannes-type continuity envelope: a shortfall of the tail value
/// below the limit value is only alarming if it exceeds what the measured
/// distance to the limit can account for through entropy continuity. The
/// constant 4 over-covers the exact moduli for every quantity compared here.
fn continuity_envelope(distance: f64) -> f64 {
    let d = distance.max(0.0);
    4.0 * (crate::numerics::entropy::eta(d.min(1.0)) + d) + DOMINATION_TOL
}
/// Residual budget for the truncated dilation identity.
const IDENTITY_TOL: f64 = 1e-8;
/// Convergence threshold for the joint entropy-splitting check.
const JOINT_CONVERGENCE_TOL: f64 = 1e-6;

/// Rank-`rank` truncation channel onto the dominant eigenvectors of
/// `marginal` (descending eigenvalues, ties broken by index), sending the
/// discarded weight to `anchor`.
fn dominant_truncation(
    marginal: &DensityMatrix,
    rank: usize,
    anchor: &DensityMatrix,
) -> Result<KrausChannel> {
    let d = marginal.dim();
    if rank == 0 || rank > d {
        return Err(Error::BadInput {
            detail: format!("truncation rank {rank} outside 1..={d}"),
        });
    }
    let (_, vecs) = marginal.eigen();
    let mut p = CMatrix::zeros(d, d);
    for j in 0..rank {
        let col = vecs.column(j);
        p += col * col.adjoint();
    }
    KrausChannel::truncation(&p, anchor)
}

/// Projector onto the single dominant eigenvector of `marginal`, used as the
/// deterministic anchor state of internally built truncations.
fn dominant_anchor(marginal: &DensityMatrix) -> DensityMatrix {
    let (_, vecs) = marginal.eigen();
    let top = vecs.column(0).into_owned();
    DensityMatrix::trusted(&top * top.adjoint())
}

/// Default anchor for [`truncation_sweep`]: the projector onto the dominant
/// eigenvector of the E-marginal of the ensemble barycenter, which lies in
/// every dominant subspace and so is admissible at every rank.
pub fn default_truncation_anchor(
    mu: &Ensemble,
    d_b: usize,
    d_e: usize,
) -> Result<DensityMatrix> {
    if d_b * d_e != mu.dim() {
        return Err(Error::DimMismatch {
            context: "truncation anchor factor dims vs ensemble",
            expected: mu.dim(),
            got: d_b * d_e,
        });
    }
    let rho_bar = mu.average_state();
    Ok(dominant_anchor(&partial_trace(rho_bar.matrix(), d_b, d_e, Subsystem::E)))
}

// ---------------------------------------------------------------------------
// Truncation sweep.
// ---------------------------------------------------------------------------

/// One truncation rank of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    /// Rank of the kept subspace on the truncated factor.
    pub rank: usize,
    /// Dimension of the joint subspace the truncated ensemble lives on.
    pub subspace_dim: usize,
    pub chi_truncated: f64,
    /// χ(μ) − χ(μ_n) ≥ 0 up to tolerance.
    pub gap_to_limit: f64,
}

/// Sweep of χ under increasingly fine truncations of the second factor.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub chi_limit: f64,
    pub rows: Vec<SweepRow>,
    /// Whether χ(μ_n) was non-decreasing along the requested ranks.
    pub monotone: bool,
    /// Whether the largest-rank χ matches χ(μ) within tolerance.
    pub converged: bool,
}

/// Truncate the E factor of an ensemble on B⊗E to its dominant rank-n
/// subspaces (n over `ranks`, strictly increasing) and evaluate χ at each
/// step. The χ of every truncated ensemble is asserted to stay at or below
/// χ(μ); a violation beyond tolerance is a numerical failure and errors.
pub fn truncation_sweep(
    mu: &Ensemble,
    d_b: usize,
    d_e: usize,
    ranks: &[usize],
    anchor: &DensityMatrix,
    tol: &Tolerances,
) -> Result<SweepReport> {
    if d_b * d_e != mu.dim() {
        return Err(Error::DimMismatch {
            context: "truncation_sweep factor dims vs ensemble",
            expected: mu.dim(),
            got: d_b * d_e,
        });
    }
    if ranks.is_empty() {
        return Err(Error::Empty { what: "truncation ranks" });
    }
    if !ranks.windows(2).all(|w| w[0] < w[1]) || ranks[0] == 0 || *ranks.last().unwrap() > d_e {
        return Err(Error::BadInput {
            detail: format!("ranks must be strictly increasing within 1..={d_e}, got {ranks:?}"),
        });
    }
    if anchor.dim() != d_e {
        return Err(Error::DimMismatch {
            context: "truncation anchor vs E factor",
            expected: d_e,
            got: anchor.dim(),
        });
    }

    let chi_limit = chi_quantity_with(mu, tol);
    let rho_bar = mu.average_state();
    let marginal_e = partial_trace(rho_bar.matrix(), d_b, d_e, Subsystem::E);
    let id_b = KrausChannel::identity(d_b)?;

    let mut rows = Vec::with_capacity(ranks.len());
    for &rank in ranks {
        let lam = dominant_truncation(&marginal_e, rank, anchor)?;
        let joint = id_b.tensor(&lam)?;
        let chi_truncated = chi_quantity_with(&mu.map(&joint)?, tol);
        if chi_truncated > chi_limit + DOMINATION_TOL {
            return Err(Error::NoConvergence {
                detail: format!(
                    "truncated χ {chi_truncated} exceeds χ(μ) {chi_limit} beyond tolerance at rank {rank}"
                ),
            });
        }
        rows.push(SweepRow {
            rank,
            subspace_dim: d_b * rank,
            chi_truncated,
            gap_to_limit: chi_limit - chi_truncated,
        });
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[1].chi_truncated >= w[0].chi_truncated - 1e-12);
    let converged = rows
        .last()
        .map(|r| r.gap_to_limit.abs() <= DOMINATION_TOL)
        .unwrap_or(false);
    Ok(SweepReport { chi_limit, rows, monotone, converged })
}

// ---------------------------------------------------------------------------
// Truncated dilation identity sweep.
// ---------------------------------------------------------------------------

/// One (rank_B, rank_E) cell of the truncated-identity sweep.
#[derive(Debug, Clone, Serialize)]
pub struct AppendixRow {
    pub rank_b: usize,
    pub rank_e: usize,
    /// χ of the truncated dilated ensemble on B⊗E.
    pub chi_joint: f64,
    /// I(B:E) of the truncated dilated barycenter.
    pub mi_average: f64,
    /// χ of the B-truncated channel outputs.
    pub chi_output: f64,
    /// χ of the E-truncated environment outputs.
    pub chi_environment: f64,
    /// Weighted mean of the members' truncated I(B:E).
    pub mean_mi_members: f64,
    /// |lhs − rhs| of the truncated identity.
    pub residual: f64,
}

/// Sweep report for the truncated dilation identity.
#[derive(Debug, Clone, Serialize)]
pub struct AppendixReport {
    pub rows: Vec<AppendixRow>,
    pub max_residual: f64,
    /// All residuals within the identity budget.
    pub identity_holds: bool,
    /// I(B:E) never increased under any truncation, for the barycenter and
    /// for every member (data processing under local channels).
    pub mi_monotone: bool,
    /// When the sweep includes the full ranks, whether that cell reproduces
    /// the untruncated identity's terms.
    pub full_rank_matches_identity: Option<bool>,
}

/// Evaluate both sides of the truncated dilation identity
/// χ(Π_n(VμV*)) + I(B:E)_{Π_n(Vρ̄V*)} =
/// χ(Λ^B∘Φ(μ)) + χ(Λ^E∘Φ̂(μ)) + Σ π_i I(B:E)_{Π_n(Vρ_iV*)}
/// over a grid of truncation ranks, where Π_n = Λ^B ⊗ Λ^E and the
/// truncations keep dominant eigenspaces of the dilated barycenter's
/// marginals. The two sides are computed along independent arithmetic routes
/// (joint truncation vs. channel composition), so the residual is a genuine
/// cross-check.
pub fn appendix_identity_sweep(
    phi: &KrausChannel,
    mu: &Ensemble,
    ranks_b: &[usize],
    ranks_e: &[usize],
    tol: &Tolerances,
) -> Result<AppendixReport> {
    if mu.dim() != phi.dim_in() {
        return Err(Error::DimMismatch {
            context: "appendix sweep ensemble vs channel input",
            expected: phi.dim_in(),
            got: mu.dim(),
        });
    }
    if ranks_b.is_empty() || ranks_e.is_empty() {
        return Err(Error::Empty { what: "truncation ranks" });
    }

    let phim = phi.minimal_kraus(tol)?;
    let comp = phim.complementary();
    let d_b = phim.dim_out();
    let d_e = comp.dim_out();
    if *ranks_b.iter().max().unwrap() > d_b
        || *ranks_e.iter().max().unwrap() > d_e
        || ranks_b.contains(&0)
        || ranks_e.contains(&0)
    {
        return Err(Error::BadInput {
            detail: format!("ranks must lie in 1..={d_b} × 1..={d_e}"),
        });
    }

    let rho_bar = mu.average_state();
    let omega_bar = phim.dilated_state(&rho_bar)?;
    let omegas: Vec<BipartiteState> = mu
        .states()
        .iter()
        .map(|s| phim.dilated_state(s))
        .collect::<Result<_>>()?;
    let marg_b = omega_bar.marginal(Subsystem::B);
    let marg_e = omega_bar.marginal(Subsystem::E);
    let anchor_b = dominant_anchor(&marg_b);
    let anchor_e = dominant_anchor(&marg_e);

    let mi_full_avg = mutual_information_with(&omega_bar, tol);
    let mi_full_members: Vec<f64> = omegas
        .iter()
        .map(|om| mutual_information_with(om, tol))
        .collect();

    let mut rows = Vec::new();
    let mut mi_monotone = true;
    let mut full_rank_matches = None;
    for &rank_b in ranks_b {
        let lam_b = dominant_truncation(&marg_b, rank_b, &anchor_b)?;
        for &rank_e in ranks_e {
            let lam_e = dominant_truncation(&marg_e, rank_e, &anchor_e)?;
            let pi_n = lam_b.tensor(&lam_e)?;

            // Left side: truncate the dilated objects jointly.
            let truncated_members: Result<Vec<(f64, DensityMatrix)>> = mu
                .weights()
                .iter()
                .zip(&omegas)
                .map(|(w, om)| Ok((*w, pi_n.apply(om.joint())?)))
                .collect();
            let mu_joint = Ensemble::new(truncated_members?)?;
            let chi_joint = chi_quantity_with(&mu_joint, tol);
            let omega_bar_trunc =
                BipartiteState::new(d_b, d_e, pi_n.apply(omega_bar.joint())?)?;
            let mi_average = mutual_information_with(&omega_bar_trunc, tol);
            if mi_average > mi_full_avg + DOMINATION_TOL {
                mi_monotone = false;
            }

            // Right side: compose the truncations with the channel and its
            // complement.
            let chi_output = chi_quantity_with(&mu.map(&phim)?.map(&lam_b)?, tol);
            let chi_environment = chi_quantity_with(&mu.map(&comp)?.map(&lam_e)?, tol);
            let mut mean_mi_members = 0.0;
            for ((w, om), full) in mu.weights().iter().zip(&omegas).zip(&mi_full_members) {
                let trunc = BipartiteState::new(d_b, d_e, pi_n.apply(om.joint())?)?;
                let mi = mutual_information_with(&trunc, tol);
                if mi > full + DOMINATION_TOL {
                    mi_monotone = false;
                }
                mean_mi_members += w * mi;
            }

            let residual =
                (chi_joint + mi_average - chi_output - chi_environment - mean_mi_members).abs();
            if rank_b == d_b && rank_e == d_e {
                let reference = dilation_identity(phi, mu, tol)?;
                let matches = (chi_joint - chi_quantity_with(mu, tol)).abs() <= IDENTITY_TOL
                    && (mi_average - reference.mi_average).abs() <= IDENTITY_TOL
                    && (chi_output - reference.chi_output).abs() <= IDENTITY_TOL
                    && (chi_environment - reference.chi_environment).abs() <= IDENTITY_TOL
                    && (mean_mi_members - reference.mean_mi_members).abs() <= IDENTITY_TOL;
                full_rank_matches = Some(matches);
            }
            rows.push(AppendixRow {
                rank_b,
                rank_e,
                chi_joint,
                mi_average,
                chi_output,
                chi_environment,
                mean_mi_members,
                residual,
            });
        }
    }
    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(AppendixReport {
        identity_holds: max_residual <= IDENTITY_TOL,
        rows,
        max_residual,
        mi_monotone,
        full_rank_matches_identity: full_rank_matches,
    })
}

// ---------------------------------------------------------------------------
// Ensemble metric and lower-semicontinuity witnesses.
// ---------------------------------------------------------------------------

/// Exact minimum-cost assignment (Jonker–Volgenant style shortest augmenting
/// paths with potentials) for a square cost matrix; returns (row→column map,
/// total cost).
fn optimal_assignment(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let inf = f64::INFINITY;
    let mut u = vec![0.0_f64; n + 1];
    let mut v = vec![0.0_f64; n + 1];
    let mut matched = vec![0_usize; n + 1];
    let mut way = vec![0_usize; n + 1];
    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0_usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0_usize; n];
    for j in 1..=n {
        if matched[j] > 0 {
            assign[matched[j] - 1] = j - 1;
        }
    }
    let total = (0..n).map(|i| cost[i][assign[i]]).sum();
    (assign, total)
}

/// Weight-matched member distance between two ensembles: members are padded
/// with zero-weight copies to a common count and optimally assigned under the
/// cost `min(w_i, v_j)·T(ρ_i, σ_j) + |w_i − v_j|` (T = trace distance). The
/// weight factor on the state term makes zero-weight padding free, so the
/// distance vanishes exactly when the ensembles agree as weighted member
/// lists up to permutation. This is a finite surrogate for weak convergence;
/// it is a documented design choice, not canonical.
pub fn ensemble_distance(a: &Ensemble, b: &Ensemble) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            context: "ensemble distance",
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let n = a.len().max(b.len());
    let pad = |mu: &Ensemble| -> (Vec<f64>, Vec<CMatrix>) {
        let mut w: Vec<f64> = mu.weights().to_vec();
        let mut s: Vec<CMatrix> = mu.states().iter().map(|x| x.matrix().clone()).collect();
        while w.len() < n {
            w.push(0.0);
            s.push(s[0].clone());
        }
        (w, s)
    };
    let (wa, sa) = pad(a);
    let (wb, sb) = pad(b);
    let mut cost = vec![vec![0.0_f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let t = 0.5 * trace_norm(&(&sa[i] - &sb[j]));
            cost[i][j] = wa[i].min(wb[j]) * t + (wa[i] - wb[j]).abs();
        }
    }
    let (_, total) = optimal_assignment(&cost);
    Ok(total)
}

/// One sequence element of a lower-semicontinuity witness.
#[derive(Debug, Clone, Serialize)]
pub struct LscRow {
    pub index: usize,
    /// Weight-matched distance to the limit ensemble.
    pub distance: f64,
    pub disturbance: f64,
}

/// Finite lower-semicontinuity witness for the entropic disturbance along an
/// ensemble sequence.
#[derive(Debug, Clone, Serialize)]
pub struct LscReport {
    pub limit_disturbance: f64,
    pub rows: Vec<LscRow>,
    /// Index from which the tail (second half) is evaluated.
    pub tail_start: usize,
    /// Whether every tail element is within `delta` of the limit.
    pub tail_within_delta: bool,
    /// min over the tail of Δ(μ_k) − Δ(μ₀); semicontinuity predicts ≥ 0 in
    /// the limit.
    pub min_tail_difference: f64,
    /// Some tail element fell below the limit by more than the
    /// distance-based continuity envelope (not expected; a finite sequence
    /// converging from below stays within the envelope).
    pub violation: bool,
}

/// Evaluate the entropic disturbance along a sequence converging to `limit`
/// and report the tail's worst shortfall against the limit value. A finite
/// witness can corroborate lower semicontinuity but never refute it.
pub fn lsc_witness(
    phi: &KrausChannel,
    sequence: &[Ensemble],
    limit: &Ensemble,
    delta: f64,
    tol: &Tolerances,
) -> Result<LscReport> {
    if sequence.is_empty() {
        return Err(Error::Empty { what: "ensemble sequence" });
    }
    let limit_disturbance = entropic_disturbance_with(phi, limit, tol)?;
    let mut rows = Vec::with_capacity(sequence.len());
    for (index, mu) in sequence.iter().enumerate() {
        rows.push(LscRow {
            index,
            distance: ensemble_distance(mu, limit)?,
            disturbance: entropic_disturbance_with(phi, mu, tol)?,
        });
    }
    let tail_start = sequence.len() / 2;
    let tail = &rows[tail_start..];
    let tail_within_delta = tail.iter().all(|r| r.distance <= delta);
    let min_tail_difference = tail
        .iter()
        .map(|r| r.disturbance - limit_disturbance)
        .fold(f64::INFINITY, f64::min);
    let violation = tail
        .iter()
        .any(|r| r.disturbance - limit_disturbance < -continuity_envelope(r.distance));
    Ok(LscReport {
        limit_disturbance,
        rows,
        tail_start,
        tail_within_delta,
        violation,
        min_tail_difference,
    })
}

/// One sequence element of a coherent-information semicontinuity check.
#[derive(Debug, Clone, Serialize)]
pub struct CiLscRow {
    pub index: usize,
    /// Trace distance to the limit state.
    pub distance: f64,
    pub coherent_info: f64,
    /// |H(ρ_k) − H(ρ₀)|.
    pub input_entropy_deviation: f64,
    /// |H(Φ̂ρ_k) − H(Φ̂ρ₀)| (entropy exchange at the limit input).
    pub exchange_entropy_deviation: f64,
}

/// Coherent-information semicontinuity report for a certified degradable
/// channel.
#[derive(Debug, Clone, Serialize)]
pub struct CiLscReport {
    pub limit_coherent_info: f64,
    pub rows: Vec<CiLscRow>,
    /// I_c ≥ −tolerance on every sequence element (expected for degradable
    /// channels).
    pub all_nonnegative: bool,
    /// min over the tail of I_c(ρ_k) − I_c(ρ₀).
    pub min_tail_difference: f64,
    /// Some tail element fell below the limit by more than the
    /// distance-based continuity envelope (not expected).
    pub violation: bool,
    /// Input entropy and entropy exchange both converged (final deviations
    /// below the documented threshold), the split that yields continuity.
    pub jointly_convergent: bool,
}

/// Check nonnegativity and approximate lower semicontinuity of the coherent
/// information along a state sequence for a channel whose degradability is
/// certified by the supplied degrading map. Errors if the certificate fails.
pub fn ci_lsc_experiment(
    phi: &KrausChannel,
    degrading: &KrausChannel,
    sequence: &[DensityMatrix],
    limit: &DensityMatrix,
    tol: &Tolerances,
) -> Result<CiLscReport> {
    if sequence.is_empty() {
        return Err(Error::Empty { what: "state sequence" });
    }
    let cert = verify_degrading(phi, degrading, 1e-8)?;
    if !cert.holds {
        return Err(Error::BadInput {
            detail: format!(
                "degradability certificate failed (max deviation {:.3e})",
                cert.max_deviation
            ),
        });
    }

    let minimal = phi.minimal_kraus(tol)?;
    let comp = minimal.complementary();
    let ic_of = |rho: &DensityMatrix| -> Result<f64> {
        let h_out = von_neumann_entropy_with(&minimal.apply(rho)?, tol);
        let h_env = von_neumann_entropy_with(&comp.apply(rho)?, tol);
        Ok(h_out - h_env)
    };

    let limit_coherent_info = ic_of(limit)?;
    let h_limit = von_neumann_entropy_with(limit, tol);
    let hx_limit = von_neumann_entropy_with(&comp.apply(limit)?, tol);

    let mut rows = Vec::with_capacity(sequence.len());
    for (index, rho) in sequence.iter().enumerate() {
        rows.push(CiLscRow {
            index,
            distance: 0.5 * trace_norm(&(rho.matrix() - limit.matrix())),
            coherent_info: ic_of(rho)?,
            input_entropy_deviation: (von_neumann_entropy_with(rho, tol) - h_limit).abs(),
            exchange_entropy_deviation: (von_neumann_entropy_with(&comp.apply(rho)?, tol)
                - hx_limit)
                .abs(),
        });
    }
    let all_nonnegative = rows.iter().all(|r| r.coherent_info >= -DOMINATION_TOL);
    let tail_start = sequence.len() / 2;
    let tail = &rows[tail_start..];
    let min_tail_difference = tail
        .iter()
        .map(|r| r.coherent_info - limit_coherent_info)
        .fold(f64::INFINITY, f64::min);
    let violation = tail
        .iter()
        .any(|r| r.coherent_info - limit_coherent_info < -continuity_envelope(r.distance));
    let last = rows.last().expect("nonempty");
    let jointly_convergent = last.input_entropy_deviation <= JOINT_CONVERGENCE_TOL
        && last.exchange_entropy_deviation <= JOINT_CONVERGENCE_TOL;
    Ok(CiLscReport {
        limit_coherent_info,
        all_nonnegative,
        min_tail_difference,
        violation,
        jointly_convergent,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::{kron, C64};
    use crate::numerics::states::PureState;
    use crate::sampling::{random_channel, random_density, random_ensemble, rng_for};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    /// Ensemble on a 2×3 composite space with entangled members.
    fn composite_ensemble() -> Ensemble {
        let mut rng = rng_for(101);
        random_ensemble(&mut rng, 6, 4).unwrap()
    }

    fn e_marginal_anchor(mu: &Ensemble, d_b: usize, d_e: usize) -> DensityMatrix {
        let rho = mu.average_state();
        dominant_anchor(&partial_trace(rho.matrix(), d_b, d_e, Subsystem::E))
    }

    #[test]
    fn full_rank_truncation_reproduces_chi() {
        let mu = composite_ensemble();
        let anchor = e_marginal_anchor(&mu, 2, 3);
        let report = truncation_sweep(&mu, 2, 3, &[3], &anchor, &tol()).unwrap();
        assert!(report.rows[0].gap_to_limit.abs() < 1e-10);
        assert!(report.converged);
    }

    #[test]
    fn qutrit_factor_sweep_is_dominated_and_converges() {
        let mu = composite_ensemble();
        let anchor = e_marginal_anchor(&mu, 2, 3);
        let report = truncation_sweep(&mu, 2, 3, &[1, 2, 3], &anchor, &tol()).unwrap();
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert!(row.chi_truncated <= report.chi_limit + 1e-9);
        }
        assert!(report.converged);
    }

    #[test]
    fn single_member_ensemble_sweeps_to_zero() {
        let mut rng = rng_for(5);
        let rho = random_density(&mut rng, 4, 3);
        let mu = Ensemble::new(vec![(1.0, rho)]).unwrap();
        let anchor = e_marginal_anchor(&mu, 2, 2);
        let report = truncation_sweep(&mu, 2, 2, &[1, 2], &anchor, &tol()).unwrap();
        assert_eq!(report.chi_limit, 0.0);
        for row in &report.rows {
            assert!(row.chi_truncated.abs() < 1e-12);
        }
    }

    #[test]
    fn anchor_outside_smallest_subspace_errors() {
        let mu = composite_ensemble();
        let rho = mu.average_state();
        let marg = partial_trace(rho.matrix(), 2, 3, Subsystem::E);
        let (_, vecs) = marg.eigen();
        // Least-dominant eigenvector: orthogonal to the rank-1 subspace.
        let worst = vecs.column(2).into_owned();
        let anchor = DensityMatrix::trusted(&worst * worst.adjoint());
        let err = truncation_sweep(&mu, 2, 3, &[1, 2, 3], &anchor, &tol());
        assert!(matches!(err, Err(Error::AnchorOutsideSubspace { .. })));
    }

    #[test]
    fn appendix_identity_holds_at_full_rank_and_under_truncation() {
        let mut rng = rng_for(77);
        let phi = random_channel(&mut rng, 3, 3, 2).unwrap();
        let mu = random_ensemble(&mut rng, 3, 3).unwrap();
        let report =
            appendix_identity_sweep(&phi, &mu, &[1, 2, 3], &[1, 2], &tol()).unwrap();
        assert!(report.identity_holds, "max residual {}", report.max_residual);
        assert!(report.mi_monotone);
        assert_eq!(report.full_rank_matches_identity, Some(true));
        assert_eq!(report.rows.len(), 6);
    }

    #[test]
    fn appendix_identity_on_dephasing_channel() {
        let phi = KrausChannel::dephasing(2).unwrap();
        let mu = Ensemble::new(vec![
            (0.5, PureState::basis_state(2, 0).unwrap().projector()),
            (0.5, PureState::plus().projector()),
        ])
        .unwrap();
        let report = appendix_identity_sweep(&phi, &mu, &[1, 2], &[1, 2], &tol()).unwrap();
        assert!(report.identity_holds, "max residual {}", report.max_residual);
    }

    #[test]
    fn assignment_matches_brute_force() {
        use rand::Rng;
        let mut rng = rng_for(3);
        for n in 1..=5 {
            let cost: Vec<Vec<f64>> =
                (0..n).map(|_| (0..n).map(|_| rng.random::<f64>()).collect()).collect();
            let (_, total) = optimal_assignment(&cost);
            // Brute force over permutations.
            let mut perm: Vec<usize> = (0..n).collect();
            let mut best = f64::INFINITY;
            loop {
                let c: f64 = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
                best = best.min(c);
                // next_permutation
                let mut i = n as isize - 2;
                while i >= 0 && perm[i as usize] > perm[i as usize + 1] {
                    i -= 1;
                }
                if i < 0 {
                    break;
                }
                let mut j = n - 1;
                while perm[j] < perm[i as usize] {
                    j -= 1;
                }
                perm.swap(i as usize, j);
                perm[i as usize + 1..].reverse();
            }
            assert!((total - best).abs() < 1e-12, "n={n}: {total} vs {best}");
        }
    }

    #[test]
    fn ensemble_distance_is_zero_on_permuted_copies() {
        let mut rng = rng_for(9);
        let a = random_ensemble(&mut rng, 3, 3).unwrap();
        let mut members: Vec<(f64, DensityMatrix)> =
            a.iter().map(|(w, s)| (w, s.clone())).collect();
        members.reverse();
        let b = Ensemble::new(members).unwrap();
        assert!(ensemble_distance(&a, &b).unwrap() < 1e-12);
        let c = random_ensemble(&mut rng, 3, 3).unwrap();
        assert!(ensemble_distance(&a, &c).unwrap() > 1e-3);
    }

    #[test]
    fn lsc_constant_sequence_has_zero_differences() {
        let phi = KrausChannel::dephasing(2).unwrap();
        let mu = Ensemble::new(vec![
            (0.5, PureState::basis_state(2, 0).unwrap().projector()),
            (0.5, PureState::plus().projector()),
        ])
        .unwrap();
        let seq = vec![mu.clone(), mu.clone(), mu.clone()];
        let report = lsc_witness(&phi, &seq, &mu, 1e-9, &tol()).unwrap();
        assert!(report.min_tail_difference.abs() < 1e-12);
        assert!(report.tail_within_delta);
        assert!(!report.violation);
    }

    #[test]
    fn lsc_converging_sequence_differences_shrink() {
        // Members drift toward the limit ensemble; disturbance is continuous
        // here, so differences go to zero from either side without violating
        // the semicontinuity margin.
        let phi = KrausChannel::dephasing(2).unwrap();
        let limit_members = vec![
            (0.5, PureState::basis_state(2, 0).unwrap().projector()),
            (0.5, PureState::plus().projector()),
        ];
        let limit = Ensemble::new(limit_members).unwrap();
        let mut seq = Vec::new();
        for k in 1..=8 {
            let eps = 0.2_f64.powi(k);
            let v = nalgebra::DVector::from_vec(vec![
                C64::new((1.0 - eps).sqrt(), 0.0),
                C64::new(eps.sqrt(), 0.0),
            ]);
            let near_zero = PureState::normalized(v).unwrap().projector();
            seq.push(
                Ensemble::new(vec![(0.5, near_zero), (0.5, PureState::plus().projector())])
                    .unwrap(),
            );
        }
        let report = lsc_witness(&phi, &seq, &limit, 0.05, &tol()).unwrap();
        assert!(report.tail_within_delta, "rows: {:?}", report.rows);
        assert!(!report.violation, "min diff {}", report.min_tail_difference);
        let first = &report.rows[0];
        let last = report.rows.last().unwrap();
        let diff = |r: &LscRow| (r.disturbance - report.limit_disturbance).abs();
        assert!(diff(last) < diff(first));
        assert!(diff(last) < 5e-3, "last diff {}", diff(last));
    }

    #[test]
    fn lsc_pure_refinements_of_a_mixed_limit() {
        // A single-member (mixed) limit has zero disturbance, so any sequence
        // satisfies the liminf property trivially; the witness must agree.
        let mut rng = rng_for(21);
        let phi = random_channel(&mut rng, 2, 2, 2).unwrap();
        let rho = random_density(&mut rng, 2, 2);
        let limit = Ensemble::new(vec![(1.0, rho.clone())]).unwrap();
        let (vals, vecs) = rho.eigen();
        let members: Vec<(f64, DensityMatrix)> = (0..2)
            .map(|j| {
                let col = vecs.column(j).into_owned();
                (vals[j], DensityMatrix::trusted(&col * col.adjoint()))
            })
            .collect();
        let spectral = Ensemble::new(members).unwrap();
        let report =
            lsc_witness(&phi, &[spectral.clone(), spectral], &limit, 10.0, &tol()).unwrap();
        assert!(!report.violation);
        assert!(report.limit_disturbance.abs() < 1e-10);
    }

    #[test]
    fn ci_lsc_dephasing_is_identically_zero() {
        // The completely dephasing channel is its own complement, so the
        // identity map is a valid degrading map and I_c ≡ 0.
        let phi = KrausChannel::dephasing(2).unwrap();
        let theta = KrausChannel::identity(2).unwrap();
        let mut rng = rng_for(33);
        let seq: Vec<DensityMatrix> = (0..5).map(|_| random_density(&mut rng, 2, 2)).collect();
        let limit = seq.last().unwrap().clone();
        let report = ci_lsc_experiment(&phi, &theta, &seq, &limit, &tol()).unwrap();
        assert!(report.all_nonnegative);
        for row in &report.rows {
            assert!(row.coherent_info.abs() < 1e-9);
        }
        assert!(!report.violation);
    }

    #[test]
    fn ci_lsc_identity_channel_reduces_to_input_entropy() {
        let phi = KrausChannel::identity(2).unwrap();
        // Degrading map to the trivial environment: the trace.
        let k1 = CMatrix::from_row_slice(1, 2, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let k2 = CMatrix::from_row_slice(1, 2, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let theta = KrausChannel::new(vec![k1, k2]).unwrap();
        let limit = DensityMatrix::from_probabilities(&[0.7, 0.3]).unwrap();
        let seq: Vec<DensityMatrix> = (1..=8)
            .map(|k| {
                let eps = 0.1_f64.powi(k);
                DensityMatrix::from_probabilities(&[0.7 + eps, 0.3 - eps]).unwrap()
            })
            .collect();
        let report = ci_lsc_experiment(&phi, &theta, &seq, &limit, &tol()).unwrap();
        assert!(report.all_nonnegative);
        assert!(report.jointly_convergent);
        assert!(!report.violation);
        let last = report.rows.last().unwrap();
        let expected = von_neumann_entropy_with(seq.last().unwrap(), &tol());
        assert!((last.coherent_info - expected).abs() < 1e-10);
    }

    #[test]
    fn ci_lsc_rejects_bad_degrading_map() {
        let phi = KrausChannel::identity(2).unwrap();
        // Identity is not a degrading map onto the 1-dim environment's
        // dimensions — wrong output dim is caught as a failed certificate or
        // a dimension error; a plausible-but-wrong map must fail too.
        let theta = KrausChannel::dephasing(2).unwrap();
        let seq = vec![DensityMatrix::maximally_mixed(2).unwrap()];
        let limit = DensityMatrix::maximally_mixed(2).unwrap();
        let res = ci_lsc_experiment(&phi, &theta, &seq, &limit, &tol());
        assert!(res.is_err());
    }

    #[test]
    fn tensor_of_channels_matches_componentwise_action() {
        let a = KrausChannel::dephasing(2).unwrap();
        let b = KrausChannel::identity(3).unwrap();
        let joint = a.tensor(&b).unwrap();
        let mut rng = rng_for(13);
        let x = random_density(&mut rng, 2, 2);
        let y = random_density(&mut rng, 3, 3);
        let lhs = joint.apply_op(&kron(x.matrix(), y.matrix()));
        let rhs = kron(a.apply(&x).unwrap().matrix(), y.matrix());
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
