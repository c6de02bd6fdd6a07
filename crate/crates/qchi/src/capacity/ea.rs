//! Channel mutual information (two independent evaluation routes), its
//! gradient, and the energy-constrained entanglement-assisted classical
//! capacity via Frank–Wolfe ascent with an energy-aware linear oracle.

use serde::Serialize;

use crate::channels::KrausChannel;
use crate::config::Tolerances;
use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::numerics::entropy::{mutual_information_with, relative_entropy_with};
use crate::numerics::gibbs::gibbs_state;
use crate::numerics::matrix::{hermitian_eigen, kron, trace_re, CMatrix, CVector, C64};
use crate::numerics::states::{purify, BipartiteState, DensityMatrix, Hamiltonian, Subsystem};

use super::{
    CapacityResult, ConstraintSpec, IterationRecord, OptimalityCertificate, Optimizer,
    SolverOptions,
};

/// The two routes to I(Φ, ρ) and their discrepancy.
#[derive(Debug, Clone, Serialize)]
pub struct MutualInformationReport {
    /// H(B) + H(R) − H(BR) on (Φ⊗Id)(purification of ρ).
    pub entropy_route: f64,
    /// Relative entropy of the same joint state against Φ(ρ) ⊗ (R-marginal).
    pub relative_entropy_route: f64,
    pub discrepancy: f64,
}

/// Channel mutual information evaluated along both routes.
pub fn channel_mutual_information_report(
    phi: &KrausChannel,
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<MutualInformationReport> {
    if rho.dim() != phi.dim_in() {
        return Err(Error::DimMismatch {
            context: "channel_mutual_information input state vs channel",
            expected: phi.dim_in(),
            got: rho.dim(),
        });
    }
    let d = rho.dim();
    let psi = purify(rho);
    let extended = phi.tensor_with_identity(d)?;
    let omega_mat = extended.apply_op(psi.projector().matrix());
    let omega = BipartiteState::new(phi.dim_out(), d, DensityMatrix::trusted(omega_mat))?;
    let entropy_route = mutual_information_with(&omega, tol);

    let out = phi.apply(rho)?;
    let mirror = omega.marginal(Subsystem::E);
    let reference = DensityMatrix::trusted(kron(out.matrix(), mirror.matrix()));
    let relative_entropy_route = relative_entropy_with(omega.joint(), &reference, tol)?;

    Ok(MutualInformationReport {
        entropy_route,
        relative_entropy_route,
        discrepancy: (entropy_route - relative_entropy_route).abs(),
    })
}

/// Channel mutual information I(Φ, ρ); the two evaluation routes must agree
/// within 1e-8 or the call reports a numerical inconsistency.
pub fn channel_mutual_information(
    phi: &KrausChannel,
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    let report = channel_mutual_information_report(phi, rho, tol)?;
    if !report.discrepancy.is_finite() || report.discrepancy > 1e-8 {
        return Err(Error::NoConvergence {
            detail: format!(
                "mutual-information routes disagree: entropy route {} vs relative-entropy route {} \
                 (discrepancy {:.3e} > 1e-8)",
                report.entropy_route, report.relative_entropy_route, report.discrepancy
            ),
        });
    }
    Ok(report.entropy_route)
}

/// Cheap single-route evaluation used inside optimizer loops:
/// I(Φ, ρ) = H(ρ) + H(Φρ) − H(Φ̂ρ) with Φ̂ a complementary channel.
fn info_via_complement(
    phi: &KrausChannel,
    comp: &KrausChannel,
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    let h_in = crate::numerics::entropy::von_neumann_entropy_with(rho, tol);
    let h_out = crate::numerics::entropy::von_neumann_entropy_with(&phi.apply(rho)?, tol);
    let h_env = crate::numerics::entropy::von_neumann_entropy_with(&comp.apply(rho)?, tol);
    Ok((h_in + h_out - h_env).max(0.0))
}

fn log_floored(m: &CMatrix, floor: f64) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let d = m.nrows();
    let mut out = CMatrix::zeros(d, d);
    for (j, &v) in vals.iter().enumerate() {
        let lv = C64::new(v.max(floor).ln(), 0.0);
        let col = vecs.column(j);
        for r in 0..d {
            for c in 0..d {
                out[(r, c)] += lv * col[r] * col[c].conj();
            }
        }
    }
    Ok(out)
}

fn gradient_with_complement(
    phi: &KrausChannel,
    comp: &KrausChannel,
    rho: &DensityMatrix,
    floor: f64,
) -> Result<CMatrix> {
    let ln_rho = log_floored(rho.matrix(), floor)?;
    let ln_out = log_floored(phi.apply(rho)?.matrix(), floor)?;
    let ln_env = log_floored(comp.apply(rho)?.matrix(), floor)?;
    Ok(-ln_rho - phi.adjoint_apply(&ln_out) + comp.adjoint_apply(&ln_env))
}

/// Gradient of ρ ↦ I(Φ, ρ) on trace-preserving (traceless) directions:
/// G = −ln ρ − Φ*(ln Φρ) + Φ̂*(ln Φ̂ρ), with floored logarithms. For a
/// traceless Hermitian direction Δ, d/dt I(ρ + tΔ) = Tr(G Δ).
pub fn mutual_info_gradient(
    phi: &KrausChannel,
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<CMatrix> {
    let minimal = phi.minimal_kraus(tol)?;
    let comp = minimal.complementary();
    gradient_with_complement(&minimal, &comp, rho, tol.eig)
}

/// Linear maximization oracle: argmax Tr(Gσ) over states with Tr Hσ ≤ E.
/// Unconstrained answer is the top eigenvector of G; otherwise the energy
/// multiplier ν is bisected and the two bracketing top eigenvectors are
/// blended to meet the budget exactly. Returns (σ, ν).
fn linear_oracle(
    g: &CMatrix,
    h: &Hamiltonian,
    e_budget: f64,
) -> Result<(DensityMatrix, f64)> {
    let top = |nu: f64| -> Result<(f64, CVector)> {
        let shifted = g - h.matrix() * C64::new(nu, 0.0);
        let (_, vecs) = hermitian_eigen(&shifted)?;
        let xi = vecs.column(0).into_owned();
        let energy = (xi.adjoint() * h.matrix() * &xi)[(0, 0)].re;
        Ok((energy, xi))
    };

    let (e0, xi0) = top(0.0)?;
    if e0 <= e_budget + 1e-12 {
        return Ok((DensityMatrix::trusted(&xi0 * xi0.adjoint()), 0.0));
    }

    let mut lo = (0.0, e0, xi0);
    let mut hi_nu = 1.0;
    let mut hi: Option<(f64, f64, CVector)> = None;
    for _ in 0..200 {
        let (e, xi) = top(hi_nu)?;
        if e <= e_budget {
            hi = Some((hi_nu, e, xi));
            break;
        }
        lo = (hi_nu, e, xi);
        hi_nu *= 2.0;
    }
    let mut hi = hi.ok_or_else(|| Error::NoConvergence {
        detail: "linear oracle failed to bracket the energy multiplier".into(),
    })?;

    for _ in 0..100 {
        if hi.0 - lo.0 < 1e-12 * (1.0 + hi.0) {
            break;
        }
        let mid = 0.5 * (lo.0 + hi.0);
        let (e, xi) = top(mid)?;
        if e > e_budget {
            lo = (mid, e, xi);
        } else {
            hi = (mid, e, xi);
        }
    }

    let (e_lo, e_hi) = (lo.1, hi.1);
    let sigma = if (e_lo - e_hi).abs() < 1e-15 {
        &hi.2 * hi.2.adjoint()
    } else {
        let t = ((e_lo - e_budget) / (e_lo - e_hi)).clamp(0.0, 1.0);
        &hi.2 * hi.2.adjoint() * C64::new(t, 0.0) + &lo.2 * lo.2.adjoint() * C64::new(1.0 - t, 0.0)
    };
    Ok((DensityMatrix::trusted(sigma), 0.5 * (lo.0 + hi.0)))
}

/// Energy-constrained entanglement-assisted classical capacity
/// `C_ea(Φ, H, E) = max { I(Φ, ρ) : Tr Hρ ≤ E }`.
///
/// Frank–Wolfe ascent from the Gibbs state: at each iterate the gradient's
/// linear maximization over the energy polytope provides both the step target
/// and a duality gap `Tr G(σ* − ρ)` that upper-bounds the remaining
/// suboptimality (I is concave), which is the convergence certificate.
pub fn ea_capacity(
    phi: &KrausChannel,
    c: &ConstraintSpec,
    opts: &SolverOptions,
) -> Result<CapacityResult> {
    if c.hamiltonian().dim() != phi.dim_in() {
        return Err(Error::DimMismatch {
            context: "ea_capacity Hamiltonian vs channel input",
            expected: phi.dim_in(),
            got: c.hamiltonian().dim(),
        });
    }
    let h = c.hamiltonian();
    let e_budget = c.energy();
    let tol = &opts.tol;
    let minimal = phi.minimal_kraus(tol)?;
    let comp = minimal.complementary();
    let gap_tol = (tol.cert * 0.1).max(1e-9);

    let mut rho = gibbs_state(h, e_budget)?.state;
    let mut value = info_via_complement(&minimal, &comp, &rho, tol)?;
    let mut nu = 0.0;
    let mut last_gap = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    let mut history = Vec::new();
    if opts.record_trace {
        history.push(IterationRecord { iteration: 0, objective: value });
    }

    for it in 1..=opts.max_iterations {
        let safe = rho.mix_with_maximally_mixed(tol.interior_mix);
        let g = gradient_with_complement(&minimal, &comp, &safe, tol.eig)?;
        let (sigma, nu_it) = linear_oracle(&g, h, e_budget)?;
        nu = nu_it;
        let gap = trace_re(&(&g * (sigma.matrix() - rho.matrix())));
        last_gap = gap;
        iterations = it;
        if gap <= gap_tol {
            converged = true;
            break;
        }

        // Armijo backtracking along the Frank–Wolfe chord.
        let mut gamma = 1.0_f64;
        let mut accepted = false;
        while gamma > 1e-14 {
            let cand_mat =
                rho.matrix() * C64::new(1.0 - gamma, 0.0) + sigma.matrix() * C64::new(gamma, 0.0);
            let cand = DensityMatrix::trusted(cand_mat);
            let cand_value = info_via_complement(&minimal, &comp, &cand, tol)?;
            if cand_value >= value + 1e-4 * gamma * gap {
                rho = cand;
                value = cand_value;
                accepted = true;
                break;
            }
            gamma *= 0.5;
        }
        if opts.record_trace {
            history.push(IterationRecord { iteration: it, objective: value });
        }
        if !accepted {
            converged = gap <= gap_tol.max(1e-7);
            break;
        }
    }

    // Authoritative value with the dual-route consistency check.
    let value = channel_mutual_information(phi, &rho, tol)?;
    let slackness_residual = (nu * c.residual(&rho)?).abs();
    let certificate = OptimalityCertificate {
        lagrangian_gap: last_gap,
        member_deviation: 0.0,
        slackness_residual,
        n_probe_restarts: 0,
        passed: last_gap <= tol.cert && slackness_residual <= 1e-6,
    };
    Ok(CapacityResult {
        value,
        optimizer: Optimizer::State(rho),
        lambda: nu,
        iterations,
        certificate: Some(certificate),
        converged,
        history,
    })
}

/// Convenience: χ of a spectral (eigen-)ensemble of ρ pushed through Φ.
pub(crate) fn spectral_ensemble(rho: &DensityMatrix, floor: f64) -> Result<Ensemble> {
    let (vals, vecs) = rho.eigen();
    let mut members = Vec::new();
    for (j, &v) in vals.iter().enumerate() {
        if v > floor {
            let col: CVector = vecs.column(j).into_owned();
            members.push((v, DensityMatrix::trusted(&col * col.adjoint())));
        }
    }
    let total: f64 = members.iter().map(|(w, _)| *w).sum();
    for m in &mut members {
        m.0 /= total;
    }
    Ensemble::new(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::hermitize;
    use crate::sampling::{gaussian_matrix, random_channel, random_density, rng_for};

    fn fast_opts() -> SolverOptions {
        SolverOptions { restarts: 4, max_iterations: 800, ..SolverOptions::default() }
    }

    #[test]
    fn identity_channel_info_is_twice_entropy() {
        let phi = KrausChannel::identity(2).unwrap();
        let rho = DensityMatrix::from_probabilities(&[0.8, 0.2]).unwrap();
        let report =
            channel_mutual_information_report(&phi, &rho, &Tolerances::default()).unwrap();
        let expected = 2.0 * 0.5004024235381879;
        assert!((report.entropy_route - expected).abs() < 1e-10);
        assert!(report.discrepancy < 1e-9, "discrepancy {}", report.discrepancy);
    }

    #[test]
    fn completely_depolarizing_info_vanishes() {
        let phi = KrausChannel::depolarizing(2, 1.0).unwrap();
        let tol = Tolerances::default();
        let mut rng = rng_for(17);
        for _ in 0..5 {
            let rho = random_density(&mut rng, 2, 2);
            let value = channel_mutual_information(&phi, &rho, &tol).unwrap();
            assert!(value.abs() < 1e-8, "value {value}");
        }
    }

    #[test]
    fn routes_agree_on_random_instances() {
        let tol = Tolerances::default();
        let mut rng = rng_for(23);
        for _ in 0..10 {
            let phi = random_channel(&mut rng, 3, 2, 2).unwrap();
            let rho = random_density(&mut rng, 3, 3);
            let report = channel_mutual_information_report(&phi, &rho, &tol).unwrap();
            assert!(report.discrepancy <= 1e-8, "discrepancy {}", report.discrepancy);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let tol = Tolerances::default();
        let mut rng = rng_for(31);
        let phi = random_channel(&mut rng, 3, 3, 2).unwrap();
        let rho = random_density(&mut rng, 3, 3).mix_with_maximally_mixed(0.05);
        let g = mutual_info_gradient(&phi, &rho, &tol).unwrap();
        // Random traceless Hermitian direction.
        let mut delta = hermitize(&gaussian_matrix(&mut rng, 3, 3));
        let tr = delta.trace() / C64::new(3.0, 0.0);
        for i in 0..3 {
            delta[(i, i)] -= tr;
        }
        let minimal = phi.minimal_kraus(&tol).unwrap();
        let comp = minimal.complementary();
        let t = 1e-5;
        let at = |s: f64| -> f64 {
            let m = rho.matrix() + &delta * C64::new(s, 0.0);
            info_via_complement(&minimal, &comp, &DensityMatrix::trusted(m), &tol).unwrap()
        };
        let numeric = (at(t) - at(-t)) / (2.0 * t);
        let analytic = trace_re(&(&g * &delta));
        assert!(
            (numeric - analytic).abs() <= 1e-4 * (1.0 + analytic.abs()),
            "numeric {numeric} vs analytic {analytic}"
        );
    }

    #[test]
    fn ea_capacity_identity_qubit_quarter_budget() {
        // Identity qubit channel, H = diag(0,1), E = 0.2: the maximizer is
        // the Gibbs state diag(0.8, 0.2) and the capacity is 2·h(0.2).
        let phi = KrausChannel::identity(2).unwrap();
        let h = Hamiltonian::number_operator(2).unwrap();
        let c = ConstraintSpec::new(h, 0.2).unwrap();
        let res = ea_capacity(&phi, &c, &fast_opts()).unwrap();
        assert!(
            (res.value - 1.0008048470763757).abs() < 1e-6,
            "value {}",
            res.value
        );
        assert!(res.converged, "final gap {:?}", res.certificate);
        let rho = res.optimizer.as_state().unwrap();
        assert!((rho.matrix()[(0, 0)].re - 0.8).abs() < 1e-5);
        assert!((res.lambda - 2.0 * 4.0_f64.ln()).abs() < 1e-3, "nu {}", res.lambda);
        assert!(res.certificate.as_ref().unwrap().passed);
    }

    #[test]
    fn ea_capacity_untight_budget_hits_ln_d_times_two() {
        let phi = KrausChannel::identity(2).unwrap();
        let h = Hamiltonian::number_operator(2).unwrap();
        let c = ConstraintSpec::new(h, 0.75).unwrap();
        let res = ea_capacity(&phi, &c, &fast_opts()).unwrap();
        assert!((res.value - 2.0 * 2.0_f64.ln()).abs() < 1e-6, "value {}", res.value);
        assert_eq!(res.lambda, 0.0);
    }

    #[test]
    fn linear_oracle_respects_budget() {
        let h = Hamiltonian::number_operator(2).unwrap();
        let g = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(0.4, 0.0),
            C64::new(3.2, 0.0),
        ]));
        let (sigma, nu) = linear_oracle(&g, &h, 0.2).unwrap();
        let energy = sigma.expectation(&h).unwrap();
        assert!(energy <= 0.2 + 1e-9, "energy {energy}");
        assert!((energy - 0.2).abs() < 1e-9);
        assert!(nu > 0.0);
        // Value matches the direct LP answer 0.4·0.8 + 3.2·0.2.
        let lp = trace_re(&(&g * sigma.matrix()));
        assert!((lp - (0.4 * 0.8 + 3.2 * 0.2)).abs() < 1e-8);
    }
}
