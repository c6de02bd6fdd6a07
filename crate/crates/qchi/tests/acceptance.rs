//! Acceptance suite: eleven numbered criteria, one test per criterion, each
//! printing a `[acceptance] criterion N: PASS/FAIL (...)` line with the
//! measured quantities at the stated tolerances. Run with
//! `cargo test --test acceptance -- --nocapture` to see every line.
//!
//! Reference values marked as derived come from closed-form oracles computed
//! inside this file (binary entropies, 2×2 eigenvalues, logarithm identities),
//! never from the library functions under test.

use qchi::capacity::{
    capacity_gap, channel_mutual_information, chi_capacity, ci_via_chi, coherent_information,
    ea_capacity, mutual_info_gradient, ConstraintSpec, GapTrigger, GapVerdict, SolverOptions,
};
use qchi::channels::{verify_degrading, KrausChannel};
use qchi::config::{Config, Tolerances};
use qchi::ensembles::{chi_quantity_with, dilation_identity, entropic_disturbance_with, Ensemble};
use qchi::gaussian::{GaussianChannelSpec, GaussianTrigger, GaussianVerdict, RMatrix};
use qchi::numerics::{gibbs_state, C64, CMatrix, DensityMatrix, Hamiltonian, PureState};
use qchi::sampling::{
    gaussian_matrix, random_channel, random_density, random_ensemble, random_unitary, rng_for,
};
use qchi::semicontinuity::{appendix_identity_sweep, default_truncation_anchor, truncation_sweep};

/// Print the criterion line and fail the test if the check did not hold.
fn run(n: usize, body: impl FnOnce() -> qchi::Result<(bool, String)>) {
    let (passed, detail) = match body() {
        Ok(pd) => pd,
        Err(e) => (false, format!("errored: {e}")),
    };
    let status = if passed { "PASS" } else { "FAIL" };
    println!("[acceptance] criterion {n}: {status} ({detail})");
    assert!(passed, "criterion {n} failed: {detail}");
}

/// Binary entropy in nats; closed form, independent of the library.
fn hbin(x: f64) -> f64 {
    let y = 1.0 - x;
    -(x * x.ln()) - (y * y.ln())
}

/// Seeded corpus of 200 (channel, ensemble) pairs with d_A, d_B ∈ {2,3,4},
/// d_E ≤ 4, and at most 5 members. Shared by criteria 1 and 2.
fn corpus() -> Vec<(KrausChannel, Ensemble)> {
    let mut rng = rng_for(0xACC0);
    let dims = [2usize, 3, 4];
    (0..200)
        .map(|t| {
            let d_a = dims[t % 3];
            let d_b = dims[(t / 3) % 3];
            let d_e_floor = d_a.div_ceil(d_b);
            let d_e = d_e_floor + (t / 9) % (4 - d_e_floor + 1);
            let members = 1 + t % 5;
            let phi = random_channel(&mut rng, d_a, d_b, d_e).expect("corpus channel");
            let mu = random_ensemble(&mut rng, d_a, members).expect("corpus ensemble");
            (phi, mu)
        })
        .collect()
}

fn amplitude_damping(gamma: f64) -> qchi::Result<KrausChannel> {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let k0 = CMatrix::from_row_slice(2, 2, &[one, zero, zero, C64::new((1.0 - gamma).sqrt(), 0.0)]);
    let k1 = CMatrix::from_row_slice(2, 2, &[zero, C64::new(gamma.sqrt(), 0.0), zero, zero]);
    KrausChannel::new(vec![k0, k1])
}

#[test]
fn criterion_01_dilation_identity_residual_on_random_corpus() {
    run(1, || {
        let tol = Tolerances::default();
        let mut max_residual = 0.0_f64;
        for (phi, mu) in corpus() {
            let report = dilation_identity(&phi, &mu, &tol)?;
            max_residual = max_residual.max(report.residual);
        }
        Ok((
            max_residual <= 1e-8,
            format!("max six-term identity residual {max_residual:.3e} over 200 seeded pairs"),
        ))
    });
}

#[test]
fn criterion_02_disturbance_bounds_on_random_corpus() {
    run(2, || {
        let tol = Tolerances::default();
        let mut worst_low = 0.0_f64;
        let mut worst_high = f64::NEG_INFINITY;
        for (phi, mu) in corpus() {
            let delta = entropic_disturbance_with(&phi, &mu, &tol)?;
            let d_e = phi.minimal_kraus(&tol)?.kraus().len();
            let bound = (phi.dim_in() as f64).ln().min(2.0 * (d_e as f64).ln());
            worst_low = worst_low.min(delta);
            worst_high = worst_high.max(delta - bound);
        }
        // Unitary channels have environment dimension 1, which forces the
        // upper bound to zero; the disturbance must vanish.
        let mut rng = rng_for(0xACC2);
        let mut worst_unitary = 0.0_f64;
        for t in 0..12 {
            let d = 2 + t % 3;
            let phi = KrausChannel::new(vec![random_unitary(&mut rng, d)])?;
            let mu = random_ensemble(&mut rng, d, 2 + t % 4)?;
            let delta = entropic_disturbance_with(&phi, &mu, &tol)?;
            worst_unitary = worst_unitary.max(delta.abs());
        }
        Ok((
            worst_low >= -1e-9 && worst_high <= 1e-9 && worst_unitary <= 1e-9,
            format!(
                "min disturbance {worst_low:.3e}, worst excess over min(ln d_A, 2 ln d_E) \
                 {worst_high:.3e}, worst |disturbance| over 12 unitary channels \
                 {worst_unitary:.3e}"
            ),
        ))
    });
}

#[test]
fn criterion_03_worked_qubit_example_matches_eigen_oracle() {
    run(3, || {
        let tol = Tolerances::default();
        // Oracle, all closed form. The average input ½|0⟩⟨0| + ½|+⟩⟨+| has
        // eigenvalues (2 ± √2)/4 and pure members, so χ_in is a binary
        // entropy; dephasing sends the members to |0⟩⟨0| (entropy 0) and I/2
        // (entropy ln 2) with average diag(3/4, 1/4), so
        // χ_out = (3/2) ln 2 − (3/4) ln 3.
        let chi_in_oracle = hbin((2.0 + 2.0_f64.sqrt()) / 4.0);
        let chi_out_oracle = 1.5 * 2.0_f64.ln() - 0.75 * 3.0_f64.ln();
        let delta_oracle = chi_in_oracle - chi_out_oracle;
        assert!((delta_oracle - 0.200_733_976_360_851_83).abs() < 1e-12);

        let phi = KrausChannel::dephasing(2)?;
        let mu = Ensemble::new(vec![
            (0.5, PureState::basis_state(2, 0)?.projector()),
            (0.5, PureState::plus().projector()),
        ])?;
        let chi_in = chi_quantity_with(&mu, &tol);
        let chi_out = chi_quantity_with(&mu.map(&phi)?, &tol);
        let delta = entropic_disturbance_with(&phi, &mu, &tol)?;

        let ok = (chi_in - chi_in_oracle).abs() <= 1e-6
            && (chi_out - chi_out_oracle).abs() <= 1e-6
            && (delta - delta_oracle).abs() <= 1e-6
            && (chi_out_oracle - 0.215762).abs() <= 1e-6;
        Ok((
            ok,
            format!(
                "Δ {delta:.9} vs oracle {delta_oracle:.9}, χ_in {chi_in:.9} vs \
                 {chi_in_oracle:.9}, χ_out {chi_out:.9} vs {chi_out_oracle:.9}; the six-digit \
                 reference prints 0.200685 and 0.416447 sit {:+.2e} and {:+.2e} away from the \
                 closed forms and are superseded by the oracle",
                0.200685 - delta_oracle,
                0.416447 - chi_in_oracle,
            ),
        ))
    });
}

#[test]
fn criterion_04_constrained_chi_capacity_of_dephasing() {
    run(4, || {
        let cfg = Config::default();
        let phi = KrausChannel::dephasing(2)?;
        let c = ConstraintSpec::new(Hamiltonian::diagonal(&[0.0, 1.0])?, 0.2)?;
        let start = std::time::Instant::now();
        let result = chi_capacity(&phi, &c, &SolverOptions::from(&cfg))?;
        let secs = start.elapsed().as_secs_f64();
        let h02 = hbin(0.2);
        let cert = result.certificate.clone().expect("certificate is attached");
        let ok = (result.value - h02).abs() <= 1e-4
            && cert.lagrangian_gap <= 1e-4
            && cert.passed
            && secs < 30.0;
        Ok((
            ok,
            format!(
                "value {:.7} vs h(0.2) {:.7}, Lagrangian gap {:.2e}, certificate passed {}, \
                 {:.1} s",
                result.value, h02, cert.lagrangian_gap, cert.passed, secs
            ),
        ))
    });
}

#[test]
fn criterion_05_ea_capacity_of_identity_and_gap_trigger() {
    run(5, || {
        let cfg = Config::default();
        let opts = SolverOptions::from(&cfg);
        let phi = KrausChannel::identity(2)?;
        let c = ConstraintSpec::new(Hamiltonian::diagonal(&[0.0, 1.0])?, 0.2)?;
        let ea = ea_capacity(&phi, &c, &opts)?;
        let h02 = hbin(0.2);
        let report = capacity_gap(&phi, &c, None, &opts)?;
        let coherence_trigger = report
            .triggers
            .iter()
            .any(|t| matches!(t, GapTrigger::OffDiagonalNonvanishing { .. }));
        let ok = (ea.value - 2.0 * h02).abs() <= 1e-4
            && (report.gap - h02).abs() <= 2e-4
            && coherence_trigger
            && matches!(report.verdict, GapVerdict::GapGuaranteed);
        Ok((
            ok,
            format!(
                "C_ea {:.7} vs 2h(0.2) {:.7}, gap {:.7} vs h(0.2) {:.7}, coherence-preservation \
                 trigger fired {}, verdict {:?}",
                ea.value,
                2.0 * h02,
                report.gap,
                h02,
                coherence_trigger,
                report.verdict
            ),
        ))
    });
}

#[test]
fn criterion_06_gap_vanishes_in_dephasing_basis_and_opens_when_rotated() {
    run(6, || {
        let cfg = Config::default();
        let opts = SolverOptions::from(&cfg);
        let phi = KrausChannel::dephasing(2)?;

        let diag = ConstraintSpec::new(Hamiltonian::diagonal(&[0.0, 1.0])?, 0.2)?;
        let chi_diag = chi_capacity(&phi, &diag, &opts)?;
        let ea_diag = ea_capacity(&phi, &diag, &opts)?;
        let aligned_gap = (ea_diag.value - chi_diag.value).abs();

        let f = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(f, 0.0),
                C64::new(f, 0.0),
                C64::new(f, 0.0),
                C64::new(-f, 0.0),
            ],
        );
        let rotated =
            ConstraintSpec::new(Hamiltonian::diagonal(&[0.0, 1.0])?.conjugated(&hadamard)?, 0.2)?;
        let chi_rot = chi_capacity(&phi, &rotated, &opts)?;
        let ea_rot = ea_capacity(&phi, &rotated, &opts)?;
        let rotated_gap = ea_rot.value - chi_rot.value;

        let ok = aligned_gap <= 1e-4
            && rotated_gap >= 0.01
            && chi_diag.converged
            && ea_diag.converged
            && chi_rot.converged
            && ea_rot.converged;
        Ok((
            ok,
            format!(
                "|C_ea − C̄| {aligned_gap:.2e} with the Hamiltonian in the dephasing basis; \
                 C_ea − C̄ = {rotated_gap:.4} ≥ 0.01 after a Hadamard rotation \
                 (C_ea {:.6}, C̄ {:.6})",
                ea_rot.value, chi_rot.value
            ),
        ))
    });
}

#[test]
fn criterion_07_truncation_sweeps_dominated_convergent_and_identity_exact() {
    run(7, || {
        let tol = Tolerances::default();
        let mut rng = rng_for(0xACC7);
        let combos = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2), (3, 4), (4, 3)];
        let mut worst_full_gap = 0.0_f64;
        let mut worst_residual = 0.0_f64;
        for t in 0..50 {
            let (d_b, d_e) = combos[t % combos.len()];
            let d_a = 2 + t % 2;
            let phi = random_channel(&mut rng, d_a, d_b, d_e)?;
            let mu = random_ensemble(&mut rng, d_a, 2 + t % 4)?;

            let minimal = phi.minimal_kraus(&tol)?;
            let d_e_min = minimal.kraus().len();
            let isometry = KrausChannel::new(vec![minimal.stinespring_isometry()])?;
            let dilated = mu.map(&isometry)?;
            let ranks: Vec<usize> = (1..=d_e_min).collect();
            let anchor = default_truncation_anchor(&dilated, d_b, d_e_min)?;
            // Domination χ(μ_n) ≤ χ(μ) + 1e-9 is enforced inside the sweep;
            // a violation surfaces as an error and fails the criterion.
            let sweep = truncation_sweep(&dilated, d_b, d_e_min, &ranks, &anchor, &tol)?;
            let full_gap = sweep.rows.last().expect("nonempty sweep").gap_to_limit.abs();
            worst_full_gap = worst_full_gap.max(full_gap);

            let appendix = appendix_identity_sweep(&phi, &mu, &[d_b], &ranks, &tol)?;
            worst_residual = worst_residual.max(appendix.max_residual);
        }
        Ok((
            worst_full_gap <= 1e-9 && worst_residual <= 1e-8,
            format!(
                "50 sweeps: worst |χ(μ_full) − χ(μ)| {worst_full_gap:.3e}, domination held at \
                 every rank, worst truncated-identity residual {worst_residual:.3e}"
            ),
        ))
    });
}

#[test]
fn criterion_08_coherent_information_routes_and_degradable_nonnegativity() {
    run(8, || {
        let tol = Tolerances::default();
        let mut rng = rng_for(0xACC8);
        let mut worst_route = 0.0_f64;
        for t in 0..100_usize {
            let d_a = 2 + t % 3;
            let d_b = 2 + (t / 3) % 3;
            let d_e = (1 + t % 4).max(d_a.div_ceil(d_b));
            let phi = random_channel(&mut rng, d_a, d_b, d_e)?;
            let rho = random_density(&mut rng, d_a, d_a);
            let direct = coherent_information(&phi, &rho, &tol)?;
            let via_chi = ci_via_chi(&phi, &rho, &tol)?;
            worst_route = worst_route.max((direct - via_chi).abs());
        }

        // Certified-degradable fixtures: dephasing is its own complement (the
        // identity degrades it); amplitude damping with γ < 1/2 is degraded
        // by amplitude damping with γ' = (1 − 2γ)/(1 − γ).
        let mut fixtures: Vec<(KrausChannel, KrausChannel)> = vec![
            (KrausChannel::dephasing(2)?, KrausChannel::identity(2)?),
            (KrausChannel::dephasing(3)?, KrausChannel::identity(3)?),
        ];
        for gamma in [0.2, 0.3, 0.45] {
            fixtures.push((
                amplitude_damping(gamma)?,
                amplitude_damping((1.0 - 2.0 * gamma) / (1.0 - gamma))?,
            ));
        }
        let mut min_ci = f64::INFINITY;
        for (phi, theta) in &fixtures {
            let cert = verify_degrading(phi, theta, 1e-8)?;
            if !cert.holds {
                return Ok((
                    false,
                    format!("degrading-map certificate failed, deviation {:.3e}", cert.max_deviation),
                ));
            }
            for k in 0..10 {
                let rho = random_density(&mut rng, phi.dim_in(), 1 + k % phi.dim_in());
                min_ci = min_ci.min(coherent_information(phi, &rho, &tol)?);
            }
        }

        // A channel that removes all off-diagonal structure transmits no
        // quantum information: its coherent information vanishes identically.
        let pi = KrausChannel::dephasing(3)?;
        let mut worst_dephasing = 0.0_f64;
        for k in 0..10 {
            let rho = random_density(&mut rng, 3, 1 + k % 3);
            worst_dephasing = worst_dephasing.max(coherent_information(&pi, &rho, &tol)?.abs());
        }

        Ok((
            worst_route <= 1e-8 && min_ci >= -1e-9 && worst_dephasing <= 1e-9,
            format!(
                "worst route disagreement {worst_route:.3e} over 100 pairs, minimum coherent \
                 information over certified-degradable fixtures {min_ci:.3e}, worst |I_c| under \
                 full dephasing {worst_dephasing:.3e}"
            ),
        ))
    });
}

#[test]
fn criterion_09_mutual_information_gradient_matches_finite_differences() {
    run(9, || {
        let tol = Tolerances::default();
        let mut rng = rng_for(0xACC9);
        let mut worst_rel = 0.0_f64;
        let mut checked = 0_usize;
        for t in 0..20 {
            let d = 2 + t % 3;
            let phi = random_channel(&mut rng, d, 2 + (t / 2) % 3, 2)?;
            let rho = random_density(&mut rng, d, d).mix_with_maximally_mixed(0.2);
            let g = mutual_info_gradient(&phi, &rho, &tol)?;

            // Traceless Hermitian unit direction, resampled until the
            // directional derivative is well away from zero so the relative
            // error is meaningful.
            let mut matched = false;
            for _ in 0..20 {
                let a = gaussian_matrix(&mut rng, d, d);
                let mut dir = (&a + a.adjoint()) * C64::new(0.5, 0.0);
                let shift = dir.trace() / C64::new(d as f64, 0.0);
                for i in 0..d {
                    dir[(i, i)] -= shift;
                }
                let norm = dir.norm();
                dir *= C64::new(1.0 / norm, 0.0);
                let analytic = (&g * &dir).trace().re;
                if analytic.abs() < 1e-2 {
                    continue;
                }
                let step = 1e-5;
                let plus = DensityMatrix::new(rho.matrix() + &dir * C64::new(step, 0.0))?;
                let minus = DensityMatrix::new(rho.matrix() - &dir * C64::new(step, 0.0))?;
                let numeric = (channel_mutual_information(&phi, &plus, &tol)?
                    - channel_mutual_information(&phi, &minus, &tol)?)
                    / (2.0 * step);
                let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs());
                worst_rel = worst_rel.max(rel);
                checked += 1;
                matched = true;
                break;
            }
            if !matched {
                return Ok((false, format!("no usable direction at interior point {t}")));
            }
        }
        Ok((
            worst_rel <= 1e-4 && checked == 20,
            format!("worst relative gradient error {worst_rel:.3e} over {checked} interior points"),
        ))
    });
}

#[test]
fn criterion_10_gaussian_classifier_attenuator_and_zero_k() {
    run(10, || {
        let attenuator = GaussianChannelSpec::new(
            1,
            1,
            RMatrix::identity(2, 2) * 0.5_f64.sqrt(),
            RMatrix::identity(2, 2) * 0.25,
            vec![],
        )?;
        let validity = attenuator.validate(1e-10);
        let report = attenuator.classify_gap(false, 1e-10, 1e-10)?;

        let zero_k = GaussianChannelSpec::new(
            1,
            1,
            RMatrix::zeros(2, 2),
            RMatrix::identity(2, 2) * 0.5,
            vec![],
        )?;
        let zero_report = zero_k.classify_gap(false, 1e-10, 1e-10)?;

        let ok = validity.valid
            && validity.min_eigenvalue_minus >= -1e-10
            && validity.min_eigenvalue_plus >= -1e-10
            && report
                .triggers
                .iter()
                .any(|t| matches!(t, GaussianTrigger::FullRangeK))
            && matches!(report.verdict, GaussianVerdict::GapGuaranteed)
            && zero_report
                .triggers
                .iter()
                .any(|t| matches!(t, GaussianTrigger::ZeroKDiscreteCq))
            && matches!(zero_report.verdict, GaussianVerdict::NoConclusion);
        Ok((
            ok,
            format!(
                "attenuator min eigenvalues ({:.2e}, {:.2e}), verdict {:?}; zero-K verdict {:?} \
                 with triggers {:?}",
                validity.min_eigenvalue_minus,
                validity.min_eigenvalue_plus,
                report.verdict,
                zero_report.verdict,
                zero_report.triggers
            ),
        ))
    });
}

#[test]
fn criterion_11_gibbs_multiplier_closed_form_and_vacuous_budget() {
    run(11, || {
        let h = Hamiltonian::diagonal(&[0.0, 1.0])?;
        let tight = gibbs_state(&h, 0.2)?;
        let ln4 = 4.0_f64.ln();
        let at_mean = gibbs_state(&h, 0.5)?;
        let above_mean = gibbs_state(&h, 0.8)?;
        let ok = (tight.lambda - ln4).abs() <= 1e-8
            && at_mean.lambda == 0.0
            && above_mean.lambda == 0.0;
        Ok((
            ok,
            format!(
                "λ* {:.10} vs ln 4 = {:.10} (six-digit print 1.386294 sits {:+.1e} away and is \
                 superseded by the closed form); budgets at/above the mean give λ* = {} and {}",
                tight.lambda,
                ln4,
                1.386294 - ln4,
                at_mean.lambda,
                above_mean.lambda
            ),
        ))
    });
}
