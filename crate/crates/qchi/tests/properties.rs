//! Randomized property tests for the library's structural invariants:
//! entropy ranges, data-processing monotonicity, dilation consistency,
//! capacity-objective regularity, and classifier invariances.

use proptest::prelude::*;

use qchi::capacity::{channel_mutual_information, chi_capacity, ea_capacity, ConstraintSpec, SolverOptions};
use qchi::channels::KrausChannel;
use qchi::config::Tolerances;
use qchi::ensembles::{
    chi_quantity_relative_form, chi_quantity_with, disturbance_upper_bound,
    entropic_disturbance_with,
};
use qchi::gaussian::{GaussianChannelSpec, RMatrix};
use qchi::numerics::entropy::mutual_information_with;
use qchi::numerics::{
    gibbs_state, hermitian_eigen, partial_trace, purify, relative_entropy,
    von_neumann_entropy_with, BipartiteState, C64, CMatrix, DensityMatrix, Hamiltonian, Subsystem,
};
use qchi::sampling::{
    gaussian_matrix, random_channel, random_density, random_ensemble, random_isometry, rng_for,
};
use rand::Rng;

fn tolerances() -> Tolerances {
    Tolerances::default()
}

/// Frobenius distance between the matrices of two states.
fn fro(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    (a.matrix() - b.matrix()).norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn entropy_stays_between_zero_and_ln_d(seed in any::<u64>(), d in 2usize..=6, rank in 1usize..=6) {
        let tol = tolerances();
        let rho = random_density(&mut rng_for(seed), d, rank.min(d));
        let h = von_neumann_entropy_with(&rho, &tol);
        prop_assert!(h >= 0.0, "entropy {h} negative");
        prop_assert!(h <= (d as f64).ln() + 1e-9, "entropy {h} above ln {d}");
    }

    #[test]
    fn relative_entropy_obeys_klein_and_pinsker(seed in any::<u64>(), d in 2usize..=5, rank in 1usize..=5) {
        let mut rng = rng_for(seed);
        let rho = random_density(&mut rng, d, rank.min(d));
        let sigma = random_density(&mut rng, d, d); // full rank: support condition holds
        let re = relative_entropy(&rho, &sigma).unwrap();
        prop_assert!(re >= -1e-12, "relative entropy {re} negative");
        // Pinsker (with trace norm ≥ Frobenius norm) gives a quantitative
        // "equality iff equal": H(ρ‖σ) ≥ ½‖ρ−σ‖_F².
        let gap = 0.5 * fro(&rho, &sigma).powi(2);
        prop_assert!(re >= gap - 1e-9, "relative entropy {re} below Pinsker floor {gap}");
    }

    #[test]
    fn mutual_information_bounded_by_twice_smaller_marginal_entropy(
        seed in any::<u64>(), d_b in 2usize..=3, d_e in 2usize..=4, rank in 1usize..=12,
    ) {
        let tol = tolerances();
        let dim = d_b * d_e;
        let joint = random_density(&mut rng_for(seed), dim, rank.min(dim));
        let omega = BipartiteState::new(d_b, d_e, joint).unwrap();
        let i = mutual_information_with(&omega, &tol);
        let h_b = von_neumann_entropy_with(&omega.marginal(Subsystem::B), &tol);
        let h_e = von_neumann_entropy_with(&omega.marginal(Subsystem::E), &tol);
        prop_assert!(i >= -1e-9, "mutual information {i} negative");
        prop_assert!(i <= 2.0 * h_b.min(h_e) + 1e-9, "I {i} exceeds 2·min({h_b}, {h_e})");
    }

    #[test]
    fn purification_round_trips_through_the_partial_trace(
        seed in any::<u64>(), d in 2usize..=6, rank in 1usize..=6,
    ) {
        let rho = random_density(&mut rng_for(seed), d, rank.min(d));
        let phi = purify(&rho);
        let back = partial_trace(phi.projector().matrix(), d, d, Subsystem::B);
        prop_assert!(fro(&back, &rho) <= 1e-10, "round-trip error {}", fro(&back, &rho));
    }

    #[test]
    fn all_channel_constructors_are_trace_preserving(
        seed in any::<u64>(), d_in in 2usize..=4, d_out in 2usize..=4, d_env in 1usize..=4,
    ) {
        let mut rng = rng_for(seed);
        let d_env = d_env.max(d_in.div_ceil(d_out));
        let random = random_channel(&mut rng, d_in, d_out, d_env).unwrap();

        // Truncation channel onto a random subspace; the anchor state must be
        // supported inside that subspace, so use its maximally mixed state.
        let r = 1 + (seed as usize) % d_in;
        let w = random_isometry(&mut rng, d_in, r);
        let projector = &w * w.adjoint();
        let anchor = DensityMatrix::new(&projector * C64::new(1.0 / r as f64, 0.0)).unwrap();
        let truncation = KrausChannel::truncation(&projector, &anchor).unwrap();

        // Classical-quantum channel with random output states.
        let outputs: Vec<DensityMatrix> =
            (0..d_in).map(|_| random_density(&mut rng, d_out, d_out)).collect();
        let cq = KrausChannel::cq_channel(&outputs).unwrap();

        for phi in [&random, &truncation, &cq] {
            let d = phi.dim_in();
            let mut acc = CMatrix::zeros(d, d);
            for k in phi.kraus() {
                acc += k.adjoint() * k;
            }
            let residual = (acc - CMatrix::identity(d, d)).norm();
            prop_assert!(residual <= 1e-10, "TP residual {residual}");
        }
    }

    #[test]
    fn dilated_state_marginals_reproduce_channel_and_complement(
        seed in any::<u64>(), d_in in 2usize..=4, d_out in 2usize..=3, d_env in 1usize..=3,
    ) {
        let mut rng = rng_for(seed);
        let d_env = d_env.max(d_in.div_ceil(d_out));
        let phi = random_channel(&mut rng, d_in, d_out, d_env).unwrap();
        let rho = random_density(&mut rng, d_in, d_in);
        let dilated = phi.dilated_state(&rho).unwrap();
        let through = phi.apply(&rho).unwrap();
        let env = phi.complementary().apply(&rho).unwrap();
        prop_assert!(fro(&dilated.marginal(Subsystem::B), &through) <= 1e-10);
        prop_assert!(fro(&dilated.marginal(Subsystem::E), &env) <= 1e-10);
    }

    #[test]
    fn entropy_triangle_inequality_through_the_environment(
        seed in any::<u64>(), d_in in 2usize..=4, d_out in 2usize..=4, d_env in 1usize..=4,
    ) {
        let tol = tolerances();
        let mut rng = rng_for(seed);
        let d_env = d_env.max(d_in.div_ceil(d_out));
        let phi = random_channel(&mut rng, d_in, d_out, d_env).unwrap();
        let rho = random_density(&mut rng, d_in, 1 + (seed as usize) % d_in);
        let h_in = von_neumann_entropy_with(&rho, &tol);
        let h_out = von_neumann_entropy_with(&phi.apply(&rho).unwrap(), &tol);
        let h_env = von_neumann_entropy_with(&phi.complementary().apply(&rho).unwrap(), &tol);
        prop_assert!(
            (h_in - h_out).abs() <= h_env + 1e-9,
            "|{h_in} - {h_out}| exceeds environment entropy {h_env}"
        );
    }

    #[test]
    fn the_two_chi_formulas_agree(seed in any::<u64>(), d in 2usize..=5, members in 1usize..=6) {
        let tol = tolerances();
        let mu = random_ensemble(&mut rng_for(seed), d, members).unwrap();
        let direct = chi_quantity_with(&mu, &tol);
        let relative = chi_quantity_relative_form(&mu, &tol).unwrap();
        prop_assert!((direct - relative).abs() <= 1e-9, "χ formulas differ: {direct} vs {relative}");
    }

    #[test]
    fn chi_never_increases_under_a_channel(
        seed in any::<u64>(), d_in in 2usize..=4, d_out in 2usize..=4,
        d_env in 1usize..=4, members in 1usize..=5,
    ) {
        let tol = tolerances();
        let mut rng = rng_for(seed);
        let d_env = d_env.max(d_in.div_ceil(d_out));
        let phi = random_channel(&mut rng, d_in, d_out, d_env).unwrap();
        let mu = random_ensemble(&mut rng, d_in, members).unwrap();
        let before = chi_quantity_with(&mu, &tol);
        let after = chi_quantity_with(&mu.map(&phi).unwrap(), &tol);
        prop_assert!(after <= before + 1e-9, "χ grew from {before} to {after}");
    }

    #[test]
    fn disturbance_sits_inside_its_bounds(
        seed in any::<u64>(), d_in in 2usize..=4, d_out in 2usize..=4,
        d_env in 1usize..=4, members in 1usize..=5,
    ) {
        let tol = tolerances();
        let mut rng = rng_for(seed);
        let d_env = d_env.max(d_in.div_ceil(d_out));
        let phi = random_channel(&mut rng, d_in, d_out, d_env).unwrap();
        let mu = random_ensemble(&mut rng, d_in, members).unwrap();
        let delta = entropic_disturbance_with(&phi, &mu, &tol).unwrap();
        let bound = disturbance_upper_bound(&phi, &tol);
        prop_assert!(delta >= -1e-9, "disturbance {delta} negative");
        prop_assert!(delta <= bound + 1e-9, "disturbance {delta} above bound {bound}");
    }

    #[test]
    fn mutual_information_never_increases_under_local_truncation(
        seed in any::<u64>(), d_b in 2usize..=3, d_e in 2usize..=3, rank in 1usize..=9,
    ) {
        let tol = tolerances();
        let mut rng = rng_for(seed);
        let dim = d_b * d_e;
        let joint = random_density(&mut rng, dim, rank.min(dim));
        let omega = BipartiteState::new(d_b, d_e, joint).unwrap();
        let before = mutual_information_with(&omega, &tol);

        let r = 1 + (seed as usize) % d_e;
        let w = random_isometry(&mut rng, d_e, r);
        let projector = &w * w.adjoint();
        let anchor = DensityMatrix::new(&projector * C64::new(1.0 / r as f64, 0.0)).unwrap();
        let local = KrausChannel::identity(d_b)
            .unwrap()
            .tensor(&KrausChannel::truncation(&projector, &anchor).unwrap())
            .unwrap();
        let truncated = BipartiteState::new(d_b, d_e, local.apply(omega.joint()).unwrap()).unwrap();
        let after = mutual_information_with(&truncated, &tol);
        prop_assert!(after <= before + 1e-9, "I(B:E) grew from {before} to {after}");
    }

    #[test]
    fn gibbs_state_meets_the_budget_and_maximizes_entropy(
        seed in any::<u64>(), d in 2usize..=5, budget_frac in 0.05f64..=1.3,
    ) {
        let tol = tolerances();
        let mut rng = rng_for(seed);
        let energies: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 2.0).collect();
        let h = Hamiltonian::diagonal(&energies).unwrap();
        let e_min = h.ground_energy();
        let mean: f64 = energies.iter().sum::<f64>() / d as f64;
        // Keep strictly above the ground energy; allow budgets beyond the mean.
        let budget = e_min + budget_frac * (mean - e_min).max(1e-6) + 1e-6;
        let g = gibbs_state(&h, budget).unwrap();
        let target = budget.min(mean);
        prop_assert!((g.energy - target).abs() <= 1e-10, "energy {} vs target {target}", g.energy);
        // Max-entropy property among sampled states obeying the same budget.
        for _ in 0..5 {
            let sigma = random_density(&mut rng, d, d);
            let e_sigma = sigma.expectation(&h).unwrap();
            if e_sigma <= g.energy + 1e-12 {
                let h_sigma = von_neumann_entropy_with(&sigma, &tol);
                prop_assert!(
                    h_sigma <= g.entropy + 1e-9,
                    "sampled state beats Gibbs entropy: {h_sigma} > {}", g.entropy
                );
            }
        }
    }

    #[test]
    fn minimal_kraus_count_matches_the_operator_span_rank(
        seed in any::<u64>(), d_in in 2usize..=3, d_out in 2usize..=3, d_env in 1usize..=4,
    ) {
        let tol = tolerances();
        let mut rng = rng_for(seed);
        let d_env = d_env.max(d_in.div_ceil(d_out));
        let phi = random_channel(&mut rng, d_in, d_out, d_env).unwrap();
        let minimal = phi.minimal_kraus(&tol).unwrap();

        // Independent oracle: the minimal environment dimension is the rank
        // of the span of the Kraus family, read off a stacked-vec SVD.
        let mut stack = CMatrix::zeros(phi.kraus().len(), d_in * d_out);
        for (i, k) in phi.kraus().iter().enumerate() {
            for (j, entry) in k.iter().enumerate() {
                stack[(i, j)] = *entry;
            }
        }
        let span_rank = stack
            .svd(false, false)
            .singular_values
            .iter()
            .filter(|s| **s > 1e-10)
            .count();
        prop_assert_eq!(minimal.kraus().len(), span_rank);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn channel_mutual_information_is_concave(
        seed in any::<u64>(), d_in in 2usize..=3, d_out in 2usize..=3,
    ) {
        let tol = tolerances();
        let mut rng = rng_for(seed);
        let phi = random_channel(&mut rng, d_in, d_out, 2).unwrap();
        let rho1 = random_density(&mut rng, d_in, d_in);
        let rho2 = random_density(&mut rng, d_in, d_in);
        let mix = DensityMatrix::new(
            (rho1.matrix() + rho2.matrix()) * C64::new(0.5, 0.0),
        ).unwrap();
        let i1 = channel_mutual_information(&phi, &rho1, &tol).unwrap();
        let i2 = channel_mutual_information(&phi, &rho2, &tol).unwrap();
        let im = channel_mutual_information(&phi, &mix, &tol).unwrap();
        prop_assert!(
            im >= 0.5 * (i1 + i2) - 1e-9,
            "midpoint value {im} below chord {}", 0.5 * (i1 + i2)
        );
    }

    #[test]
    fn gaussian_validity_is_invariant_under_mode_relabeling(
        seed in any::<u64>(), s_a in 1usize..=3, s_b in 1usize..=3,
    ) {
        let mut rng = rng_for(seed);
        let real = |rng: &mut rand_chacha::ChaCha8Rng, r: usize, c: usize| {
            RMatrix::from_fn(r, c, |_, _| rng.random::<f64>() * 2.0 - 1.0)
        };
        let k = real(&mut rng, 2 * s_a, 2 * s_b);
        let raw = real(&mut rng, 2 * s_b, 2 * s_b);
        let alpha = (&raw + raw.transpose()) * 0.5;
        let spec = GaussianChannelSpec::new(s_a, s_b, k.clone(), alpha.clone(), vec![]).unwrap();
        let base = spec.validate(1e-10);

        // Random block permutations of the input and output modes.
        let block_permutation = |rng: &mut rand_chacha::ChaCha8Rng, s: usize| {
            let mut order: Vec<usize> = (0..s).collect();
            for i in (1..s).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            let mut p = RMatrix::zeros(2 * s, 2 * s);
            for (new, old) in order.iter().enumerate() {
                p[(2 * new, 2 * old)] = 1.0;
                p[(2 * new + 1, 2 * old + 1)] = 1.0;
            }
            p
        };
        let p_a = block_permutation(&mut rng, s_a);
        let p_b = block_permutation(&mut rng, s_b);
        let k2 = &p_a * &k * p_b.transpose();
        let alpha2 = &p_b * &alpha * p_b.transpose();
        let relabeled = GaussianChannelSpec::new(s_a, s_b, k2, alpha2, vec![]).unwrap();
        let moved = relabeled.validate(1e-10);

        prop_assert_eq!(base.valid, moved.valid);
        prop_assert!((base.min_eigenvalue_minus - moved.min_eigenvalue_minus).abs() <= 1e-9);
        prop_assert!((base.min_eigenvalue_plus - moved.min_eigenvalue_plus).abs() <= 1e-9);
        prop_assert_eq!(spec.k_rank(1e-10), relabeled.k_rank(1e-10));
    }
}

/// Accepted iterations of both optimizers never decrease the objective.
#[test]
fn optimizer_traces_are_monotone() {
    let mut opts = SolverOptions {
        restarts: 2,
        seed: 11,
        record_trace: true,
        ..SolverOptions::default()
    };
    opts.max_iterations = 400;

    for seed in [1_u64, 2, 3] {
        let mut rng = rng_for(seed);
        let phi = random_channel(&mut rng, 2, 2, 2).unwrap();
        let energies = [0.0, 1.0 + seed as f64 * 0.3];
        let c = ConstraintSpec::new(Hamiltonian::diagonal(&energies).unwrap(), 0.4).unwrap();

        let chi = chi_capacity(&phi, &c, &opts).unwrap();
        for pair in chi.history.windows(2) {
            assert!(
                pair[1].objective >= pair[0].objective - 1e-9,
                "χ trace decreased at iteration {}",
                pair[1].iteration
            );
        }
        assert!(!chi.history.is_empty());

        let ea = ea_capacity(&phi, &c, &opts).unwrap();
        for pair in ea.history.windows(2) {
            assert!(
                pair[1].objective >= pair[0].objective - 1e-9,
                "mutual-information trace decreased at iteration {}",
                pair[1].iteration
            );
        }
        assert!(!ea.history.is_empty());
    }
}

/// The eigenvalue routine used across the crate agrees with a re-projection
/// check: reconstructing the matrix from its eigensystem is lossless.
#[test]
fn hermitian_eigendecomposition_reconstructs() {
    let mut rng = rng_for(99);
    for d in 2..=6 {
        let a = gaussian_matrix(&mut rng, d, d);
        let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        let (vals, vecs) = hermitian_eigen(&h).unwrap();
        let mut diag = CMatrix::zeros(d, d);
        for (i, v) in vals.iter().enumerate() {
            diag[(i, i)] = C64::new(*v, 0.0);
        }
        let rebuilt = &vecs * diag * vecs.adjoint();
        assert!((rebuilt - &h).norm() <= 1e-10 * (1.0 + h.norm()));
        assert!(vals.windows(2).all(|w| w[0] >= w[1]), "eigenvalues not descending");
    }
}
