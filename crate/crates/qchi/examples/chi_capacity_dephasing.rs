//! Energy-constrained χ-capacity of the completely dephasing qubit.
//!
//! With H = diag(0, 1) and budget E < 1/2 the optimal strategy sends the
//! basis states with weights (1−E, E), so the capacity is exactly the binary
//! entropy h(E) and the solver's output can be checked against a closed form.
//!
//! Run with `cargo run --example chi_capacity_dephasing`.

use qchi::capacity::{chi_capacity, ConstraintSpec, SolverOptions};
use qchi::channels::KrausChannel;
use qchi::numerics::Hamiltonian;

fn binary_entropy(p: f64) -> f64 {
    let q = 1.0 - p;
    -(p * p.ln() + q * q.ln())
}

fn main() -> qchi::Result<()> {
    let phi = KrausChannel::dephasing(2)?;
    let constraint = ConstraintSpec::new(Hamiltonian::diagonal(&[0.0, 1.0])?, 0.2)?;
    let opts = SolverOptions {
        restarts: 8,
        seed: 1,
        record_trace: true,
        ..SolverOptions::default()
    };

    let result = chi_capacity(&phi, &constraint, &opts)?;
    let exact = binary_entropy(0.2);

    println!("χ-capacity(dephasing, diag(0,1), E = 0.2)");
    println!("  solver value   = {:.12} nats", result.value);
    println!("  closed form    = {:.12} nats  (h(0.2))", exact);
    println!("  deviation      = {:.3e}", (result.value - exact).abs());
    println!("  multiplier λ   = {:.9}", result.lambda);
    println!("  iterations     = {}", result.iterations);
    println!("  converged      = {}", result.converged);

    if let Some(cert) = &result.certificate {
        println!("  certificate    : lagrangian gap {:.3e}, member deviation {:.3e},",
            cert.lagrangian_gap, cert.member_deviation);
        println!("                   slackness {:.3e}, probes {}, passed = {}",
            cert.slackness_residual, cert.n_probe_restarts, cert.passed);
    }

    if let Some(mu) = result.optimizer.as_ensemble() {
        println!("  optimizer ensemble ({} members):", mu.len());
        for (w, rho) in mu.iter() {
            let diag: Vec<String> = (0..rho.dim())
                .map(|k| format!("{:.6}", rho.matrix()[(k, k)].re))
                .collect();
            println!("    weight {:.6}  diag({})", w, diag.join(", "));
        }
        let avg = mu.average_state();
        println!(
            "  average input energy = {:.9}  (budget 0.2)",
            avg.expectation(constraint.hamiltonian())?
        );
    }

    if !result.history.is_empty() {
        let first = result.history.first().unwrap();
        let last = result.history.last().unwrap();
        println!(
            "  trace: {} records, objective {:.6} → {:.6}",
            result.history.len(),
            first.objective,
            last.objective
        );
    }
    Ok(())
}
