//! Classify the gap between the entanglement-assisted capacity C_ea and the
//! unassisted χ-capacity C̄ for the dephasing qubit under two Hamiltonians:
//!
//! * H aligned with the dephasing basis — the channel is classical-quantum in
//!   the constraint's eigenbasis and the two capacities coincide;
//! * H rotated by a Hadamard — the off-diagonal images no longer vanish and a
//!   strict gap is guaranteed.
//!
//! Run with `cargo run --example ea_vs_chi_gap`.

use std::f64::consts::FRAC_1_SQRT_2;

use qchi::capacity::{capacity_gap, ConstraintSpec, GapReport, SolverOptions};
use qchi::channels::KrausChannel;
use qchi::numerics::{CMatrix, Hamiltonian, C64};

fn print_report(label: &str, report: &GapReport) {
    println!("{label}");
    println!("  C̄ (χ-capacity)        = {:.9} nats", report.chi.value);
    println!("  C_ea                   = {:.9} nats", report.ea.value);
    println!("  gap C_ea − C̄          = {:.9} nats", report.gap);
    println!(
        "  c-q in canonical basis = {} (residual {:.3e})",
        report.cq_canonical.0, report.cq_canonical.1
    );
    println!(
        "  c-q in H eigenbasis    = {} (residual {:.3e})",
        report.cq_hamiltonian_basis.0, report.cq_hamiltonian_basis.1
    );
    for trigger in &report.triggers {
        println!("  trigger: {trigger}");
    }
    println!("  verdict: {}", report.verdict);
}

fn main() -> qchi::Result<()> {
    let phi = KrausChannel::dephasing(2)?;
    let opts = SolverOptions {
        restarts: 8,
        seed: 5,
        ..SolverOptions::default()
    };

    // Constraint aligned with the dephasing basis: no gap to be had.
    let aligned = ConstraintSpec::new(Hamiltonian::diagonal(&[0.0, 1.0])?, 0.2)?;
    let report = capacity_gap(&phi, &aligned, None, &opts)?;
    print_report("dephasing qubit, H = diag(0, 1), E = 0.2:", &report);

    // Hadamard-rotated constraint: the energy eigenbasis no longer commutes
    // with the dephasing basis, which opens a strict gap.
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let hadamard = CMatrix::from_row_slice(2, 2, &[s, s, s, -s]);
    let rotated = ConstraintSpec::new(
        Hamiltonian::diagonal(&[0.0, 1.0])?.conjugated(&hadamard)?,
        0.2,
    )?;
    let report = capacity_gap(&phi, &rotated, None, &opts)?;
    println!();
    print_report("dephasing qubit, Hadamard-rotated H, E = 0.2:", &report);
    Ok(())
}
