//! Gibbs states as entropy maximizers under an energy budget: solve for the
//! multiplier λ at several budgets of a three-level system and show the two
//! regimes — an active constraint met with equality (λ > 0), and a slack
//! constraint where the maximally mixed state already fits (λ = 0).
//!
//! Run with `cargo run --example gibbs_state`.

use qchi::numerics::{gibbs_state, von_neumann_entropy, Hamiltonian};

fn main() -> qchi::Result<()> {
    let energies = [0.0, 1.0, 2.0];
    let h = Hamiltonian::diagonal(&energies)?;
    let mean = energies.iter().sum::<f64>() / energies.len() as f64;
    println!("H = diag(0, 1, 2), ground energy 0, mean energy {mean:.4}\n");
    println!("  budget   λ             achieved energy   entropy (nats)");
    for budget in [0.2, 0.5, 0.9, 1.0, 1.5, 3.0] {
        let g = gibbs_state(&h, budget)?;
        println!(
            "  {:>5.2}   {:>10.6}   {:>15.12}   {:.12}",
            budget,
            g.lambda,
            g.energy,
            von_neumann_entropy(&g.state)
        );
    }
    println!("\nbudgets at or above the mean energy leave the constraint slack:");
    println!("λ = 0 and the state is maximally mixed with entropy ln 3 = {:.12}.", 3.0_f64.ln());

    // Qubit closed form: for H = diag(0, 1) and E = 0.2 the multiplier is
    // ln((1 − E)/E) = ln 4.
    let qubit = gibbs_state(&Hamiltonian::diagonal(&[0.0, 1.0])?, 0.2)?;
    println!(
        "\nqubit check: λ(diag(0,1), E = 0.2) = {:.12}, ln 4 = {:.12}, |diff| = {:.3e}",
        qubit.lambda,
        4.0_f64.ln(),
        (qubit.lambda - 4.0_f64.ln()).abs()
    );
    Ok(())
}
