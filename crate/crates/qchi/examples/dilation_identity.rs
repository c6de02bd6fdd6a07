//! Evaluate all six terms of the dilation identity
//!
//!     χ(μ) + I(B:E)_{Vρ̄V*} = χ(Φ(μ)) + χ(Φ̂(μ)) + Σ_i π_i I(B:E)_{Vρ_iV*}
//!
//! first for the dephasing qubit with the {|0⟩, |+⟩} ensemble, then for a
//! randomly sampled channel, and check the residual in both cases.
//!
//! Run with `cargo run --example dilation_identity`.

use qchi::channels::KrausChannel;
use qchi::config::Tolerances;
use qchi::ensembles::{dilation_identity, disturbance_upper_bound, Ensemble};
use qchi::numerics::PureState;
use qchi::sampling::{random_channel, random_ensemble, rng_for};

fn print_report(label: &str, report: &qchi::ensembles::DilationIdentityReport) {
    println!("{label}");
    println!("  χ(input)              = {:.12}", report.chi_input);
    println!("  I(B:E) of average     = {:.12}", report.mi_average);
    println!("  χ(output)             = {:.12}", report.chi_output);
    println!("  χ(environment)        = {:.12}", report.chi_environment);
    println!("  mean member I(B:E)    = {:.12}", report.mean_mi_members);
    println!("  LHS = {:.12}   RHS = {:.12}", report.lhs(), report.rhs());
    println!("  residual              = {:.3e}", report.residual);
    println!("  disturbance χin − χout = {:.12}", report.disturbance());
}

fn main() -> qchi::Result<()> {
    let tol = Tolerances::default();

    // Worked qubit case: complete dephasing on {|0⟩, |+⟩}.
    let phi = KrausChannel::dephasing(2)?;
    let mu = Ensemble::new(vec![
        (0.5, PureState::basis_state(2, 0)?.projector()),
        (0.5, PureState::plus().projector()),
    ])?;
    let report = dilation_identity(&phi, &mu, &tol)?;
    print_report("dephasing qubit, {|0⟩, |+⟩}:", &report);
    println!(
        "  disturbance bound     = {:.12}  (min{{ln d_A, 2 ln d_E}})",
        disturbance_upper_bound(&phi, &tol)
    );

    // A generic channel: 3 → 2 with a 4-dimensional environment.
    let mut rng = rng_for(42);
    let psi = random_channel(&mut rng, 3, 2, 4)?;
    let nu = random_ensemble(&mut rng, 3, 5)?;
    let generic = dilation_identity(&psi, &nu, &tol)?;
    println!();
    print_report("random 3→2 channel, 5-member ensemble:", &generic);
    println!(
        "  disturbance bound     = {:.12}",
        disturbance_upper_bound(&psi, &tol)
    );
    Ok(())
}
