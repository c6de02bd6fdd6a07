//! Classify bosonic Gaussian channel specifications from their (K, α)
//! parameter matrices: check the two-sided validity inequality, the rank of
//! the symbol map K, and the structural triggers that guarantee a strict gap
//! between the entanglement-assisted and unassisted classical capacities.
//!
//! Three one-mode cases: a beam-splitter attenuator (full-range K), the
//! zero-K channel (a discrete classical-quantum channel in disguise), and an
//! attenuator with asserted degradability.
//!
//! Run with `cargo run --example gaussian_classifier`.

use qchi::gaussian::{
    GaussianChannelSpec, GaussianGapReport, RMatrix, DEFAULT_PSD_TOL, DEFAULT_RANK_TOL,
};

fn print_report(label: &str, report: &GaussianGapReport) {
    println!("{label}");
    println!(
        "  validity: {}  (branch eigenvalues {:+.3e} / {:+.3e})",
        report.validity.valid,
        report.validity.min_eigenvalue_minus,
        report.validity.min_eigenvalue_plus
    );
    println!(
        "  rank K = {} of full range {}   ‖K‖ = {:.6}",
        report.k_rank, report.k_full_range, report.k_norm
    );
    println!("  triggers: {:?}", report.triggers);
    println!("  full-rank-optimizer condition: {}", report.full_rank_optimizer);
    println!("  verdict: {:?}\n", report.verdict);
}

fn main() -> qchi::Result<()> {
    // Beam-splitter attenuator with transmissivity t = 0.5: K = √t·I and the
    // minimal thermal noise α = ((1 − t)/2)·I that saturates validity.
    let t: f64 = 0.5;
    let k = RMatrix::identity(2, 2) * t.sqrt();
    let alpha = RMatrix::identity(2, 2) * ((1.0 - t) / 2.0);
    let attenuator = GaussianChannelSpec::new(1, 1, k, alpha.clone(), vec![])?;
    let report = attenuator.classify_gap(false, DEFAULT_RANK_TOL, DEFAULT_PSD_TOL)?;
    print_report("attenuator, t = 0.5, minimal noise:", &report);

    // Zero symbol map: every input is erased to noise. Classically visible
    // structure only, so no gap conclusion is available.
    let zero_k = GaussianChannelSpec::new(1, 1, RMatrix::zeros(2, 2), alpha * 2.0, vec![])?;
    let report = zero_k.classify_gap(false, DEFAULT_RANK_TOL, DEFAULT_PSD_TOL)?;
    print_report("zero-K channel:", &report);

    // Same attenuator with degradability asserted by the caller: the
    // assertion is passed through (not certified) and combines with the
    // non-zero K to the same guaranteed verdict.
    let k = RMatrix::identity(2, 2) * 0.9_f64.sqrt();
    let alpha = RMatrix::identity(2, 2) * 0.05;
    let asserted = GaussianChannelSpec::new(1, 1, k, alpha, vec![])?;
    let report = asserted.classify_gap(true, DEFAULT_RANK_TOL, DEFAULT_PSD_TOL)?;
    print_report("attenuator, t = 0.9, degradability asserted:", &report);
    Ok(())
}
