//! Entropy and χ-quantity basics: build a qubit ensemble, compute its von
//! Neumann entropies, and evaluate the χ-quantity two ways.
//!
//! Run with `cargo run --example entropy_and_chi`.

use qchi::config::Tolerances;
use qchi::ensembles::{chi_quantity_relative_form, chi_quantity_with, Ensemble};
use qchi::numerics::{relative_entropy, von_neumann_entropy, PureState};

fn main() -> qchi::Result<()> {
    let tol = Tolerances::default();

    // Ensemble of two pure states: |0⟩ and |+⟩, equal weights.
    let zero = PureState::basis_state(2, 0)?.projector();
    let plus = PureState::plus().projector();
    let mu = Ensemble::new(vec![(0.5, zero.clone()), (0.5, plus.clone())])?;

    let average = mu.average_state();
    println!("average state entropy      H(ρ̄)  = {:.9} nats", von_neumann_entropy(&average));
    println!("member entropies           H(ρ_i) = {:.9}, {:.9}",
        von_neumann_entropy(&zero),
        von_neumann_entropy(&plus));

    // χ as entropy difference: H(ρ̄) − Σ π_i H(ρ_i).
    let chi_direct = chi_quantity_with(&mu, &tol);
    // χ as average relative entropy: Σ π_i H(ρ_i ‖ ρ̄).
    let chi_relative = chi_quantity_relative_form(&mu, &tol)?;
    println!("χ (entropy-difference form) = {chi_direct:.12} nats");
    println!("χ (relative-entropy form)   = {chi_relative:.12} nats");
    println!("forms agree to              {:.1e}", (chi_direct - chi_relative).abs());

    // The relative entropy underlying the second form.
    for (label, state) in [("|0⟩⟨0|", &zero), ("|+⟩⟨+|", &plus)] {
        println!(
            "H({label} ‖ ρ̄)             = {:.9} nats",
            relative_entropy(state, &average)?
        );
    }

    println!(
        "\nχ in bits: {:.9} (divide nats by ln 2)",
        chi_direct / std::f64::consts::LN_2
    );
    Ok(())
}
