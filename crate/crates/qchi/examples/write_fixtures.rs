//! Regenerate the JSON fixture library under `fixtures/`.
//!
//! Demonstrates the file schemas: channels as Kraus families, ensembles as
//! weighted member lists, Hamiltonians, and Gaussian channel specs. Run with
//! an optional output directory argument (default `fixtures`):
//!
//! ```text
//! cargo run --example write_fixtures -- fixtures
//! ```

use std::fs;
use std::path::PathBuf;

use qchi::channels::KrausChannel;
use qchi::ensembles::Ensemble;
use qchi::error::Result;
use qchi::io::{
    matrix_to_json, orthogonal_cq_channel, ChannelFile, EnsembleFile, GaussianFile,
    HamiltonianFile, SCHEMA_VERSION,
};
use qchi::numerics::states::PureState;
use qchi::sampling::{random_channel, rng_for};

fn main() -> Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fixtures"));
    fs::create_dir_all(&dir)?;

    let write = |name: &str, text: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, text)?;
        println!("wrote {}", path.display());
        Ok(())
    };

    // Channels.
    let dephasing = ChannelFile::from_channel(&KrausChannel::dephasing(2)?);
    write("dephasing_qubit.json", serde_json::to_string_pretty(&dephasing)? + "\n")?;

    let depolarizing = ChannelFile::from_channel(&KrausChannel::depolarizing(2, 0.25)?);
    write("depolarizing_qubit_p25.json", serde_json::to_string_pretty(&depolarizing)? + "\n")?;

    let cq = ChannelFile::from_channel(&orthogonal_cq_channel(2, 2)?);
    write("cq_orthogonal_2x2.json", serde_json::to_string_pretty(&cq)? + "\n")?;

    let mut rng = rng_for(7);
    let random = ChannelFile::from_channel(&random_channel(&mut rng, 3, 3, 2)?);
    write("random_channel_3_3_2_seed7.json", serde_json::to_string_pretty(&random)? + "\n")?;

    // Ensembles.
    let zero_plus = Ensemble::new(vec![
        (0.5, PureState::basis_state(2, 0)?.projector()),
        (0.5, PureState::plus().projector()),
    ])?;
    write(
        "ensemble_zero_plus.json",
        serde_json::to_string_pretty(&EnsembleFile::from_ensemble(&zero_plus))? + "\n",
    )?;

    // A mixed-member qutrit ensemble for sweep demos.
    let mut rng = rng_for(11);
    let sweep_mu = qchi::sampling::random_ensemble(&mut rng, 6, 4)?;
    write(
        "ensemble_bipartite_2x3_seed11.json",
        serde_json::to_string_pretty(&EnsembleFile::from_ensemble(&sweep_mu))? + "\n",
    )?;

    // Hamiltonians.
    let two_level = HamiltonianFile {
        schema: SCHEMA_VERSION,
        diagonal: Some(vec![0.0, 1.0]),
        matrix: None,
    };
    write("hamiltonian_diag_0_1.json", serde_json::to_string_pretty(&two_level)? + "\n")?;

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = qchi::numerics::matrix::CMatrix::from_row_slice(
        2,
        2,
        &[
            qchi::numerics::matrix::C64::new(s, 0.0),
            qchi::numerics::matrix::C64::new(s, 0.0),
            qchi::numerics::matrix::C64::new(s, 0.0),
            qchi::numerics::matrix::C64::new(-s, 0.0),
        ],
    );
    let rotated =
        qchi::numerics::states::Hamiltonian::diagonal(&[0.0, 1.0])?.conjugated(&hadamard)?;
    let rotated_file = HamiltonianFile {
        schema: SCHEMA_VERSION,
        diagonal: None,
        matrix: Some(matrix_to_json(rotated.matrix())),
    };
    write("hamiltonian_hadamard_rotated.json", serde_json::to_string_pretty(&rotated_file)? + "\n")?;

    // Gaussian specs.
    let attenuator = GaussianFile {
        schema: SCHEMA_VERSION,
        s_a: 1,
        s_b: 1,
        k: vec![vec![0.5_f64.sqrt(), 0.0], vec![0.0, 0.5_f64.sqrt()]],
        alpha: vec![vec![0.25, 0.0], vec![0.0, 0.25]],
        l: None,
    };
    write("gaussian_attenuator.json", serde_json::to_string_pretty(&attenuator)? + "\n")?;

    let zero_k = GaussianFile {
        schema: SCHEMA_VERSION,
        s_a: 1,
        s_b: 1,
        k: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
        alpha: vec![vec![0.5, 0.0], vec![0.0, 0.5]],
        l: None,
    };
    write("gaussian_zero_k.json", serde_json::to_string_pretty(&zero_k)? + "\n")?;

    Ok(())
}
