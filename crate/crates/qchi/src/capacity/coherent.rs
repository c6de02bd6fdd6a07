//! Coherent information of a channel at a fixed input, along two independent
//! evaluation routes.

use crate::channels::KrausChannel;
use crate::config::Tolerances;
use crate::ensembles::chi_quantity_with;
use crate::error::{Error, Result};
use crate::numerics::entropy::von_neumann_entropy_with;
use crate::numerics::states::DensityMatrix;

use super::ea::spectral_ensemble;

fn check_dims(phi: &KrausChannel, rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != phi.dim_in() {
        return Err(Error::DimMismatch {
            context: "coherent information input state vs channel",
            expected: phi.dim_in(),
            got: rho.dim(),
        });
    }
    Ok(())
}

/// Coherent information I_c(Φ, ρ) = H(Φρ) − H(Φ̂ρ) with Φ̂ a complementary
/// channel of a minimal dilation.
pub fn coherent_information(
    phi: &KrausChannel,
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    check_dims(phi, rho)?;
    let minimal = phi.minimal_kraus(tol)?;
    let comp = minimal.complementary();
    let h_out = von_neumann_entropy_with(&minimal.apply(rho)?, tol);
    let h_env = von_neumann_entropy_with(&comp.apply(rho)?, tol);
    Ok(h_out - h_env)
}

/// Coherent information via the χ route: for the spectral ensemble μ of ρ,
/// every member is pure, so its direct and environment output entropies agree
/// and I_c(Φ, ρ) = χ(Φ(μ)) − χ(Φ̂(μ)). Independent arithmetic from
/// [`coherent_information`]; the two agree within numerical tolerance.
pub fn ci_via_chi(phi: &KrausChannel, rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    check_dims(phi, rho)?;
    let minimal = phi.minimal_kraus(tol)?;
    let comp = minimal.complementary();
    let mu = spectral_ensemble(rho, tol.eig)?;
    let chi_out = chi_quantity_with(&mu.map(&minimal)?, tol);
    let chi_env = chi_quantity_with(&mu.map(&comp)?, tol);
    Ok(chi_out - chi_env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_channel, random_density, rng_for};

    #[test]
    fn identity_channel_coherent_information_is_input_entropy() {
        let phi = KrausChannel::identity(2).unwrap();
        let rho = DensityMatrix::from_probabilities(&[0.8, 0.2]).unwrap();
        let tol = Tolerances::default();
        let ic = coherent_information(&phi, &rho, &tol).unwrap();
        assert!((ic - 0.5004024235381879).abs() < 1e-10);
    }

    #[test]
    fn dephasing_coherent_information_vanishes() {
        // The completely dephasing qubit channel has Φ̂ρ unitarily equivalent
        // to Φρ, so I_c ≡ 0 for every input.
        let phi = KrausChannel::dephasing(2).unwrap();
        let tol = Tolerances::default();
        let mut rng = rng_for(7);
        for _ in 0..6 {
            let rho = random_density(&mut rng, 2, 2);
            let ic = coherent_information(&phi, &rho, &tol).unwrap();
            assert!(ic.abs() < 1e-9, "ic {ic}");
        }
    }

    #[test]
    fn chi_route_agrees_with_entropy_route() {
        let tol = Tolerances::default();
        let mut rng = rng_for(13);
        for _ in 0..10 {
            let phi = random_channel(&mut rng, 3, 2, 2).unwrap();
            let rho = random_density(&mut rng, 3, 3);
            let a = coherent_information(&phi, &rho, &tol).unwrap();
            let b = ci_via_chi(&phi, &rho, &tol).unwrap();
            assert!((a - b).abs() <= 1e-8, "routes {a} vs {b}");
        }
    }
}
