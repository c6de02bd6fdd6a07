//! Numerical tolerances and runtime configuration.
//!
//! One `Tolerances` value flows through the whole crate so that every spectral
//! clip, support test, and convergence threshold is pinned in a single place.
//! The CLI can override individual entries via repeated `--tol key=value`
//! flags or a TOML file pointed to by the `QCHI_CONFIG` environment variable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Centralized numerical tolerances.
///
/// Rationale for the defaults:
/// - `eig = 1e-12`: eigenvalues at or below this are treated as exact zeros
///   before any `x ln x` evaluation; the spectrum is then renormalized. This
///   sits well above f64 rounding on d ≤ 64 problems and well below any
///   physically meaningful eigenvalue in this crate's regime.
/// - `supp = 1e-9`: mass of ρ tolerated inside the kernel of σ before
///   H(ρ‖σ) is declared +∞. Looser than `eig` because the leaked mass
///   accumulates d terms of eigenvector rounding.
/// - `kraus_rank = 1e-10`: Choi eigenvalues above this count toward the
///   Choi rank (minimal environment dimension).
/// - `herm`, `psd`, `trace = 1e-8`: input validation thresholds. Inputs come
///   from files or hand construction, so these are deliberately forgiving;
///   internal algebra is held to far tighter bounds by the tests.
/// - `tp = 1e-10`: ‖Σ K†K − I‖ threshold for trace preservation.
/// - `cert = 1e-6`: complementary-slackness and Lagrangian-gap threshold for
///   optimality certificates.
/// - `energy_residual = 1e-10`: accepted |Tr Hρ − ℰ| after multiplier
///   bisection.
/// - `interior_mix = 1e-9`: ε used to pull iterates into the interior of the
///   state space before matrix logarithms.
/// - `rank = 1e-10`, `gauss_psd = 1e-10`: singular-value threshold for rank
///   decisions and PSD slack for Gaussian validity checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub eig: f64,
    pub supp: f64,
    pub kraus_rank: f64,
    pub herm: f64,
    pub psd: f64,
    pub trace: f64,
    pub tp: f64,
    pub cert: f64,
    pub energy_residual: f64,
    pub interior_mix: f64,
    pub rank: f64,
    pub gauss_psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig: 1e-12,
            supp: 1e-9,
            kraus_rank: 1e-10,
            herm: 1e-8,
            psd: 1e-8,
            trace: 1e-8,
            tp: 1e-10,
            cert: 1e-6,
            energy_residual: 1e-10,
            interior_mix: 1e-9,
            rank: 1e-10,
            gauss_psd: 1e-10,
        }
    }
}

impl Tolerances {
    /// Apply one `key=value` override (the CLI's `--tol` flag).
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::BadInput {
                detail: format!("tolerance {key} must be a finite nonnegative number, got {value}"),
            });
        }
        match key {
            "eig" => self.eig = value,
            "supp" => self.supp = value,
            "kraus_rank" => self.kraus_rank = value,
            "herm" => self.herm = value,
            "psd" => self.psd = value,
            "trace" => self.trace = value,
            "tp" => self.tp = value,
            "cert" => self.cert = value,
            "energy_residual" => self.energy_residual = value,
            "interior_mix" => self.interior_mix = value,
            "rank" => self.rank = value,
            "gauss_psd" => self.gauss_psd = value,
            other => {
                return Err(Error::BadInput {
                    detail: format!(
                        "unknown tolerance key '{other}' (known: eig, supp, kraus_rank, herm, psd, \
                         trace, tp, cert, energy_residual, interior_mix, rank, gauss_psd)"
                    ),
                })
            }
        }
        Ok(())
    }

    /// Parse a `key=value` pair as passed on the command line.
    pub fn parse_override(spec: &str) -> Result<(String, f64)> {
        let (key, value) = spec.split_once('=').ok_or_else(|| Error::BadInput {
            detail: format!("--tol expects key=value, got '{spec}'"),
        })?;
        let parsed: f64 = value.parse().map_err(|_| Error::BadInput {
            detail: format!("--tol {key}: '{value}' is not a number"),
        })?;
        Ok((key.to_string(), parsed))
    }
}

/// Runtime configuration: tolerances plus solver budget knobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Numerical tolerances (see [`Tolerances`]).
    pub tolerances: Tolerances,
    /// Number of random restarts for nonconvex solvers.
    pub restarts: usize,
    /// Base RNG seed; every restart derives its own stream from this.
    pub seed: u64,
    /// Iteration cap for inner ascent/descent loops.
    pub max_iterations: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            restarts: 16,
            seed: 0,
            max_iterations: 2000,
        }
    }
}

impl Config {
    /// Load from a TOML string.
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Load from the file named by the `QCHI_CONFIG` environment variable, if
    /// set; otherwise the defaults.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os("QCHI_CONFIG") {
            Some(path) => {
                let text = std::fs::read_to_string(&path)?;
                Self::from_toml(&text)
            }
            None => Ok(Self::default()),
        }
    }
}
