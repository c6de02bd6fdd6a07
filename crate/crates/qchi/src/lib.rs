//! Entropic characteristics of finite-dimensional quantum channels.
//!
//! `qchi` computes the χ-quantity of discrete ensembles, the entropic
//! disturbance caused by a channel, constrained χ-capacity, entanglement-assisted
//! capacity, coherent information, and the structural classifiers (discrete
//! classical-quantum channels, degradability certificates, Gaussian channel
//! validity) that decide when entanglement assistance gives a strict gain.
//!
//! Everything is dense, finite-dimensional linear algebra over `Complex<f64>`.
//! Entropic quantities are returned in nats; the CLI converts to bits on request.
//!
//! # Layout
//!
//! - [`numerics`] — density matrices, pure states, entropy, relative entropy,
//!   partial trace, mutual information, purification, Gibbs states.
//! - [`channels`] — Kraus channels, Stinespring dilation, complementary channels,
//!   truncation channels, c-q constructors and degradability certificates.
//! - [`ensembles`] — discrete ensembles, χ-quantity, entropic disturbance, and
//!   the six-term dilation identity.
//! - [`capacity`] — constrained χ-capacity, entanglement-assisted capacity,
//!   optimality certificates, coherent information, capacity-gap classification.
//! - [`semicontinuity`] — truncation sweeps and lower-semicontinuity witnesses.
//! - [`gaussian`] — matrix-level validity and gap classification for bosonic
//!   Gaussian channel specifications.
//! - [`io`] / [`cli`] — JSON schemas, reports, and the `qchi` binary surface.
//!
//! # Example
//!
//! ```
//! use qchi::channels::KrausChannel;
//! use qchi::ensembles::Ensemble;
//! use qchi::numerics::PureState;
//!
//! let dephasing = KrausChannel::dephasing(2).unwrap();
//! let mu = Ensemble::new(vec![
//!     (0.5, PureState::basis_state(2, 0).unwrap().projector()),
//!     (0.5, PureState::plus().projector()),
//! ])
//! .unwrap();
//! let delta = qchi::ensembles::entropic_disturbance(&dephasing, &mu).unwrap();
//! assert!(delta > 0.0 && delta < 2.0_f64.ln());
//! ```

pub mod capacity;
pub mod channels;
pub mod cli;
pub mod config;
pub mod ensembles;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod numerics;
pub mod sampling;
pub mod semicontinuity;

pub use error::{Error, Result};
