//! Outage-probability analysis for fluid-antenna receivers under
//! rate-splitting multiple access (RSMA) downlink transmission.
//!
//! A fluid antenna switches among `N` closely spaced ports over an
//! aperture of `W` wavelengths^2 and activates the port with the best
//! instantaneous channel. Port channels are spatially correlated (Jakes
//! model), so the best-port gain is the max of correlated exponentials.
//! This crate computes its distribution through an elliptical Student-t
//! copula, turns the two-stage RSMA decode into effective gain thresholds,
//! and evaluates the resulting outage probability with a randomized
//! quasi-Monte-Carlo multivariate-t CDF — then cross-checks everything
//! with copula-sampled and physical-channel Monte-Carlo engines plus
//! TAS/NOMA benchmark schemes.
//!
//! Module map:
//! - [`numerics`]: special functions and the multivariate normal/t CDF
//!   evaluator (separation of variables + randomized Kronecker lattice);
//! - [`channel`]: port grids, Jakes correlation matrices, correlated
//!   Rayleigh/Rician field generators;
//! - [`copula`]: Student-t/Gaussian copulas, the equivalent-gain CDF/PDF,
//!   exact copula sampling;
//! - [`rsma`]: geometry, SINRs, effective thresholds, exact and asymptotic
//!   outage probability;
//! - [`sim`]: Monte-Carlo engines, FAS/TAS x RSMA/NOMA benchmarks, sweeps;
//! - [`scenario`]: strict TOML scenario files, deterministic CSV output,
//!   dry-run validation.
//!
//! The `examples/` directory holds one runnable example per capability;
//! the `fas-rsma` binary exposes `run`, `validate`, and `version` verbs
//! over scenario files.

pub mod channel;
pub mod copula;
pub mod error;
pub mod numerics;
pub mod rsma;
pub mod scenario;
pub mod sim;

pub use error::{Error, Result};
