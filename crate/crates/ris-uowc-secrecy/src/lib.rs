//! Physical-layer-secrecy performance analysis for a RIS-aided dual-hop
//! RF / underwater-optical wireless link.
//!
//! The crate computes the average secrecy capacity, the exact and lower-bound
//! secrecy outage probability, and the strictly-positive secrecy capacity of
//! a link in which a source reaches a relay over a reconfigurable-
//! intelligent-surface (RIS) assisted Nakagami-m RF hop while an eavesdropper
//! listens over a second RIS-assisted hop, and the relay forwards over an
//! underwater optical channel with mixture exponential / generalized-Gamma
//! turbulence. Every metric is available on three routes:
//!
//! - the closed-form series built from Meijer G-functions,
//! - an independent adaptive-quadrature evaluation of the defining integrals,
//! - a seeded Monte-Carlo oracle that samples the physical channel sums.
//!
//! See the `examples/` directory for one runnable program per capability and
//! the `uowc-secrecy` binary for configuration-driven sweeps.

pub mod channel;
pub mod error;
pub mod mc;
pub mod metrics;
pub mod specfun;
pub mod sweep;
pub mod water;

pub use error::{Error, Result};
