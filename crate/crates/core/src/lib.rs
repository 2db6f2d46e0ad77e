//! Link-level simulation and estimation for digital self-interference
//! cancellation in full-duplex OFDM transceivers impaired by oscillator
//! phase noise.
//!
//! The crate is organised bottom-up:
//!
//! * [`signal`] — complex baseband containers, DFT/IDFT conventions,
//!   Gray-coded QAM and OFDM framing.
//! * [`rng`] — seeded, labelled random streams with deterministic forking.
//! * [`impairments`] — Wiener phase noise, Rician multipath, channel
//!   estimation error, AWGN.
//! * [`pn_spectral`] — frequency-domain view of a phase-noise path and the
//!   common-phase-error / inter-carrier-interference decomposition.
//! * [`estimators`] — the windowed Wiener-filter phase tracker, the
//!   per-symbol ("CPE only") and low-pass-filter baselines, and the
//!   arithmetic-cost accounting for all three.
//! * [`link`] — end-to-end trial assembly, the suppression metric, and the
//!   Monte-Carlo sweep drivers.

pub mod error;
pub mod estimators;
pub mod impairments;
pub mod link;
pub mod pn_spectral;
pub mod rng;
pub mod signal;

pub use error::{Error, Result};
