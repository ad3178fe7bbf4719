//! Time-domain currents' physical components (CPC) power theory for
//! single-phase circuits with periodic nonsinusoidal voltage.
//!
//! The crate splits the current drawn by a linear time-invariant load into
//! mutually orthogonal components (active, scattered active, Iliovici and
//! scattered reactive), evaluates the associated power quantities, and sizes
//! lossless compensators.
//!
//! ```
//! use cpc_core::{netlist::Network, spectrum::HarmonicSignal, metrics::PowerReport};
//!
//! let u = HarmonicSignal::from_coefficients(1.0, 0.0, &[(1, 10.0, 0.0), (5, 5.0, 0.0)])?;
//! let load = Network::series([Network::Resistor(1.0), Network::Inductor(2.0)]);
//! let i = load.steady_state_current(&u)?;
//! let report = PowerReport::compute(&u, &i)?;
//! assert!((report.power_factor - 0.403).abs() < 1e-3);
//! # Ok::<(), cpc_core::Error>(())
//! ```

pub mod compensate;
pub mod cpc;
mod error;
pub mod metrics;
pub mod netlist;
pub mod spectrum;
pub mod waveform;

pub use error::{Error, Result};
