//! Time-variant fog simulation and defogging by temporal photon-number
//! correlation.
//!
//! [`fogsim`] renders foggy measurement events from a clean target, [`recon`]
//! recovers a fog-free image from a sequence of them, and [`metrics`] scores the
//! result against the target.

pub mod cli;
pub mod config;
pub mod error;
pub mod fogsim;
pub mod frame;
pub mod imgio;
pub mod metrics;
pub mod pipeline;
pub mod recon;
pub mod rng;
pub mod targets;

pub use config::{Algorithm, FogParams, Normalization, Pairing, ReconConfig};
pub use error::{Error, Result};
pub use frame::{mean_frame, validate_sequence, Frame, FrameSequence, Timing};
