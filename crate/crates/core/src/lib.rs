//! Semi-classical model of a microwave resonator coupled to a pumped
//! two-level-system bath, with the numerical machinery to verify it and to
//! run the full measurement analysis: transmission-spectrum fitting, photon
//! number calibration, TLS parameter extraction, and bootstrap uncertainty
//! estimation.
//!
//! Internal convention: every rate and frequency inside the library is
//! angular (rad/s). File formats, reports, and the CLI speak ordinary
//! frequency (Hz) and convert exactly once at the boundary.

pub mod calibration;
pub mod config;
pub mod constants;
pub mod error;
pub mod geometry;
pub mod inference;
pub mod io;
pub mod lsq;
pub mod model;
pub mod oracle;
pub mod report;
pub mod spectroscopy;

pub use error::{Error, Result};
