//! Coverage analysis for a two-dimensional drone corridor served by two
//! uptilted base-station antennas.
//!
//! Two base stations sit at ground level `d1` metres apart, each with a
//! rectangular main beam spanning elevations `(alpha, alpha + beta)`. Drones
//! fly uniformly inside the altitude band `[h1, h2]` and attach to the nearer
//! station. The crate provides:
//!
//! * [`geometry`]: corridor/beam types, elevation-angle transforms, the
//!   elevation density and the five-way coverage-regime classifier.
//! * [`link_budget`]: radio parameters, beam gain and the exact SINR of a
//!   drone position.
//! * [`analysis`]: closed-form outage probability (with its slope in the
//!   uptilt angle) and the per-regime average SINR.
//! * [`montecarlo`]: a seeded, thread-count-independent Monte Carlo oracle.
//! * [`optimizer`]: search for the outage-minimizing uptilt angle.
//! * [`quadrature`]: adaptive Gauss-Kronrod integration.
//!
//! All angles are radians. Decibel quantities are converted to linear units
//! at construction time.
//!
//! ```
//! use uptilt_core::{analysis, geometry::{BeamConfig, CorridorGeometry}};
//!
//! let geom = CorridorGeometry::new(1000.0, 150.0, 250.0).unwrap();
//! let beam = BeamConfig::new(15f64.to_radians(), 30f64.to_radians(), 10.0).unwrap();
//! let out = analysis::outage(&geom, &beam);
//! assert!((out.probability - 0.4).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod link_budget;
pub mod montecarlo;
pub mod optimizer;
pub mod quadrature;

pub use error::{Error, Result};
