//! Kinematics and workspace characterization for the 3-(PP(2-(UPS)))
//! redundant parallel mechanism.
//!
//! Modules, bottom-up:
//! - [`geometry`]: design parameters, poses, rotations, inverse kinematics.
//! - [`diffkin`]: Jacobians and their conditioning.
//! - [`reachability`]: redundancy-resolving reachability test.
//! - [`workspace`]: voxelized position workspace and its metrics.
//! - [`orientation`]: symmetry-axis orientation scans and capability indices.
//! - [`analysis`]: the full metric pipeline for one configuration.
//! - [`sweep`]: parameter studies and trend classification.
//! - [`config`] and [`export`]: run configuration and file formats.
//! - [`check`]: the self-test battery.

pub mod analysis;
pub mod check;
pub mod config;
pub mod diffkin;
pub mod error;
pub mod export;
pub mod geometry;
pub mod orientation;
pub mod reachability;
pub mod sweep;
pub mod workspace;

pub use error::{Error, Result};
pub use geometry::{CarriageState, GeometryParams, LegLengths, Pose, RotationMatrix};
pub use reachability::{EtaConvention, JointLimits, ReachabilitySolver};
