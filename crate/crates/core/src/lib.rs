//! Synthesis of event-based vision datasets for planetary landing.
//!
//! The pipeline turns a landing-scenario description into four linked artifacts:
//!
//! 1. **Trajectories** ([`trajopt`]): mass-optimal 12-DOF powered-descent arcs,
//!    obtained by Hermite-Simpson direct collocation and an in-repo
//!    augmented-Lagrangian NLP solver, with continuation across
//!    boundary-condition families.
//! 2. **Frames** ([`terrain`]): a procedural cratered lunar sphere rendered
//!    through an ideal pinhole camera at camera-rate poses interpolated from
//!    the optimal trajectory ([`scenario`]).
//! 3. **Motion fields** ([`motion_field`]): analytic per-pixel image-plane
//!    velocity ground truth under planar, spherical or ray-cast surface
//!    models, validated against a finite-difference re-projection oracle.
//! 4. **Events** ([`emulator`]): a physically motivated DVS pixel model
//!    (lin-log response, IIR low-pass, per-pixel thresholds, leak/shot/hot
//!    noise) converting frame sequences into asynchronous event streams.
//!
//! All file formats are bit-exact and deterministic given a seed; see
//! [`formats`]. Dataset-level orchestration lives in [`scenario`].
//!
//! # Axis convention
//!
//! The inertial frame sits at the landing site with k̂ pointing **along local
//! gravity (down)**. Altitude is the negative of the z coordinate:
//! `H = -r.z`. The camera frame is coincident with the body frame and looks
//! along body +z, so at zero attitude the camera points straight down.

pub mod config;
pub mod dynamics;
pub mod emulator;
pub mod formats;
pub mod math;
pub mod motion_field;
pub mod scenario;
pub mod terrain;
pub mod trajopt;

pub use config::ToolConfig;
pub use dynamics::{ControlInput, LanderState, VehicleParams};
pub use terrain::{CameraIntrinsics, Frame, Terrain};
