//! Design, analysis, and simulation library for a small two-DoF robot that
//! locomotes by whole-body rolling and quasi-static walking on curved legs.
//!
//! The pipeline runs in four stages, each a module here:
//!
//! 1. [`geometry`] — body/leg parameterization, randomized curved-leg profile
//!    generation, and ground-contact resolution.
//! 2. [`statics`] — gravitational moment-arm maps over (body angle × leg
//!    angle), the rolling objectives `J1`/`J2`, the idealized leg trajectory,
//!    and controller threshold selection.
//! 3. [`search`] — randomized design-space search, scoring, radius binning,
//!    and Pareto-front extraction.
//! 4. [`sim`] + [`control`] — planar hybrid dynamics (pivot dynamics with a
//!    contact-handoff impact map, a noisy quantized tilt sensor) driven by an
//!    event-driven gait state machine with an inner PID leg loop, plus motor
//!    energy and cost-of-transport accounting.
//!
//! All internal math is SI (meters, radians, kilograms, seconds). File
//! formats carry explicit unit tags; see [`io`].

pub mod control;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod search;
pub mod sim;
pub mod statics;
pub mod vec2;

pub use error::{Error, Result};

/// Standard gravity, m/s².
pub const GRAVITY: f64 = 9.81;
