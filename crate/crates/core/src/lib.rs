//! Numerical Schottky uniformization.
//!
//! The crate evaluates Green–Arakelov quantities of a Riemann surface given by a
//! Schottky group: cross-ratio Poincaré series over the free group, the
//! W-product and its logarithmic derivative, the period-coefficient matrix, the
//! height pairing, and convergence diagnostics along deformations that push the
//! group towards the boundary of Schottky space.
//!
//! Modules, bottom-up:
//!
//! - [`complex_geom`]: points of the Riemann sphere in homogeneous coordinates,
//!   Möbius maps, oriented disks, the cross-ratio.
//! - [`group`]: Schottky groups, validation, reduced-word enumeration,
//!   conjugacy classes, double cosets, limit-set disk trees.
//! - [`series`]: the truncated series and products over the group.
//! - [`arakelov`]: height pairing, the double integral over the fundamental
//!   domain, and the closed-form cyclic oracle.
//! - [`deform`]: deformation paths and scan diagnostics.
//!
//! All sums over the group are truncated by reduced word length and carry
//! per-length ("shell") bookkeeping; see [`series::SeriesEstimate`].

// Negated float comparisons are used on purpose so that NaN inputs fail checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arakelov;
pub mod complex_geom;
pub mod deform;
mod error;
pub mod group;
pub mod series;
pub mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use complex_geom::{cross_ratio, MoebiusMap, OrientedDisk, ProjectivePoint};
pub use group::{SchottkyGroup, ValidationReport, Word};
pub use series::{Divisor, SeriesEstimate, Verdict};
