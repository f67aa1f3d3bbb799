//! Riemann-sphere arithmetic in homogeneous coordinates.
//!
//! Points are pairs `(u, v)` standing for `u / v`; infinity is `(1, 0)`. No
//! kernel in this module divides down to an affine coordinate, so points at
//! or near infinity need no special casing.
//!
//! Cross-ratio convention: `⟨a, b, c, d⟩ = (a − c)(b − d) / ((a − d)(b − c))`.
//! Under this convention `⟨y, q, hx, hp⟩ → 1` as `hx` and `hp` coalesce along
//! a long word `h`, which is what makes the logarithmic series over a Schottky
//! group summable.
//!
//! The period-denominator expression `⟨z⁺(g_k) z⁻(g_k), h z⁺(g_l), h z⁻(g_l)⟩`
//! is read as the four-point cross-ratio `⟨z⁺(g_k), z⁻(g_k), h z⁺(g_l), h z⁻(g_l)⟩`.

mod disk;
mod moebius;
mod point;

pub use disk::{OrientedDisk, SphericalCap};
pub use moebius::{FixedPoints, MoebiusMap};
pub use point::{det, ProjectivePoint};

use crate::{Error, Result};

/// Magnitude below which both cross-ratio determinant products count as zero.
pub const DEGENERATE_PRODUCT: f64 = 1e-300;

/// Tolerance on the distance of `trace²` to the real segment `[0, 4]`.
pub const LOXODROMY_TOL: f64 = 1e-9;

/// `⟨a, b, c, d⟩ = det(a,c)·det(b,d) / (det(a,d)·det(b,c))`, returned as a
/// homogeneous point so that the values `0` and `∞` need no special case.
pub fn cross_ratio(
    a: &ProjectivePoint,
    b: &ProjectivePoint,
    c: &ProjectivePoint,
    d: &ProjectivePoint,
) -> Result<ProjectivePoint> {
    let num = det(a, c) * det(b, d);
    let den = det(a, d) * det(b, c);
    if num.norm() < DEGENERATE_PRODUCT && den.norm() < DEGENERATE_PRODUCT {
        return Err(Error::DegenerateCrossRatio { word: None });
    }
    Ok(ProjectivePoint::from_raw(num, den))
}

/// `ln |⟨a, b, c, d⟩|`. Infinite when exactly one of the products vanishes.
pub fn log_abs_cross_ratio(
    a: &ProjectivePoint,
    b: &ProjectivePoint,
    c: &ProjectivePoint,
    d: &ProjectivePoint,
) -> Result<f64> {
    cross_ratio(a, b, c, d).map(|cr| cr.log_abs())
}
