use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::moebius::MoebiusMap;
use super::point::ProjectivePoint;
use crate::{Error, Result};

/// A closed round disk on the sphere: `|z − center| ≤ radius`, or, with
/// `unbounded_side`, the closed exterior `|z − center| ≥ radius` (which
/// contains ∞).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiskRepr", into = "DiskRepr")]
pub struct OrientedDisk {
    pub center: Complex64,
    pub radius: f64,
    pub unbounded_side: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Side {
    Bounded,
    Unbounded,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiskRepr {
    center: [f64; 2],
    radius: f64,
    side: Side,
}

impl TryFrom<DiskRepr> for OrientedDisk {
    type Error = Error;
    fn try_from(r: DiskRepr) -> Result<Self> {
        OrientedDisk::new(
            Complex64::new(r.center[0], r.center[1]),
            r.radius,
            matches!(r.side, Side::Unbounded),
        )
    }
}

impl From<OrientedDisk> for DiskRepr {
    fn from(d: OrientedDisk) -> Self {
        DiskRepr {
            center: [d.center.re, d.center.im],
            radius: d.radius,
            side: if d.unbounded_side { Side::Unbounded } else { Side::Bounded },
        }
    }
}

/// Boundary slack relative to the radius used by the open-membership test.
const BOUNDARY_SLACK: f64 = 1e-12;

/// Spherical cap `{X ∈ S² : normal · X ≥ height}`.
#[derive(Clone, Copy, Debug)]
pub struct SphericalCap {
    pub normal: [f64; 3],
    pub height: f64,
}

impl SphericalCap {
    pub fn angular_radius(&self) -> f64 {
        self.height.clamp(-1.0, 1.0).acos()
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

impl OrientedDisk {
    pub fn new(center: Complex64, radius: f64, unbounded_side: bool) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && center.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "disk needs a finite center and radius > 0 (got {center}, {radius})"
            )));
        }
        Ok(Self { center, radius, unbounded_side })
    }

    pub fn bounded(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(center, radius, false)
    }

    pub fn exterior(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(center, radius, true)
    }

    /// The closure of the complementary region, same boundary circle.
    pub fn complement(&self) -> Self {
        Self { unbounded_side: !self.unbounded_side, ..*self }
    }

    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, theta)
    }

    /// A point strictly inside: the center, or ∞ for the unbounded side.
    pub fn interior_sample(&self) -> ProjectivePoint {
        if self.unbounded_side {
            ProjectivePoint::infinity()
        } else {
            ProjectivePoint::finite(self.center)
        }
    }

    /// Signed `radius − |p − center|`: positive strictly inside the bounded
    /// disk, ∞ for p = ∞.
    fn depth_bounded(&self, p: &ProjectivePoint) -> f64 {
        match p.to_affine() {
            Some(z) => self.radius - (z - self.center).norm(),
            None => f64::NEG_INFINITY,
        }
    }

    /// Membership in the open disk; points within a relative `1e−12` of the
    /// boundary circle count as outside.
    pub fn contains_open(&self, p: &ProjectivePoint) -> bool {
        let depth = self.depth_bounded(p);
        let slack = BOUNDARY_SLACK * self.radius.max(1.0);
        if self.unbounded_side {
            depth < -slack
        } else {
            depth > slack
        }
    }

    /// Membership in the closed disk.
    pub fn contains_closed(&self, p: &ProjectivePoint) -> bool {
        let depth = self.depth_bounded(p);
        if self.unbounded_side {
            depth <= 0.0
        } else {
            depth >= 0.0
        }
    }

    /// Image of the disk under `m`.
    ///
    /// The image center is `m` applied to the reflection of the pole of `m`
    /// in the boundary circle (symmetric points go to symmetric points, and
    /// the center is symmetric to ∞).
    pub fn map_disk(&self, m: &MoebiusMap) -> Result<Self> {
        let pole = m.pole();
        let reflected = match pole.to_affine() {
            None => ProjectivePoint::finite(self.center),
            Some(zp) => {
                let off = zp - self.center;
                let dist = off.norm();
                if (dist - self.radius).abs() <= 1e-12 * self.radius.max(1.0) {
                    return Err(Error::ImageIsLine);
                }
                if dist == 0.0 {
                    ProjectivePoint::infinity()
                } else {
                    ProjectivePoint::finite(self.center + self.radius * self.radius / off.conj())
                }
            }
        };
        let center = m.apply(&reflected).to_affine().ok_or(Error::ImageIsLine)?;
        let on_circle = m
            .apply_affine(self.boundary_point(0.0))
            .to_affine()
            .ok_or(Error::ImageIsLine)?;
        let radius = (on_circle - center).norm();
        let unbounded_side = match m.apply(&self.interior_sample()).to_affine() {
            None => true,
            Some(w) => (w - center).norm() > radius,
        };
        OrientedDisk::new(center, radius, unbounded_side)
    }

    /// The disk as a cap on the unit sphere.
    pub fn spherical_cap(&self) -> SphericalCap {
        let pts: Vec<[f64; 3]> = (0..3)
            .map(|i| {
                ProjectivePoint::finite(self.boundary_point(TAU * i as f64 / 3.0)).to_sphere()
            })
            .collect();
        let n = cross(sub(pts[1], pts[0]), sub(pts[2], pts[0]));
        let len = dot(n, n).sqrt();
        let mut normal = [n[0] / len, n[1] / len, n[2] / len];
        let mut height = dot(normal, pts[0]);
        if dot(normal, self.interior_sample().to_sphere()) < height {
            normal = [-normal[0], -normal[1], -normal[2]];
            height = -height;
        }
        SphericalCap { normal, height }
    }

    /// Geodesic (angular) gap to another disk on the unit sphere; negative
    /// when the closed disks intersect.
    pub fn spherical_gap(&self, other: &OrientedDisk) -> f64 {
        let (a, b) = (self.spherical_cap(), other.spherical_cap());
        let between = dot(a.normal, b.normal).clamp(-1.0, 1.0).acos();
        between - a.angular_radius() - b.angular_radius()
    }

    /// Whether `inner` lies in this disk, with absolute slack.
    pub fn contains_disk(&self, inner: &OrientedDisk, slack: f64) -> bool {
        let d = (inner.center - self.center).norm();
        match (self.unbounded_side, inner.unbounded_side) {
            (false, false) => d + inner.radius <= self.radius + slack,
            (true, false) => d - inner.radius >= self.radius - slack,
            (true, true) => d + self.radius <= inner.radius + slack,
            (false, true) => false,
        }
    }

    pub fn approx_eq(&self, other: &OrientedDisk, tol: f64) -> bool {
        self.unbounded_side == other.unbounded_side
            && (self.center - other.center).norm() <= tol
            && (self.radius - other.radius).abs() <= tol
    }
}
