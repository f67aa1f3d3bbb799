use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A point of the Riemann sphere, `u / v` in homogeneous coordinates.
///
/// Coordinates are rescaled by a power of two so that `max(|u|, |v|)` lies
/// in `[1, 2)`;
/// this keeps long orbit computations away from overflow without changing
/// the projective class.
#[derive(Clone, Copy, PartialEq)]
pub struct ProjectivePoint {
    u: Complex64,
    v: Complex64,
}

/// `u₁ v₂ − u₂ v₁`; zero exactly when the points coincide.
#[inline]
pub fn det(a: &ProjectivePoint, b: &ProjectivePoint) -> Complex64 {
    a.u * b.v - b.u * a.v
}

impl ProjectivePoint {
    pub fn new(u: Complex64, v: Complex64) -> Result<Self> {
        if !(u.is_finite() && v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite homogeneous coordinate".into()));
        }
        let s = u.norm().max(v.norm());
        if s == 0.0 {
            return Err(Error::ZeroPoint);
        }
        Ok(Self::scaled(u, v, s))
    }

    /// Builds from coordinates already known not to be both zero.
    #[inline]
    pub(crate) fn from_raw(u: Complex64, v: Complex64) -> Self {
        let s = u.norm().max(v.norm());
        if s == 0.0 || !s.is_finite() {
            // Only reachable from degenerate arithmetic; keep a NaN marker
            // so callers see a non-finite value downstream.
            return Self { u: Complex64::new(f64::NAN, f64::NAN), v: Complex64::new(1.0, 0.0) };
        }
        Self::scaled(u, v, s)
    }

    #[inline]
    fn scaled(u: Complex64, v: Complex64, s: f64) -> Self {
        // Power-of-two scaling is exact and keeps the pair bitwise stable.
        let e = s.log2().floor();
        let k = 2f64.powi(-(e as i32));
        Self { u: u * k, v: v * k }
    }

    pub fn finite(z: Complex64) -> Self {
        Self::from_raw(z, Complex64::new(1.0, 0.0))
    }

    pub fn real(x: f64) -> Self {
        Self::finite(Complex64::new(x, 0.0))
    }

    pub fn infinity() -> Self {
        Self { u: Complex64::new(1.0, 0.0), v: Complex64::new(0.0, 0.0) }
    }

    pub fn u(&self) -> Complex64 {
        self.u
    }

    pub fn v(&self) -> Complex64 {
        self.v
    }

    pub fn is_infinity(&self) -> bool {
        self.v == Complex64::new(0.0, 0.0)
    }

    pub fn is_finite_point(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    /// `u / v`, or `None` at infinity.
    pub fn to_affine(&self) -> Option<Complex64> {
        if self.is_infinity() {
            None
        } else {
            Some(self.u / self.v)
        }
    }

    /// `ln |u / v|` without forming the quotient.
    pub fn log_abs(&self) -> f64 {
        let (nu, nv) = (self.u.norm(), self.v.norm());
        let r = nu / nv;
        if r.is_normal() {
            r.ln()
        } else {
            nu.ln() - nv.ln()
        }
    }

    fn norm(&self) -> f64 {
        (self.u.norm_sqr() + self.v.norm_sqr()).sqrt()
    }

    /// Chordal distance on the unit sphere, in `[0, 2]`.
    pub fn chordal_distance(&self, other: &ProjectivePoint) -> f64 {
        2.0 * det(self, other).norm() / (self.norm() * other.norm())
    }

    /// Equality within a chordal tolerance.
    pub fn approx_eq(&self, other: &ProjectivePoint, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }

    /// Inverse stereographic projection onto the unit sphere (∞ ↦ north pole).
    pub fn to_sphere(&self) -> [f64; 3] {
        let n2 = self.u.norm_sqr() + self.v.norm_sqr();
        let w = self.u * self.v.conj();
        [2.0 * w.re / n2, 2.0 * w.im / n2, (self.u.norm_sqr() - self.v.norm_sqr()) / n2]
    }

    /// Stereographic projection of a unit vector.
    pub fn from_sphere(x: [f64; 3]) -> Self {
        // (x + iy) / (1 − z), written so that the north pole is exact.
        let num = Complex64::new(x[0], x[1]);
        let den = 1.0 - x[2];
        if den <= 0.0 {
            return Self::infinity();
        }
        Self::from_raw(num, Complex64::new(den, 0.0))
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_affine() {
            Some(z) => write!(f, "P({z})"),
            None => write!(f, "P(∞)"),
        }
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [[self.u.re, self.u.im], [self.v.re, self.v.im]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [[ur, ui], [vr, vi]] = <[[f64; 2]; 2]>::deserialize(d)?;
        ProjectivePoint::new(Complex64::new(ur, ui), Complex64::new(vr, vi))
            .map_err(serde::de::Error::custom)
    }
}
