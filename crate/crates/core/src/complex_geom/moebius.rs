use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::point::{det, ProjectivePoint};
use super::LOXODROMY_TOL;
use crate::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `z ↦ (a z + b) / (c z + d)`, stored as a matrix scaled to determinant one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

/// Attracting and repelling fixed points of a loxodromic map, with the
/// derivative at the attracting point (`|multiplier| < 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FixedPoints {
    pub attracting: ProjectivePoint,
    pub repelling: ProjectivePoint,
    pub multiplier: Complex64,
}

/// Square root with non-negative real part; on the cut the root with
/// positive imaginary part.
fn canonical_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        -r
    } else {
        r
    }
}

impl MoebiusMap {
    /// Normalizes `[[a, b], [c, d]]` to determinant one.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det.norm() < 1e-300 {
            return Err(Error::SingularMatrix(det.norm()));
        }
        let s = canonical_sqrt(det);
        Ok(Self { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn identity() -> Self {
        Self { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    /// `z ↦ q z`, the model loxodromic map.
    pub fn scaling(q: Complex64) -> Result<Self> {
        Self::new(q, ZERO, ZERO, ONE)
    }

    pub fn translation(t: Complex64) -> Self {
        Self { a: ONE, b: t, c: ZERO, d: ONE }
    }

    /// `z ↦ s (z − center) + center`.
    pub fn affine_about(center: Complex64, s: Complex64) -> Result<Self> {
        Self::new(s, center * (ONE - s), ZERO, ONE)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Rescales to determinant one again after long products.
    pub fn renormalized(&self) -> Result<Self> {
        Self::new(self.a, self.b, self.c, self.d)
    }

    #[inline]
    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let (u, v) = (p.u(), p.v());
        ProjectivePoint::from_raw(self.a * u + self.b * v, self.c * u + self.d * v)
    }

    pub fn apply_affine(&self, z: Complex64) -> ProjectivePoint {
        self.apply(&ProjectivePoint::finite(z))
    }

    /// `self ∘ other`: apply `other` first.
    #[inline]
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `m ∘ self ∘ m⁻¹`.
    pub fn conjugate_by(&self, m: &MoebiusMap) -> MoebiusMap {
        m.compose(self).compose(&m.inverse())
    }

    /// The point sent to infinity.
    pub fn pole(&self) -> ProjectivePoint {
        ProjectivePoint::from_raw(self.d, -self.c)
    }

    /// Spherical (chordal-metric) derivative `|m'(p)| (1 + |p|²) / (1 + |m(p)|²)`.
    ///
    /// Uses the unit determinant of the stored matrix rather than recomputing
    /// `ad − bc`, which cancels catastrophically for long words.
    pub fn spherical_derivative(&self, p: &ProjectivePoint) -> f64 {
        let (u, v) = (p.u(), p.v());
        let num = u.norm_sqr() + v.norm_sqr();
        let den = (self.a * u + self.b * v).norm_sqr() + (self.c * u + self.d * v).norm_sqr();
        num / den
    }

    /// Distance of `trace²` to the parabolic/elliptic segment `[0, 4]`.
    pub fn loxodromy_margin(&self) -> f64 {
        let t2 = self.trace() * self.trace();
        if (0.0..=4.0).contains(&t2.re) {
            t2.im.abs()
        } else {
            let nearest = t2.re.clamp(0.0, 4.0);
            (t2 - Complex64::new(nearest, 0.0)).norm()
        }
    }

    pub fn is_loxodromic(&self) -> bool {
        self.loxodromy_margin() >= LOXODROMY_TOL
    }

    pub fn fixed_points(&self) -> Result<FixedPoints> {
        if !self.is_loxodromic() {
            return Err(Error::NotLoxodromic { trace_sq: self.trace() * self.trace() });
        }
        let tr = self.trace();
        let disc = canonical_sqrt(tr * tr - 4.0 * self.det());
        let (l1, l2) = ((tr + disc) * 0.5, (tr - disc) * 0.5);
        let (big, small) = if l1.norm() >= l2.norm() { (l1, l2) } else { (l2, l1) };
        Ok(FixedPoints {
            attracting: self.eigenvector(big),
            repelling: self.eigenvector(small),
            multiplier: small / big,
        })
    }

    fn eigenvector(&self, lambda: Complex64) -> ProjectivePoint {
        let (u1, v1) = (self.b, lambda - self.a);
        let (u2, v2) = (lambda - self.d, self.c);
        if u1.norm_sqr() + v1.norm_sqr() >= u2.norm_sqr() + v2.norm_sqr() {
            ProjectivePoint::from_raw(u1, v1)
        } else {
            ProjectivePoint::from_raw(u2, v2)
        }
    }

    /// The loxodromic map with the given fixed points and multiplier.
    pub fn from_fixed_points(
        attracting: &ProjectivePoint,
        repelling: &ProjectivePoint,
        multiplier: Complex64,
    ) -> Result<Self> {
        // Columns send ∞ ↦ repelling and 0 ↦ attracting.
        let s = Self::new(repelling.u(), attracting.u(), repelling.v(), attracting.v())?;
        let k = canonical_sqrt(multiplier);
        let diag = Self::new(k, ZERO, ZERO, ONE / k)?;
        Ok(diag.conjugate_by(&s))
    }

    /// The unique map sending `from[i]` to `to[i]` for `i = 0, 1, 2`.
    pub fn from_three_points(from: [ProjectivePoint; 3], to: [ProjectivePoint; 3]) -> Result<Self> {
        let src = Self::to_standard(&from)?;
        let dst = Self::to_standard(&to)?;
        let m = dst.inverse().compose(&src);
        m.renormalized()
    }

    /// Sends `(p₀, p₁, p₂)` to `(0, 1, ∞)`.
    fn to_standard(p: &[ProjectivePoint; 3]) -> Result<Self> {
        let k1 = det(&p[1], &p[2]);
        let k3 = det(&p[1], &p[0]);
        // w ↦ det(w, p0) det(p1, p2) / (det(w, p2) det(p1, p0))
        Self::new(
            k1 * p[0].v(),
            -k1 * p[0].u(),
            k3 * p[2].v(),
            -k3 * p[2].u(),
        )
    }

    /// Largest entrywise difference, comparing up to the sign ambiguity of
    /// the normalized representative.
    pub fn max_entry_diff(&self, other: &MoebiusMap) -> f64 {
        let diff = |s: f64| {
            [
                self.a - other.a * s,
                self.b - other.b * s,
                self.c - other.c * s,
                self.d - other.d * s,
            ]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
        };
        diff(1.0).min(diff(-1.0))
    }
}

/// Serialized as eight reals: `[a.re, a.im, b.re, b.im, c.re, c.im, d.re, d.im]`.
impl Serialize for MoebiusMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [
            self.a.re, self.a.im, self.b.re, self.b.im, self.c.re, self.c.im, self.d.re, self.d.im,
        ]
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MoebiusMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let e = <[f64; 8]>::deserialize(d)?;
        MoebiusMap::new(
            Complex64::new(e[0], e[1]),
            Complex64::new(e[2], e[3]),
            Complex64::new(e[4], e[5]),
            Complex64::new(e[6], e[7]),
        )
        .map_err(serde::de::Error::custom)
    }
}
