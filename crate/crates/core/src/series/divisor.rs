use serde::Serialize;

use crate::complex_geom::ProjectivePoint;
use crate::{Error, Result};

/// Points closer than this (chordally) are treated as the same point.
pub const POINT_TOL: f64 = 1e-12;

/// Finite formal sum `Σ m_i (x_i)` of distinct points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divisor {
    terms: Vec<(ProjectivePoint, i32)>,
}

impl Divisor {
    /// Rejects repeated points; zero weights are dropped.
    pub fn new(terms: Vec<(ProjectivePoint, i32)>) -> Result<Self> {
        for (i, (p, _)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(q, _)| q.chordal_distance(p) <= POINT_TOL) {
                return Err(Error::InvalidArgument("divisor points must be distinct".into()));
            }
        }
        Ok(Self { terms: terms.into_iter().filter(|t| t.1 != 0).collect() })
    }

    /// `(x) − (y)`.
    pub fn difference(x: ProjectivePoint, y: ProjectivePoint) -> Result<Self> {
        Self::new(vec![(x, 1), (y, -1)])
    }

    pub fn terms(&self) -> &[(ProjectivePoint, i32)] {
        &self.terms
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|t| t.1 as i64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn require_degree_zero(&self) -> Result<()> {
        if self.degree() != 0 {
            return Err(Error::InvalidArgument(format!(
                "divisor has degree {}, expected 0",
                self.degree()
            )));
        }
        Ok(())
    }

    /// Sum of divisors, merging coincident points.
    pub fn plus(&self, other: &Divisor) -> Divisor {
        let mut terms = self.terms.clone();
        for (p, m) in &other.terms {
            match terms.iter_mut().find(|(q, _)| q.chordal_distance(p) <= POINT_TOL) {
                Some(t) => t.1 += m,
                None => terms.push((*p, *m)),
            }
        }
        Divisor { terms: terms.into_iter().filter(|t| t.1 != 0).collect() }
    }

    pub fn scaled(&self, k: i32) -> Divisor {
        Divisor { terms: self.terms.iter().filter(|_| k != 0).map(|(p, m)| (*p, m * k)).collect() }
    }

    /// True when some point of `self` is within `POINT_TOL` of a point of `other`.
    pub fn overlaps(&self, other: &Divisor) -> bool {
        self.terms
            .iter()
            .any(|(p, _)| other.terms.iter().any(|(q, _)| p.chordal_distance(q) <= POINT_TOL))
    }
}
