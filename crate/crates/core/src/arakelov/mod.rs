//! Divisor-level Green–Arakelov quantities.
//!
//! Slot convention, used everywhere: for degree-zero divisors
//! `g((x) − (y), (p) − (q)) = green_series(x, y, p, q)`, i.e.
//! `Σ_h ln |⟨x, y, hp, hq⟩|`.

mod montecarlo;
mod oracle;

pub use montecarlo::{green_double_integral, sample_fundamental_domain, MonteCarloEstimate};
pub use oracle::cyclic_oracle;

use serde::Serialize;

use crate::complex_geom::ProjectivePoint;
use crate::group::SchottkyGroup;
use crate::series::{green_series, Divisor, SeriesEstimate};
use crate::sum::ExactSum;
use crate::{Error, Result};

/// One pair of the bilinear expansion: `weight · g((x) − (x_ref), (p) − (p_ref))`.
#[derive(Clone, Debug, Serialize)]
pub struct PairingTerm {
    pub x: ProjectivePoint,
    pub x_ref: ProjectivePoint,
    pub p: ProjectivePoint,
    pub p_ref: ProjectivePoint,
    pub weight: i64,
    pub estimate: SeriesEstimate,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub value: f64,
    pub max_len: usize,
    pub terms: Vec<PairingTerm>,
    /// Weighted per-shell sums over all terms.
    pub combined: SeriesEstimate,
}

/// `g(a, b)` for disjoint degree-zero divisors.
///
/// Writing `a = Σ m_i (x_i)` and `b = Σ n_j (p_j)`, degree zero gives
/// `a = Σ m_i ((x_i) − (x_0))`, so
/// `g(a, b) = Σ_{i,j} m_i n_j · green_series(x_i, x_0, p_j, p_0)`.
pub fn height_pairing(
    group: &SchottkyGroup,
    a: &Divisor,
    b: &Divisor,
    max_len: usize,
) -> Result<PairingReport> {
    a.require_degree_zero()?;
    b.require_degree_zero()?;
    if a.overlaps(b) {
        return Err(Error::OverlappingSupports);
    }
    let mut terms = Vec::new();
    if let (Some(&(x0, _)), Some(&(p0, _))) = (a.terms().first(), b.terms().first()) {
        for &(x, m) in &a.terms()[1..] {
            for &(p, n) in &b.terms()[1..] {
                let estimate = green_series(group, &x, &x0, &p, &p0, max_len)?;
                terms.push(PairingTerm {
                    x,
                    x_ref: x0,
                    p,
                    p_ref: p0,
                    weight: m as i64 * n as i64,
                    estimate,
                });
            }
        }
    }
    let value = terms
        .iter()
        .map(|t| t.weight as f64 * t.estimate.total)
        .collect::<ExactSum>()
        .value();
    let combined = SeriesEstimate::from_terms(terms.iter().flat_map(|t| {
        t.estimate.shells.iter().map(move |s| (s.n, t.weight as f64 * s.sum))
    }));
    Ok(PairingReport { value, max_len, terms, combined })
}
