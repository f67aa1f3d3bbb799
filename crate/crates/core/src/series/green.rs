use num_complex::Complex64;
use serde::Serialize;

use super::divisor::POINT_TOL;
use super::{for_each_shell, real_series, Divisor, SeriesEstimate};
use crate::complex_geom::{cross_ratio, det, ProjectivePoint};
use crate::group::{SchottkyGroup, Shell};
use crate::sum::ExactSum;
use crate::{Error, Result};

/// One term `⟨y, q, hx, hp⟩` of the cross-ratio series.
#[derive(Clone, Copy, Debug)]
pub struct GreenTerm {
    pub log_abs: f64,
    pub value: ProjectivePoint,
    pub hx: ProjectivePoint,
    pub hp: ProjectivePoint,
}

fn check_distinct(a: &ProjectivePoint, b: &ProjectivePoint, what: &str) -> Result<()> {
    if a.chordal_distance(b) <= POINT_TOL {
        return Err(Error::InvalidArgument(format!("{what} must be distinct points")));
    }
    Ok(())
}

fn green_term(
    y: &ProjectivePoint,
    q: &ProjectivePoint,
    hx: ProjectivePoint,
    hp: ProjectivePoint,
) -> Result<GreenTerm> {
    for o in [&hx, &hp] {
        if o.chordal_distance(y) <= POINT_TOL || o.chordal_distance(q) <= POINT_TOL {
            return Err(Error::DegenerateCrossRatio { word: None });
        }
    }
    let value = cross_ratio(y, q, &hx, &hp)?;
    let log_abs = value.log_abs();
    if !log_abs.is_finite() {
        return Err(Error::DegenerateCrossRatio { word: None });
    }
    Ok(GreenTerm { log_abs, value, hx, hp })
}

/// `Σ_{|h| ≤ max_len} ln |⟨y, q, hx, hp⟩|`.
pub fn green_series(
    group: &SchottkyGroup,
    y: &ProjectivePoint,
    q: &ProjectivePoint,
    x: &ProjectivePoint,
    p: &ProjectivePoint,
    max_len: usize,
) -> Result<SeriesEstimate> {
    check_distinct(y, q, "y and q")?;
    check_distinct(x, p, "x and p")?;
    real_series(group, max_len, |h| {
        green_term(y, q, h.apply(x), h.apply(p)).map(|t| t.log_abs)
    })
}

/// Streams the individual terms of [`green_series`] shell by shell, in
/// canonical word order.
pub fn green_series_terms<V>(
    group: &SchottkyGroup,
    (y, q, x, p): (&ProjectivePoint, &ProjectivePoint, &ProjectivePoint, &ProjectivePoint),
    max_len: usize,
    visit: V,
) -> Result<()>
where
    V: FnMut(&Shell, Vec<GreenTerm>) -> Result<()>,
{
    check_distinct(y, q, "y and q")?;
    check_distinct(x, p, "x and p")?;
    for_each_shell(group, max_len, |h| green_term(y, q, h.apply(x), h.apply(p)), visit)
}

/// Truncated product `W_{d,base}(r) = Π_h w_d(h r) / w_d(h base)`.
#[derive(Clone, Debug, Serialize)]
pub struct WProduct {
    pub value: Complex64,
    /// `ln |value|`, summed exactly from the per-word terms.
    pub log_abs: f64,
    /// Sum of the per-word arguments (not reduced mod 2π).
    pub arg: f64,
    /// Shell structure of the `ln |·|` terms.
    pub estimate: SeriesEstimate,
}

pub fn w_product(
    group: &SchottkyGroup,
    d: &Divisor,
    base: &ProjectivePoint,
    r: &ProjectivePoint,
    max_len: usize,
) -> Result<WProduct> {
    d.require_degree_zero()?;
    let terms = d.terms();
    let factor = |h: &crate::MoebiusMap| -> Result<(f64, f64)> {
        let hr = h.apply(r);
        let hb = h.apply(base);
        let mut f = Complex64::new(1.0, 0.0);
        for (pt, w) in terms {
            if pt.chordal_distance(&hr) < POINT_TOL || pt.chordal_distance(&hb) < POINT_TOL {
                return Err(Error::PoleHit { word: None });
            }
            f *= (det(&hr, pt) / det(&hb, pt)).powi(*w);
        }
        let (log_abs, arg) = (f.norm().ln(), f.arg());
        if !log_abs.is_finite() {
            return Err(Error::PoleHit { word: None });
        }
        Ok((log_abs, arg))
    };
    let mut sums = Vec::new();
    let mut args = ExactSum::new();
    for_each_shell(group, max_len, factor, |shell, values| {
        let mut s = ExactSum::new();
        for (l, a) in values {
            s.add(l);
            args.add(a);
        }
        sums.push((shell.word_length(), s));
        Ok(())
    })?;
    let estimate = SeriesEstimate::from_shell_sums(sums);
    let log_abs = estimate.total;
    let arg = args.value();
    Ok(WProduct { value: Complex64::from_polar(log_abs.exp(), arg), log_abs, arg, estimate })
}
