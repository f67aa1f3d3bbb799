use serde::{Deserialize, Serialize};

use crate::complex_geom::ProjectivePoint;
use crate::group::{LimitSetCloud, SchottkyGroup};
use crate::series::{green_series_terms, SeriesEstimate};
use crate::sum::ExactSum;
use crate::{Error, Result};

/// What is tested against the limit-set cloud.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitMode {
    /// The cross-ratio value `⟨y, q, hx, hp⟩` itself, as a point of the sphere.
    #[default]
    Value,
    /// The orbit points `hx`, `hp` (nearest of the two).
    Orbit,
}

/// The cross-ratio series split into terms near (`Λ`) and away from (`Ω`)
/// the computed limit set.
#[derive(Clone, Debug, Serialize)]
pub struct SplitResult {
    pub eps: f64,
    pub mode: SplitMode,
    pub omega_part: f64,
    pub lambda_part: f64,
    pub total: f64,
    pub omega_terms: usize,
    pub lambda_terms: usize,
    /// `omega + lambda = total` holds exactly on the unrounded accumulators.
    pub partition_exact: bool,
    pub estimate: SeriesEstimate,
    /// Per-term flags in canonical word order; `true` means `Λ`.
    #[serde(skip)]
    pub lambda_flags: Vec<bool>,
    #[serde(skip)]
    pub exact: [ExactSum; 3],
}

fn nearest(points: &[ProjectivePoint], z: &ProjectivePoint) -> f64 {
    points.iter().map(|p| p.chordal_distance(z)).fold(f64::INFINITY, f64::min)
}

/// Routes each term of `green_series(y, q, x, p)` to one of two exact
/// accumulators according to its chordal distance to the deepest level of
/// `cloud` (`≤ eps` means `Λ`).
#[allow(clippy::too_many_arguments)]
pub fn split_sums(
    group: &SchottkyGroup,
    cloud: &LimitSetCloud,
    eps: f64,
    mode: SplitMode,
    (y, q, x, p): (&ProjectivePoint, &ProjectivePoint, &ProjectivePoint, &ProjectivePoint),
    max_len: usize,
) -> Result<SplitResult> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument("eps must be non-negative".into()));
    }
    let points = cloud.deepest_points();
    let mut omega = ExactSum::new();
    let mut lambda = ExactSum::new();
    let mut total = ExactSum::new();
    let mut shells = Vec::new();
    let mut flags = Vec::new();
    green_series_terms(group, (y, q, x, p), max_len, |shell, terms| {
        let mut s = ExactSum::new();
        for t in terms {
            let d = match mode {
                SplitMode::Value => nearest(&points, &t.value),
                SplitMode::Orbit => nearest(&points, &t.hx).min(nearest(&points, &t.hp)),
            };
            let near = d <= eps;
            if near {
                lambda.add(t.log_abs);
            } else {
                omega.add(t.log_abs);
            }
            flags.push(near);
            total.add(t.log_abs);
            s.add(t.log_abs);
        }
        shells.push((shell.word_length(), s));
        Ok(())
    })?;
    let lambda_terms = flags.iter().filter(|f| **f).count();
    Ok(SplitResult {
        eps,
        mode,
        omega_part: omega.value(),
        lambda_part: lambda.value(),
        total: total.value(),
        omega_terms: flags.len() - lambda_terms,
        lambda_terms,
        partition_exact: total.is_exact_sum_of(&omega, &lambda),
        estimate: SeriesEstimate::from_shell_sums(shells),
        lambda_flags: flags,
        exact: [omega, lambda, total],
    })
}
