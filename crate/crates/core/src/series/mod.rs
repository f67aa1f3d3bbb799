//! Truncated series and products over a Schottky group.
//!
//! Every sum over the group runs over reduced words of length `≤ max_len`
//! and records one partial sum per word length (a "shell"). Terms are
//! evaluated shell-parallel and accumulated exactly in canonical word order,
//! so totals do not depend on the number of threads.

mod delta;
mod divisor;
mod forms;
mod green;
mod xmatrix;

pub use delta::{estimate_delta, DeltaEstimate};
pub use divisor::Divisor;
pub use forms::{
    assemble_omega, basis_form, contour_integral, dlog_w, period_integral, DlogSeries, OmegaForm, OmegaParams,
    OneForm, Period,
};
pub use green::{green_series, green_series_terms, w_product, WProduct};
pub use xmatrix::{x_matrix, XMatrix};

use serde::Serialize;

use crate::complex_geom::{MoebiusMap, ProjectivePoint};
use crate::group::{SchottkyGroup, Shell};
use crate::sum::ExactSum;
use crate::{Error, Result};

/// Slope thresholds of the convergence verdict.
pub const VERDICT_SLOPE: f64 = 0.05;

/// Number of trailing shells used for the tail slope.
pub const TAIL_SHELLS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShellSum {
    pub n: usize,
    pub sum: f64,
}

/// Shell-structured result of a truncated series.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesEstimate {
    pub shells: Vec<ShellSum>,
    /// Correctly rounded exact sum of every term.
    pub total: f64,
    /// Least-squares slope of `ln |shell sum|` against `n` over the last
    /// four shells.
    pub tail_slope: f64,
    pub verdict: Verdict,
    #[serde(skip)]
    exact: ExactSum,
}

impl PartialEq for SeriesEstimate {
    fn eq(&self, other: &Self) -> bool {
        self.shells == other.shells
            && self.total.to_bits() == other.total.to_bits()
            && self.tail_slope.to_bits() == other.tail_slope.to_bits()
            && self.verdict == other.verdict
    }
}

impl SeriesEstimate {
    /// Builds the estimate from per-shell exact accumulators, indexed by
    /// word length.
    pub fn from_shell_sums(sums: Vec<(usize, ExactSum)>) -> Self {
        let mut exact = ExactSum::new();
        let shells = sums
            .iter()
            .map(|(n, s)| {
                exact.add_sum(s);
                ShellSum { n: *n, sum: s.value() }
            })
            .collect::<Vec<_>>();
        let tail_slope = tail_slope(&shells);
        let verdict = if shells.len() < 3 || !tail_slope.is_finite() {
            Verdict::Inconclusive
        } else if tail_slope < -VERDICT_SLOPE {
            Verdict::Converging
        } else if tail_slope > VERDICT_SLOPE {
            Verdict::Diverging
        } else {
            Verdict::Inconclusive
        };
        Self { shells, total: exact.value(), tail_slope, verdict, exact }
    }

    /// Groups `(word_length, term)` pairs by length, summing in the given order.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut sums: Vec<(usize, ExactSum)> = Vec::new();
        for (n, t) in terms {
            while sums.len() <= n {
                sums.push((sums.len(), ExactSum::new()));
            }
            sums[n].1.add(t);
        }
        Self::from_shell_sums(sums)
    }

    /// The exact (unrounded) sum of all terms.
    pub fn exact_total(&self) -> &ExactSum {
        &self.exact
    }

    pub fn max_len(&self) -> usize {
        self.shells.last().map_or(0, |s| s.n)
    }
}

/// Shells summing to exactly zero (terms below double resolution, or exact
/// cancellation) carry no decay information and are skipped.
fn tail_slope(shells: &[ShellSum]) -> f64 {
    let mut pts: Vec<(f64, f64)> = shells
        .iter()
        .rev()
        .filter(|s| s.sum != 0.0)
        .take(TAIL_SHELLS)
        .map(|s| (s.n as f64, s.sum.abs().ln()))
        .collect();
    pts.reverse();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Evaluates `term` on every word matrix up to `max_len`, shell by shell.
/// Each shell is computed in parallel and handed to `visit` in word order;
/// the first failing term is reported with its word attached.
pub(crate) fn for_each_shell<T, F, V>(
    group: &SchottkyGroup,
    max_len: usize,
    term: F,
    mut visit: V,
) -> Result<()>
where
    T: Send,
    F: Fn(&MoebiusMap) -> Result<T> + Sync,
    V: FnMut(&Shell, Vec<T>) -> Result<()>,
{
    use rayon::prelude::*;
    for shell in group.shells(max_len)? {
        let results: Vec<Result<T>> =
            shell.maps().par_iter().with_min_len(512).map(&term).collect();
        let mut values = Vec::with_capacity(results.len());
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(v) => values.push(v),
                Err(e) => return Err(e.with_word(shell.word(i))),
            }
        }
        visit(&shell, values)?;
    }
    Ok(())
}

/// Real series `Σ_h term(h)` with shell bookkeeping.
pub(crate) fn real_series<F>(group: &SchottkyGroup, max_len: usize, term: F) -> Result<SeriesEstimate>
where
    F: Fn(&MoebiusMap) -> Result<f64> + Sync,
{
    let mut sums = Vec::new();
    for_each_shell(group, max_len, term, |shell, values| {
        sums.push((shell.word_length(), values.into_iter().collect::<ExactSum>()));
        Ok(())
    })?;
    Ok(SeriesEstimate::from_shell_sums(sums))
}

/// Deterministic, roughly uniform spherical sample of the fundamental domain
/// (points outside every closed disk, taken from a Fibonacci lattice).
pub fn fundamental_domain_sample(group: &SchottkyGroup, n: usize) -> Vec<ProjectivePoint> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            ProjectivePoint::from_sphere([r * phi.cos(), r * phi.sin(), z])
        })
        .filter(|p| !group.disks().iter().any(|d| d.contains_closed(p)))
        .collect()
}

/// Base points used when none are configured: `z1` is the sample point
/// closest to the spherical centroid of a fundamental-domain sample, `z0` the
/// sample point farthest from `z1`.
pub fn default_base_points(group: &SchottkyGroup) -> Result<(ProjectivePoint, ProjectivePoint)> {
    let sample = fundamental_domain_sample(group, 4096);
    if sample.len() < 2 {
        return Err(Error::InvalidGroup("fundamental domain sample is empty".into()));
    }
    let mut c = [0.0; 3];
    for p in &sample {
        let x = p.to_sphere();
        for i in 0..3 {
            c[i] += x[i];
        }
    }
    let norm = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    let centroid = if norm > 1e-12 {
        ProjectivePoint::from_sphere([c[0] / norm, c[1] / norm, c[2] / norm])
    } else {
        sample[0]
    };
    let closest = |target: &ProjectivePoint, sign: f64| {
        *sample
            .iter()
            .min_by(|a, b| {
                let da = sign * a.chordal_distance(target);
                let db = sign * b.chordal_distance(target);
                da.total_cmp(&db)
            })
            .expect("non-empty sample")
    };
    let z1 = closest(&centroid, 1.0);
    let z0 = closest(&z1, -1.0);
    Ok((z1, z0))
}
