use rayon::prelude::*;
use serde::Serialize;

use super::split::{split_sums, SplitMode};
use super::DeformPath;
use crate::complex_geom::ProjectivePoint;
use crate::group::limit_set_cloud;
use crate::series::{default_base_points, estimate_delta, Verdict};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanOptions {
    /// Truncation of the cross-ratio series.
    pub max_len: usize,
    /// Truncation of the critical-exponent estimate (at least 6).
    pub delta_len: usize,
    /// Base point of the Poincaré series; defaults to the base group's `z1`.
    pub z0: Option<ProjectivePoint>,
    pub eps: f64,
    pub mode: SplitMode,
    pub cloud_depth: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { max_len: 8, delta_len: 8, z0: None, eps: 0.05, mode: SplitMode::Value, cloud_depth: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub t: f64,
    pub valid: bool,
    pub min_gap: f64,
    pub delta_hat: Option<f64>,
    pub series_verdict: Option<Verdict>,
    pub shell_slope: Option<f64>,
    pub total: Option<f64>,
    pub omega_part: Option<f64>,
    pub lambda_part: Option<f64>,
    pub partition_exact: Option<bool>,
    /// For invalid steps: the `t` of the valid step whose analysis is shown.
    pub carried_from: Option<f64>,
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeformReport {
    pub options: ScanOptions,
    pub z0: ProjectivePoint,
    pub steps: Vec<StepReport>,
}

fn analyse(
    path: &DeformPath,
    t: f64,
    points: (&ProjectivePoint, &ProjectivePoint, &ProjectivePoint, &ProjectivePoint),
    z0: &ProjectivePoint,
    opts: &ScanOptions,
) -> StepReport {
    let mut step = StepReport {
        t,
        valid: false,
        min_gap: f64::NAN,
        delta_hat: None,
        series_verdict: None,
        shell_slope: None,
        total: None,
        omega_part: None,
        lambda_part: None,
        partition_exact: None,
        carried_from: None,
        errors: Vec::new(),
    };
    let group = match path.at(t) {
        Ok(g) => g,
        Err(e) => {
            step.errors.push(e.to_string());
            return step;
        }
    };
    let report = group.validate();
    step.min_gap = report.min_gap;
    step.valid = report.valid;
    if !report.valid {
        step.errors.extend(report.problems);
        return step;
    }
    let result: Result<()> = (|| {
        step.delta_hat = Some(estimate_delta(&group, z0, opts.delta_len)?.delta);
        let cloud = limit_set_cloud(&group, opts.cloud_depth)?;
        let split = split_sums(&group, &cloud, opts.eps, opts.mode, points, opts.max_len)?;
        step.series_verdict = Some(split.estimate.verdict);
        step.shell_slope = Some(split.estimate.tail_slope);
        step.total = Some(split.total);
        step.omega_part = Some(split.omega_part);
        step.lambda_part = Some(split.lambda_part);
        step.partition_exact = Some(split.partition_exact);
        Ok(())
    })();
    if let Err(e) = result {
        step.errors.push(e.to_string());
    }
    step
}

/// Evaluates the path on the uniform grid `t_i = t_max · i / (n_steps − 1)`.
/// Steps run in parallel; failures are recorded per step and never abort
/// the scan. Invalid steps show the analysis of the last valid step.
pub fn scan_path(
    path: &DeformPath,
    n_steps: usize,
    points: (&ProjectivePoint, &ProjectivePoint, &ProjectivePoint, &ProjectivePoint),
    opts: ScanOptions,
) -> Result<DeformReport> {
    if n_steps < 2 {
        return Err(crate::Error::InvalidArgument("n_steps must be at least 2".into()));
    }
    let z0 = match opts.z0 {
        Some(z) => z,
        None => default_base_points(path.base())?.0,
    };
    let t_max = path.spec.t_max;
    let mut steps: Vec<StepReport> = (0..n_steps)
        .into_par_iter()
        .map(|i| {
            let t = if i + 1 == n_steps { t_max } else { t_max * i as f64 / (n_steps - 1) as f64 };
            analyse(path, t, points, &z0, &opts)
        })
        .collect();
    let mut last_valid: Option<StepReport> = None;
    for step in &mut steps {
        if step.valid {
            last_valid = Some(step.clone());
        } else if let Some(v) = &last_valid {
            step.delta_hat = v.delta_hat;
            step.series_verdict = v.series_verdict;
            step.shell_slope = v.shell_slope;
            step.total = v.total;
            step.omega_part = v.omega_part;
            step.lambda_part = v.lambda_part;
            step.partition_exact = v.partition_exact;
            step.carried_from = Some(v.t);
        }
    }
    Ok(DeformReport { options: opts, z0, steps })
}
