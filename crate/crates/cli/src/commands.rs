use std::collections::BTreeMap;
use std::path::Path;

use schottky::arakelov::{cyclic_oracle, green_double_integral, height_pairing};
use schottky::deform::{make_path, scan_path, split_sums, ScanOptions};
use schottky::group::{enumerate_words, limit_set_cloud, LimitSetCloud};
use schottky::series::{
    default_base_points, estimate_delta, green_series, period_integral, w_product, x_matrix,
    OmegaForm, OmegaParams, OneForm,
};
use schottky::{Complex64, ProjectivePoint, SchottkyGroup};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{to_value, Report};
use crate::{CliError, Command};

/// Outcome of a command body: numeric failures land in the report, config
/// problems abort.
pub enum Failure {
    Config(CliError),
    Numeric(schottky::Error),
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        Failure::Config(e)
    }
}

impl From<schottky::Error> for Failure {
    fn from(e: schottky::Error) -> Self {
        Failure::Numeric(e)
    }
}

type Outcome = Result<(), Failure>;

fn four_points(
    cfg: &RunConfig,
    command: &str,
) -> Result<[ProjectivePoint; 4], CliError> {
    Ok([
        cfg.point("y", command)?,
        cfg.point("q", command)?,
        cfg.point("x", command)?,
        cfg.point("p", command)?,
    ])
}

fn omega_params(cfg: &RunConfig, group: &SchottkyGroup) -> Result<OmegaParams, Failure> {
    let (z1, z0) = match (cfg.optional_point("z1")?, cfg.optional_point("z0")?) {
        (Some(z1), Some(z0)) => (z1, z0),
        (z1, z0) => {
            let (d1, d0) = default_base_points(group)?;
            (z1.unwrap_or(d1), z0.unwrap_or(d0))
        }
    };
    Ok(OmegaParams {
        max_len: cfg.max_len,
        conj_depth: cfg.conj_depth,
        coset_depth: cfg.coset_depth,
        z0,
        z1,
    })
}

pub fn run(command: Command, cfg: &RunConfig, group: &SchottkyGroup, report: &mut Report) -> Outcome {
    let name = command.name();
    match command {
        Command::Validate => unreachable!("handled before dispatch"),
        Command::Words => {
            let mut sizes: BTreeMap<usize, u64> = BTreeMap::new();
            for (w, _) in enumerate_words(group, cfg.max_len)? {
                *sizes.entry(w.len()).or_default() += 1;
            }
            let count: u64 = sizes.values().sum();
            report.result = json!({
                "count": count,
                "shell_sizes": sizes.values().collect::<Vec<_>>(),
                "rank": group.rank(),
                "max_len": cfg.max_len,
            });
        }
        Command::Green => {
            let [y, q, x, p] = four_points(cfg, name)?;
            let s = green_series(group, &y, &q, &x, &p, cfg.max_len)?;
            let mut result = json!({
                "total": s.total,
                "tail_slope": s.tail_slope,
                "points": { "y": y, "q": q, "x": x, "p": p },
            });
            if group.rank() == 1 {
                let fp = group.generator(1).fixed_points()?;
                let at_zero_inf = fp.attracting.to_affine() == Some(Complex64::new(0.0, 0.0))
                    && fp.repelling.is_infinity();
                if at_zero_inf {
                    let o = cyclic_oracle(fp.multiplier, &y, &q, &x, &p, cfg.tol)?;
                    result["oracle"] = json!({ "value": o, "difference": s.total - o });
                }
            }
            report.result = result;
            report.set_series(&s);
        }
        Command::Wprod => {
            let d = cfg.divisor("d", name)?;
            let base = cfg.point("base", name)?;
            let r = cfg.point("r", name)?;
            let w = w_product(group, &d, &base, &r, cfg.max_len)?;
            report.result = json!({
                "value": w.value,
                "log_abs": w.log_abs,
                "arg": w.arg,
                "total": w.estimate.total,
            });
            report.set_series(&w.estimate);
        }
        Command::Xmatrix => {
            let (x, y) = (cfg.point("x", name)?, cfg.point("y", name)?);
            let m = x_matrix(group, &x, &y, cfg.conj_depth, cfg.coset_depth)?;
            report.result = to_value(&m);
        }
        Command::Omega => {
            let (x, y, z) = (cfg.point("x", name)?, cfg.point("y", name)?, cfg.point("z", name)?);
            let params = omega_params(cfg, group)?;
            let form = OmegaForm::new(group, &x, &y, params)?;
            let zf = z.to_affine().ok_or_else(|| {
                CliError::Config("field `points.z` must be finite for `omega`".into())
            })?;
            let value = form.eval(zf)?;
            report.result = json!({
                "value": value,
                "z0": params.z0,
                "z1": params.z1,
                "coefficients": form.coefficients,
                "x_matrix": form.x_matrix.entries,
            });
        }
        Command::Periods => {
            let (x, y) = (cfg.point("x", name)?, cfg.point("y", name)?);
            let params = omega_params(cfg, group)?;
            let form = OmegaForm::new(group, &x, &y, params)?;
            let periods = (1..=group.rank())
                .map(|k| period_integral(group, &form, k, cfg.n_quad))
                .collect::<schottky::Result<Vec<_>>>()?;
            let max_re = periods.iter().map(|p| p.value.re.abs()).fold(0.0, f64::max);
            report.result = json!({
                "periods": periods,
                "max_abs_real_part": max_re,
                "z0": params.z0,
                "z1": params.z1,
            });
        }
        Command::Delta => {
            let z0 = match cfg.optional_point("z0")? {
                Some(z) => z,
                None => default_base_points(group)?.0,
            };
            let d = estimate_delta(group, &z0, cfg.max_len)?;
            report.verdict = Some(d.verdict);
            report.result = json!({ "delta": d.delta, "shell_roots": d.shell_roots, "z0": z0 });
        }
        Command::Limits => {
            let cloud = limit_set_cloud(group, cfg.cloud_depth)?;
            let levels: Vec<Value> = (0..=cloud.depth)
                .map(|n| json!({ "n": n, "disks": cloud.at_depth(n).count(), "max_radius": cloud.max_radius(n) }))
                .collect();
            let mut result = json!({ "depth": cloud.depth, "disks": cloud.disks.len(), "levels": levels });
            if let Some(path) = &cfg.csv {
                let (rows, excluded) = write_cloud_csv(&cloud, path)?;
                result["csv"] = json!({ "path": path, "rows": rows, "excluded_infinite": excluded });
            }
            report.result = result;
        }
        Command::Pairing => {
            let (a, b) = (cfg.divisor("a", name)?, cfg.divisor("b", name)?);
            let r = height_pairing(group, &a, &b, cfg.max_len)?;
            report.set_series(&r.combined);
            report.result = to_value(&r);
        }
        Command::DoubleIntegral => {
            let (x, y) = (cfg.point("x", name)?, cfg.point("y", name)?);
            let e = green_double_integral(group, &x, &y, cfg.samples, cfg.seed, cfg.max_len)?;
            report.result = to_value(&e);
        }
        Command::Deform => {
            let spec = cfg
                .path
                .as_ref()
                .ok_or_else(|| CliError::Config("field `path` is required by `deform`".into()))?;
            let path = make_path(group, spec)?;
            let [y, q, x, p] = four_points(cfg, name)?;
            let opts = ScanOptions {
                max_len: cfg.max_len,
                delta_len: cfg.delta_len,
                z0: cfg.optional_point("z0")?,
                eps: cfg.eps,
                mode: cfg.mode,
                cloud_depth: cfg.cloud_depth,
            };
            let r = scan_path(&path, cfg.n_steps, (&y, &q, &x, &p), opts)?;
            report.result = to_value(&r);
        }
        Command::Split => {
            let [y, q, x, p] = four_points(cfg, name)?;
            let cloud = limit_set_cloud(group, cfg.cloud_depth)?;
            let s = split_sums(group, &cloud, cfg.eps, cfg.mode, (&y, &q, &x, &p), cfg.max_len)?;
            report.set_series(&s.estimate);
            report.result = json!({
                "eps": s.eps,
                "mode": s.mode,
                "omega_part": s.omega_part,
                "lambda_part": s.lambda_part,
                "total": s.total,
                "omega_terms": s.omega_terms,
                "lambda_terms": s.lambda_terms,
                "partition_exact": s.partition_exact,
            });
        }
    }
    Ok(())
}

/// Writes `re,im,radius,word_length` for every cloud disk with a finite
/// center; returns the row count and the number of skipped disks.
fn write_cloud_csv(cloud: &LimitSetCloud, path: &Path) -> Result<(usize, usize), CliError> {
    let mut text = String::from("re,im,radius,word_length\n");
    let (mut rows, mut excluded) = (0, 0);
    for d in &cloud.disks {
        if d.disk.unbounded_side {
            excluded += 1;
            continue;
        }
        let c = d.disk.center;
        text.push_str(&format!("{},{},{},{}\n", c.re, c.im, d.disk.radius, d.word_length));
        rows += 1;
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok((rows, excluded))
}
