//! One-parameter families of Schottky groups running towards the boundary of
//! Schottky space, with per-step diagnostics.

mod scan;
mod split;

pub use scan::{scan_path, DeformReport, ScanOptions, StepReport};
pub use split::{split_sums, SplitMode, SplitResult};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex_geom::{MoebiusMap, OrientedDisk};
use crate::group::SchottkyGroup;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum PathKind {
    /// All radii grow linearly until the closest pair of disks touches at `t = 1`.
    RadiusPinch,
    /// Multipliers move as `q_k^{1−t}`, reaching `1` at `t = 1`.
    MultiplierPinch,
    /// Disk `moving` slides straight towards disk `target` (indices into the
    /// disk list) and touches it at `collision_time`.
    CircleCollision { moving: usize, target: usize, collision_time: f64 },
}

/// Path descriptor as read from JSON, e.g.
/// `{"kind": "CircleCollision", "moving": 0, "target": 2, "collision_time": 0.8, "t_max": 1.0}`.
/// Unknown keys are rejected by the `kind` variant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    #[serde(flatten)]
    pub kind: PathKind,
    pub t_max: f64,
}

#[derive(Clone, Debug)]
enum Plan {
    Radius { growth: f64 },
    Multiplier { fixed: Vec<crate::complex_geom::FixedPoints> },
    Collision { moving: usize, step: Complex64 },
}

#[derive(Clone, Debug)]
pub struct DeformPath {
    pub spec: PathSpec,
    base: SchottkyGroup,
    plan: Plan,
}

pub fn make_path(base: &SchottkyGroup, spec: &PathSpec) -> Result<DeformPath> {
    if !(spec.t_max >= 0.0 && spec.t_max.is_finite()) {
        return Err(Error::BadSpec(format!("t_max must be finite and >= 0, got {}", spec.t_max)));
    }
    let report = base.validate();
    if !report.valid {
        return Err(Error::InvalidGroup(report.problems.join("; ")));
    }
    let disks = base.disks();
    let plan = match &spec.kind {
        PathKind::RadiusPinch => {
            if disks.iter().any(|d| d.unbounded_side) {
                return Err(Error::BadSpec("radius pinch needs bounded disks".into()));
            }
            let mut lambda = f64::INFINITY;
            for i in 0..disks.len() {
                for j in i + 1..disks.len() {
                    let d = (disks[i].center - disks[j].center).norm();
                    lambda = lambda.min(d / (disks[i].radius + disks[j].radius));
                }
            }
            Plan::Radius { growth: lambda - 1.0 }
        }
        PathKind::MultiplierPinch => Plan::Multiplier {
            fixed: base.generators().iter().map(|g| g.fixed_points()).collect::<Result<_>>()?,
        },
        PathKind::CircleCollision { moving, target, collision_time } => {
            let (m, t, tc) = (*moving, *target, *collision_time);
            if m >= disks.len() || t >= disks.len() || m == t {
                return Err(Error::BadSpec(format!("disk indices {m}, {t} are not two distinct disks")));
            }
            if !(tc > 0.0 && tc.is_finite()) {
                return Err(Error::BadSpec("collision_time must be positive".into()));
            }
            if disks[m].unbounded_side || disks[t].unbounded_side {
                return Err(Error::BadSpec("colliding disks must be bounded".into()));
            }
            let offset = disks[t].center - disks[m].center;
            let gap = offset.norm() - disks[m].radius - disks[t].radius;
            if !(gap > 0.0) {
                return Err(Error::BadSpec("colliding disks already overlap".into()));
            }
            Plan::Collision { moving: m, step: offset / offset.norm() * (gap / tc) }
        }
    };
    Ok(DeformPath { spec: spec.clone(), base: base.clone(), plan })
}

impl DeformPath {
    pub fn base(&self) -> &SchottkyGroup {
        &self.base
    }

    /// The group at parameter `t ∈ [0, t_max]`; exactly the base at `t = 0`.
    pub fn at(&self, t: f64) -> Result<SchottkyGroup> {
        if !(0.0..=self.spec.t_max).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "t = {t} outside [0, {}]",
                self.spec.t_max
            )));
        }
        if t == 0.0 {
            return Ok(self.base.clone());
        }
        let base = &self.base;
        let group = match &self.plan {
            Plan::Radius { growth } => {
                let s = Complex64::new(1.0 + t * growth, 0.0);
                let disks: Vec<OrientedDisk> = base
                    .disks()
                    .iter()
                    .map(|d| OrientedDisk::new(d.center, d.radius * s.re, false))
                    .collect::<Result<_>>()?;
                let gens = (1..=base.rank())
                    .map(|k| {
                        let (src, dst) = base.disk_pair(k);
                        let ts = MoebiusMap::affine_about(src.center, s)?;
                        let td = MoebiusMap::affine_about(dst.center, s)?;
                        Ok(td.compose(base.generator(k)).compose(&ts.inverse()))
                    })
                    .collect::<Result<_>>()?;
                SchottkyGroup::new(gens, disks)?
            }
            Plan::Multiplier { fixed } => {
                let mut gens = Vec::with_capacity(base.rank());
                let mut disks = Vec::with_capacity(2 * base.rank());
                for (k, fp) in fixed.iter().enumerate() {
                    let q = (fp.multiplier.ln() * (1.0 - t)).exp();
                    let g = MoebiusMap::from_fixed_points(&fp.attracting, &fp.repelling, q)?;
                    let (src, _) = base.disk_pair(k + 1);
                    disks.push(*src);
                    disks.push(src.complement().map_disk(&g)?);
                    gens.push(g);
                }
                SchottkyGroup::new(gens, disks)?
            }
            Plan::Collision { moving, step } => {
                let shift = step * t;
                let tr = MoebiusMap::translation(shift);
                let mut disks = base.disks().to_vec();
                disks[*moving].center += shift;
                let mut gens = base.generators().to_vec();
                let k = moving / 2;
                gens[k] = if moving % 2 == 0 {
                    gens[k].compose(&tr.inverse())
                } else {
                    tr.compose(&gens[k])
                };
                SchottkyGroup::new(gens, disks)?
            }
        };
        Ok(group.with_word_budget(base.word_budget()))
    }
}
