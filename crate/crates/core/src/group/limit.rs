use rayon::prelude::*;
use serde::Serialize;

use super::SchottkyGroup;
use crate::complex_geom::{OrientedDisk, ProjectivePoint};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloudDisk {
    pub disk: OrientedDisk,
    pub word_length: usize,
}

/// Nested images of the Schottky disks down to a fixed depth.
///
/// A reduced word `w = s_1 … s_n` labels the disk `s_1 ⋯ s_{n−1}(Disk(s_n))`,
/// where `Disk(g_k) = D_k′` and `Disk(g_k⁻¹) = D_k`. Points are the disk
/// centers, or `∞` for a disk containing `∞`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitSetCloud {
    pub depth: usize,
    pub disks: Vec<CloudDisk>,
    pub points: Vec<ProjectivePoint>,
}

impl LimitSetCloud {
    pub fn at_depth(&self, n: usize) -> impl Iterator<Item = &CloudDisk> + '_ {
        self.disks.iter().filter(move |d| d.word_length == n)
    }

    /// Points of the deepest level only.
    pub fn deepest_points(&self) -> Vec<ProjectivePoint> {
        self.disks
            .iter()
            .zip(&self.points)
            .filter(|(d, _)| d.word_length == self.depth)
            .map(|(_, p)| *p)
            .collect()
    }

    pub fn max_radius(&self, n: usize) -> f64 {
        self.at_depth(n)
            .map(|d| if d.disk.unbounded_side { f64::INFINITY } else { d.disk.radius })
            .fold(0.0, f64::max)
    }
}

pub fn limit_set_cloud(group: &SchottkyGroup, depth: usize) -> Result<LimitSetCloud> {
    let mut disks = Vec::new();
    if depth > 0 {
        group.check_capacity(depth)?;
        for shell in group.shells(depth - 1)? {
            let n = shell.word_length();
            let level: Vec<Vec<OrientedDisk>> = (0..shell.len())
                .into_par_iter()
                .map(|i| {
                    let syms = shell.symbols_of(i);
                    let forbidden = syms.last().map(|&l| l ^ 1);
                    let prefix = shell.map(i);
                    (0..2 * group.rank() as u8)
                        .filter(|&s| Some(s) != forbidden)
                        .map(|s| group.symbol_disk(s).map_disk(prefix))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            disks.extend(
                level
                    .into_iter()
                    .flatten()
                    .map(|disk| CloudDisk { disk, word_length: n + 1 }),
            );
        }
    }
    let points = disks
        .iter()
        .map(|d| {
            if d.disk.unbounded_side {
                ProjectivePoint::infinity()
            } else {
                ProjectivePoint::finite(d.disk.center)
            }
        })
        .collect();
    Ok(LimitSetCloud { depth, disks, points })
}
