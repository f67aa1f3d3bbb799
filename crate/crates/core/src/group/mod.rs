//! Schottky groups and the combinatorics of the free group they generate.
//!
//! A rank-`g` group is given by generators `g_1 … g_g` and `2g` closed disks
//! stored as `[D_1, D_1′, D_2, D_2′, …]`. Pairing convention: `g_k` maps the
//! complement of `D_k` onto the interior of `D_k′`. The fundamental domain is
//! the common complement of the `2g` open disks.

mod cosets;
mod limit;
mod reduce;
mod words;

pub use cosets::{conjugacy_class_reps, double_coset_reps, ConjugateRep, CosetRep};
pub use limit::{limit_set_cloud, CloudDisk, LimitSetCloud};
pub use reduce::reduce_to_fundamental_domain;
pub use words::{enumerate_words, shell_size, word_count, Shell, Shells, Word, WordStream};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::complex_geom::{MoebiusMap, OrientedDisk, ProjectivePoint};
use crate::{Error, Result};

/// Default cap on the number of enumerated words.
pub const DEFAULT_WORD_BUDGET: u64 = 5_000_000;

/// Closed disks must be separated by more than this angular gap.
pub const DISJOINT_TOL: f64 = 1e-9;

/// Tolerance on the pairing check `g_k(D_k^c) = D_k′`.
pub const PAIRING_TOL: f64 = 1e-9;

/// Highest supported rank (letters are stored as `i8`).
pub const MAX_RANK: usize = 60;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchottkyGroup {
    generators: Vec<MoebiusMap>,
    disks: Vec<OrientedDisk>,
    #[serde(skip)]
    letter_maps: Vec<MoebiusMap>,
    word_budget: u64,
}

impl SchottkyGroup {
    pub fn new(generators: Vec<MoebiusMap>, disks: Vec<OrientedDisk>) -> Result<Self> {
        let g = generators.len();
        if g == 0 || g > MAX_RANK {
            return Err(Error::InvalidGroup(format!("rank must be in 1..={MAX_RANK}, got {g}")));
        }
        if disks.len() != 2 * g {
            return Err(Error::InvalidGroup(format!(
                "rank {g} needs {} disks, got {}",
                2 * g,
                disks.len()
            )));
        }
        let letter_maps = generators.iter().flat_map(|m| [*m, m.inverse()]).collect();
        Ok(Self { generators, disks, letter_maps, word_budget: DEFAULT_WORD_BUDGET })
    }

    /// `z ↦ q z` with `D_1 = {|z| ≥ R}` and `D_1′ = {|z| ≤ |q| R}`.
    pub fn cyclic(q: Complex64, outer_radius: f64) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        let g = MoebiusMap::scaling(q)?;
        Self::new(
            vec![g],
            vec![
                OrientedDisk::exterior(zero, outer_radius)?,
                OrientedDisk::bounded(zero, q.norm() * outer_radius)?,
            ],
        )
    }

    /// Builds each generator from three boundary correspondences between
    /// `D_k` and `D_k′`, orienting it so the exterior of `D_k` lands inside
    /// `D_k′`.
    pub fn from_disk_pairs(pairs: &[(OrientedDisk, OrientedDisk)]) -> Result<Self> {
        let mut generators = Vec::with_capacity(pairs.len());
        let mut disks = Vec::with_capacity(2 * pairs.len());
        for (src, dst) in pairs {
            generators.push(pairing_map(src, dst)?);
            disks.push(*src);
            disks.push(*dst);
        }
        Self::new(generators, disks)
    }

    /// The symmetric rank-2 group: radius-`r` disks centered at `−s, s`
    /// (paired by `g_1`) and `−s i, s i` (paired by `g_2`).
    pub fn four_disk(radius: f64, distance: f64) -> Result<Self> {
        let d = |re: f64, im: f64| OrientedDisk::bounded(Complex64::new(re, im), radius);
        Self::from_disk_pairs(&[
            (d(-distance, 0.0)?, d(distance, 0.0)?),
            (d(0.0, -distance)?, d(0.0, distance)?),
        ])
    }

    pub fn with_word_budget(mut self, budget: u64) -> Self {
        self.word_budget = budget;
        self
    }

    pub fn word_budget(&self) -> u64 {
        self.word_budget
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[MoebiusMap] {
        &self.generators
    }

    /// Generator `g_k`, `k` counted from 1.
    pub fn generator(&self, k: usize) -> &MoebiusMap {
        &self.generators[k - 1]
    }

    pub fn disks(&self) -> &[OrientedDisk] {
        &self.disks
    }

    /// `(D_k, D_k′)`, `k` counted from 1.
    pub fn disk_pair(&self, k: usize) -> (&OrientedDisk, &OrientedDisk) {
        (&self.disks[2 * (k - 1)], &self.disks[2 * (k - 1) + 1])
    }

    /// Matrix of an alphabet symbol (`2(k−1)` for `g_k`, `2(k−1)+1` for `g_k⁻¹`).
    #[inline]
    pub(crate) fn symbol_map(&self, s: u8) -> &MoebiusMap {
        &self.letter_maps[s as usize]
    }

    /// Disk containing the image of everything outside the disk of the
    /// inverse symbol: `D_k′` for `g_k`, `D_k` for `g_k⁻¹`.
    #[inline]
    pub(crate) fn symbol_disk(&self, s: u8) -> &OrientedDisk {
        &self.disks[(s ^ 1) as usize]
    }

    /// Matrix of a word, multiplied out from scratch.
    pub fn word_map(&self, w: &Word) -> MoebiusMap {
        w.symbols()
            .fold(MoebiusMap::identity(), |acc, s| acc.compose(self.symbol_map(s)))
    }

    /// Outside every open disk.
    pub fn in_fundamental_domain(&self, p: &ProjectivePoint) -> bool {
        !self.disks.iter().any(|d| d.contains_open(p))
    }

    pub fn check_rank_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.rank() {
            return Err(Error::InvalidArgument(format!(
                "generator index {k} outside 1..={}",
                self.rank()
            )));
        }
        Ok(())
    }

    /// Conjugates every generator by `m` and maps every disk by `m`.
    pub fn conjugated_by(&self, m: &MoebiusMap) -> Result<Self> {
        let generators = self.generators.iter().map(|g| g.conjugate_by(m)).collect();
        let disks = self.disks.iter().map(|d| d.map_disk(m)).collect::<Result<_>>()?;
        Ok(Self::new(generators, disks)?.with_word_budget(self.word_budget))
    }

    pub fn validate(&self) -> ValidationReport {
        validate_schottky(self)
    }
}

/// Three boundary correspondences `src → dst` with `src`'s exterior landing
/// inside `dst`.
pub fn pairing_map(src: &OrientedDisk, dst: &OrientedDisk) -> Result<MoebiusMap> {
    let angles = [0.0, PI / 2.0, PI];
    let from = angles.map(|t| ProjectivePoint::finite(src.boundary_point(t)));
    let mut last = Err(Error::InvalidGroup("no orientation pairs the disks".into()));
    for sign in [-1.0, 1.0] {
        let to = angles.map(|t| ProjectivePoint::finite(dst.boundary_point(sign * t)));
        let m = MoebiusMap::from_three_points(from, to)?;
        match src.complement().map_disk(&m) {
            Ok(img) if img.unbounded_side == dst.unbounded_side => return Ok(m),
            Ok(_) => {}
            Err(e) => last = Err(e),
        }
    }
    last
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorCheck {
    pub k: usize,
    pub loxodromic: bool,
    pub trace: Complex64,
    pub loxodromy_margin: f64,
    pub multiplier: Option<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskGap {
    pub i: usize,
    pub j: usize,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingCheck {
    pub k: usize,
    pub ok: bool,
    pub center_error: f64,
    pub radius_error: f64,
    pub side_ok: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub generators: Vec<GeneratorCheck>,
    /// Smallest pairwise angular gap between the closed disks.
    pub min_gap: f64,
    pub gaps: Vec<DiskGap>,
    pub pairings: Vec<PairingCheck>,
    pub problems: Vec<String>,
}

pub fn validate_schottky(group: &SchottkyGroup) -> ValidationReport {
    let mut problems = Vec::new();

    let generators: Vec<GeneratorCheck> = group
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let fp = g.fixed_points().ok();
            if fp.is_none() {
                problems.push(format!("g{} is not loxodromic", i + 1));
            }
            GeneratorCheck {
                k: i + 1,
                loxodromic: fp.is_some(),
                trace: g.trace(),
                loxodromy_margin: g.loxodromy_margin(),
                multiplier: fp.map(|f| f.multiplier),
            }
        })
        .collect();

    let mut gaps = Vec::new();
    let mut min_gap = f64::INFINITY;
    for i in 0..group.disks.len() {
        for j in i + 1..group.disks.len() {
            let gap = group.disks[i].spherical_gap(&group.disks[j]);
            min_gap = min_gap.min(gap);
            if gap <= DISJOINT_TOL {
                problems.push(format!("disks {i} and {j} are not disjoint (gap {gap:e})"));
            }
            gaps.push(DiskGap { i, j, gap });
        }
    }

    let pairings = (1..=group.rank())
        .map(|k| {
            let (src, dst) = group.disk_pair(k);
            match src.complement().map_disk(group.generator(k)) {
                Ok(img) => {
                    let center_error = (img.center - dst.center).norm();
                    let radius_error = (img.radius - dst.radius).abs();
                    let side_ok = img.unbounded_side == dst.unbounded_side;
                    let scale = dst.radius.max(1.0);
                    let ok = side_ok
                        && center_error <= PAIRING_TOL * scale
                        && radius_error <= PAIRING_TOL * scale;
                    if !ok {
                        problems.push(format!("g{k} does not pair D{k} with D{k}'"));
                    }
                    PairingCheck { k, ok, center_error, radius_error, side_ok, error: None }
                }
                Err(e) => {
                    problems.push(format!("g{k}: {e}"));
                    PairingCheck {
                        k,
                        ok: false,
                        center_error: f64::NAN,
                        radius_error: f64::NAN,
                        side_ok: false,
                        error: Some(e.to_string()),
                    }
                }
            }
        })
        .collect();

    ValidationReport { valid: problems.is_empty(), generators, min_gap, gaps, pairings, problems }
}
