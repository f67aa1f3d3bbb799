//! JSON run configuration.
//!
//! Every field except `group` has a default; the fully resolved config
//! (defaults, flag overrides and environment included) is echoed in each
//! report, and feeding that echo back in reproduces the run.

use std::path::{Path, PathBuf};

use schottky::deform::{PathSpec, SplitMode};
use schottky::{Complex64, Divisor, MoebiusMap, OrientedDisk, ProjectivePoint, SchottkyGroup};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable overriding `capacity`.
pub const CAPACITY_ENV: &str = "SCHOTTKY_CAPACITY";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: GroupSpec,
    #[serde(default = "defaults::max_len")]
    pub max_len: usize,
    #[serde(default = "defaults::depth")]
    pub conj_depth: usize,
    #[serde(default = "defaults::depth")]
    pub coset_depth: usize,
    /// Word budget for enumerations.
    #[serde(default = "defaults::capacity")]
    pub capacity: u64,
    /// Target accuracy of closed-form references (cyclic oracle).
    #[serde(default = "defaults::tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::samples")]
    pub samples: usize,
    /// Worker threads; `null` lets the runtime decide.
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default = "defaults::n_quad")]
    pub n_quad: usize,
    #[serde(default = "defaults::cloud_depth")]
    pub cloud_depth: usize,
    #[serde(default = "defaults::delta_len")]
    pub delta_len: usize,
    #[serde(default = "defaults::eps")]
    pub eps: f64,
    #[serde(default)]
    pub mode: SplitMode,
    #[serde(default)]
    pub points: Points,
    #[serde(default)]
    pub divisors: Divisors,
    #[serde(default)]
    pub path: Option<PathSpec>,
    #[serde(default = "defaults::n_steps")]
    pub n_steps: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

mod defaults {
    pub fn max_len() -> usize {
        8
    }
    pub fn depth() -> usize {
        4
    }
    pub fn capacity() -> u64 {
        schottky::group::DEFAULT_WORD_BUDGET
    }
    pub fn tol() -> f64 {
        1e-12
    }
    pub fn samples() -> usize {
        1000
    }
    pub fn n_quad() -> usize {
        512
    }
    pub fn cloud_depth() -> usize {
        4
    }
    pub fn delta_len() -> usize {
        8
    }
    pub fn eps() -> f64 {
        0.05
    }
    pub fn n_steps() -> usize {
        16
    }
}

/// How the group is given. Explicit groups list generators as eight reals
/// `[a.re, a.im, b.re, b.im, c.re, c.im, d.re, d.im]` and disks in the order
/// `D1, D1', D2, D2', …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Explicit { generators: Vec<[f64; 8]>, disks: Vec<DiskSpec> },
    /// `z ↦ q z` with the annulus `|q| R ≤ |z| ≤ R` as fundamental domain.
    Cyclic {
        q: [f64; 2],
        #[serde(default = "one")]
        radius: f64,
    },
    /// Radius-`radius` disks at `±distance` and `±distance·i`.
    FourDisk {
        radius: f64,
        #[serde(default = "two")]
        distance: f64,
    },
    /// Generators built from the disk pairs `[D_k, D_k']`.
    DiskPairs { pairs: Vec<[DiskSpec; 2]> },
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The bounded side of the circle.
    #[default]
    Inside,
    /// The side containing ∞.
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    pub center: [f64; 2],
    pub radius: f64,
    #[serde(default)]
    pub side: Side,
}

impl DiskSpec {
    fn build(&self) -> schottky::Result<OrientedDisk> {
        OrientedDisk::new(cx(self.center), self.radius, self.side == Side::Outside)
    }
}

/// A point given as `[re, im]`, in homogeneous form `[[re_u, im_u], [re_v, im_v]]`,
/// or as the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Finite([f64; 2]),
    Homogeneous([[f64; 2]; 2]),
    Infinity(Infinity),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Infinity {
    #[serde(rename = "inf")]
    Inf,
}

impl PointSpec {
    pub fn build(&self) -> schottky::Result<ProjectivePoint> {
        match *self {
            PointSpec::Finite(z) => Ok(ProjectivePoint::finite(cx(z))),
            PointSpec::Homogeneous([u, v]) => ProjectivePoint::new(cx(u), cx(v)),
            PointSpec::Infinity(_) => Ok(ProjectivePoint::infinity()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Points {
    pub y: Option<PointSpec>,
    pub q: Option<PointSpec>,
    pub x: Option<PointSpec>,
    pub p: Option<PointSpec>,
    /// Evaluation point of one-forms.
    pub z: Option<PointSpec>,
    /// Evaluation point of the W-product.
    pub r: Option<PointSpec>,
    /// Base point of the W-product.
    pub base: Option<PointSpec>,
    /// Base points of the Poincaré series and the basis forms; `null` picks
    /// them from the fundamental domain.
    pub z0: Option<PointSpec>,
    pub z1: Option<PointSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorTerm {
    pub point: PointSpec,
    pub weight: i32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Divisors {
    /// Divisor of the W-product.
    pub d: Option<Vec<DivisorTerm>>,
    /// Arguments of the height pairing.
    pub a: Option<Vec<DivisorTerm>>,
    pub b: Option<Vec<DivisorTerm>>,
}

fn cx([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

impl RunConfig {
    pub fn from_json(text: &str, origin: &Path) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            CliError::Config(format!(
                "{}: field `{field}`: {inner}",
                origin.display()
            ))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text, path)
    }

    /// Applies `SCHOTTKY_CAPACITY` when set.
    pub fn apply_env(&mut self) -> Result<(), CliError> {
        if let Ok(v) = std::env::var(CAPACITY_ENV) {
            self.capacity = v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{CAPACITY_ENV}: not a word count: {v:?}")))?;
        }
        Ok(())
    }

    pub fn build_group(&self) -> schottky::Result<SchottkyGroup> {
        let g = match &self.group {
            GroupSpec::Explicit { generators, disks } => {
                let gens = generators
                    .iter()
                    .map(|e| {
                        MoebiusMap::new(
                            Complex64::new(e[0], e[1]),
                            Complex64::new(e[2], e[3]),
                            Complex64::new(e[4], e[5]),
                            Complex64::new(e[6], e[7]),
                        )
                    })
                    .collect::<schottky::Result<_>>()?;
                let disks = disks.iter().map(DiskSpec::build).collect::<schottky::Result<_>>()?;
                SchottkyGroup::new(gens, disks)?
            }
            GroupSpec::Cyclic { q, radius } => SchottkyGroup::cyclic(cx(*q), *radius)?,
            GroupSpec::FourDisk { radius, distance } => SchottkyGroup::four_disk(*radius, *distance)?,
            GroupSpec::DiskPairs { pairs } => {
                let pairs = pairs
                    .iter()
                    .map(|[a, b]| Ok((a.build()?, b.build()?)))
                    .collect::<schottky::Result<Vec<_>>>()?;
                SchottkyGroup::from_disk_pairs(&pairs)?
            }
        };
        Ok(g.with_word_budget(self.capacity))
    }

    fn point_spec(&self, name: &str) -> Option<PointSpec> {
        let p = &self.points;
        match name {
            "y" => p.y,
            "q" => p.q,
            "x" => p.x,
            "p" => p.p,
            "z" => p.z,
            "r" => p.r,
            "base" => p.base,
            "z0" => p.z0,
            "z1" => p.z1,
            _ => None,
        }
    }

    /// The named point, or `None` when the config leaves it out.
    pub fn optional_point(&self, name: &str) -> Result<Option<ProjectivePoint>, CliError> {
        self.point_spec(name)
            .map(|s| s.build().map_err(|e| CliError::Config(format!("field `points.{name}`: {e}"))))
            .transpose()
    }

    /// The named point, or a config error naming the missing field.
    pub fn point(&self, name: &str, command: &str) -> Result<ProjectivePoint, CliError> {
        self.optional_point(name)?.ok_or_else(|| {
            CliError::Config(format!("field `points.{name}` is required by `{command}`"))
        })
    }

    pub fn divisor(&self, name: &str, command: &str) -> Result<Divisor, CliError> {
        let d = &self.divisors;
        let terms = match name {
            "d" => &d.d,
            "a" => &d.a,
            _ => &d.b,
        };
        let terms = terms.as_ref().ok_or_else(|| {
            CliError::Config(format!("field `divisors.{name}` is required by `{command}`"))
        })?;
        let built = terms
            .iter()
            .map(|t| Ok((t.point.build()?, t.weight)))
            .collect::<schottky::Result<Vec<_>>>()
            .and_then(Divisor::new)
            .map_err(|e| CliError::Config(format!("field `divisors.{name}`: {e}")))?;
        Ok(built)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_filled_in() {
        let c = RunConfig::from_json(r#"{"group": {"kind": "four_disk", "radius": 0.5}}"#, Path::new("t")).unwrap();
        assert_eq!(c.max_len, 8);
        assert_eq!(c.capacity, 5_000_000);
        assert_eq!(c.group, GroupSpec::FourDisk { radius: 0.5, distance: 2.0 });
        let echoed = serde_json::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_json(&echoed, Path::new("t")).unwrap(), c);
    }

    #[test]
    fn errors_name_the_field() {
        let text = r#"{"group": {"kind": "cyclic", "q": [0.1, 0.0]}, "points": {"y": [1.0, "a"]}}"#;
        let e = RunConfig::from_json(text, Path::new("cfg.json")).unwrap_err().to_string();
        assert!(e.contains("points.y"), "{e}");
        let e = RunConfig::from_json(r#"{"group": {"kind": "cyclic", "q": [0.1, 0.0]}, "maxlen": 3}"#, Path::new("c"))
            .unwrap_err()
            .to_string();
        assert!(e.contains("maxlen") && e.contains("line 1"), "{e}");
    }

    #[test]
    fn point_forms() {
        let p: PointSpec = serde_json::from_str("[1.0, 2.0]").unwrap();
        assert_eq!(p.build().unwrap(), ProjectivePoint::finite(Complex64::new(1.0, 2.0)));
        let h: PointSpec = serde_json::from_str("[[2.0, 0.0], [4.0, 0.0]]").unwrap();
        assert_eq!(h.build().unwrap(), ProjectivePoint::real(0.5));
        let i: PointSpec = serde_json::from_str(r#""inf""#).unwrap();
        assert!(i.build().unwrap().is_infinity());
        assert!(serde_json::from_str::<PointSpec>("[[0.0, 0.0], [0.0, 0.0]]").unwrap().build().is_err());
    }

    #[test]
    fn explicit_group_matches_preset() {
        let preset = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        let generators = preset
            .generators()
            .iter()
            .map(|m| serde_json::from_value(serde_json::to_value(m).unwrap()).unwrap())
            .collect();
        let disks = preset
            .disks()
            .iter()
            .map(|d| DiskSpec { center: [d.center.re, d.center.im], radius: d.radius, side: Side::Inside })
            .collect();
        let c = RunConfig {
            group: GroupSpec::Explicit { generators, disks },
            ..RunConfig::from_json(r#"{"group": {"kind": "four_disk", "radius": 0.5}}"#, Path::new("t")).unwrap()
        };
        let g = c.build_group().unwrap();
        assert!(g.validate().valid);
        for (a, b) in g.generators().iter().zip(preset.generators()) {
            assert!(a.max_entry_diff(b) < 1e-15);
        }
    }
}
