use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex_geom::ProjectivePoint;
use crate::group::SchottkyGroup;
use crate::series::green_series;
use crate::sum::ExactSum;
use crate::{Error, Result};

const PILOT_PROPOSALS: usize = 10_000;
const MIN_ACCEPTANCE: f64 = 0.01;
const PILOT_STREAM: u64 = u64::MAX;

/// Mean of `green_series(y, q, x, p)` over independent `p, q` drawn from
/// normalized spherical area on the fundamental domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Fraction of sphere proposals landing in the fundamental domain (pilot run).
    pub acceptance_rate: f64,
    pub max_len: usize,
    pub measure: &'static str,
}

fn uniform_sphere_point(rng: &mut ChaCha8Rng) -> ProjectivePoint {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    ProjectivePoint::from_sphere([r * phi.cos(), r * phi.sin(), z])
}

/// Draws from spherical area restricted to the fundamental domain; gives up
/// after `max_tries` proposals.
pub fn sample_fundamental_domain(
    group: &SchottkyGroup,
    rng: &mut ChaCha8Rng,
    max_tries: usize,
) -> Result<ProjectivePoint> {
    for _ in 0..max_tries {
        let p = uniform_sphere_point(rng);
        if group.in_fundamental_domain(&p) {
            return Ok(p);
        }
    }
    Err(Error::RejectionStarvation { rate: 0.0 })
}

fn acceptance_rate(group: &SchottkyGroup, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(PILOT_STREAM);
    let hits = (0..PILOT_PROPOSALS)
        .filter(|_| group.in_fundamental_domain(&uniform_sphere_point(&mut rng)))
        .count();
    hits as f64 / PILOT_PROPOSALS as f64
}

/// Sample `i` uses its own ChaCha stream, so results do not depend on the
/// evaluation order.
pub fn green_double_integral(
    group: &SchottkyGroup,
    x: &ProjectivePoint,
    y: &ProjectivePoint,
    n_samples: usize,
    seed: u64,
    max_len: usize,
) -> Result<MonteCarloEstimate> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    if !group.in_fundamental_domain(x) || !group.in_fundamental_domain(y) {
        return Err(Error::InvalidArgument("x and y must lie in the fundamental domain".into()));
    }
    group.check_capacity(max_len)?;
    let rate = acceptance_rate(group, seed);
    if rate < MIN_ACCEPTANCE {
        return Err(Error::RejectionStarvation { rate });
    }
    let max_tries = (100.0 / rate).ceil() as usize * 10;
    let values: Vec<Result<f64>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let p = sample_fundamental_domain(group, &mut rng, max_tries)
                .map_err(|_| Error::RejectionStarvation { rate })?;
            let q = sample_fundamental_domain(group, &mut rng, max_tries)
                .map_err(|_| Error::RejectionStarvation { rate })?;
            Ok(green_series(group, y, &q, x, &p, max_len)?.total)
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    let n = n_samples as f64;
    let mean = values.iter().copied().collect::<ExactSum>().value() / n;
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).collect::<ExactSum>().value();
    let stderr = (ss / (n - 1.0)).sqrt() / n.sqrt();
    Ok(MonteCarloEstimate {
        mean,
        stderr,
        n_samples,
        seed,
        acceptance_rate: rate,
        max_len,
        measure: "normalized spherical area on the fundamental domain",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn reproducible_from_seed() {
        let g = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        let (x, y) = (ProjectivePoint::real(0.3), ProjectivePoint::finite(Complex64::new(0.0, -0.4)));
        let a = green_double_integral(&g, &x, &y, 64, 7, 3).unwrap();
        let b = green_double_integral(&g, &x, &y, 64, 7, 3).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a, b);
        let c = green_double_integral(&g, &x, &y, 64, 8, 3).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn starvation_detected() {
        // Disks covering almost the whole sphere.
        let zero = Complex64::new(0.0, 0.0);
        let g = SchottkyGroup::new(
            vec![crate::MoebiusMap::scaling(Complex64::new(0.999, 0.0)).unwrap()],
            vec![
                crate::OrientedDisk::exterior(zero, 1.0).unwrap(),
                crate::OrientedDisk::bounded(zero, 0.999).unwrap(),
            ],
        )
        .unwrap();
        let x = ProjectivePoint::real(0.9995);
        let y = ProjectivePoint::finite(Complex64::new(0.0, 0.9995));
        assert!(matches!(
            green_double_integral(&g, &x, &y, 10, 1, 1),
            Err(Error::RejectionStarvation { .. })
        ));
    }

    #[test]
    fn sphere_samples_are_uniform_in_height() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 20_000;
        let mean_z: f64 = (0..n).map(|_| uniform_sphere_point(&mut rng).to_sphere()[2]).sum::<f64>()
            / n as f64;
        assert!(mean_z.abs() < 0.02);
    }
}
