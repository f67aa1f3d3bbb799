use rayon::prelude::*;
use serde::Serialize;

use super::Verdict;
use crate::complex_geom::ProjectivePoint;
use crate::group::SchottkyGroup;
use crate::{Error, Result};

/// Shells whose ratio roots are averaged.
const RATIO_SHELLS: usize = 3;
const BISECTION_STEPS: usize = 60;
const S_MAX: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaEstimate {
    pub delta: f64,
    /// Roots of `P_n(s) / P_{n−1}(s) = 1` for the last shells.
    pub shell_roots: Vec<f64>,
    /// `Inconclusive` when the ratio at `s = 0` is already below one.
    pub verdict: Verdict,
}

/// `ln P_n(s)` for `P_n(s) = Σ exp(s ℓ_i)`.
fn log_power_sum(logs: &[f64], s: f64) -> f64 {
    let m = logs.iter().map(|l| s * l).fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let sum: f64 = logs.iter().map(|l| (s * l - m).exp()).sum();
    m + sum.ln()
}

/// Critical-exponent estimate from the shell growth of the Poincaré series
/// `P_n(s) = Σ_{|w| = n} |w′(z0)|^s` (spherical derivative).
pub fn estimate_delta(
    group: &SchottkyGroup,
    z0: &ProjectivePoint,
    max_len: usize,
) -> Result<DeltaEstimate> {
    if max_len < 6 {
        return Err(Error::InvalidArgument("estimate_delta needs max_len >= 6".into()));
    }
    let first_kept = max_len - RATIO_SHELLS;
    let mut shells: Vec<Vec<f64>> = Vec::new();
    for shell in group.shells(max_len)? {
        if shell.word_length() < first_kept {
            continue;
        }
        shells.push(
            shell
                .maps()
                .par_iter()
                .with_min_len(512)
                .map(|m| m.spherical_derivative(z0).ln())
                .collect(),
        );
    }

    let mut roots = Vec::with_capacity(RATIO_SHELLS);
    let mut inconclusive = false;
    for pair in shells.windows(2) {
        let log_ratio = |s: f64| log_power_sum(&pair[1], s) - log_power_sum(&pair[0], s);
        let r0 = log_ratio(0.0);
        if r0 <= 0.0 {
            inconclusive |= r0 < 0.0;
            roots.push(0.0);
            continue;
        }
        if log_ratio(S_MAX) > 0.0 {
            roots.push(S_MAX);
            continue;
        }
        let (mut lo, mut hi) = (0.0, S_MAX);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if log_ratio(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    let delta = roots.iter().sum::<f64>() / roots.len() as f64;
    let verdict = if inconclusive { Verdict::Inconclusive } else { Verdict::Converging };
    Ok(DeltaEstimate { delta, shell_roots: roots, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn cyclic_exponent_is_zero() {
        let g = SchottkyGroup::cyclic(Complex64::new(0.1, 0.0), 1.0).unwrap();
        let est = estimate_delta(&g, &ProjectivePoint::real(0.5), 10).unwrap();
        assert!(est.delta <= 0.05);
        assert_eq!(est.shell_roots.len(), 3);
    }

    #[test]
    fn four_disk_exponent() {
        let g = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        let z0 = ProjectivePoint::real(0.0);
        let a = estimate_delta(&g, &z0, 8).unwrap().delta;
        let b = estimate_delta(&g, &z0, 10).unwrap().delta;
        assert!(a > 0.0 && a < 1.0, "{a}");
        assert!((a - b).abs() < 0.02, "{a} {b}");
    }

    #[test]
    fn derivative_of_long_words_obeys_the_chain_rule() {
        let g = SchottkyGroup::four_disk(0.125, 2.0).unwrap();
        let z = ProjectivePoint::real(0.0);
        let word = crate::Word::new(vec![1, 2, -1, 2, 2, 1, -2, -1, -1, 2, 1, 1]).unwrap();
        let mut chain = 1.0;
        let mut p = z;
        for &l in word.letters().iter().rev() {
            let m = crate::Word::new(vec![l]).map(|w| g.word_map(&w)).unwrap();
            chain *= m.spherical_derivative(&p);
            p = m.apply(&p);
        }
        let direct = g.word_map(&word).spherical_derivative(&z);
        assert!(chain < 1e-30);
        assert!((direct / chain - 1.0).abs() < 1e-9, "{direct:e} {chain:e}");
    }

    #[test]
    fn short_truncation_rejected() {
        let g = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        assert!(estimate_delta(&g, &ProjectivePoint::real(0.0), 5).is_err());
    }
}
