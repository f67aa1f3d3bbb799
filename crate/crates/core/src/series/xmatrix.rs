use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::SeriesEstimate;
use crate::complex_geom::{log_abs_cross_ratio, ProjectivePoint};
use crate::group::{conjugacy_class_reps, double_coset_reps, SchottkyGroup, Word};
use crate::{Error, Result};

/// Denominators smaller than this in magnitude are rejected.
pub const SINGULAR_DENOMINATOR: f64 = 1e-12;

/// Period-correction coefficients `X[k][l] = −i · num_k / den_{k,l}`.
///
/// `num_k` sums `ln |⟨a, b, z⁺(h), z⁻(h)⟩|` over distinct conjugates
/// `h = c g_k c⁻¹` (shell index: length of `c`). `den_{k,l}` sums
/// `ln |⟨z⁺(g_k), z⁻(g_k), h z⁺(g_l), h z⁻(g_l)⟩|` over double coset
/// representatives `h` (shell index: length of `h`); on the diagonal the
/// singular identity coset is replaced by `ln |q_k|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XMatrix {
    pub entries: Vec<Vec<Complex64>>,
    pub numerators: Vec<SeriesEstimate>,
    pub denominators: Vec<Vec<SeriesEstimate>>,
    /// Off-diagonal `(k, l)` whose denominator vanished; their entries are 0.
    pub singular_entries: Vec<(usize, usize)>,
}

impl XMatrix {
    /// Entry `(k, l)`, both counted from 1.
    pub fn entry(&self, k: usize, l: usize) -> Complex64 {
        self.entries[k - 1][l - 1]
    }

    /// The coefficients `X_l = X[l][l]` used to correct `ω_l`.
    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.entries.len()).map(|l| self.entries[l][l]).collect()
    }
}

fn collect_terms(items: Vec<(usize, Word, Result<f64>)>) -> Result<Vec<(usize, f64)>> {
    items
        .into_iter()
        .map(|(n, w, r)| match r {
            Ok(t) if t.is_finite() => Ok((n, t)),
            Ok(_) => Err(Error::DegenerateCrossRatio { word: Some(w) }),
            Err(e) => Err(e.with_word(w)),
        })
        .collect()
}

pub fn x_matrix(
    group: &SchottkyGroup,
    a: &ProjectivePoint,
    b: &ProjectivePoint,
    conj_depth: usize,
    coset_depth: usize,
) -> Result<XMatrix> {
    if a.chordal_distance(b) <= super::divisor::POINT_TOL {
        return Err(Error::InvalidArgument("a and b must be distinct points".into()));
    }
    let g = group.rank();
    let fixed = group
        .generators()
        .iter()
        .map(|m| m.fixed_points())
        .collect::<Result<Vec<_>>>()?;

    let mut numerators = Vec::with_capacity(g);
    for k in 1..=g {
        let fp = &fixed[k - 1];
        let reps = conjugacy_class_reps(group, k, conj_depth)?;
        let items = reps
            .into_par_iter()
            .map(|r| {
                let zp = r.conjugator_map.apply(&fp.attracting);
                let zm = r.conjugator_map.apply(&fp.repelling);
                (r.conjugator.len(), r.word, log_abs_cross_ratio(a, b, &zp, &zm))
            })
            .collect();
        numerators.push(SeriesEstimate::from_terms(collect_terms(items)?));
    }

    let mut denominators = Vec::with_capacity(g);
    for k in 1..=g {
        let fk = &fixed[k - 1];
        let mut row = Vec::with_capacity(g);
        for l in 1..=g {
            let fl = &fixed[l - 1];
            let reps = double_coset_reps(group, k, l, coset_depth)?;
            let mut items: Vec<(usize, Word, Result<f64>)> = Vec::new();
            if k == l {
                items.push((0, Word::identity(), Ok(fk.multiplier.norm().ln())));
            }
            items.par_extend(reps.into_par_iter().map(|r| {
                let t = log_abs_cross_ratio(
                    &fk.attracting,
                    &fk.repelling,
                    &r.map.apply(&fl.attracting),
                    &r.map.apply(&fl.repelling),
                );
                (r.word.len(), r.word, t)
            }));
            row.push(SeriesEstimate::from_terms(collect_terms(items)?));
        }
        denominators.push(row);
    }

    let mut entries = vec![vec![Complex64::new(0.0, 0.0); g]; g];
    let mut singular_entries = Vec::new();
    for k in 0..g {
        for l in 0..g {
            let den = denominators[k][l].total;
            if !(den.abs() >= SINGULAR_DENOMINATOR) {
                // Off-diagonal denominators can vanish by symmetry; only the
                // diagonal enters the assembled form.
                if k == l || !den.is_finite() {
                    return Err(Error::SingularDenominator { k: k + 1, l: l + 1, value: den });
                }
                singular_entries.push((k + 1, l + 1));
                continue;
            }
            entries[k][l] = Complex64::new(0.0, -numerators[k].total / den);
        }
    }
    Ok(XMatrix { entries, numerators, denominators, singular_entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::MoebiusMap;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cyclic_closed_form() {
        let g = SchottkyGroup::cyclic(c(0.1, 0.0), 1.0).unwrap();
        let x = x_matrix(&g, &ProjectivePoint::real(1.0), &ProjectivePoint::real(10.0), 6, 6)
            .unwrap();
        assert!((x.entry(1, 1) - c(0.0, -1.0)).norm() < 1e-14);
        assert_eq!(x.denominators[0][0].shells.len(), 1);
    }

    #[test]
    fn equal_moduli_give_zero() {
        let g = SchottkyGroup::cyclic(c(0.1, 0.0), 1.0).unwrap();
        let b = c(2.0, 0.0);
        let a = b * Complex64::from_polar(1.0, 1.3);
        let x = x_matrix(&g, &ProjectivePoint::finite(a), &ProjectivePoint::finite(b), 4, 4)
            .unwrap();
        assert!(x.entry(1, 1).norm() < 1e-15);
    }

    #[test]
    fn rank_one_scaling_invariance() {
        let g = SchottkyGroup::cyclic(c(0.1, 0.05), 1.0).unwrap();
        let (a, b) = (c(0.7, 0.2), c(-3.0, 1.0));
        let x0 = x_matrix(&g, &ProjectivePoint::finite(a), &ProjectivePoint::finite(b), 4, 4)
            .unwrap();
        let lam = c(0.3, -1.7);
        let x1 = x_matrix(
            &g,
            &ProjectivePoint::finite(a * lam),
            &ProjectivePoint::finite(b * lam),
            4,
            4,
        )
        .unwrap();
        assert!((x0.entry(1, 1) - x1.entry(1, 1)).norm() < 1e-10);
    }

    #[test]
    fn symmetric_group_invariance() {
        // z ↦ −z swaps D_k with D_k′, so it conjugates g_k to g_k⁻¹ and
        // exchanges attracting and repelling fixed points.
        let g = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        let s = MoebiusMap::scaling(c(-1.0, 0.0)).unwrap();
        let (a, b) = (ProjectivePoint::finite(c(0.3, 0.1)), ProjectivePoint::finite(c(-0.2, 0.6)));
        let x0 = x_matrix(&g, &a, &b, 4, 4).unwrap();
        let x1 = x_matrix(&g, &s.apply(&b), &s.apply(&a), 4, 4).unwrap();
        for k in 1..=2 {
            for l in 1..=2 {
                assert!((x0.entry(k, l) - x1.entry(k, l)).norm() < 1e-10);
            }
        }
        assert!(x0.entry(1, 1).norm() > 1e-6);
    }

    #[test]
    fn symmetric_off_diagonal_denominators_vanish() {
        let g = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        let (a, b) = (ProjectivePoint::finite(c(0.3, 0.1)), ProjectivePoint::finite(c(-0.2, 0.6)));
        let x = x_matrix(&g, &a, &b, 4, 4).unwrap();
        assert_eq!(x.singular_entries, vec![(1, 2), (2, 1)]);
        assert_eq!(x.entry(1, 2), c(0.0, 0.0));
        assert!(x.denominators[0][0].total.abs() > 1.0);
    }

    #[test]
    fn entries_are_imaginary() {
        let g = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        let x = x_matrix(
            &g,
            &ProjectivePoint::finite(c(0.3, 0.1)),
            &ProjectivePoint::finite(c(-0.2, 0.6)),
            3,
            3,
        )
        .unwrap();
        for row in &x.entries {
            for e in row {
                assert_eq!(e.re, 0.0);
            }
        }
    }
}
