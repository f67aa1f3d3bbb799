use super::{SchottkyGroup, Word};
use crate::complex_geom::ProjectivePoint;
use crate::{Error, Result};

/// Moves `p` into the fundamental domain. Returns the reduced point and the
/// word `w` with `p = w(reduced)`.
pub fn reduce_to_fundamental_domain(
    group: &SchottkyGroup,
    p: &ProjectivePoint,
    max_steps: usize,
) -> Result<(ProjectivePoint, Word)> {
    let mut point = *p;
    let mut letters: Vec<i8> = Vec::new();
    for _ in 0..=max_steps {
        let hit = (0..group.disks().len()).find(|&i| group.disks()[i].contains_open(&point));
        let Some(i) = hit else {
            return Ok((point, Word::reduce(letters)));
        };
        if letters.len() == max_steps {
            break;
        }
        let k = (i / 2 + 1) as i8;
        // Inside D_k′ the point came from g_k; inside D_k from g_k⁻¹.
        let (letter, undo) = if i % 2 == 1 {
            (k, group.generator(k as usize).inverse())
        } else {
            (-k, *group.generator(k as usize))
        };
        point = undo.apply(&point);
        letters.push(letter);
    }
    Err(Error::NoTermination { steps: max_steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn already_reduced() {
        let g = SchottkyGroup::cyclic(c(0.04, 0.0), 1.0).unwrap();
        let p = ProjectivePoint::finite(c(0.5, 0.0));
        let (r, w) = reduce_to_fundamental_domain(&g, &p, 10).unwrap();
        assert_eq!(r, p);
        assert!(w.is_identity());
    }

    #[test]
    fn one_step_out_of_the_small_disk() {
        let g = SchottkyGroup::cyclic(c(0.04, 0.0), 1.0).unwrap();
        let p = ProjectivePoint::finite(c(0.01, 0.0));
        let (r, w) = reduce_to_fundamental_domain(&g, &p, 10).unwrap();
        assert!((r.to_affine().unwrap().norm() - 0.25).abs() < 1e-14);
        assert_eq!(w.letters(), &[1]);
        assert!(g.word_map(&w).apply(&r).approx_eq(&p, 1e-14));
    }

    #[test]
    fn fixed_point_never_escapes() {
        let g = SchottkyGroup::cyclic(c(0.04, 0.0), 1.0).unwrap();
        let fp = g.generator(1).fixed_points().unwrap().attracting;
        assert!(fp.approx_eq(&ProjectivePoint::finite(c(0.0, 0.0)), 0.0));
        assert!(matches!(
            reduce_to_fundamental_domain(&g, &fp, 200),
            Err(Error::NoTermination { steps: 200 })
        ));
    }

    #[test]
    fn reduction_is_idempotent_and_equivariant() {
        let g = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        for z in [c(2.1, 0.05), c(-1.8, 0.2), c(0.1, 2.3), c(0.0, -2.05)] {
            let p = ProjectivePoint::finite(z);
            let (r, w) = reduce_to_fundamental_domain(&g, &p, 100).unwrap();
            assert!(g.in_fundamental_domain(&r));
            assert!(g.word_map(&w).apply(&r).approx_eq(&p, 1e-10));
            let (r2, w2) = reduce_to_fundamental_domain(&g, &r, 100).unwrap();
            assert_eq!(r2, r);
            assert!(w2.is_identity());
        }
    }
}
