mod common;

use std::collections::HashSet;

use common::*;
use proptest::prelude::*;
use schottky::group::{enumerate_words, limit_set_cloud, reduce_to_fundamental_domain, word_count};
use schottky::{MoebiusMap, ProjectivePoint, SchottkyGroup, Word};

#[test]
fn rank_three_example_is_valid() {
    let r = rank_three().validate();
    assert!(r.valid, "{:?}", r.problems);
}

#[test]
fn stream_lengths_match_the_count_formula() {
    let groups = [SchottkyGroup::cyclic(c(0.1, 0.0), 1.0).unwrap(), four_disk(), rank_three()];
    for g in &groups {
        for n in 0..=6 {
            assert_eq!(enumerate_words(g, n).unwrap().count() as u128, word_count(g.rank(), n));
        }
    }
}

#[test]
fn matrices_match_products_up_to_length_eight() {
    let g = four_disk();
    for (w, m) in enumerate_words(&g, 8).unwrap() {
        let direct = w
            .letters()
            .iter()
            .map(|&l| {
                let gk = *g.generator(l.unsigned_abs() as usize);
                if l > 0 {
                    gk
                } else {
                    gk.inverse()
                }
            })
            .fold(MoebiusMap::identity(), |acc, x| acc.compose(&x));
        assert!(m.max_entry_diff(&direct) < 1e-10, "{w}");
    }
}

#[test]
fn truncations_are_closed_under_inversion() {
    let g = rank_three();
    let words: HashSet<Word> = enumerate_words(&g, 5).unwrap().map(|(w, _)| w).collect();
    for w in &words {
        assert!(words.contains(&w.inverse()));
    }
}

#[test]
fn limit_cloud_is_nested_on_rank_three() {
    let g = rank_three();
    let cloud = limit_set_cloud(&g, 4).unwrap();
    for n in 1..4 {
        let outer: Vec<_> = cloud.at_depth(n).collect();
        for inner in cloud.at_depth(n + 1) {
            assert!(outer.iter().any(|o| o.disk.contains_disk(&inner.disk, 1e-9)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_idempotent(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let g = four_disk();
        let p = ProjectivePoint::finite(c(re, im));
        if let Ok((r, w)) = reduce_to_fundamental_domain(&g, &p, 200) {
            prop_assert!(g.in_fundamental_domain(&r));
            let back = g.word_map(&w).apply(&r);
            prop_assert!(back.chordal_distance(&p) < 1e-9);
            let (r2, w2) = reduce_to_fundamental_domain(&g, &r, 200).unwrap();
            prop_assert_eq!(r2, r);
            prop_assert!(w2.is_identity());
        }
    }

    #[test]
    fn conjugated_groups_stay_valid(
        a in -0.3f64..0.3, b in -0.3f64..0.3, t in -0.5f64..0.5,
    ) {
        let m = MoebiusMap::new(c(1.0, a), c(t, 0.0), c(b, a), c(1.0, 0.0)).unwrap();
        let h = four_disk().conjugated_by(&m).unwrap();
        prop_assert!(h.validate().valid);
    }
}
