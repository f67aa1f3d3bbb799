mod common;

use common::*;
use schottky::deform::{make_path, scan_path, PathKind, PathSpec, ScanOptions, SplitMode};
use schottky::series::estimate_delta;

fn spec(kind: PathKind, t_max: f64) -> PathSpec {
    PathSpec { kind, t_max }
}

#[test]
fn multiplier_pinch_narrows_the_gaps() {
    let g = four_disk();
    let path = make_path(&g, &spec(PathKind::MultiplierPinch, 1.0)).unwrap();
    let mut last = (f64::INFINITY, 0.0);
    for t in [0.0, 0.05, 0.1, 0.15, 0.2] {
        let h = path.at(t).unwrap();
        let report = h.validate();
        assert!(report.valid, "{t}: {:?}", report.problems);
        let q = h.generator(1).fixed_points().unwrap().multiplier.norm();
        assert!(report.min_gap < last.0 && q > last.1, "{t}");
        last = (report.min_gap, q);
    }
    // Further on, the image disk of the first pair swells into the second pair.
    assert!(!path.at(0.75).unwrap().validate().valid);
}

#[test]
fn multiplier_scan_records_failures_without_aborting() {
    let g = four_disk();
    let path = make_path(&g, &spec(PathKind::MultiplierPinch, 1.0)).unwrap();
    let p = [pt(0.1, 0.2), pt(-0.3, 0.1), pt(0.2, -0.25), pt(-0.15, -0.3)];
    let opts = ScanOptions { max_len: 4, delta_len: 6, cloud_depth: 2, ..Default::default() };
    let r = scan_path(&path, 5, (&p[0], &p[1], &p[2], &p[3]), opts).unwrap();
    assert_eq!(r.steps.len(), 5);
    assert!(r.steps[0].valid && r.steps[1].valid);
    for s in r.steps.iter().filter(|s| !s.valid) {
        assert!(!s.errors.is_empty());
        assert_eq!(s.carried_from, Some(0.25));
    }
}

#[test]
fn path_specs_read_from_json() {
    let s: PathSpec = serde_json::from_str(
        r#"{"kind":"CircleCollision","moving":0,"target":2,"collision_time":0.5,"t_max":1.0}"#,
    )
    .unwrap();
    assert_eq!(s, spec(PathKind::CircleCollision { moving: 0, target: 2, collision_time: 0.5 }, 1.0));
    let r: PathSpec = serde_json::from_str(r#"{"kind":"RadiusPinch","t_max":0.9}"#).unwrap();
    assert_eq!(r, spec(PathKind::RadiusPinch, 0.9));
    assert!(serde_json::from_str::<PathSpec>(r#"{"kind":"RadiusPinch"}"#).is_err());
    assert!(serde_json::from_str::<PathSpec>(r#"{"kind":"Sideways","t_max":1.0}"#).is_err());
}

#[test]
fn radius_pinch_scan_in_orbit_mode() {
    let g = four_disk();
    let path = make_path(&g, &spec(PathKind::RadiusPinch, 0.9)).unwrap();
    let p = [pt(0.1, 0.2), pt(-0.3, 0.1), pt(0.2, -0.25), pt(-0.15, -0.3)];
    let opts = ScanOptions {
        max_len: 5,
        delta_len: 6,
        mode: SplitMode::Orbit,
        eps: 0.1,
        cloud_depth: 3,
        ..Default::default()
    };
    let r = scan_path(&path, 6, (&p[0], &p[1], &p[2], &p[3]), opts).unwrap();
    assert!(r.steps.iter().all(|s| s.valid && s.errors.is_empty()));
    assert!(r.steps.iter().all(|s| s.partition_exact == Some(true)));
    let first = r.steps[0].delta_hat.unwrap();
    assert!(r.steps[5].delta_hat.unwrap() > first);
    assert_eq!(first, estimate_delta(&g, &r.z0, 6).unwrap().delta);
}

#[test]
fn scans_are_deterministic_across_thread_counts() {
    let g = four_disk();
    let path = make_path(&g, &spec(PathKind::RadiusPinch, 1.0)).unwrap();
    let p = [pt(0.1, 0.2), pt(-0.3, 0.1), pt(0.2, -0.25), pt(-0.15, -0.3)];
    let opts = ScanOptions { max_len: 5, delta_len: 6, cloud_depth: 3, ..Default::default() };
    let run = |n: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        pool.install(|| scan_path(&path, 5, (&p[0], &p[1], &p[2], &p[3]), opts).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
