#![allow(dead_code)]

use schottky::arakelov::cyclic_oracle;
use schottky::{Complex64, OrientedDisk, ProjectivePoint, SchottkyGroup};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pt(re: f64, im: f64) -> ProjectivePoint {
    ProjectivePoint::finite(c(re, im))
}

pub fn four_disk() -> SchottkyGroup {
    SchottkyGroup::four_disk(0.5, 2.0).unwrap()
}

/// Radius-0.3 disk pairs on three lines through the origin.
pub fn rank_three() -> SchottkyGroup {
    let d = |re: f64, im: f64| OrientedDisk::bounded(c(re, im), 0.3).unwrap();
    SchottkyGroup::from_disk_pairs(&[
        (d(-2.0, 0.0), d(2.0, 0.0)),
        (d(0.0, -2.0), d(0.0, 2.0)),
        (d(-1.4, -1.4), d(1.4, 1.4)),
    ])
    .unwrap()
}

/// Oracle value for q = 0.1, (y, q, x, p) = (2, 3, 1, 4), computed once by
/// the direct bilateral summation and frozen.
pub const CYCLIC_FIXTURE: f64 = -1.202_541_112_007_768;

/// Midpoint product quadrature over the fundamental annulus `0.1 ≤ |z| ≤ 1`
/// of the cyclic group, weighted by normalized spherical area.
pub fn annulus_quadrature(q: f64, x: ProjectivePoint, y: ProjectivePoint, nr: usize, nt: usize) -> f64 {
    let (r0, r1) = (q, 1.0);
    let mut nodes = Vec::new();
    let mut total_w = 0.0;
    for i in 0..nr {
        // Uniform in log r keeps the inner rim resolved.
        let s = (r0.ln() + (r1 / r0).ln() * (i as f64 + 0.5) / nr as f64).exp();
        let ds = (r1 / r0).ln() / nr as f64 * s;
        for j in 0..nt {
            let th = std::f64::consts::TAU * (j as f64 + 0.5) / nt as f64;
            let w = 4.0 * s / (1.0 + s * s).powi(2) * ds * std::f64::consts::TAU / nt as f64;
            nodes.push((ProjectivePoint::finite(Complex64::from_polar(s, th)), w));
            total_w += w;
        }
    }
    let mut acc = 0.0;
    for (p, wp) in &nodes {
        for (qq, wq) in &nodes {
            if let Ok(v) = cyclic_oracle(c(q, 0.0), &y, qq, &x, p, 1e-9) {
                acc += wp * wq * v;
            }
        }
    }
    acc / (total_w * total_w)
}
