use num_complex::Complex64;

use crate::complex_geom::ProjectivePoint;
use crate::sum::ExactSum;
use crate::{Error, Result};

const MAX_MODULUS: f64 = 0.99;
const MAX_CUTOFF: u32 = 1_000_000;

fn affine(p: &ProjectivePoint, name: &str) -> Result<Complex64> {
    match p.to_affine() {
        Some(z) if z != Complex64::new(0.0, 0.0) => Ok(z),
        _ => Err(Error::InvalidArgument(format!("{name} must be finite and nonzero"))),
    }
}

/// `Σ_{|n| ≤ cutoff} ln |⟨y, q, μⁿx, μⁿp⟩|` in affine arithmetic. Negative
/// powers are rewritten with `m = μ^{|n|}` so no term overflows.
fn bilateral_sum(mu: Complex64, y: Complex64, q: Complex64, x: Complex64, p: Complex64, cutoff: u32) -> f64 {
    let term = |a: Complex64, b: Complex64, c: Complex64, d: Complex64| -> f64 {
        ((a * b) / (c * d)).norm().ln()
    };
    let mut acc = ExactSum::new();
    acc.add(term(y - x, q - p, y - p, q - x));
    let mut m = Complex64::new(1.0, 0.0);
    for _ in 1..=cutoff {
        m *= mu;
        acc.add(term(y - m * x, q - m * p, y - m * p, q - m * x));
        acc.add(term(m * y - x, m * q - p, m * y - p, m * q - x));
    }
    acc.value()
}

/// The cross-ratio series of the cyclic group `⟨z ↦ μ z⟩`, summed over
/// `n ∈ ℤ` directly.
///
/// With `r = max/min` of the four moduli, every term beyond `|n| = N` is
/// bounded by `16 r² |μ|^{|n|}` once `|μ|^{N+1} r ≤ 1/2`; the cutoff is the first
/// `N` whose two-sided geometric tail `2·16 r² |μ|^{N+1} / (1 − |μ|)` is below
/// `tol`. The result is checked against a run with twice the cutoff.
pub fn cyclic_oracle(
    multiplier: Complex64,
    y: &ProjectivePoint,
    q_pt: &ProjectivePoint,
    x: &ProjectivePoint,
    p: &ProjectivePoint,
    tol: f64,
) -> Result<f64> {
    let a = multiplier.norm();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidArgument("multiplier must satisfy 0 < |q| < 1".into()));
    }
    if a > MAX_MODULUS {
        return Err(Error::ToleranceUnreachable(format!("|q| = {a} exceeds {MAX_MODULUS}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let pts = [affine(y, "y")?, affine(q_pt, "q")?, affine(x, "x")?, affine(p, "p")?];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(Error::InvalidArgument("oracle points must be distinct".into()));
            }
        }
    }
    let max = pts.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let min = pts.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let ratio = max / min;
    let c = 2.0 * 16.0 * ratio * ratio / (1.0 - a);
    let mut cutoff = 0u32;
    while c * a.powi(cutoff as i32 + 1) >= tol || a.powi(cutoff as i32 + 1) * ratio > 0.5 {
        cutoff += 1;
        if cutoff > MAX_CUTOFF {
            return Err(Error::ToleranceUnreachable(format!("cutoff exceeds {MAX_CUTOFF}")));
        }
    }
    let [y, q, x, p] = pts;
    let value = bilateral_sum(multiplier, y, q, x, p, cutoff);
    let check = bilateral_sum(multiplier, y, q, x, p, 2 * cutoff);
    if (value - check).abs() > tol {
        return Err(Error::ToleranceUnreachable(format!(
            "doubling the cutoff moved the sum by {:e}",
            (value - check).abs()
        )));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> ProjectivePoint {
        ProjectivePoint::real(x)
    }

    #[test]
    fn huge_tolerance_leaves_the_identity_term() {
        let v = cyclic_oracle(Complex64::new(0.1, 0.0), &r(2.0), &r(3.0), &r(1.0), &r(4.0), 1e300)
            .unwrap();
        let expect = ((2.0f64 - 1.0) * (3.0 - 4.0) / ((2.0 - 4.0) * (3.0 - 1.0))).abs().ln();
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn scale_invariant() {
        let mu = Complex64::new(0.2, 0.1);
        let pts = [2.0, 3.0, 1.0, 4.0].map(|x| Complex64::new(x, 0.5 * x * x - 1.0));
        let lam = Complex64::new(-0.7, 1.9);
        let f = |s: Complex64| {
            let p = pts.map(|z| ProjectivePoint::finite(z * s));
            cyclic_oracle(mu, &p[0], &p[1], &p[2], &p[3], 1e-13).unwrap()
        };
        assert!((f(Complex64::new(1.0, 0.0)) - f(lam)).abs() < 1e-12);
    }

    #[test]
    fn rejects_slow_multipliers_and_bad_points() {
        let q = Complex64::new(0.995, 0.0);
        assert!(matches!(
            cyclic_oracle(q, &r(2.0), &r(3.0), &r(1.0), &r(4.0), 1e-10),
            Err(Error::ToleranceUnreachable(_))
        ));
        let q = Complex64::new(0.1, 0.0);
        assert!(cyclic_oracle(q, &r(0.0), &r(3.0), &r(1.0), &r(4.0), 1e-10).is_err());
        let inf = ProjectivePoint::infinity();
        assert!(cyclic_oracle(q, &inf, &r(3.0), &r(1.0), &r(4.0), 1e-10).is_err());
    }
}
