use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{for_each_shell, x_matrix, Divisor, XMatrix};
use crate::complex_geom::ProjectivePoint;
use crate::group::{enumerate_words, SchottkyGroup};
use crate::{Error, Result};

/// Relative tolerance for an evaluation point hitting an orbit pole.
pub const POLE_TOL: f64 = 1e-12;

/// Largest change tolerated when the node count is doubled.
pub const QUADRATURE_JUMP: f64 = 1e-3;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A meromorphic 1-form `f(z) dz` that can be evaluated in the affine chart.
pub trait OneForm: Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64>;
}

impl<F> OneForm for F
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self(z)
    }
}

#[derive(Clone, Copy, Debug)]
struct Term {
    alpha: Complex64,
    beta: Complex64,
    coeff: Complex64,
    word: u32,
}

/// Logarithmic derivative of a truncated W-product, or a linear combination
/// of several, precomputed for repeated evaluation.
///
/// For `h = [[a, b], [c, d]]` and a divisor point `(u : v)`, the factor
/// `det(h·(z : 1), (u : v)) = α z + β` with `α = v a − u c`, `β = v b − u d`
/// contributes `m α / (α z + β)`. Orbit points at `∞` give `α = 0` and drop
/// out, so no chart change is needed.
#[derive(Clone, Debug)]
pub struct DlogSeries {
    terms: Vec<Term>,
    max_len: usize,
}

impl DlogSeries {
    pub fn new(group: &SchottkyGroup, d: &Divisor, max_len: usize) -> Result<Self> {
        Self::combination(group, &[(d.clone(), Complex64::new(1.0, 0.0))], max_len)
    }

    /// `Σ_j c_j · dlog W_{d_j}`.
    pub fn combination(
        group: &SchottkyGroup,
        parts: &[(Divisor, Complex64)],
        max_len: usize,
    ) -> Result<Self> {
        let mut points: Vec<(ProjectivePoint, Complex64)> = Vec::new();
        for (d, c) in parts {
            d.require_degree_zero()?;
            points.extend(d.terms().iter().map(|(p, m)| (*p, c * *m as f64)));
        }
        let mut terms = Vec::new();
        let mut word = 0u32;
        for_each_shell(
            group,
            max_len,
            |h| {
                let [a, b, c, d] = h.entries();
                Ok(points
                    .iter()
                    .map(|(p, coeff)| (p.v() * a - p.u() * c, p.v() * b - p.u() * d, *coeff))
                    .collect::<Vec<_>>())
            },
            |_, per_word| {
                for row in per_word {
                    terms.extend(
                        row.into_iter()
                            .map(|(alpha, beta, coeff)| Term { alpha, beta, coeff, word }),
                    );
                    word += 1;
                }
                Ok(())
            },
        )?;
        Ok(Self { terms, max_len })
    }

    fn pole_word(&self, group: &SchottkyGroup, index: u32) -> Option<crate::Word> {
        enumerate_words(group, self.max_len).ok()?.nth(index as usize).map(|(w, _)| w)
    }

    fn eval_raw(&self, z: Complex64) -> std::result::Result<Complex64, u32> {
        if !z.is_finite() {
            return Err(u32::MAX);
        }
        let zz = 1.0 + z.norm_sqr();
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let den = t.alpha * z + t.beta;
            let scale = zz * (t.alpha.norm_sqr() + t.beta.norm_sqr());
            if den.norm_sqr() <= POLE_TOL * POLE_TOL * scale {
                return Err(t.word);
            }
            acc += t.coeff * t.alpha / den;
        }
        Ok(acc)
    }
}

impl OneForm for DlogSeries {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_raw(z).map_err(|w| {
            if w == u32::MAX {
                Error::InvalidArgument("forms are evaluated at finite points".into())
            } else {
                Error::PoleHit { word: None }
            }
        })
    }
}

fn finite_point(z: &ProjectivePoint) -> Result<Complex64> {
    z.to_affine()
        .ok_or_else(|| Error::InvalidArgument("forms are evaluated at finite points".into()))
}

fn with_pole_word(
    series: &DlogSeries,
    group: &SchottkyGroup,
    z: Complex64,
) -> Result<Complex64> {
    series.eval_raw(z).map_err(|w| {
        if w == u32::MAX {
            Error::InvalidArgument("forms are evaluated at finite points".into())
        } else {
            Error::PoleHit { word: series.pole_word(group, w) }
        }
    })
}

/// `d/dz ln W_{d,base}(z)`; independent of `base`, which only fixes a
/// multiplicative constant.
pub fn dlog_w(
    group: &SchottkyGroup,
    d: &Divisor,
    base: &ProjectivePoint,
    z: &ProjectivePoint,
    max_len: usize,
) -> Result<Complex64> {
    let _ = base;
    let z = finite_point(z)?;
    with_pole_word(&DlogSeries::new(group, d, max_len)?, group, z)
}

fn basis_divisor(group: &SchottkyGroup, l: usize, z1: &ProjectivePoint) -> Result<Divisor> {
    group.check_rank_index(l)?;
    if !group.in_fundamental_domain(z1) {
        return Err(Error::InvalidArgument("z1 must lie in the fundamental domain".into()));
    }
    Divisor::difference(group.generator(l).apply(z1), *z1)
}

/// `ω_l(z) = −i/(2π) · dlog W_{(g_l z1) − (z1), z0}(z)`.
pub fn basis_form(
    group: &SchottkyGroup,
    l: usize,
    z1: &ProjectivePoint,
    z0: &ProjectivePoint,
    z: &ProjectivePoint,
    max_len: usize,
) -> Result<Complex64> {
    let d = basis_divisor(group, l, z1)?;
    Ok(-I / (2.0 * PI) * dlog_w(group, &d, z0, z, max_len)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OmegaParams {
    pub max_len: usize,
    pub conj_depth: usize,
    pub coset_depth: usize,
    pub z0: ProjectivePoint,
    pub z1: ProjectivePoint,
}

/// `ω_{(x)−(y)} = ν_{(x)−(y)} − Σ_l X_l(x, y) ω_l` with `X_l = X[l][l]`.
#[derive(Clone, Debug)]
pub struct OmegaForm {
    pub x_matrix: XMatrix,
    pub coefficients: Vec<Complex64>,
    pub params: OmegaParams,
    series: DlogSeries,
}

impl OmegaForm {
    pub fn new(
        group: &SchottkyGroup,
        x: &ProjectivePoint,
        y: &ProjectivePoint,
        params: OmegaParams,
    ) -> Result<Self> {
        let xm = x_matrix(group, x, y, params.conj_depth, params.coset_depth)?;
        let coefficients = xm.diagonal();
        Self::with_coefficients(group, x, y, params, xm, coefficients)
    }

    /// Assembles with caller-chosen correction coefficients.
    pub fn with_coefficients(
        group: &SchottkyGroup,
        x: &ProjectivePoint,
        y: &ProjectivePoint,
        params: OmegaParams,
        x_matrix: XMatrix,
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        let mut parts = vec![(Divisor::difference(*x, *y)?, Complex64::new(1.0, 0.0))];
        for (l, xl) in coefficients.iter().enumerate() {
            if *xl != Complex64::new(0.0, 0.0) {
                let d = basis_divisor(group, l + 1, &params.z1)?;
                parts.push((d, -xl * (-I / (2.0 * PI))));
            }
        }
        let series = DlogSeries::combination(group, &parts, params.max_len)?;
        Ok(Self { x_matrix, coefficients, params, series })
    }
}

impl OneForm for OmegaForm {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.series.eval(z)
    }
}

pub fn assemble_omega(
    group: &SchottkyGroup,
    x: &ProjectivePoint,
    y: &ProjectivePoint,
    z: &ProjectivePoint,
    params: OmegaParams,
) -> Result<Complex64> {
    let form = OmegaForm::new(group, x, y, params)?;
    with_pole_word(&form.series, group, finite_point(z)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Period {
    pub k: usize,
    pub n_quad: usize,
    /// Trapezoid rule with `n_quad` nodes.
    pub value: Complex64,
    /// Same with `2 n_quad` nodes.
    pub refined: Complex64,
    pub change: f64,
}

/// Trapezoid rule for `∮ f(z) dz` over the circle `|z − center| = radius`,
/// counterclockwise.
pub fn contour_integral(
    form: &dyn OneForm,
    center: Complex64,
    radius: f64,
    n: usize,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
    }
    let step = 2.0 * PI / n as f64;
    let values: Vec<Result<Complex64>> = (0..n)
        .into_par_iter()
        .with_min_len(16)
        .map(|j| {
            let e = Complex64::from_polar(1.0, step * j as f64);
            form.eval(center + radius * e).map(|f| f * I * radius * e)
        })
        .collect();
    let mut acc = crate::sum::ComplexSum::new();
    for v in values {
        acc.add(v?);
    }
    Ok(acc.value() * step)
}

/// Integral of `form` over the boundary circle of `D_k`.
pub fn period_integral(
    group: &SchottkyGroup,
    form: &dyn OneForm,
    k: usize,
    n_quad: usize,
) -> Result<Period> {
    group.check_rank_index(k)?;
    let (disk, _) = group.disk_pair(k);
    let value = contour_integral(form, disk.center, disk.radius, n_quad)?;
    let refined = contour_integral(form, disk.center, disk.radius, 2 * n_quad)?;
    let change = (refined - value).norm();
    if !(change <= QUADRATURE_JUMP) {
        return Err(Error::QuadratureUnstable { delta: change });
    }
    Ok(Period { k, n_quad, value, refined, change })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(re: f64, im: f64) -> ProjectivePoint {
        ProjectivePoint::finite(c(re, im))
    }

    #[test]
    fn identity_only_dlog() {
        let g = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        let (x, y, z) = (c(0.3, 0.1), c(-0.2, 0.6), c(0.7, -0.9));
        let d = Divisor::difference(ProjectivePoint::finite(x), ProjectivePoint::finite(y)).unwrap();
        let v = dlog_w(&g, &d, &pt(0.0, 0.0), &ProjectivePoint::finite(z), 0).unwrap();
        let expect = 1.0 / (z - x) - 1.0 / (z - y);
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn divisor_point_at_infinity() {
        let g = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        let (x, z) = (c(0.3, 0.1), c(0.7, -0.9));
        let d = Divisor::difference(ProjectivePoint::finite(x), ProjectivePoint::infinity()).unwrap();
        let v = dlog_w(&g, &d, &pt(0.0, 0.0), &ProjectivePoint::finite(z), 0).unwrap();
        assert!((v - 1.0 / (z - x)).norm() < 1e-14);
        assert!(dlog_w(&g, &d, &pt(0.0, 0.0), &ProjectivePoint::finite(z), 4).unwrap().is_finite());
    }

    #[test]
    fn cyclic_basis_form_identity_term() {
        let q = c(0.1, 0.0);
        let g = SchottkyGroup::cyclic(q, 1.0).unwrap();
        let z = c(0.4, 0.3);
        let v = basis_form(&g, 1, &pt(1.0, 0.0), &pt(0.5, 0.0), &ProjectivePoint::finite(z), 0)
            .unwrap();
        let expect = -I / (2.0 * PI) * (1.0 / (z - q) - 1.0 / (z - 1.0));
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn simple_periods() {
        let g = SchottkyGroup::cyclic(c(0.1, 0.0), 1.0).unwrap();
        let inv = |z: Complex64| -> Result<Complex64> { Ok(1.0 / z) };
        let p = period_integral(&g, &inv, 1, 256).unwrap();
        assert!((p.value - c(0.0, 2.0 * PI)).norm() < 1e-10);
        let one = |_: Complex64| -> Result<Complex64> { Ok(c(1.0, 0.0)) };
        let p = contour_integral(&one, c(0.3, -2.0), 0.7, 64).unwrap();
        assert!(p.norm() < 1e-12);
    }

    #[test]
    fn unstable_quadrature_detected() {
        let g = SchottkyGroup::cyclic(c(0.1, 0.0), 1.0).unwrap();
        // A pole just off the contour.
        let near = |z: Complex64| -> Result<Complex64> { Ok(1.0 / (z - c(1.0005, 0.0))) };
        assert!(matches!(
            period_integral(&g, &near, 1, 16),
            Err(Error::QuadratureUnstable { .. })
        ));
    }

    #[test]
    fn pole_hit_names_the_word() {
        let g = SchottkyGroup::four_disk(0.5, 2.0).unwrap();
        let x = pt(0.3, 0.1);
        let d = Divisor::difference(x, pt(-0.2, 0.6)).unwrap();
        // z = g_2⁻¹(x) is a zero of the factor indexed by g_2.
        let z = g.generator(2).inverse().apply(&x);
        match dlog_w(&g, &d, &pt(0.0, 0.0), &z, 2) {
            Err(Error::PoleHit { word: Some(w) }) => assert_eq!(w.letters(), &[2]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_correction_reduces_to_dlog() {
        let g = SchottkyGroup::cyclic(c(0.1, 0.0), 1.0).unwrap();
        let (x, y) = (pt(2.0, 0.0), pt(0.0, 2.0));
        let params = OmegaParams {
            max_len: 6,
            conj_depth: 3,
            coset_depth: 3,
            z0: pt(0.5, 0.0),
            z1: pt(0.3, 0.2),
        };
        let z = pt(0.6, 0.2);
        let a = assemble_omega(&g, &x, &y, &z, params).unwrap();
        let d = Divisor::difference(x, y).unwrap();
        let b = dlog_w(&g, &d, &params.z0, &z, 6).unwrap();
        assert_eq!(a, b);
    }
}
