//! Numeric roots of univariate polynomials and binary forms.
//!
//! Roots of a polynomial are the eigenvalues of its companion matrix (complex Schur form),
//! each polished by a few Newton steps. For exact inputs the square-free decomposition is
//! computed first, so multiplicities are exact and only simple roots are located numerically.

use nalgebra::{DMatrix, Schur};

use super::binform::BinForm;
use super::scalar::{to_cx_scaled, Cx, Field};
use crate::error::{Error, Result};

/// Default relative clustering tolerance.
pub const DEFAULT_ROOT_TOL: f64 = 1e-8;

/// A root `(x0 : x1)` of a binary form, normalized to `(1, t)` or `(0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct P1Root {
    pub point: [Cx; 2],
    pub multiplicity: usize,
}

impl P1Root {
    pub fn is_infinite(&self) -> bool {
        self.point[0].norm() == 0.0
    }
}

/// Chordal distance between two points of `P¹(ℂ)`.
pub fn chordal_distance(a: &[Cx; 2], b: &[Cx; 2]) -> f64 {
    let minor = a[0] * b[1] - a[1] * b[0];
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    minor.norm() / (na * nb)
}

fn horner(coeffs: &[Cx], z: Cx) -> (Cx, Cx) {
    let mut p = Cx::new(0.0, 0.0);
    let mut dp = Cx::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Simultaneous Aberth refinement; keeps approximations of distinct roots from collapsing
/// onto one root the way independent Newton steps can.
fn polish_all(coeffs: &[Cx], zs: &mut [Cx]) {
    let n = zs.len();
    for _ in 0..40 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(coeffs, zs[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = p / dp;
            let s: Cx = (0..n).filter(|&j| j != i).map(|j| Cx::new(1.0, 0.0) / (zs[i] - zs[j])).sum();
            let step = w / (Cx::new(1.0, 0.0) - w * s);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            zs[i] -= step;
            moved = moved.max(step.norm() / (1.0 + zs[i].norm()));
        }
        if moved <= 1e-16 {
            break;
        }
    }
}

/// All roots (with repetition) of `Σ coeffs[k] t^k`, leading coefficient non-zero.
pub fn polynomial_roots(coeffs: &[Cx]) -> Result<Vec<Cx>> {
    let mut c: Vec<Cx> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    if c.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[n];
    let monic: Vec<Cx> = c.iter().map(|x| x / lead).collect();
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    // Scale t = ρ s so the monic coefficients are balanced.
    let rho = (0..n)
        .filter(|&k| monic[k].norm() > 0.0)
        .map(|k| monic[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut comp = DMatrix::<Cx>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Cx::new(1.0, 0.0);
    }
    for k in 0..n {
        comp[(k, n - 1)] = -monic[k] / Cx::new(rho.powi((n - k) as i32), 0.0);
    }
    let schur = Schur::try_new(comp, 1e-15, 10_000).ok_or(Error::NonFinite)?;
    let (_, t) = schur.unpack();
    let mut out: Vec<Cx> = (0..n).map(|i| t[(i, i)] * rho).collect();
    polish_all(&c, &mut out);
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(out)
}

fn check_separation(roots: &[P1Root], tol: f64) -> Result<()> {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = chordal_distance(&roots[i].point, &roots[j].point);
            if d < 10.0 * tol {
                return Err(Error::AmbiguousClustering { distance: d, tolerance: tol });
            }
        }
    }
    Ok(())
}

fn affine_root(t: Cx) -> [Cx; 2] {
    [Cx::new(1.0, 0.0), t]
}

/// Distinct roots of an exact binary form with exact multiplicities.
///
/// Fails with [`Error::AmbiguousClustering`] when two exactly distinct roots are numerically
/// within ten times the tolerance of each other; callers resample.
pub fn complex_roots<F: Field>(form: &BinForm<F>, tol: f64) -> Result<Vec<P1Root>> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    let mut out = Vec::new();
    for (i, factor) in form.dehomogenized().squarefree_decomposition().iter().enumerate() {
        if factor.is_constant() {
            continue;
        }
        let coeffs = to_cx_scaled(factor.coeffs());
        for t in polynomial_roots(&coeffs)? {
            out.push(P1Root { point: affine_root(t), multiplicity: i + 1 });
        }
    }
    let m = form.infinity_multiplicity();
    if m > 0 {
        out.push(P1Root { point: [Cx::new(0.0, 0.0), Cx::new(1.0, 0.0)], multiplicity: m });
    }
    check_separation(&out, tol)?;
    Ok(out)
}

/// Distinct roots of a numeric binary form, `coeffs[k]` multiplying `x0^(N−k) x1^k`.
/// Roots closer than `tol` (chordal) are merged; pairs in `[tol, 10·tol)` are ambiguous.
pub fn complex_roots_numeric(coeffs: &[Cx], tol: f64) -> Result<Vec<P1Root>> {
    let n = coeffs.len().saturating_sub(1);
    let mut c = coeffs.to_vec();
    let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroForm);
    }
    while c.last().is_some_and(|x| x.norm() <= 1e-14 * scale) {
        c.pop();
    }
    let inf = n - (c.len() - 1);
    let mut raw: Vec<[Cx; 2]> = polynomial_roots(&c)?.into_iter().map(affine_root).collect();
    raw.extend(std::iter::repeat_n([Cx::new(0.0, 0.0), Cx::new(1.0, 0.0)], inf));
    let mut clusters: Vec<P1Root> = Vec::new();
    for r in raw {
        match clusters.iter_mut().find(|c| chordal_distance(&c.point, &r) < tol) {
            Some(c) => c.multiplicity += 1,
            None => clusters.push(P1Root { point: r, multiplicity: 1 }),
        }
    }
    check_separation(&clusters, tol)?;
    Ok(clusters)
}
