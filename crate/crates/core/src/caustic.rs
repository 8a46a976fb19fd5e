//! The caustic of a curve by reflection from a source point `S`.
//!
//! `Γ ⊂ (P²)^∨` is the closure of the reflected lines `Λ_P = B(P)S`, `P ∈ C`; by biduality its
//! degree is the class of the caustic. The degree of `Γ` equals the number of `P ∈ C` whose
//! reflected line passes through a general point `Q`, that is the common zeros of `f` and
//! `ᵗQ·B(x)·S` away from the base points where `B(x)S` vanishes. The same pattern (a general
//! member of a linear system of forms, minus its base locus on `C`) counts the class of `C`,
//! the normals through a point and the degree of `D`.

use std::fmt::Debug;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euclid::{cross, norm, proj_eq, Curve};
use crate::linalg::svd;
use crate::poly::{
    batch_seed, complex_roots, count_with_common, normalize_projective, rat, solve_system, BinForm, Cx, Exponent,
    MPoly, NumPoly, Rat, DEFAULT_ROOT_TOL,
};
use crate::rng::{random_int, random_rat_point, rng_for, tags};

/// Independent draws that must agree before a count is accepted.
pub const STABILITY_DRAWS: usize = 3;
/// Total draws allowed before a count is declared unstable.
pub const STABILITY_BUDGET: usize = 8;
/// Default relative tolerance of the implicit fit.
pub const DEFAULT_FIT_TOL: f64 = 1e-7;
/// Required ratio between the two smallest singular values of an accepted fit.
pub const FIT_GAP: f64 = 1e3;

/// A smooth numeric point of the curve with a second point of its tangent line.
#[derive(Clone, Debug, Serialize)]
pub struct CurveSample {
    pub point: [Cx; 3],
    pub tangent_dir: [Cx; 3],
    /// Index of the sampling line the point was found on.
    pub line: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CausticReport {
    pub degree_gamma: usize,
    pub base_point_count: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub draws: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caustic_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implicit_equation: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NormalCounts {
    /// Points of `C` whose normal passes through a general point.
    pub p_count: usize,
    /// Distinct normal lines among them: the degree of the curve of normals.
    pub nu: usize,
    /// Points of `C` per normal line.
    pub mu: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeDReport {
    pub degree_d: usize,
    pub dual_degree: usize,
    pub normals: NormalCounts,
    pub base_point_count: usize,
}

#[derive(Clone, Debug)]
pub struct ImplicitFit {
    pub degree: usize,
    pub equation: NumPoly,
    /// `σ_min / σ_max` at the accepted degree.
    pub relative_sigma: f64,
    /// `σ_{n−1} / σ_n` at the accepted degree.
    pub gap: f64,
}

fn retryable(e: &Error) -> bool {
    matches!(e, Error::AmbiguousClustering { .. } | Error::UnluckyCoordinates { .. } | Error::NonFinite)
}

/// Runs seeded draws until one value has been seen at least three times and by a majority
/// of the completed draws. `Ok(None)` marks a draw that landed on a special choice.
pub fn stable_value<T: Clone + PartialEq + Debug>(
    seed: u64,
    mut draw: impl FnMut(u64) -> Result<Option<T>>,
) -> Result<(T, usize)> {
    let mut seen: Vec<T> = Vec::new();
    for k in 0..STABILITY_BUDGET {
        match draw(batch_seed(seed, k as u64)) {
            Ok(Some(v)) => seen.push(v),
            Ok(None) => {}
            Err(e) if retryable(&e) => {}
            Err(e) => return Err(e),
        }
        for v in &seen {
            let hits = seen.iter().filter(|w| *w == v).count();
            if hits >= STABILITY_DRAWS && 2 * hits > seen.len() {
                return Ok((v.clone(), k + 1));
            }
        }
    }
    Err(Error::UnstableCount { draws: STABILITY_BUDGET, counts: seen.iter().map(|v| format!("{v:?}")).collect() })
}

fn combination(comps: &[MPoly], coeffs: &[Rat]) -> MPoly {
    let mut acc = MPoly::zero(comps[0].nominal_degree());
    for (c, q) in comps.iter().zip(coeffs) {
        acc = &acc + &c.scale(q);
    }
    acc
}

fn random_combination<R: Rng>(comps: &[MPoly], rng: &mut R) -> MPoly {
    let coeffs: Vec<Rat> = comps.iter().map(|_| rat(random_int(rng, 20))).collect();
    combination(comps, &coeffs)
}

/// `(|V(f, g)| − base, base)` where the base locus is `V(f, comps)`, read off through a
/// random member `h` of the system.
fn net_count(f: &MPoly, g: &MPoly, comps: &[MPoly], seed: u64) -> Result<Option<(usize, usize)>> {
    let h = random_combination(comps, &mut rng_for(seed, tags::BASE_COMBINATION));
    if g.is_zero() || h.is_zero() {
        return Ok(None);
    }
    match count_with_common(f, g, &h, seed) {
        Ok((total, base)) => Ok(Some((total - base, base))),
        Err(Error::CommonComponent) => Err(Error::DegenerateSource),
        Err(e) => Err(e),
    }
}

fn query_point(seed: u64) -> [Rat; 3] {
    random_rat_point(&mut rng_for(seed, tags::QUERY_POINT), 20)
}

/// Degree of `Γ`: the class of the caustic, with the number of base points on `C`.
pub fn gamma_degree(curve: &Curve, source: &[Rat; 3], seed: u64) -> Result<CausticReport> {
    let comps = curve.reflected_family(source).to_vec();
    if comps.iter().all(|c| c.is_zero()) {
        return Err(Error::DegenerateSource);
    }
    let f = curve.equation();
    let ((net, base), draws) = stable_value(seed, |s| {
        let q = query_point(s);
        net_count(f, &combination(&comps, &q), &comps, s)
    })?;
    if net == 0 {
        return Err(Error::DegenerateSource);
    }
    Ok(CausticReport {
        degree_gamma: net,
        base_point_count: base,
        seed,
        tolerance: DEFAULT_ROOT_TOL,
        draws,
        caustic_degree: None,
        implicit_equation: None,
    })
}

/// Class of `C`: tangent lines through a general point, singular points excluded.
pub fn dual_degree(curve: &Curve, seed: u64) -> Result<usize> {
    if curve.is_line() {
        return Err(Error::Precondition("the dual of a line is a point".into()));
    }
    let comps = curve.gradient().to_vec();
    let f = curve.equation();
    let ((net, _), _) = stable_value(seed, |s| net_count(f, &combination(&comps, &query_point(s)), &comps, s))?;
    Ok(net)
}

/// Normal lines through a general point `Q`.
pub fn normal_counts(curve: &Curve, seed: u64) -> Result<NormalCounts> {
    if curve.is_line() {
        return Err(Error::Precondition("normal counts need a curve that is not a line".into()));
    }
    let comps = curve.normal_vector().to_vec();
    let f = curve.equation();
    let ((p_count, nu), _) = stable_value(seed, |s| {
        let g = combination(&comps, &query_point(s));
        let Some((p_count, _)) = net_count(f, &g, &comps, s)? else {
            return Ok(None);
        };
        Ok(Some((p_count, distinct_normals(curve, &g, p_count, s)?)))
    })?;
    if nu == 0 || p_count % nu != 0 {
        return Err(Error::InconsistentFibration(format!("{nu} normal lines for {p_count} points")));
    }
    Ok(NormalCounts { p_count, nu, mu: p_count / nu })
}

fn distinct_normals(curve: &Curve, g: &MPoly, expected: usize, seed: u64) -> Result<usize> {
    let sol = solve_system(curve.equation(), g, seed)?;
    let mut lines: Vec<[Cx; 3]> = Vec::new();
    let mut feet = 0;
    for p in &sol.points {
        let (t, n) = curve.tn_numeric(p);
        if norm(&n) <= 1e-8 * norm(&t).max(1.0) {
            continue;
        }
        feet += 1;
        if !lines.iter().any(|l| proj_eq(l, &n, 1e-6)) {
            lines.push(normalize_projective(&n));
        }
    }
    if feet != expected {
        // numeric and exact counts disagree: treat as an unlucky draw
        return Err(Error::AmbiguousClustering { distance: 0.0, tolerance: 1e-8 });
    }
    Ok(lines.len())
}

/// Degree of `D`: conics of the family `ᵗS·B(x)·S` through a general `S`, checked against
/// `deg C^∨ + μν`.
pub fn degree_d(curve: &Curve, seed: u64) -> Result<DegreeDReport> {
    if curve.is_line() {
        return Err(Error::Precondition("degree of D needs a curve that is not a line".into()));
    }
    let b = curve.mat_b();
    let comps: Vec<MPoly> = b.entries().to_vec();
    let f = curve.equation();
    let ((net, base), _) = stable_value(seed, |s| {
        let src = query_point(s);
        let mut coeffs = Vec::with_capacity(6);
        for &(i, j) in &crate::euclid::SYM_SLOTS {
            let w = if i == j { rat(1) } else { rat(2) };
            coeffs.push(&src[i] * &src[j] * w);
        }
        net_count(f, &combination(&comps, &coeffs), &comps, s)
    })?;
    let dual = dual_degree(curve, seed)?;
    let normals = normal_counts(curve, seed)?;
    let formula = dual + normals.mu * normals.nu;
    if formula != net {
        return Err(Error::FormulaMismatch { direct: net, formula });
    }
    Ok(DegreeDReport { degree_d: net, dual_degree: dual, normals, base_point_count: base })
}

/// Smooth points of `C` on the lines of a seeded pencil, each with a tangent direction.
pub fn sample_curve_points(curve: &Curve, n: usize, seed: u64) -> Result<Vec<CurveSample>> {
    let mut rng = rng_for(seed, tags::SAMPLING);
    let f = curve.equation();
    let d = curve.degree();
    let centre = loop {
        let p = random_rat_point(&mut rng, 7);
        if !crate::poly::Field::is_zero(&f.eval(&p)) {
            break p;
        }
    };
    let e: [Cx; 3] = std::array::from_fn(|_| Cx::new(random_int(&mut rng, 9) as f64, random_int(&mut rng, 9) as f64));
    let oc = crate::euclid::to_cx(&centre);
    let mut out = Vec::with_capacity(n);
    for line in 0..4 * n + 16 {
        let q = random_rat_point(&mut rng, 7);
        let qc = crate::euclid::to_cx(&q);
        if proj_eq(&oc, &qc, 1e-12) {
            continue;
        }
        let zero = rat(0);
        let m: [[Rat; 3]; 3] = std::array::from_fn(|i| [centre[i].clone(), q[i].clone(), zero.clone()]);
        let g = f.compose_linear(&m);
        let coeffs: Vec<Rat> = (0..=d).map(|k| g.coeff(&[d - k, k, 0])).collect();
        let form = BinForm::from_coeffs(coeffs);
        if form.is_zero() {
            continue;
        }
        let roots = match complex_roots(&form, DEFAULT_ROOT_TOL) {
            Ok(r) => r,
            Err(Error::AmbiguousClustering { .. }) => continue,
            Err(err) => return Err(err),
        };
        for r in roots.iter().filter(|r| r.multiplicity == 1) {
            let p: [Cx; 3] = std::array::from_fn(|i| r.point[0] * oc[i] + r.point[1] * qc[i]);
            let p = normalize_projective(&p);
            let (t, nv) = curve.tn_numeric(&p);
            let gscale = curve.gradient().iter().map(|g| g.abs_eval(&p)).fold(0.0, f64::max);
            if norm(&t) <= 1e-8 * gscale || norm(&nv) <= 1e-8 * gscale || curve.residual(&p) > 1e-10 {
                continue;
            }
            out.push(CurveSample { point: p, tangent_dir: curve.tangent_direction(&p, &e), line });
            if out.len() == n {
                return Ok(out);
            }
        }
    }
    Err(Error::InsufficientSamples { found: out.len(), wanted: n })
}

/// Characteristic point `Λ ∧ Λ′` of the reflected family at a sample.
pub fn envelope_point(curve: &Curve, source: &[Cx; 3], sample: &CurveSample) -> Result<[Cx; 3]> {
    let lam = curve.reflected_numeric(&sample.point, source);
    let scale = {
        let (t, n) = curve.tn_numeric(&sample.point);
        norm(&t) * norm(&n) * norm(source)
    };
    if norm(&lam) <= 1e-10 * scale {
        return Err(Error::RayUndefined);
    }
    let dlam = curve.reflected_derivative(&sample.point, &sample.tangent_dir, source);
    let c = cross(&lam, &dlam);
    if norm(&c) <= 1e-10 * norm(&lam) * norm(&dlam) {
        return Err(Error::StationaryFamily);
    }
    Ok(normalize_projective(&c))
}

/// Envelope points at `n` samples, skipping samples where the family is stationary.
pub fn envelope_points(curve: &Curve, source: &[Cx; 3], n: usize, seed: u64) -> Result<Vec<[Cx; 3]>> {
    let samples = sample_curve_points(curve, n, seed)?;
    let mut out = Vec::with_capacity(n);
    for s in &samples {
        match envelope_point(curve, source, s) {
            Ok(c) => out.push(c),
            Err(Error::StationaryFamily) | Err(Error::RayUndefined) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// The common point when all envelope points coincide.
pub fn point_caustic(points: &[[Cx; 3]], tol: f64) -> Option<[Cx; 3]> {
    let first = points.first()?;
    points.iter().all(|p| proj_eq(first, p, tol)).then_some(*first)
}

/// Exponents of degree `m` in degree-lexicographic order.
pub fn monomials(m: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for e0 in (0..=m).rev() {
        for e1 in (0..=m - e0).rev() {
            out.push([e0, e1, m - e0 - e1]);
        }
    }
    out
}

fn monomial_at(e: &Exponent, p: &[Cx; 3]) -> Cx {
    p[0].powu(e[0]) * p[1].powu(e[1]) * p[2].powu(e[2])
}

/// Lowest-degree curve through the points, from the numeric nullspace of the monomial
/// evaluation matrix.
pub fn implicit_fit(points: &[[Cx; 3]], max_degree: usize, tol: f64) -> Result<ImplicitFit> {
    let pts: Vec<[Cx; 3]> = points.iter().map(normalize_projective).collect();
    for m in 1..=max_degree {
        let mons = monomials(m as u32);
        if pts.len() < mons.len() {
            return Err(Error::InsufficientSamples { found: pts.len(), wanted: mons.len() });
        }
        let rows: Vec<Vec<Cx>> = pts.iter().map(|p| mons.iter().map(|e| monomial_at(e, p)).collect()).collect();
        let (sv, vecs) = svd(&rows);
        let n = mons.len();
        let smin = sv[n - 1];
        let rel = smin / sv[0];
        if rel >= tol {
            continue;
        }
        let gap = if n >= 2 { sv[n - 2] / smin.max(f64::MIN_POSITIVE) } else { f64::INFINITY };
        if gap < FIT_GAP {
            return Err(Error::AmbiguousRank { degree: m, gap });
        }
        let v = &vecs[n - 1];
        let lead = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        let terms = mons.iter().zip(v).map(|(e, c)| (*e, c / lead)).filter(|(_, c)| c.norm() > 1e-14).collect();
        return Ok(ImplicitFit { degree: m, equation: NumPoly::from_terms(m as u32, terms), relative_sigma: rel, gap });
    }
    Err(Error::NoCurveFound { max_degree })
}

/// Degree of the caustic from an implicit fit through `n` envelope samples.
pub fn caustic_degree(
    curve: &Curve,
    source: &[Cx; 3],
    n: usize,
    max_degree: usize,
    seed: u64,
    tol: f64,
) -> Result<ImplicitFit> {
    let pts = envelope_points(curve, source, n, seed)?;
    if pts.is_empty() || point_caustic(&pts, 1e-6).is_some() {
        return Err(Error::PointCaustic);
    }
    implicit_fit(&pts, max_degree, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(terms: &[([u32; 3], i64)]) -> Curve {
        Curve::new(MPoly::from_terms(terms.iter().map(|&(e, c)| (e, rat(c)))).unwrap()).unwrap()
    }

    fn circle() -> Curve {
        curve(&[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], -1)])
    }

    fn conic() -> Curve {
        curve(&[([2, 0, 0], 1), ([0, 2, 0], 2), ([0, 0, 2], -1)])
    }

    fn cx3(v: [f64; 3]) -> [Cx; 3] {
        v.map(|x| Cx::new(x, 0.0))
    }

    #[test]
    fn samples_lie_on_the_curve() {
        let c = circle();
        let s = sample_curve_points(&c, 4, 11).unwrap();
        assert_eq!(s.len(), 4);
        for x in &s {
            assert!(c.residual(&x.point) < 1e-10);
            let (t, _) = c.tn_numeric(&x.point);
            assert!(crate::euclid::dot(&t, &x.tangent_dir).norm() < 1e-8 * norm(&t));
        }
    }

    #[test]
    fn conic_class() {
        let r = gamma_degree(&conic(), &[rat(3), rat(1), rat(1)], 0).unwrap();
        assert_eq!(r.degree_gamma, 6);
        assert_eq!(r.base_point_count, 0);
    }

    #[test]
    fn line_class() {
        let r = gamma_degree(&curve(&[([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, 1], 1)]), &[rat(3), rat(1), rat(1)], 0).unwrap();
        assert_eq!(r.degree_gamma, 1);
    }

    #[test]
    fn circle_has_cyclic_base_points() {
        let r = gamma_degree(&circle(), &[rat(3), rat(1), rat(1)], 0).unwrap();
        assert_eq!(r.base_point_count, 2);
    }

    #[test]
    fn centre_of_circle_is_a_point_caustic() {
        let c = circle();
        let pts = envelope_points(&c, &cx3([0.0, 0.0, 1.0]), 6, 2).unwrap();
        assert!(pts.len() >= 5);
        let p = point_caustic(&pts, 1e-8).unwrap();
        assert!(proj_eq(&p, &cx3([0.0, 0.0, 1.0]), 1e-8));
    }

    #[test]
    fn parabola_focuses_a_parallel_beam() {
        // x1 x2 = x0², i.e. y = x², focus (0, 1/4); source at infinity along the axis
        let c = curve(&[([0, 1, 1], 1), ([2, 0, 0], -1)]);
        let pts = envelope_points(&c, &cx3([0.0, 1.0, 0.0]), 8, 5).unwrap();
        let p = point_caustic(&pts, 1e-8).unwrap();
        assert!(proj_eq(&p, &cx3([0.0, 1.0, 4.0]), 1e-8));
    }

    #[test]
    fn envelope_points_are_characteristic() {
        let c = conic();
        let s = cx3([3.0, 1.0, 1.0]);
        for x in sample_curve_points(&c, 10, 3).unwrap() {
            let e = envelope_point(&c, &s, &x).unwrap();
            let lam = c.reflected_numeric(&x.point, &s);
            let dlam = c.reflected_derivative(&x.point, &x.tangent_dir, &s);
            assert!(crate::euclid::dot(&lam, &e).norm() < 1e-8 * norm(&lam));
            assert!(crate::euclid::dot(&dlam, &e).norm() < 1e-6 * norm(&dlam));
        }
    }

    #[test]
    fn fit_veronese_conic_and_line() {
        let pts: Vec<[Cx; 3]> = (0..30).map(|k| cx3([1.0, k as f64 / 7.0, (k as f64 / 7.0).powi(2)])).collect();
        let fit = implicit_fit(&pts, 4, 1e-9).unwrap();
        assert_eq!(fit.degree, 2);
        for p in &pts {
            assert!(fit.equation.relative_residual(&normalize_projective(p)) < 1e-9);
        }
        let c = fit.equation.terms().iter().find(|(e, _)| *e == [1, 0, 1]).unwrap().1;
        let d = fit.equation.terms().iter().find(|(e, _)| *e == [0, 2, 0]).unwrap().1;
        assert!((c + d).norm() < 1e-9);
        let line: Vec<[Cx; 3]> = (0..10).map(|k| cx3([1.0, k as f64, 2.0 * k as f64 - 1.0])).collect();
        assert_eq!(implicit_fit(&line, 3, 1e-9).unwrap().degree, 1);
    }

    #[test]
    fn line_caustic_is_a_point() {
        let c = curve(&[([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, 1], 1)]);
        let err = caustic_degree(&c, &cx3([3.0, 1.0, 1.0]), 20, 4, 1, DEFAULT_FIT_TOL).unwrap_err();
        assert_eq!(err, Error::PointCaustic);
    }

    #[test]
    fn conic_normal_counts() {
        assert_eq!(normal_counts(&circle(), 0).unwrap(), NormalCounts { p_count: 2, nu: 1, mu: 2 });
        assert_eq!(normal_counts(&conic(), 0).unwrap(), NormalCounts { p_count: 4, nu: 4, mu: 1 });
        assert_eq!(dual_degree(&conic(), 0).unwrap(), 2);
    }

    #[test]
    fn degree_of_d_for_conics() {
        assert_eq!(degree_d(&circle(), 0).unwrap().degree_d, 4);
        assert_eq!(degree_d(&conic(), 0).unwrap().degree_d, 6);
    }
}
