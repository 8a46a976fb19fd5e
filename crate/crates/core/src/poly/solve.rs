//! Common zeros of two ternary forms in `P²(ℂ)`.
//!
//! The exact count comes from a seeded random projective change of coordinates followed by
//! the resultant in `x2` and a square-free degree. After a general change the point
//! `(0 : 0 : 1)` lies on neither curve and no two solutions share a line through it, so
//! distinct roots of the resultant correspond one-to-one to distinct solutions. An unlucky
//! change can only merge solutions, never create them, so the count is the largest value
//! observed, accepted once it has been seen twice.

use serde::Serialize;

use super::mpoly::{MPoly, NumPoly};
use super::roots::{complex_roots, polynomial_roots, DEFAULT_ROOT_TOL};
use super::scalar::{rat, Cx, Field};
use crate::error::{Error, Result};
use crate::rng::{random_invertible, rng_for, sub_seed, tags};

/// Maximum number of random coordinate changes tried by one solve.
pub const SOLVE_DRAW_BUDGET: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct SolveOutcome {
    /// Exact number of distinct common zeros.
    pub count: usize,
    /// Numeric coordinates of each solution, unit norm.
    pub points: Vec<[Cx; 3]>,
    pub seed: u64,
    /// Coordinate changes drawn.
    pub draws: usize,
}

struct Draw<F> {
    change: [[i64; 3]; 3],
    fy: MPoly<F>,
    gy: MPoly<F>,
    resultant: super::binform::BinForm<F>,
    count: usize,
}

fn try_draw<F: Field>(f: &MPoly<F>, g: &MPoly<F>, change: [[i64; 3]; 3]) -> Result<Option<Draw<F>>> {
    let m: [[F; 3]; 3] = change.map(|row| row.map(|c| F::from_rat(&rat(c))));
    let fy = f.compose_linear(&m);
    let gy = g.compose_linear(&m);
    let (d, e) = (fy.nominal_degree(), gy.nominal_degree());
    if fy.coeff(&[0, 0, d]).is_zero() || gy.coeff(&[0, 0, e]).is_zero() {
        return Ok(None);
    }
    let resultant = super::resultant::resultant_wrt(&fy, &gy, 2)?;
    if resultant.is_zero() {
        return Err(Error::CommonComponent);
    }
    let count = resultant.count_distinct_roots()?;
    Ok(Some(Draw { change, fy, gy, resultant, count }))
}

fn trivial_case<F: Field>(f: &MPoly<F>, g: &MPoly<F>) -> Result<Option<SolveOutcome>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::CommonComponent);
    }
    if f.nominal_degree() == 0 || g.nominal_degree() == 0 {
        return Ok(Some(SolveOutcome { count: 0, points: Vec::new(), seed: 0, draws: 0 }));
    }
    Ok(None)
}

/// Exact number of distinct common zeros of `f` and `g`.
pub fn count_common_zeros<F: Field>(f: &MPoly<F>, g: &MPoly<F>, seed: u64) -> Result<usize> {
    if let Some(t) = trivial_case(f, g)? {
        return Ok(t.count);
    }
    let mut rng = rng_for(seed, tags::COORDINATE_CHANGE);
    let mut seen: Vec<usize> = Vec::new();
    for _ in 0..SOLVE_DRAW_BUDGET {
        let Some(draw) = try_draw(f, g, random_invertible(&mut rng, 9))? else {
            continue;
        };
        seen.push(draw.count);
        let best = *seen.iter().max().unwrap();
        if seen.iter().filter(|&&c| c == best).count() >= 2 {
            return Ok(best);
        }
    }
    Err(Error::UnluckyCoordinates { draws: SOLVE_DRAW_BUDGET })
}

/// Distinct counts `|V(f, g)|` and `|V(f, g) ∩ V(f, h)|`.
///
/// Both resultants are taken after the same general coordinate change; a common root of
/// the two binary forms is then a common point, since the projection centre is collinear
/// with no two points of `V(f, g) ∪ V(f, h)`.
pub fn count_with_common<F: Field>(f: &MPoly<F>, g: &MPoly<F>, h: &MPoly<F>, seed: u64) -> Result<(usize, usize)> {
    if f.is_zero() || g.is_zero() || h.is_zero() {
        return Err(Error::CommonComponent);
    }
    if f.nominal_degree() == 0 || g.nominal_degree() == 0 {
        return Ok((0, 0));
    }
    if h.nominal_degree() == 0 {
        return Ok((count_common_zeros(f, g, seed)?, 0));
    }
    let mut rng = rng_for(seed, tags::COORDINATE_CHANGE);
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for _ in 0..SOLVE_DRAW_BUDGET {
        let change = random_invertible(&mut rng, 9);
        let Some(first) = try_draw(f, g, change)? else {
            continue;
        };
        let Some(second) = try_draw(f, h, change)? else {
            continue;
        };
        let common = first.resultant.gcd_form(&second.resultant).count_distinct_roots()?;
        let pair = (first.count, common);
        seen.push(pair);
        let best = seen.iter().map(|p| p.0).max().unwrap();
        if pair.0 == best && seen.iter().filter(|&&p| p == pair).count() >= 2 {
            return Ok(pair);
        }
    }
    Err(Error::UnluckyCoordinates { draws: SOLVE_DRAW_BUDGET })
}

/// Distinct common zeros of `f` and `g`: exact count plus numeric coordinates.
pub fn solve_system<F: Field>(f: &MPoly<F>, g: &MPoly<F>, seed: u64) -> Result<SolveOutcome> {
    if let Some(mut t) = trivial_case(f, g)? {
        t.seed = seed;
        return Ok(t);
    }
    let fnum = f.to_numeric();
    let gnum = g.to_numeric();
    let mut rng = rng_for(seed, tags::COORDINATE_CHANGE);
    let mut seen: Vec<usize> = Vec::new();
    let mut draws = 0;
    for _ in 0..SOLVE_DRAW_BUDGET {
        draws += 1;
        let Some(draw) = try_draw(f, g, random_invertible(&mut rng, 9))? else {
            continue;
        };
        seen.push(draw.count);
        let best = *seen.iter().max().unwrap();
        if draw.count != best || seen.iter().filter(|&&c| c == best).count() < 2 {
            continue;
        }
        match back_substitute(&draw, &fnum, &gnum) {
            Ok(points) => return Ok(SolveOutcome { count: best, points, seed, draws }),
            Err(Error::AmbiguousClustering { .. }) | Err(Error::NonFinite) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::UnluckyCoordinates { draws })
}

fn back_substitute<F: Field>(draw: &Draw<F>, f: &NumPoly, g: &NumPoly) -> Result<Vec<[Cx; 3]>> {
    let fy = draw.fy.to_numeric();
    let gy = draw.gy.to_numeric();
    let roots = complex_roots(&draw.resultant, DEFAULT_ROOT_TOL)?;
    let m = draw.change.map(|row| row.map(|c| Cx::new(c as f64, 0.0)));
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        let base = [r.point[0], r.point[1], Cx::new(0.0, 0.0)];
        let zs = polynomial_roots(&univariate_in(&fy, 2, &base))?;
        let best = zs
            .into_iter()
            .map(|z| {
                let y = [base[0], base[1], z];
                let s = gy.abs_eval(&y).max(f64::MIN_POSITIVE);
                (gy.eval(&y).norm() / s, y)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .ok_or(Error::NonFinite)?;
        let y = best.1;
        let x: [Cx; 3] = std::array::from_fn(|i| m[i][0] * y[0] + m[i][1] * y[1] + m[i][2] * y[2]);
        let x = normalize_projective(&refine_pair(f, g, x));
        let residual = f.scaled_residual(&x).max(g.scaled_residual(&x));
        if residual > BACK_SUBSTITUTION_TOL {
            return Err(Error::AmbiguousClustering { distance: residual, tolerance: BACK_SUBSTITUTION_TOL });
        }
        // two roots of the resultant landing on one point: a wrong fibre member was picked
        if let Some(d) = out.iter().map(|q| projective_distance(q, &x)).find(|&d| d < BACK_SUBSTITUTION_TOL) {
            return Err(Error::AmbiguousClustering { distance: d, tolerance: BACK_SUBSTITUTION_TOL });
        }
        out.push(x);
    }
    Ok(out)
}

/// Residual and separation threshold for back-substituted points.
const BACK_SUBSTITUTION_TOL: f64 = 1e-8;

/// Sine of the angle between two unit-norm points.
fn projective_distance(a: &[Cx; 3], b: &[Cx; 3]) -> f64 {
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Coefficients of `p` as a polynomial in `x_axis`, the other coordinates fixed from `pt`.
pub fn univariate_in(p: &NumPoly, axis: usize, pt: &[Cx; 3]) -> Vec<Cx> {
    p.univariate_coefficients(axis, pt)
}

/// Newton refinement of a simple common zero of `f` and `g` in the affine chart of its
/// largest coordinate. Stops as soon as the residual stops decreasing.
pub fn refine_pair(f: &NumPoly, g: &NumPoly, p: [Cx; 3]) -> [Cx; 3] {
    let k = (0..3).max_by(|&a, &b| p[a].norm().total_cmp(&p[b].norm())).unwrap();
    let mut x = p.map(|c| c / p[k]);
    let (a, b) = match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let residual = |x: &[Cx; 3]| {
        let sf = f.abs_eval(x).max(f64::MIN_POSITIVE);
        let sg = g.abs_eval(x).max(f64::MIN_POSITIVE);
        (f.eval(x).norm() / sf).max(g.eval(x).norm() / sg)
    };
    let mut res = residual(&x);
    for _ in 0..12 {
        if res < 1e-15 {
            break;
        }
        let (fv, gv) = (f.eval(&x), g.eval(&x));
        let (df, dg) = (f.gradient_at(&x), g.gradient_at(&x));
        let det = df[a] * dg[b] - df[b] * dg[a];
        if det.norm() == 0.0 {
            break;
        }
        let da = (fv * dg[b] - gv * df[b]) / det;
        let db = (df[a] * gv - dg[a] * fv) / det;
        let mut cand = x;
        cand[a] -= da;
        cand[b] -= db;
        let r = residual(&cand);
        if !(r < res) {
            break;
        }
        x = cand;
        res = r;
    }
    x
}

/// Unit norm, first significant coordinate real and positive.
pub fn normalize_projective(p: &[Cx; 3]) -> [Cx; 3] {
    let n = (p.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt();
    if n == 0.0 {
        return *p;
    }
    let q = p.map(|c| c / n);
    let lead = q.iter().find(|c| c.norm() > 1e-6).copied().unwrap_or(q[0]);
    let phase = lead.conj() / lead.norm();
    q.map(|c| c * phase)
}

/// Derives the seed of the `k`-th independent solve in a batch.
pub fn batch_seed(seed: u64, k: u64) -> u64 {
    sub_seed(seed, 1000 + k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::Rat;

    fn m(terms: &[([u32; 3], i64)]) -> MPoly<Rat> {
        MPoly::from_terms(terms.iter().map(|&(e, c)| (e, rat(c)))).unwrap()
    }

    fn circle() -> MPoly<Rat> {
        m(&[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], -1)])
    }

    fn has_point(points: &[[Cx; 3]], target: [f64; 3]) -> bool {
        let t = normalize_projective(&target.map(|c| Cx::new(c, 0.0)));
        points.iter().any(|p| (0..3).all(|i| (p[i] - t[i]).norm() < 1e-9))
    }

    #[test]
    fn circle_and_secant() {
        let out = solve_system(&circle(), &m(&[([1, 0, 0], 1), ([0, 1, 0], -1)]), 3).unwrap();
        assert_eq!(out.count, 2);
        let s = 2f64.sqrt();
        assert!(has_point(&out.points, [1.0, 1.0, s]));
        assert!(has_point(&out.points, [1.0, 1.0, -s]));
    }

    #[test]
    fn circle_and_tangent() {
        let out = solve_system(&circle(), &m(&[([1, 0, 0], 1), ([0, 0, 1], -1)]), 5).unwrap();
        assert_eq!(out.count, 1);
        assert!(has_point(&out.points, [1.0, 0.0, 1.0]));
    }

    #[test]
    fn common_component_detected() {
        let line = m(&[([1, 0, 0], 1), ([0, 1, 0], 1)]);
        let g = &line * &m(&[([0, 0, 1], 1)]);
        assert_eq!(solve_system(&line, &g, 1).unwrap_err(), Error::CommonComponent);
    }

    #[test]
    fn random_conic_cubic_has_six_points() {
        for seed in 0..10u64 {
            let mut r = rng_for(seed, 99);
            let f = MPoly::random(2, &mut r, 5);
            let g = MPoly::random(3, &mut r, 5);
            let out = solve_system(&f, &g, seed).unwrap();
            assert_eq!(out.count, 6, "seed {seed}");
            assert_eq!(out.points.len(), 6);
            for p in &out.points {
                assert!(f.relative_residual(p) < 1e-10);
                assert!(g.relative_residual(p) < 1e-10);
            }
        }
    }
}
