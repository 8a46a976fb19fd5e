use crate::error::{Error, Result};
use crate::poly::{Cx, Embed, Field, MPoly, NumPoly, Rat, Scalar};

use super::matrix::{SkewMat, SymMat};
use super::{cross, dot, norm, to_cx, Coord, Line, Point};

/// A plane curve `f = 0` with its gradient and normal vector cached.
///
/// Irreducibility is assumed, not checked.
#[derive(Clone, Debug)]
pub struct Curve {
    f: MPoly,
    degree: u32,
    grad: [MPoly; 3],
    normal: [MPoly; 3],
    num: NumPoly,
    num_grad: [NumPoly; 3],
    num_hess: [[NumPoly; 3]; 3],
}

/// `N(x) = (−x2 f1, x2 f0, −(f0 x1 − f1 x0))`.
fn normal_polys(g: &[MPoly; 3]) -> [MPoly; 3] {
    let x = [MPoly::<Rat>::var(0), MPoly::var(1), MPoly::var(2)];
    [
        -&(&x[2] * &g[1]),
        &x[2] * &g[0],
        -&(&(&g[0] * &x[1]) - &(&g[1] * &x[0])),
    ]
}

impl Curve {
    pub fn new(f: MPoly) -> Result<Self> {
        let degree = f.degree()?;
        if degree == 0 {
            return Err(Error::Precondition("a curve needs positive degree".into()));
        }
        let grad = f.gradient();
        let normal = normal_polys(&grad);
        let num = f.to_numeric();
        let num_grad = std::array::from_fn(|i| grad[i].to_numeric());
        let num_hess = std::array::from_fn(|i| std::array::from_fn(|j| grad[i].partial(j).to_numeric()));
        Ok(Curve { f, degree, grad, normal, num, num_grad, num_hess })
    }

    pub fn equation(&self) -> &MPoly {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_line(&self) -> bool {
        self.degree == 1
    }

    pub fn gradient(&self) -> &[MPoly; 3] {
        &self.grad
    }

    /// The polynomial vector `N(x)` of normal lines.
    pub fn normal_vector(&self) -> &[MPoly; 3] {
        &self.normal
    }

    pub fn numeric(&self) -> &NumPoly {
        &self.num
    }

    /// `A(x) = −T·ᵗN + N·ᵗT`, entries of degree `2d − 1`.
    pub fn mat_a(&self) -> SkewMat<MPoly> {
        let (t, n) = (&self.grad, &self.normal);
        let e = |i: usize, j: usize| &(&n[i] * &t[j]) - &(&t[i] * &n[j]);
        SkewMat::new([e(0, 1), e(0, 2), e(1, 2)])
    }

    /// `B(x) = T·ᵗN + N·ᵗT`, entries of degree `2d − 1`.
    pub fn mat_b(&self) -> SymMat<MPoly> {
        let (t, n) = (&self.grad, &self.normal);
        SymMat::from_fn(|i, j| &(&t[i] * &n[j]) + &(&n[i] * &t[j]))
    }

    /// The polynomial vector `B(x)·S = T(x)(N(x)·S) + N(x)(T(x)·S)`.
    pub fn reflected_family<F: Field>(&self, s: &[F; 3]) -> [MPoly<F>; 3] {
        let t: [MPoly<F>; 3] = std::array::from_fn(|i| self.grad[i].map_coeffs(F::from_rat));
        let n: [MPoly<F>; 3] = std::array::from_fn(|i| self.normal[i].map_coeffs(F::from_rat));
        let pair = |a: &[MPoly<F>; 3]| {
            let mut acc = MPoly::zero(a[0].nominal_degree());
            for k in 0..3 {
                acc = &acc + &a[k].scale(&s[k]);
            }
            acc
        };
        let (ns, ts) = (pair(&n), pair(&t));
        std::array::from_fn(|i| &(&t[i] * &ns) + &(&n[i] * &ts))
    }

    /// Relative residual of `f` at a numeric point.
    pub fn residual(&self, p: &[Cx; 3]) -> f64 {
        let s = self.num.abs_eval(p);
        if s == 0.0 {
            return 0.0;
        }
        self.num.eval(p).norm() / s
    }

    fn check_on_curve<S: Scalar>(&self, p: &Point<S>, tol: f64) -> Result<()>
    where
        Rat: Embed<S>,
    {
        let v = self.f.eval(p);
        let scale = self.f.abs_eval(&to_cx(p));
        if !v.negligible(scale, tol) {
            let residual = if scale > 0.0 { v.magnitude() / scale } else { v.magnitude() };
            return Err(Error::NotOnCurve { residual });
        }
        Ok(())
    }

    fn eval_vec<S: Scalar>(v: &[MPoly; 3], p: &Point<S>, tol: f64) -> Option<[S; 3]>
    where
        Rat: Embed<S>,
    {
        let out: [S; 3] = std::array::from_fn(|i| v[i].eval(p));
        let pc = to_cx(p);
        let scale = v.iter().map(|q| q.abs_eval(&pc)).fold(0.0, f64::max);
        if out.iter().all(|c| c.negligible(scale, tol)) {
            None
        } else {
            Some(out)
        }
    }

    /// `T_P = ∇f(P)`.
    pub fn tangent_line<S: Coord>(&self, p: &Point<S>, tol: f64) -> Result<Line<S>>
    where
        Rat: Embed<S>,
    {
        self.check_on_curve(p, tol)?;
        let t = Self::eval_vec(&self.grad, p, tol).ok_or(Error::SingularPoint)?;
        Ok(S::normalize(&t))
    }

    /// `N_P`, the line through `P` orthogonal to `T_P`.
    pub fn normal_line<S: Coord>(&self, p: &Point<S>, tol: f64) -> Result<Line<S>>
    where
        Rat: Embed<S>,
    {
        self.check_on_curve(p, tol)?;
        Self::eval_vec(&self.grad, p, tol).ok_or(Error::SingularPoint)?;
        let n = Self::eval_vec(&self.normal, p, tol).ok_or(Error::NormalUndefined)?;
        Ok(S::normalize(&n))
    }

    fn tn<S: Coord>(&self, p: &Point<S>, tol: f64) -> Result<([S; 3], [S; 3])>
    where
        Rat: Embed<S>,
    {
        self.check_on_curve(p, tol)?;
        let t: [S; 3] = std::array::from_fn(|i| self.grad[i].eval(p));
        let n: [S; 3] = std::array::from_fn(|i| self.normal[i].eval(p));
        Ok((t, n))
    }

    fn ray<S: Coord>(v: [S; 3], p: &Point<S>, s: &Point<S>, deg: u32, tol: f64) -> Result<Line<S>> {
        let scale = norm(p).powi(2 * deg as i32 - 1) * norm(s);
        // numeric zero relative to the size of the entries of B(P) times S
        if v.iter().all(|c| c.negligible(scale.max(f64::MIN_POSITIVE), tol)) {
            return Err(Error::RayUndefined);
        }
        Ok(S::normalize(&v))
    }

    /// `L_P(S) = A(P)·S`, the line through `P` and `S`.
    pub fn incident_ray<S: Coord>(&self, p: &Point<S>, s: &Point<S>, tol: f64) -> Result<Line<S>>
    where
        Rat: Embed<S>,
    {
        let (t, n) = self.tn(p, tol)?;
        let (ns, ts) = (dot(&n, s), dot(&t, s));
        let v = std::array::from_fn(|i| n[i].clone() * ts.clone() - t[i].clone() * ns.clone());
        Self::ray(v, p, s, self.degree, tol * self.coeff_scale())
    }

    /// `Λ_P(S) = B(P)·S`, the reflection of `L_P(S)` in the curve at `P`.
    pub fn reflected_ray<S: Coord>(&self, p: &Point<S>, s: &Point<S>, tol: f64) -> Result<Line<S>>
    where
        Rat: Embed<S>,
    {
        let (t, n) = self.tn(p, tol)?;
        let (ns, ts) = (dot(&n, s), dot(&t, s));
        let v = std::array::from_fn(|i| t[i].clone() * ns.clone() + n[i].clone() * ts.clone());
        Self::ray(v, p, s, self.degree, tol * self.coeff_scale())
    }

    fn coeff_scale(&self) -> f64 {
        self.grad
            .iter()
            .flat_map(|g| g.terms().map(|(_, c)| c.to_cx().norm()))
            .fold(0.0, f64::max)
            .powi(2)
    }

    /// Numeric `T(P)` and `N(P)` without validity checks.
    pub fn tn_numeric(&self, p: &[Cx; 3]) -> ([Cx; 3], [Cx; 3]) {
        let t: [Cx; 3] = std::array::from_fn(|i| self.num_grad[i].eval(p));
        let n = [-p[2] * t[1], p[2] * t[0], -(t[0] * p[1] - t[1] * p[0])];
        (t, n)
    }

    /// Numeric `B(P)·S`.
    pub fn reflected_numeric(&self, p: &[Cx; 3], s: &[Cx; 3]) -> [Cx; 3] {
        let (t, n) = self.tn_numeric(p);
        let (ns, ts) = (dot(&n, s), dot(&t, s));
        std::array::from_fn(|i| t[i] * ns + n[i] * ts)
    }

    /// Exact directional derivative of `x ↦ B(x)·S` at `P` along `v`.
    pub fn reflected_derivative(&self, p: &[Cx; 3], v: &[Cx; 3], s: &[Cx; 3]) -> [Cx; 3] {
        let (t, n) = self.tn_numeric(p);
        let dt: [Cx; 3] = std::array::from_fn(|i| (0..3).map(|j| self.num_hess[i][j].eval(p) * v[j]).sum());
        let dn = [
            -(v[2] * t[1] + p[2] * dt[1]),
            v[2] * t[0] + p[2] * dt[0],
            -(dt[0] * p[1] + t[0] * v[1] - dt[1] * p[0] - t[1] * v[0]),
        ];
        let (ns, ts) = (dot(&n, s), dot(&t, s));
        let (dns, dts) = (dot(&dn, s), dot(&dt, s));
        std::array::from_fn(|i| dt[i] * ns + t[i] * dns + dn[i] * ts + n[i] * dts)
    }

    /// A point of the tangent line at `P` other than `P`, spanning it together with `P`.
    pub fn tangent_direction(&self, p: &[Cx; 3], e: &[Cx; 3]) -> [Cx; 3] {
        let (t, _) = self.tn_numeric(p);
        let v = cross(&t, e);
        crate::poly::normalize_projective(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn circle() -> Curve {
        Curve::new(MPoly::from_terms([([2, 0, 0], rat(1)), ([0, 2, 0], rat(1)), ([0, 0, 2], rat(-1))]).unwrap()).unwrap()
    }

    fn p(a: i64, b: i64, c: i64) -> [Rat; 3] {
        [rat(a), rat(b), rat(c)]
    }

    #[test]
    fn tangent_and_normal_examples() {
        let c = circle();
        assert_eq!(c.tangent_line(&p(1, 0, 1), 0.0).unwrap(), p(1, 0, -1));
        assert_eq!(c.tangent_line(&p(0, 1, 1), 0.0).unwrap(), p(0, 1, -1));
        assert_eq!(c.normal_line(&p(1, 0, 1), 0.0).unwrap(), p(0, 1, 0));
        assert_eq!(c.normal_line(&p(0, 1, 1), 0.0).unwrap(), p(1, 0, 0));
        assert!(matches!(c.tangent_line(&p(1, 1, 1), 0.0), Err(Error::NotOnCurve { .. })));
    }

    #[test]
    fn normal_undefined_at_cyclic_point() {
        let c = circle();
        let [q, _] = super::super::cyclic_points();
        assert_eq!(c.normal_line(&q, 0.0).unwrap_err(), Error::NormalUndefined);
    }

    #[test]
    fn matrices_at_a_circle_point() {
        let c = circle();
        let b = c.mat_b().eval(&p(1, 0, 1));
        assert_eq!(b.rows(), [p(0, 4, 0), p(4, 0, -4), p(0, -4, 0)]);
        assert_eq!(b.mul_vec(&p(1, 0, 1)), p(0, 0, 0));
        let a = c.mat_a().eval(&p(1, 0, 1));
        assert_eq!(a.rows(), [p(0, -4, 0), p(4, 0, -4), p(0, 4, 0)]);
    }

    #[test]
    fn ray_examples() {
        let c = circle();
        assert_eq!(c.reflected_ray(&p(0, 1, 1), &p(1, 0, 1), 0.0).unwrap(), p(1, -1, 1));
        assert_eq!(c.incident_ray(&p(1, 0, 1), &p(0, 0, 1), 0.0).unwrap(), p(0, 1, 0));
        assert_eq!(c.reflected_ray(&p(1, 0, 1), &p(0, 0, 1), 0.0).unwrap(), p(0, 1, 0));
        assert_eq!(c.reflected_ray(&p(0, 1, 1), &p(0, 0, 1), 0.0).unwrap(), p(1, 0, 0));
        // S = P itself: B(P)P = 0
        assert_eq!(c.reflected_ray(&p(1, 0, 1), &p(1, 0, 1), 0.0).unwrap_err(), Error::RayUndefined);
    }

    #[test]
    fn numeric_derivative_matches_polynomial_matrix() {
        let c = circle();
        let pt = [Cx::new(0.6, 0.0), Cx::new(0.8, 0.0), Cx::new(1.0, 0.0)];
        let v = [Cx::new(0.8, 0.0), Cx::new(-0.6, 0.0), Cx::new(0.0, 0.0)];
        let s = [Cx::new(3.0, 0.0), Cx::new(1.0, 0.0), Cx::new(1.0, 0.0)];
        let h = 1e-6;
        let plus: [Cx; 3] = std::array::from_fn(|i| pt[i] + v[i] * h);
        let minus: [Cx; 3] = std::array::from_fn(|i| pt[i] - v[i] * h);
        let (a, b) = (c.reflected_numeric(&plus, &s), c.reflected_numeric(&minus, &s));
        let d = c.reflected_derivative(&pt, &v, &s);
        for i in 0..3 {
            assert!(((a[i] - b[i]) / (2.0 * h) - d[i]).norm() < 1e-6);
        }
    }
}
