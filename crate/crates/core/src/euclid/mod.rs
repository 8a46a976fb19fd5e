//! Reflection geometry in the projective plane.
//!
//! The Euclidean structure is the pair of cyclic points on the line at infinity; the
//! tangent line `T_P`, normal line `N_P`, incident ray `L_P(S) = A(P)S` and reflected ray
//! `Λ_P(S) = B(P)S` are built from it. Points and lines are plain homogeneous triples, lines
//! living in the dual plane with incidence given by the dot product.

mod curve;
mod matrix;

pub use curve::Curve;
pub use matrix::{SkewMat, SymMat, SYM_SLOTS};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{normalize_projective, Cx, GRat, Rat, Scalar};

pub type Point<S> = [S; 3];
pub type Line<S> = [S; 3];

/// Default tolerance for numeric incidence and on-curve tests.
pub const DEFAULT_GEOM_TOL: f64 = 1e-8;

/// Coordinates that admit a canonical projective representative.
pub trait Coord: Scalar {
    fn normalize(v: &[Self; 3]) -> [Self; 3];
}

impl Coord for Rat {
    /// Primitive integer coordinates, first non-zero coordinate positive.
    fn normalize(v: &[Rat; 3]) -> [Rat; 3] {
        use num_integer::Integer;
        if v.iter().all(|c| c.is_zero()) {
            return v.clone();
        }
        let lcm = v.iter().fold(num_bigint::BigInt::from(1), |a, c| a.lcm(c.denom()));
        let ints: Vec<num_bigint::BigInt> = v.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::from(0), |a, c| a.gcd(c));
        let lead_neg = ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        let g = if lead_neg { -g } else { g };
        std::array::from_fn(|i| Rat::from_integer(&ints[i] / &g))
    }
}

impl Coord for GRat {
    /// First non-zero coordinate scaled to one.
    fn normalize(v: &[GRat; 3]) -> [GRat; 3] {
        match v.iter().find(|c| !(c.re.is_zero() && c.im.is_zero())) {
            Some(lead) => {
                let inv = lead.inv();
                v.clone().map(|c| c * inv.clone())
            }
            None => v.clone(),
        }
    }
}

impl Coord for Cx {
    fn normalize(v: &[Cx; 3]) -> [Cx; 3] {
        normalize_projective(v)
    }
}

pub fn dot<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> S {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub fn cross<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn norm<S: Scalar>(a: &[S; 3]) -> f64 {
    a.iter().map(|c| c.magnitude().powi(2)).sum::<f64>().sqrt()
}

pub fn is_null<S: Scalar>(a: &[S; 3], scale: f64, tol: f64) -> bool {
    a.iter().all(|c| c.negligible(scale, tol))
}

/// Projective equality: every 2×2 minor below `tol·|a|·|b|` (exactly zero for exact input).
pub fn proj_eq<S: Scalar>(a: &[S; 3], b: &[S; 3], tol: f64) -> bool {
    is_null(&cross(a, b), norm(a) * norm(b), tol)
}

pub fn to_cx<S: Scalar>(a: &[S; 3]) -> [Cx; 3] {
    std::array::from_fn(|i| a[i].to_cx())
}

/// The cyclic points `(1, i, 0)` and `(1, −i, 0)`.
pub fn cyclic_points() -> [Point<GRat>; 2] {
    let one = GRat::int(1, 0);
    let zero = GRat::int(0, 0);
    [[one.clone(), GRat::int(0, 1), zero.clone()], [one, GRat::int(0, -1), zero]]
}

/// The orthogonality involution `(x, y, 0) ↦ (−y, x, 0)` on the line at infinity.
pub fn iota<S: Scalar>(p: &Point<S>, tol: f64) -> Result<Point<S>> {
    if !p[2].negligible(norm(p), tol) {
        return Err(Error::NotAtInfinity);
    }
    Ok([-p[1].clone(), p[0].clone(), S::zero()])
}

/// Cross-ratio `CR(N, T; L, Λ)` of four concurrent lines, read off from their coordinates in
/// the pencil spanned by `N` and `T`.
pub fn cross_ratio(n: &Line<Cx>, t: &Line<Cx>, l: &Line<Cx>, lam: &Line<Cx>, tol: f64) -> Result<Cx> {
    if proj_eq(n, t, tol) {
        return Err(Error::Degenerate("N and T coincide".into()));
    }
    let centre = cross(n, t);
    for x in [l, lam] {
        if !dot(x, &centre).negligible(norm(x) * norm(&centre), tol) {
            return Err(Error::NotConcurrent);
        }
    }
    for x in [l, lam] {
        if proj_eq(x, n, tol) && proj_eq(x, t, tol) {
            return Err(Error::Degenerate("line coincides with both N and T".into()));
        }
    }
    // coordinates (a, b) with x = a·N + b·T, from the best-conditioned pair of columns
    let (i, j) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .max_by(|&(a, b), &(c, d)| {
            let m1 = (n[a] * t[b] - n[b] * t[a]).norm();
            let m2 = (n[c] * t[d] - n[d] * t[c]).norm();
            m1.total_cmp(&m2)
        })
        .unwrap();
    let det = n[i] * t[j] - n[j] * t[i];
    let coords = |x: &Line<Cx>| ((x[i] * t[j] - x[j] * t[i]) / det, (n[i] * x[j] - n[j] * x[i]) / det);
    let (al, bl) = coords(l);
    let (am, bm) = coords(lam);
    // with N = (1, 0) and T = (0, 1): [N L][T Λ] / ([N Λ][T L])
    let num = bl * am;
    let den = bm * al;
    if den.norm() <= tol * num.norm().max(f64::MIN_POSITIVE) || den.norm() == 0.0 {
        return Err(Error::Degenerate("cross-ratio denominator vanishes".into()));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn c(x: f64, y: f64) -> Cx {
        Cx::new(x, y)
    }

    #[test]
    fn cyclic_points_are_fixed_by_iota() {
        for p in cyclic_points() {
            let q = iota(&p, 0.0).unwrap();
            let sum = p[0].clone() * p[0].clone() + p[1].clone() * p[1].clone();
            assert!(sum.re.is_zero() && sum.im.is_zero());
            assert!(proj_eq(&p, &q, 0.0));
        }
    }

    #[test]
    fn iota_examples() {
        let q = iota(&[rat(1), rat(0), rat(0)], 0.0).unwrap();
        assert_eq!(q, [rat(0), rat(1), rat(0)]);
        let q = iota(&[rat(1), rat(1), rat(0)], 0.0).unwrap();
        assert_eq!(q, [rat(-1), rat(1), rat(0)]);
        let p = [rat(3), rat(5), rat(0)];
        let back = iota(&iota(&p, 0.0).unwrap(), 0.0).unwrap();
        assert!(proj_eq(&p, &back, 0.0));
        assert_eq!(iota(&[rat(1), rat(0), rat(1)], 0.0).unwrap_err(), Error::NotAtInfinity);
    }

    #[test]
    fn harmonic_pencil() {
        // lines through the origin: x = 0 (∞), y = 0 (0), x − y, x + y
        let n = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let t = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let l = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let m = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)];
        let cr = cross_ratio(&n, &t, &l, &m, 1e-12).unwrap();
        assert!((cr + 1.0).norm() < 1e-14);
        let cr = cross_ratio(&n, &t, &l, &l, 1e-12).unwrap();
        assert!((cr - 1.0).norm() < 1e-14);
    }

    #[test]
    fn non_concurrent_lines_rejected() {
        let n = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let t = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let l = [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(cross_ratio(&n, &t, &l, &l, 1e-12).unwrap_err(), Error::NotConcurrent);
    }

    #[test]
    fn rational_normalization() {
        let v = [crate::poly::ratio(-1, 2), rat(0), crate::poly::ratio(3, 4)];
        assert_eq!(Rat::normalize(&v), [rat(2), rat(0), rat(-3)]);
    }
}
