//! Rank strata of symmetric 3×3 matrices: the Veronese surface, the determinantal cubic `Δ`
//! and the classification of lines inside `Δ`.

use crate::error::{Error, Result};
use crate::euclid::{dot, to_cx, Coord, SymMat};
use crate::linalg::{nullspace, rank as mat_rank, rref, solve};
use crate::poly::{BinForm, Cx, Field, GRat, MPoly, Scalar, UniPoly};

fn rows_of(b: &SymMat<GRat>) -> Vec<Vec<GRat>> {
    b.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn arr(v: &[GRat]) -> [GRat; 3] {
    [v[0].clone(), v[1].clone(), v[2].clone()]
}

pub fn det3(b: &SymMat<GRat>) -> GRat {
    b.det()
}

pub fn rank(b: &SymMat<GRat>) -> usize {
    mat_rank(&rows_of(b))
}

pub fn kernel(b: &SymMat<GRat>) -> Vec<[GRat; 3]> {
    nullspace(&rows_of(b), 3).iter().map(|v| arr(v)).collect()
}

/// A basis of the column space (equal to the row space, `B` being symmetric).
pub fn image_basis(b: &SymMat<GRat>) -> Vec<[GRat; 3]> {
    let mut rows = rows_of(b);
    let pivots = rref(&mut rows);
    rows[..pivots.len()].iter().map(|r| arr(r)).collect()
}

/// `Im B = (ker B)^⊥` for the bilinear pairing `ᵗv·w`.
pub fn image_is_kernel_perp(b: &SymMat<GRat>) -> bool {
    let im = image_basis(b);
    let ker = kernel(b);
    im.len() + ker.len() == 3 && im.iter().all(|u| ker.iter().all(|k| dot(u, k).is_zero()))
}

/// The rank-one matrix `x·ᵗx`.
pub fn veronese_point<S: Scalar>(x: &[S; 3]) -> SymMat<S> {
    SymMat::from_fn(|i, j| x[i].clone() * x[j].clone())
}

pub fn is_veronese(b: &SymMat<GRat>) -> bool {
    rank(b) == 1
}

/// A pair `λB0 + μB1` of linearly independent symmetric matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    b0: SymMat<GRat>,
    b1: SymMat<GRat>,
}

impl Pencil {
    pub fn new(b0: SymMat<GRat>, b1: SymMat<GRat>) -> Result<Self> {
        if mat_rank(&[b0.entries().to_vec(), b1.entries().to_vec()]) < 2 {
            return Err(Error::DependentPencil);
        }
        Ok(Pencil { b0, b1 })
    }

    pub fn generators(&self) -> (&SymMat<GRat>, &SymMat<GRat>) {
        (&self.b0, &self.b1)
    }

    /// The member `λB0 + μB1`.
    pub fn member(&self, lambda: &GRat, mu: &GRat) -> SymMat<GRat> {
        self.b0.scale(lambda).add(&self.b1.scale(mu))
    }
}

fn det_rows<T>(m: &[[T; 3]; 3]) -> T
where
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T> + std::ops::Sub<&'a T, Output = T> + std::ops::Add<&'a T, Output = T>,
{
    let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
    let t0 = &m[0][0] * &minor(1, 2, 2, 1);
    let t1 = &m[0][1] * &minor(0, 2, 2, 0);
    let t2 = &m[0][2] * &minor(0, 1, 1, 0);
    &(&t0 - &t1) + &t2
}

/// The binary cubic `det(λB0 + μB1)`; coefficient `k` multiplies `λ^(3−k)·μ^k`.
pub fn pencil_det_form(p: &Pencil) -> BinForm<GRat> {
    let m: [[UniPoly<GRat>; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| UniPoly::new(vec![p.b0.get(i, j).clone(), p.b1.get(i, j).clone()]))
    });
    BinForm::from_dehomogenized(3, det_rows(&m))
}

#[derive(Clone, Debug, PartialEq)]
pub enum PencilClass {
    NotInDelta,
    /// At least one of the fields is set; both are when the pencil lies in `Δ_S ∩ Δ(L)`.
    InDelta { delta_s: Option<[GRat; 3]>, delta_l: Option<[GRat; 3]> },
}

fn linear_form(l: &[GRat; 3]) -> MPoly<GRat> {
    MPoly::from_terms((0..3).map(|i| {
        let mut e = [0u32; 3];
        e[i] = 1;
        (e, l[i].clone())
    }))
    .expect("linear form is homogeneous")
}

/// The common line factor of two independent conics, by linear algebra: `a·q0 = b·q1` with
/// `a, b` linear has a non-trivial solution exactly when `q0 = ℓ·b` and `q1 = ℓ·a`.
fn common_line(q0: &MPoly<GRat>, q1: &MPoly<GRat>) -> Option<[GRat; 3]> {
    let cubics = crate::caustic::monomials(3);
    let lin: Vec<MPoly<GRat>> = (0..3)
        .map(|i| {
            let mut l: [GRat; 3] = std::array::from_fn(|_| GRat::zero());
            l[i] = GRat::one();
            linear_form(&l)
        })
        .collect();
    // column c < 3: x_c·q0; column c ≥ 3: −x_{c−3}·q1
    let cols: Vec<MPoly<GRat>> =
        lin.iter().map(|x| x * q0).chain(lin.iter().map(|x| -&(x * q1))).collect();
    let rows: Vec<Vec<GRat>> = cubics.iter().map(|e| cols.iter().map(|c| c.coeff(e)).collect()).collect();
    let ker = nullspace(&rows, 6);
    let v = ker.first()?;
    let b = [v[3].clone(), v[4].clone(), v[5].clone()];
    let quadrics = crate::caustic::monomials(2);
    let bl = linear_form(&b);
    let cols: Vec<MPoly<GRat>> = lin.iter().map(|x| x * &bl).collect();
    let rows: Vec<Vec<GRat>> = quadrics.iter().map(|e| cols.iter().map(|c| c.coeff(e)).collect()).collect();
    let rhs: Vec<GRat> = quadrics.iter().map(|e| q0.coeff(e)).collect();
    let l = solve(&rows, &rhs)?;
    Some(GRat::normalize(&arr(&l)))
}

pub fn classify_pencil(p: &Pencil) -> Result<PencilClass> {
    if !pencil_det_form(p).is_zero() {
        return Ok(PencilClass::NotInDelta);
    }
    let mut stacked = rows_of(&p.b0);
    stacked.extend(rows_of(&p.b1));
    let ker = nullspace(&stacked, 3);
    let delta_s = (ker.len() == 1).then(|| GRat::normalize(&arr(&ker[0])));
    let delta_l = common_line(&p.b0.to_quadric(), &p.b1.to_quadric());
    if delta_s.is_none() && delta_l.is_none() {
        return Err(Error::Unclassified);
    }
    let class = PencilClass::InDelta { delta_s, delta_l };
    debug_assert!(satisfies_definition(p, &class));
    Ok(class)
}

/// Exact check of the defining identities: `B·S = 0` for both generators, and `ᵗv·B·v = 0` on
/// two points of `L` and their sum.
pub fn satisfies_definition(p: &Pencil, class: &PencilClass) -> bool {
    let PencilClass::InDelta { delta_s, delta_l } = class else {
        return !pencil_det_form(p).is_zero();
    };
    let gens = [&p.b0, &p.b1];
    if let Some(s) = delta_s {
        if !gens.iter().all(|b| b.mul_vec(s).iter().all(|c| c.is_zero())) {
            return false;
        }
    }
    if let Some(l) = delta_l {
        let basis = kernel(&SymMat::sym_outer(l, l));
        let sum: [GRat; 3] = std::array::from_fn(|i| basis[0][i].clone() + basis[1][i].clone());
        for v in basis.iter().chain(std::iter::once(&sum)) {
            if !gens.iter().all(|b| b.bilinear(v, v).is_zero()) {
                return false;
            }
        }
    }
    true
}

/// A basis of `Δ_S = {B : B·S = 0}`.
pub fn delta_s_members(s: &[GRat; 3]) -> Result<[SymMat<GRat>; 3]> {
    if s.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("zero point".into()));
    }
    // linear conditions on the six entries
    let rows: Vec<Vec<GRat>> = (0..3)
        .map(|i| {
            crate::euclid::SYM_SLOTS
                .iter()
                .map(|&(a, b)| {
                    if a == i && b == i {
                        s[i].clone()
                    } else if a == i {
                        s[b].clone()
                    } else if b == i {
                        s[a].clone()
                    } else {
                        GRat::zero()
                    }
                })
                .collect()
        })
        .collect();
    let ker = nullspace(&rows, 6);
    Ok(std::array::from_fn(|k| SymMat::new(std::array::from_fn(|e| ker[k][e].clone()))))
}

/// A basis of `Δ(L)`, the conics containing `L`: `ℓ·x0, ℓ·x1, ℓ·x2`.
pub fn delta_l_members(l: &[GRat; 3]) -> Result<[SymMat<GRat>; 3]> {
    if l.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("zero line".into()));
    }
    Ok(std::array::from_fn(|k| {
        let mut e: [GRat; 3] = std::array::from_fn(|_| GRat::zero());
        e[k] = GRat::one();
        SymMat::sym_outer(l, &e)
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConicFactors {
    /// `ᵗv·B·v = c·ℓ(v)·ℓ′(v)` over the Gaussian rationals.
    Exact([[GRat; 3]; 2]),
    /// The square root needed is not Gaussian rational; lines are validated numerically.
    Inexact { lines: [[Cx; 3]; 2], residual: f64 },
}

impl ConicFactors {
    pub fn numeric(&self) -> [[Cx; 3]; 2] {
        match self {
            ConicFactors::Exact(l) => [to_cx(&l[0]), to_cx(&l[1])],
            ConicFactors::Inexact { lines, .. } => *lines,
        }
    }
}

const FACTOR_TOL: f64 = 1e-10;

fn unit(k: usize) -> [GRat; 3] {
    std::array::from_fn(|i| if i == k { GRat::one() } else { GRat::zero() })
}

/// The two lines of a singular conic (equal for a double line).
pub fn factor_conic(b: &SymMat<GRat>) -> Result<ConicFactors> {
    match rank(b) {
        0 => Err(Error::InvalidInput("zero conic".into())),
        3 => Err(Error::FullRank),
        1 => {
            let rows = rows_of(b);
            let i = (0..3).find(|&i| !b.get(i, i).is_zero()).expect("rank one has a non-zero diagonal");
            let l = GRat::normalize(&arr(&rows[i]));
            Ok(ConicFactors::Exact([l.clone(), l]))
        }
        _ => {
            let k = kernel(b).remove(0);
            // complete k to a basis with two unit vectors
            let (u, w) = [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .map(|(a, c)| (unit(a), unit(c)))
                .find(|(u, w)| mat_rank(&[k.to_vec(), u.to_vec(), w.to_vec()]) == 3)
                .expect("a kernel vector extends to a basis");
            let frame = vec![k.to_vec(), u.to_vec(), w.to_vec()];
            let dual = |rhs: [i64; 3]| -> [GRat; 3] {
                let r: Vec<GRat> = rhs.iter().map(|&x| GRat::int(x, 0)).collect();
                arr(&solve(&frame, &r).expect("invertible frame"))
            };
            // lines through k with prescribed values on u and w
            let (lu, lw) = (dual([0, 1, 0]), dual([0, 0, 1]));
            let alpha = b.bilinear(&u, &u);
            let beta = b.bilinear(&u, &w);
            let gamma = b.bilinear(&w, &w);
            let combine = |a: &GRat, c: &GRat| -> [GRat; 3] {
                GRat::normalize(&std::array::from_fn(|i| a.clone() * lu[i].clone() + c.clone() * lw[i].clone()))
            };
            // α s² + 2β s t + γ t² with v = s·u + t·w
            if alpha.is_zero() {
                return Ok(ConicFactors::Exact([
                    combine(&GRat::zero(), &GRat::one()),
                    combine(&(beta.clone() * GRat::int(2, 0)), &gamma),
                ]));
            }
            let disc = beta.clone() * beta.clone() - alpha.clone() * gamma.clone();
            if let Some(r) = disc.sqrt() {
                // α(α s² + 2β s t + γ t²) = (α s + (β − r) t)(α s + (β + r) t)
                let l1 = combine(&alpha, &(beta.clone() - r.clone()));
                let l2 = combine(&alpha, &(beta + r));
                return Ok(ConicFactors::Exact([l1, l2]));
            }
            let (a, bb, d) = (alpha.to_cx(), beta.to_cx(), disc.to_cx().sqrt());
            let (lu, lw) = (to_cx(&lu), to_cx(&lw));
            let make = |c: Cx| -> [Cx; 3] { Cx::normalize(&std::array::from_fn(|i| a * lu[i] + c * lw[i])) };
            let lines = [make(bb - d), make(bb + d)];
            let residual = factor_residual(b, &lines);
            if residual > FACTOR_TOL {
                return Err(Error::Degenerate(format!("conic factorization residual {residual:.3e}")));
            }
            Ok(ConicFactors::Inexact { lines, residual })
        }
    }
}

/// Relative distance between the conic and the product of the two lines, both scaled to unit
/// coefficient norm in the monomial basis.
pub fn factor_residual(b: &SymMat<GRat>, lines: &[[Cx; 3]; 2]) -> f64 {
    let q = b.map(|x| x.to_cx());
    let prod = SymMat::sym_outer(&lines[0], &lines[1]);
    let flat = |m: &SymMat<Cx>| -> Vec<Cx> { m.entries().to_vec() };
    let (a, c) = (flat(&q), flat(&prod));
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nc = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    // best scalar multiple of c matching a
    let inner: Cx = c.iter().zip(&a).map(|(x, y)| x.conj() * y).sum();
    let s = inner / (nc * nc);
    a.iter().zip(&c).map(|(x, y)| (x - s * y).norm_sqr()).sum::<f64>().sqrt() / na
}
