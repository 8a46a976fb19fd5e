//! Fiber counting for the caustic map `P ↦ Λ_P` and for projections `B ↦ B·S` of
//! parametrized curves of symmetric matrices.
//!
//! A map is declared birational when its generic fiber has exactly one point: fibers are
//! counted at several seeded base points and the mode must be reached by 80% of them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::caustic::{sample_curve_points, CurveSample};
use crate::error::{Error, Result};
use crate::euclid::{cross, norm, to_cx, Coord, Curve, SymMat};
use crate::linalg::{nullspace, rank, svd};
use crate::poly::{
    batch_seed, solve_system, BinForm, Cx, Field, GRat, MPoly, Rat, Scalar, UniPoly, DEFAULT_ROOT_TOL,
};
use crate::rng::{random_grat_point, random_int, rng_for, tags};

/// Share of samples the generic fiber must reach.
pub const MODE_AGREEMENT: f64 = 0.8;
/// Relative threshold on the third proportionality condition in [`lambda_fiber_count`].
pub const FIBER_FILTER_TOL: f64 = 1e-6;
/// Bits of the dyadic denominators used to make a numeric reflected line exact.
const RATIONALIZE_BITS: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberSize {
    Finite(usize),
    /// The map is constant along the curve.
    Infinite,
}

impl Serialize for FiberSize {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FiberSize::Finite(n) => s.serialize_u64(*n as u64),
            FiberSize::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl fmt::Display for FiberSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberSize::Finite(n) => write!(f, "{n}"),
            FiberSize::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Birational,
    NonBirational,
    /// The curve lies in `Δ(S′)` and is not a line; its image under every `π_S` is on `(S′)^⊥`.
    Exceptional { kernel: [String; 3] },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Birational => "birational",
            Verdict::NonBirational => "non-birational",
            Verdict::Exceptional { .. } => "exceptional",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberSample {
    /// The base point or parameter the fiber was taken over.
    pub base: String,
    pub fiber: FiberSize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub samples: Vec<FiberSample>,
    pub generic_fiber: FiberSize,
    pub verdict: Verdict,
    pub seed: u64,
    pub tolerance: f64,
}

fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::AmbiguousClustering { .. } | Error::UnluckyCoordinates { .. } | Error::NonFinite | Error::BaseParameter
    )
}

/// The fiber size reached by at least 80% of the samples.
pub fn generic_fiber(samples: &[FiberSample]) -> Result<FiberSize> {
    let mut counts: BTreeMap<FiberSize, usize> = BTreeMap::new();
    for s in samples {
        *counts.entry(s.fiber).or_default() += 1;
    }
    let total = samples.len().max(1) as f64;
    counts
        .iter()
        .find(|(_, &c)| c as f64 >= MODE_AGREEMENT * total)
        .map(|(f, _)| *f)
        .ok_or_else(|| Error::Inconclusive {
            required: 100.0 * MODE_AGREEMENT,
            counts: counts.iter().map(|(f, c)| format!("{f}x{c}")).collect(),
        })
}

fn grat_to_cx(v: &[GRat; 3]) -> [Cx; 3] {
    to_cx(v)
}

fn rationalize(v: &[Cx; 3], j: usize) -> [GRat; 3] {
    std::array::from_fn(|i| {
        if i == j {
            GRat::int(1, 0)
        } else {
            crate::poly::scalar::cx_to_grat(v[i] / v[j], RATIONALIZE_BITS)
        }
    })
}

fn proportionality_defect(a: &[Cx; 3], b: &[Cx; 3]) -> f64 {
    norm(&cross(a, b)) / (norm(a) * norm(b))
}

/// Points `P ∈ C` with `B(P)·S ∝ Λ_{P0}`, counted with `P0` itself.
///
/// Two components of `(B(x)S) × Λ_{P0}` are imposed exactly together with `f`; the third
/// proportionality condition is a numeric filter at [`FIBER_FILTER_TOL`].
pub fn lambda_fiber_count(curve: &Curve, source: &[Rat; 3], p0: &CurveSample, seed: u64) -> Result<FiberSize> {
    let sc = to_cx(source);
    let lam0 = curve.reflected_numeric(&p0.point, &sc);
    let (t0, n0) = curve.tn_numeric(&p0.point);
    if norm(&lam0) <= 1e-10 * norm(&t0) * norm(&n0) * norm(&sc) {
        return Err(Error::BaseParameter);
    }
    let j = (0..3).max_by(|&a, &b| lam0[a].norm().total_cmp(&lam0[b].norm())).unwrap();
    let lam = rationalize(&lam0, j);
    let sg: [GRat; 3] = source.clone().map(GRat::real);
    let comps = curve.reflected_family(&sg);
    let eqs: Vec<MPoly<GRat>> = (0..3)
        .filter(|&a| a != j)
        .map(|a| &comps[a] - &comps[j].scale(&lam[a]))
        .filter(|g| !g.is_zero())
        .collect();
    let f: MPoly<GRat> = curve.equation().map_coeffs(|c| GRat::real(c.clone()));
    let lamc = grat_to_cx(&lam);
    for primary in &eqs {
        let sol = match solve_system(&f, primary, seed) {
            Ok(s) => s,
            // the condition holds on all of C; the other one carries the information
            Err(Error::CommonComponent) => continue,
            Err(e) => return Err(e),
        };
        let mut fiber = 0;
        for p in &sol.points {
            let v = curve.reflected_numeric(p, &sc);
            let (t, n) = curve.tn_numeric(p);
            if norm(&v) <= 1e-8 * norm(&t) * norm(&n) * norm(&sc) {
                continue;
            }
            let defect = proportionality_defect(&v, &lamc);
            if defect < FIBER_FILTER_TOL * 1e-2 {
                fiber += 1;
            } else if defect < FIBER_FILTER_TOL * 1e2 {
                return Err(Error::AmbiguousClustering { distance: defect, tolerance: FIBER_FILTER_TOL });
            }
        }
        if fiber == 0 {
            return Err(Error::AmbiguousClustering { distance: 0.0, tolerance: FIBER_FILTER_TOL });
        }
        return Ok(FiberSize::Finite(fiber));
    }
    Ok(FiberSize::Infinite)
}

fn describe_point(p: &[Cx; 3]) -> String {
    let q = crate::poly::normalize_projective(p);
    format!(
        "({:.6}{:+.6}i, {:.6}{:+.6}i, {:.6}{:+.6}i)",
        q[0].re, q[0].im, q[1].re, q[1].im, q[2].re, q[2].im
    )
}

/// Fiber test of the caustic map at `n_samples` seeded points of `C`.
pub fn is_caustic_birational(curve: &Curve, source: &[Rat; 3], n_samples: usize, seed: u64) -> Result<FiberReport> {
    if curve.is_line() {
        return Err(Error::Precondition("the caustic map of a line is not tested".into()));
    }
    let mut pool = sample_curve_points(curve, 3 * n_samples + 4, seed)?;
    // real points first: exact arithmetic stays in ℚ when both P and S are real
    pool.sort_by_key(|p| p.point.iter().any(|c| c.im.abs() > 1e-12));
    let mut samples = Vec::with_capacity(n_samples);
    for (k, p0) in pool.iter().enumerate() {
        if samples.len() == n_samples {
            break;
        }
        match lambda_fiber_count(curve, source, p0, batch_seed(seed, k as u64)) {
            Ok(fiber) => samples.push(FiberSample { base: describe_point(&p0.point), fiber }),
            Err(e) if retryable(&e) => continue,
            Err(e) => return Err(e),
        }
    }
    if samples.len() < n_samples {
        return Err(Error::InsufficientSamples { found: samples.len(), wanted: n_samples });
    }
    let generic = generic_fiber(&samples)?;
    let verdict = if generic == FiberSize::Finite(1) { Verdict::Birational } else { Verdict::NonBirational };
    Ok(FiberReport { samples, generic_fiber: generic, verdict, seed, tolerance: FIBER_FILTER_TOL })
}

/// A curve `t ↦ B(t)` of symmetric matrices with polynomial entries.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixCurve {
    entries: SymMat<UniPoly<GRat>>,
    degree: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum KernelCurve {
    /// No common kernel vector.
    Trivial,
    /// `B(t)·S′ ≡ 0` for a unique `S′`.
    Point([GRat; 3]),
    /// The common kernel has this dimension (at least 2).
    Degenerate(usize),
}

impl MatrixCurve {
    pub fn new(entries: SymMat<UniPoly<GRat>>) -> Result<Self> {
        let degree = entries.entries().iter().filter_map(|p| p.degree()).max();
        let Some(degree) = degree else {
            return Err(Error::InvalidInput("matrix curve is identically zero".into()));
        };
        Ok(MatrixCurve { entries, degree })
    }

    pub fn from_rational(entries: SymMat<UniPoly<Rat>>) -> Result<Self> {
        Self::new(entries.map(|p| p.map(|c| GRat::real(c.clone()))))
    }

    /// `t ↦ x(t)·ᵗx(t)` with `x(t) = (1, t, t²)`, a conic on the Veronese surface.
    pub fn veronese() -> Self {
        let x = veronese_param();
        Self::new(SymMat::from_fn(|i, j| &x[i] * &x[j])).expect("non-zero")
    }

    pub fn entries(&self) -> &SymMat<UniPoly<GRat>> {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, t: &GRat) -> SymMat<GRat> {
        self.entries.map(|p| p.eval(t))
    }

    /// Matrices `B_k` with `B(t) = Σ B_k t^k`.
    pub fn coefficient_matrices(&self) -> Vec<SymMat<GRat>> {
        (0..=self.degree).map(|k| self.entries.map(|p| p.coeff(k))).collect()
    }

    /// The polynomial vector `B(t)·S`.
    pub fn apply(&self, s: &[GRat; 3]) -> [UniPoly<GRat>; 3] {
        std::array::from_fn(|i| {
            let mut acc = UniPoly::zero();
            for (j, sj) in s.iter().enumerate() {
                acc = &acc + &self.entries.get(i, j).scale(sj);
            }
            acc
        })
    }

    /// Dimension of the linear span of the coefficient matrices.
    pub fn span_dimension(&self) -> usize {
        let rows: Vec<Vec<GRat>> = self.coefficient_matrices().iter().map(|m| m.entries().to_vec()).collect();
        rank(&rows)
    }

    /// A line of matrices: the coefficient matrices span a pencil.
    pub fn is_line(&self) -> bool {
        self.span_dimension() == 2
    }
}

/// `x(t) = (1, t, t²)`.
pub fn veronese_param() -> [UniPoly<GRat>; 3] {
    let one = GRat::int(1, 0);
    [UniPoly::one(), UniPoly::var(), UniPoly::monomial(one, 2)]
}

/// The common kernel of all `B(t)`, from the stacked coefficient matrices.
pub fn kernel_curve(d: &MatrixCurve) -> KernelCurve {
    let rows: Vec<Vec<GRat>> =
        d.coefficient_matrices().iter().flat_map(|m| m.rows().into_iter().map(|r| r.to_vec())).collect();
    let ker = nullspace(&rows, 3);
    match ker.len() {
        0 => KernelCurve::Trivial,
        1 => {
            let v = [ker[0][0].clone(), ker[0][1].clone(), ker[0][2].clone()];
            KernelCurve::Point(GRat::normalize(&v))
        }
        k => KernelCurve::Degenerate(k),
    }
}

fn homogenize(p: &UniPoly<GRat>, n: usize) -> BinForm<GRat> {
    BinForm::from_dehomogenized(n, p.clone())
}

fn gcd_all(forms: impl Iterator<Item = BinForm<GRat>>, n: usize) -> BinForm<GRat> {
    forms.filter(|f| !f.is_zero()).fold(BinForm::zero(n), |acc, f| acc.gcd_form(&f))
}

/// Parameters `t` (the point at infinity of the parameter line included) with
/// `B(t)·S ∝ B(t0)·S`, counted with `t0`; parameters where `B(t)·S = 0` are excluded.
pub fn projection_fiber_count(d: &MatrixCurve, s: &[GRat; 3], t0: &GRat) -> Result<FiberSize> {
    let n = d.degree;
    let v = d.apply(s);
    let v0: [GRat; 3] = std::array::from_fn(|i| v[i].eval(t0));
    if v0.iter().all(|c| c.is_zero()) {
        return Err(Error::BaseParameter);
    }
    let comps: [UniPoly<GRat>; 3] = std::array::from_fn(|k| {
        let (a, b) = ((k + 1) % 3, (k + 2) % 3);
        &v[a].scale(&v0[b]) - &v[b].scale(&v0[a])
    });
    if comps.iter().all(|c| c.is_zero()) {
        return Ok(FiberSize::Infinite);
    }
    let g = gcd_all(comps.iter().map(|c| homogenize(c, n)), n);
    let z = gcd_all(v.iter().map(|c| homogenize(c, n)), n);
    let base = g.gcd_form(&z);
    let count = g.count_distinct_roots()? - if base.is_constant() { 0 } else { base.count_distinct_roots()? };
    Ok(FiberSize::Finite(count))
}

fn random_parameter(rng: &mut impl rand::Rng) -> GRat {
    GRat::new(crate::poly::ratio(random_int(rng, 40), 7), Rat::from_integer(0.into()))
}

/// Birationality of `π_S` restricted to the matrix curve, with the exceptional case
/// (a non-line curve inside some `Δ(S′)`) detected exactly.
pub fn is_projection_birational(d: &MatrixCurve, n_samples: usize, seed: u64) -> Result<FiberReport> {
    let span = d.span_dimension();
    if span < 2 {
        return Err(Error::Degenerate("the matrix curve is a single point".into()));
    }
    let kernel = kernel_curve(d);
    let mut rng = rng_for(seed, tags::PROJECTION);
    let mut samples = Vec::with_capacity(n_samples);
    let mut attempts = 0;
    while samples.len() < n_samples {
        attempts += 1;
        if attempts > 10 * n_samples + 10 {
            return Err(Error::InsufficientSamples { found: samples.len(), wanted: n_samples });
        }
        let s = random_grat_point(&mut rng, 9);
        let t0 = random_parameter(&mut rng);
        match projection_fiber_count(d, &s, &t0) {
            Ok(fiber) => samples.push(FiberSample { base: format!("S = ({}, {}, {}), t0 = {}", s[0], s[1], s[2], t0), fiber }),
            Err(Error::BaseParameter) => continue,
            Err(e) => return Err(e),
        }
    }
    if let KernelCurve::Point(sp) = &kernel {
        if span >= 3 {
            // every image B(t)S is orthogonal to S′, identically in t
            for _ in 0..3 {
                let s = random_grat_point(&mut rng, 9);
                let v = d.apply(&s);
                let mut acc = UniPoly::zero();
                for i in 0..3 {
                    acc = &acc + &v[i].scale(&sp[i]);
                }
                if !acc.is_zero() {
                    return Err(Error::Degenerate("image not orthogonal to the common kernel".into()));
                }
            }
            let generic = generic_fiber(&samples).unwrap_or(FiberSize::Infinite);
            let verdict = Verdict::Exceptional { kernel: sp.clone().map(|c| c.to_string()) };
            return Ok(FiberReport { samples, generic_fiber: generic, verdict, seed, tolerance: 0.0 });
        }
    }
    let generic = generic_fiber(&samples)?;
    let verdict = if generic == FiberSize::Finite(1) { Verdict::Birational } else { Verdict::NonBirational };
    Ok(FiberReport { samples, generic_fiber: generic, verdict, seed, tolerance: 0.0 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveredPoint<S> {
    pub point: [S; 3],
    /// Whether the point lies on the curve (exactly, or within tolerance for numeric input).
    pub on_curve: bool,
}

/// The point `P = ker M` of a rank-2 symmetric matrix, exactly.
pub fn recover_point_from_b(curve: &Curve, m: &SymMat<GRat>) -> Result<RecoveredPoint<GRat>> {
    let rows: Vec<Vec<GRat>> = m.rows().into_iter().map(|r| r.to_vec()).collect();
    let r = rank(&rows);
    if r != 2 {
        return Err(Error::WrongRank { expected: 2, found: r });
    }
    let k = &nullspace(&rows, 3)[0];
    let point = GRat::normalize(&[k[0].clone(), k[1].clone(), k[2].clone()]);
    let on_curve = curve.equation().eval(&point).is_zero();
    Ok(RecoveredPoint { point, on_curve })
}

/// Numeric variant: the smallest right singular vector, with numeric rank 2 required.
pub fn recover_point_numeric(curve: &Curve, m: &SymMat<Cx>, tol: f64) -> Result<RecoveredPoint<Cx>> {
    let rows: Vec<Vec<Cx>> = m.rows().into_iter().map(|r| r.to_vec()).collect();
    let (sv, vecs) = svd(&rows);
    let found = sv.iter().filter(|&&s| s > tol * sv[0]).count();
    if sv[0] == 0.0 || found != 2 {
        return Err(Error::WrongRank { expected: 2, found: if sv[0] == 0.0 { 0 } else { found } });
    }
    let point = Cx::normalize(&[vecs[2][0], vecs[2][1], vecs[2][2]]);
    let on_curve = curve.residual(&point) < tol;
    Ok(RecoveredPoint { point, on_curve })
}

/// `t ↦ B(x(t))` for a conic through the rational point `p`, with `x(t)` the second
/// intersection of the conic with the line through `p` and `a + t·b`.
pub fn conic_matrix_curve(curve: &Curve, p: &[Rat; 3], a: &[Rat; 3], b: &[Rat; 3]) -> Result<MatrixCurve> {
    if curve.degree() != 2 {
        return Err(Error::Precondition("conic parametrization needs a conic".into()));
    }
    let f = curve.equation();
    if !f.eval(p).is_zero() {
        return Err(Error::NotOnCurve { residual: f.eval(p).to_cx().norm() });
    }
    let q: [UniPoly<Rat>; 3] = std::array::from_fn(|i| UniPoly::new(vec![a[i].clone(), b[i].clone()]));
    let fq = f.substitute(&q);
    let grad: [Rat; 3] = std::array::from_fn(|i| curve.gradient()[i].eval(p));
    let mut gq = UniPoly::zero();
    for i in 0..3 {
        gq = &gq + &q[i].scale(&grad[i]);
    }
    let x: [UniPoly<Rat>; 3] = std::array::from_fn(|i| &fq.scale(&p[i]) - &(&gq * &q[i]));
    let bmat = curve.mat_b();
    MatrixCurve::from_rational(bmat.map(|e| e.substitute(&x)))
}

/// The numeric companion of a fiber count: `π_S(B(t)) × x(t)` for the Veronese curve,
/// expected to vanish identically.
pub fn veronese_image_defect(s: &[GRat; 3]) -> [UniPoly<GRat>; 3] {
    let d = MatrixCurve::veronese();
    let v = d.apply(s);
    let x = veronese_param();
    std::array::from_fn(|k| {
        let (a, b) = ((k + 1) % 3, (k + 2) % 3);
        &(&v[a] * &x[b]) - &(&v[b] * &x[a])
    })
}

/// Tolerance recorded in caustic fiber reports.
pub fn default_tolerance() -> f64 {
    DEFAULT_ROOT_TOL
}
