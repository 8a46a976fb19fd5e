//! Homogeneous polynomials in `x0, x1, x2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use super::scalar::{Cx, Embed, Field, Rat, Scalar};
use super::univariate::UniPoly;
use crate::error::{Error, Result};

/// Exponent triple `(e0, e1, e2)`.
pub type Exponent = [u32; 3];

/// A homogeneous ternary form with exact coefficients.
///
/// The zero polynomial has no terms; it keeps a conventional degree for bookkeeping,
/// but [`MPoly::degree`] refuses to answer for it.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<F = Rat> {
    nominal_degree: u32,
    terms: BTreeMap<Exponent, F>,
}

impl<F: Field> MPoly<F> {
    pub fn zero(nominal_degree: u32) -> Self {
        MPoly { nominal_degree, terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0, 0, 0], c);
        }
        MPoly { nominal_degree: 0, terms }
    }

    pub fn monomial(c: F, e: Exponent) -> Self {
        let mut p = Self::zero(e.iter().sum());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(F::one(), e)
    }

    /// Linear form `c0 x0 + c1 x1 + c2 x2`.
    pub fn linear(c: &[F; 3]) -> Self {
        let mut p = Self::zero(1);
        for (i, ci) in c.iter().enumerate() {
            p = &p + &Self::var(i).scale(ci);
        }
        p
    }

    /// Builds a polynomial from terms, rejecting mixed degrees.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, F)>) -> Result<Self> {
        let mut map: BTreeMap<Exponent, F> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_insert_with(F::zero);
            *slot = slot.clone() + c;
        }
        map.retain(|_, c| !c.is_zero());
        let Some(expected) = map.keys().map(|e| e.iter().sum::<u32>()).max() else {
            return Ok(Self::zero(0));
        };
        let offending: Vec<String> = map
            .keys()
            .filter(|e| e.iter().sum::<u32>() != expected)
            .map(monomial_string)
            .collect();
        if !offending.is_empty() {
            return Err(Error::NotHomogeneous { expected, offending });
        }
        Ok(MPoly { nominal_degree: expected, terms: map })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Result<u32> {
        if self.is_zero() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(self.nominal_degree)
        }
    }

    /// Degree without the zero check; the conventional degree for the zero polynomial.
    pub fn nominal_degree(&self) -> u32 {
        self.nominal_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exponent) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == self.nominal_degree)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nominal_degree);
        }
        MPoly {
            nominal_degree: self.nominal_degree,
            terms: self.terms.iter().map(|(e, a)| (*e, a.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(F::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂p/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let deg = self.nominal_degree.saturating_sub(1);
        let mut out = Self::zero(deg);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = *e;
            f[i] -= 1;
            out.terms.insert(f, c.clone() * F::from_int(e[i] as i64));
        }
        out
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }

    /// Evaluates at a point of any scalar type the coefficients embed into.
    pub fn eval<S: Scalar>(&self, pt: &[S; 3]) -> S
    where
        F: Embed<S>,
    {
        let mut powers: [Vec<S>; 3] = Default::default();
        for (k, pw) in powers.iter_mut().enumerate() {
            pw.push(S::one());
            for j in 0..self.nominal_degree as usize {
                let next = pw[j].clone() * pt[k].clone();
                pw.push(next);
            }
        }
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let m = powers[0][e[0] as usize].clone()
                * powers[1][e[1] as usize].clone()
                * powers[2][e[2] as usize].clone();
            acc = acc + c.embed() * m;
        }
        acc
    }

    /// Σ |c|·|monomial(pt)|: a bound on `|p(pt)|` used to make residuals relative.
    pub fn abs_eval(&self, pt: &[Cx; 3]) -> f64 {
        let a = [pt[0].norm(), pt[1].norm(), pt[2].norm()];
        self.terms
            .iter()
            .map(|(e, c)| {
                c.to_cx().norm() * a[0].powi(e[0] as i32) * a[1].powi(e[1] as i32) * a[2].powi(e[2] as i32)
            })
            .sum()
    }

    /// Relative residual `|p(pt)| / abs_eval(pt)` (zero for the zero polynomial).
    pub fn relative_residual(&self, pt: &[Cx; 3]) -> f64 {
        let scale = self.abs_eval(pt);
        if scale == 0.0 {
            return 0.0;
        }
        self.eval(pt).norm() / scale
    }

    /// The composition `y ↦ p(M y)`.
    pub fn compose_linear(&self, m: &[[F; 3]; 3]) -> Self {
        let forms: [Self; 3] = std::array::from_fn(|i| Self::linear(&m[i]));
        let powers: [Vec<Self>; 3] = std::array::from_fn(|i| {
            let mut v = vec![Self::constant(F::one())];
            for j in 0..self.nominal_degree as usize {
                let next = &v[j] * &forms[i];
                v.push(next);
            }
            v
        });
        let mut out = Self::zero(self.nominal_degree);
        for (e, c) in &self.terms {
            let t = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize]) * &powers[2][e[2] as usize];
            out = &out + &t.scale(c);
        }
        out
    }

    /// Degree in the variable `x_axis`.
    pub fn degree_in(&self, axis: usize) -> u32 {
        self.terms.keys().map(|e| e[axis]).max().unwrap_or(0)
    }

    /// Coefficients of the powers of `x_axis`, each dehomogenized in the remaining two
    /// variables `(a, b)` (in increasing index order) by `a = 1`, `b = t`.
    pub fn coefficients_in(&self, axis: usize) -> Vec<UniPoly<F>> {
        let (_, b) = remaining_axes(axis);
        let n = self.degree_in(axis) as usize;
        let mut raw: Vec<Vec<F>> = vec![Vec::new(); n + 1];
        for (e, c) in &self.terms {
            let k = e[axis] as usize;
            let j = e[b] as usize;
            if raw[k].len() <= j {
                raw[k].resize(j + 1, F::zero());
            }
            raw[k][j] = raw[k][j].clone() + c.clone();
        }
        raw.into_iter().map(UniPoly::new).collect()
    }

    /// Substitutes univariate polynomials for the three variables.
    pub fn substitute(&self, x: &[UniPoly<F>; 3]) -> UniPoly<F> {
        let powers: [Vec<UniPoly<F>>; 3] = std::array::from_fn(|i| {
            let mut v = vec![UniPoly::one()];
            for j in 0..self.nominal_degree as usize {
                let next = &v[j] * &x[i];
                v.push(next);
            }
            v
        });
        let mut acc = UniPoly::zero();
        for (e, c) in &self.terms {
            let t = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize]) * &powers[2][e[2] as usize];
            acc = &acc + &t.scale(c);
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let g = f(c);
            if !g.is_zero() {
                terms.insert(*e, g);
            }
        }
        MPoly { nominal_degree: self.nominal_degree, terms }
    }

    /// Complex-float copy of the coefficients, for fast numeric evaluation.
    pub fn to_numeric(&self) -> NumPoly {
        NumPoly {
            degree: self.nominal_degree,
            terms: self.terms.iter().map(|(e, c)| (*e, c.to_cx())).collect(),
        }
    }
}

impl MPoly<Rat> {
    /// A seeded random form of the given degree with small integer coefficients.
    pub fn random<R: Rng>(degree: u32, rng: &mut R, bound: i64) -> Self {
        loop {
            let mut terms = Vec::new();
            for e0 in 0..=degree {
                for e1 in 0..=degree - e0 {
                    let c = rng.random_range(-bound..=bound);
                    terms.push(([e0, e1, degree - e0 - e1], super::scalar::rat(c)));
                }
            }
            let p = Self::from_terms(terms).expect("homogeneous by construction");
            if !p.is_zero() {
                return p;
            }
        }
    }
}

/// The two variables other than `axis`, in increasing order.
pub fn remaining_axes(axis: usize) -> (usize, usize) {
    match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

pub(crate) fn monomial_string(e: &Exponent) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl<F: Field> Add for &MPoly<F> {
    type Output = MPoly<F>;
    fn add(self, o: &MPoly<F>) -> MPoly<F> {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        assert_eq!(self.nominal_degree, o.nominal_degree, "adding forms of different degree");
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let s = terms.get(e).cloned().unwrap_or_else(F::zero) + c.clone();
            if s.is_zero() {
                terms.remove(e);
            } else {
                terms.insert(*e, s);
            }
        }
        MPoly { nominal_degree: self.nominal_degree, terms }
    }
}

impl<F: Field> Neg for &MPoly<F> {
    type Output = MPoly<F>;
    fn neg(self) -> MPoly<F> {
        MPoly {
            nominal_degree: self.nominal_degree,
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl<F: Field> Sub for &MPoly<F> {
    type Output = MPoly<F>;
    fn sub(self, o: &MPoly<F>) -> MPoly<F> {
        self + &(-o)
    }
}

impl<F: Field> Mul for &MPoly<F> {
    type Output = MPoly<F>;
    fn mul(self, o: &MPoly<F>) -> MPoly<F> {
        let deg = self.nominal_degree + o.nominal_degree;
        let mut terms: BTreeMap<Exponent, F> = BTreeMap::new();
        for (e, a) in &self.terms {
            for (f, b) in &o.terms {
                let g = [e[0] + f[0], e[1] + f[1], e[2] + f[2]];
                let slot = terms.entry(g).or_insert_with(F::zero);
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { nominal_degree: deg, terms }
    }
}

impl<F: Field> fmt::Display for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest power of x0 first.
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) if c.parts().1 == Rat::from_integer(0.into()) => (true, rest.to_string()),
                _ => (false, s.clone()),
            };
            let body = if body.contains('+') || body.contains('-') || body.contains('i') {
                format!("({body})")
            } else {
                body
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let m = monomial_string(e);
            match (body.as_str(), m.as_str()) {
                (_, "1") => write!(f, "{body}")?,
                ("1", _) => write!(f, "{m}")?,
                _ => write!(f, "{body}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Complex-float ternary form for repeated numeric evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct NumPoly {
    degree: u32,
    terms: Vec<(Exponent, Cx)>,
}

impl NumPoly {
    pub fn from_terms(degree: u32, terms: Vec<(Exponent, Cx)>) -> Self {
        NumPoly { degree, terms }
    }

    pub fn terms(&self) -> &[(Exponent, Cx)] {
        &self.terms
    }

    /// Relative residual `|p(pt)| / Σ|c|·|monomial(pt)|`.
    pub fn relative_residual(&self, pt: &[Cx; 3]) -> f64 {
        let s = self.abs_eval(pt);
        if s == 0.0 {
            return 0.0;
        }
        self.eval(pt).norm() / s
    }

    /// Residual `|p(pt)| / (Σ|c|·|pt|^d)`, meaningful also where every monomial vanishes.
    pub fn scaled_residual(&self, pt: &[Cx; 3]) -> f64 {
        let n = pt.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let s = self.terms.iter().map(|(_, c)| c.norm()).sum::<f64>() * n.powi(self.degree as i32);
        if s == 0.0 {
            return 0.0;
        }
        self.eval(pt).norm() / s
    }

    pub fn eval(&self, pt: &[Cx; 3]) -> Cx {
        let mut acc = Cx::new(0.0, 0.0);
        for (e, c) in &self.terms {
            acc += c * pt[0].powu(e[0]) * pt[1].powu(e[1]) * pt[2].powu(e[2]);
        }
        acc
    }

    pub fn abs_eval(&self, pt: &[Cx; 3]) -> f64 {
        let a = [pt[0].norm(), pt[1].norm(), pt[2].norm()];
        self.terms
            .iter()
            .map(|(e, c)| c.norm() * a[0].powi(e[0] as i32) * a[1].powi(e[1] as i32) * a[2].powi(e[2] as i32))
            .sum()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficients of the powers of `x_axis`, the other two coordinates taken from `pt`.
    pub fn univariate_coefficients(&self, axis: usize, pt: &[Cx; 3]) -> Vec<Cx> {
        let n = self.terms.iter().map(|(e, _)| e[axis]).max().unwrap_or(0) as usize;
        let mut out = vec![Cx::new(0.0, 0.0); n + 1];
        for (e, c) in &self.terms {
            let mut m = *c;
            for i in 0..3 {
                if i != axis {
                    m *= pt[i].powu(e[i]);
                }
            }
            out[e[axis] as usize] += m;
        }
        out
    }

    /// Numeric gradient.
    pub fn gradient_at(&self, pt: &[Cx; 3]) -> [Cx; 3] {
        let mut g = [Cx::new(0.0, 0.0); 3];
        for (e, c) in &self.terms {
            for i in 0..3 {
                if e[i] == 0 {
                    continue;
                }
                let mut f = *e;
                f[i] -= 1;
                g[i] += c * (e[i] as f64) * pt[0].powu(f[0]) * pt[1].powu(f[1]) * pt[2].powu(f[2]);
            }
        }
        g
    }
}

impl fmt::Display for NumPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("({:.12e}{:+.12e}*i)*{}", c.re, c.im, monomial_string(e)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
