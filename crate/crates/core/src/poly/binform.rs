//! Homogeneous binary forms.
//!
//! A form of degree `N` in `(x0, x1)` is stored as its dehomogenization `u(t) = F(1, t)`,
//! `t = x1/x0`. The factor `x0^m` (the root "at infinity" `(0 : 1)`) is implicit:
//! `m = N − deg u`. Working this way keeps GCD and square-free computations homogeneous.

use std::fmt;

use super::scalar::Field;
use super::univariate::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct BinForm<F> {
    degree: usize,
    dehom: UniPoly<F>,
}

impl<F: Field> BinForm<F> {
    /// `coeffs[k]` is the coefficient of `x0^(N−k) x1^k`, `N = coeffs.len() − 1`.
    pub fn from_coeffs(coeffs: Vec<F>) -> Self {
        let degree = coeffs.len().saturating_sub(1);
        BinForm { degree, dehom: UniPoly::new(coeffs) }
    }

    /// Homogenizes `u` to the given degree.
    pub fn from_dehomogenized(degree: usize, u: UniPoly<F>) -> Self {
        assert!(u.degree().is_none_or(|d| d <= degree), "degree too small for the polynomial");
        BinForm { degree, dehom: u }
    }

    pub fn zero(degree: usize) -> Self {
        BinForm { degree, dehom: UniPoly::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.dehom.is_zero()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dehomogenized(&self) -> &UniPoly<F> {
        &self.dehom
    }

    pub fn coeff(&self, k: usize) -> F {
        self.dehom.coeff(k)
    }

    pub fn coeffs(&self) -> Vec<F> {
        (0..=self.degree).map(|k| self.coeff(k)).collect()
    }

    /// Multiplicity of the root `(0 : 1)`, i.e. the power of `x0` dividing the form.
    pub fn infinity_multiplicity(&self) -> usize {
        match self.dehom.degree() {
            Some(d) => self.degree - d,
            None => 0,
        }
    }

    pub fn is_constant(&self) -> bool {
        !self.is_zero() && self.degree == 0
    }

    pub fn mul(&self, o: &Self) -> Self {
        BinForm { degree: self.degree + o.degree, dehom: &self.dehom * &o.dehom }
    }

    pub fn eval(&self, x0: &F, x1: &F) -> F {
        let mut acc = F::zero();
        let mut p0 = F::one();
        for k in (0..=self.degree).rev() {
            // term c_k x0^(N−k) x1^k, accumulated from k = N down.
            let mut p1 = F::one();
            for _ in 0..k {
                p1 = p1 * x1.clone();
            }
            acc = acc + self.coeff(k) * p0.clone() * p1;
            p0 = p0 * x0.clone();
        }
        acc
    }

    /// Greatest common divisor (monic in the dehomogenized sense). `gcd(0, b) = b`.
    pub fn gcd_form(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let g = self.dehom.gcd(&other.dehom);
        let m = self.infinity_multiplicity().min(other.infinity_multiplicity());
        let d = g.degree().unwrap_or(0) + m;
        BinForm { degree: d, dehom: g }
    }

    /// Square-free part: same roots, each simple.
    pub fn squarefree(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let base = self.dehom.squarefree_part();
        let m = usize::from(self.infinity_multiplicity() > 0);
        let d = base.degree().unwrap_or(0) + m;
        Ok(BinForm { degree: d, dehom: base })
    }

    /// Number of distinct roots in `P¹(ℂ)`.
    pub fn count_distinct_roots(&self) -> Result<usize> {
        Ok(self.squarefree()?.degree)
    }

    /// Exact quotient by a divisor.
    pub fn exact_div(&self, d: &Self) -> Self {
        BinForm { degree: self.degree - d.degree, dehom: self.dehom.exact_div(&d.dehom) }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> BinForm<G> {
        BinForm { degree: self.degree, dehom: self.dehom.map(f) }
    }
}

impl<F: Field> fmt::Display for BinForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in 0..=self.degree {
            let c = self.coeff(k);
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            let (a, b) = (self.degree - k, k);
            if a > 0 {
                write!(f, "*x0^{a}")?;
            }
            if b > 0 {
                write!(f, "*x1^{b}")?;
            }
        }
        Ok(())
    }
}
