//! Coefficient fields.
//!
//! Exact work happens over [`Rat`] (the rationals) or [`GRat`] (Gaussian rationals, needed
//! because the cyclic points `(1, ±i, 0)` are not real). Numeric work uses [`Cx`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Reduced rational with positive denominator.
pub type Rat = BigRational;
/// Double-precision complex number.
pub type Cx = Complex64;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Common arithmetic interface of exact and numeric scalars.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn to_cx(&self) -> Cx;
    /// Exact zero test for exact scalars; `|x| <= tol * scale` for numeric ones.
    fn negligible(&self, scale: f64, tol: f64) -> bool;
    fn magnitude(&self) -> f64 {
        self.to_cx().norm()
    }
    fn from_int(n: i64) -> Self {
        Self::from_rat(&rat(n))
    }
}

/// Exact field.
pub trait Field: Scalar + PartialEq + fmt::Display {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    /// Rational and imaginary parts.
    fn parts(&self) -> (Rat, Rat);
}

impl Scalar for Rat {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn to_cx(&self) -> Cx {
        Cx::new(rat_to_f64(self), 0.0)
    }
    fn negligible(&self, _scale: f64, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
}

impl Field for Rat {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn parts(&self) -> (Rat, Rat) {
        (self.clone(), Zero::zero())
    }
}

impl Scalar for Cx {
    const EXACT: bool = false;
    fn zero() -> Self {
        Cx::new(0.0, 0.0)
    }
    fn one() -> Self {
        Cx::new(1.0, 0.0)
    }
    fn from_rat(r: &Rat) -> Self {
        Cx::new(rat_to_f64(r), 0.0)
    }
    fn to_cx(&self) -> Cx {
        *self
    }
    fn negligible(&self, scale: f64, tol: f64) -> bool {
        self.norm() <= tol * scale
    }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GRat {
    pub re: Rat,
    pub im: Rat,
}

impl GRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GRat { re, im }
    }
    pub fn real(re: Rat) -> Self {
        GRat { re, im: Zero::zero() }
    }
    pub fn i() -> Self {
        GRat { re: Zero::zero(), im: One::one() }
    }
    pub fn int(re: i64, im: i64) -> Self {
        GRat { re: rat(re), im: rat(im) }
    }
    pub fn conj(&self) -> Self {
        GRat { re: self.re.clone(), im: -self.im.clone() }
    }
    /// `re² + im²`.
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }
    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        GRat { re: &self.re / &n, im: -&self.im / &n }
    }
    pub fn is_real(&self) -> bool {
        Zero::is_zero(&self.im)
    }

    /// Exact square root in ℚ(i) when one exists.
    pub fn sqrt(&self) -> Option<GRat> {
        if Field::is_zero(self) {
            return Some(GRat::zero());
        }
        // (a + bi)² = re + im·i  ⇒  a² = (|z| + re)/2, b² = (|z| − re)/2.
        let modulus = rat_sqrt(&self.norm_sq())?;
        let two = rat(2);
        let a = rat_sqrt(&((&modulus + &self.re) / &two))?;
        let mut b = rat_sqrt(&((&modulus - &self.re) / &two))?;
        if self.im.is_negative() {
            b = -b;
        }
        let cand = GRat::new(a, b);
        (cand.clone() * cand.clone() == *self).then_some(cand)
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}

impl fmt::Display for GRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            write!(f, "{}", self.re)
        } else if Zero::is_zero(&self.re) {
            write!(f, "{}*i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl Add for GRat {
    type Output = GRat;
    fn add(self, o: GRat) -> GRat {
        GRat { re: self.re + o.re, im: self.im + o.im }
    }
}
impl Sub for GRat {
    type Output = GRat;
    fn sub(self, o: GRat) -> GRat {
        GRat { re: self.re - o.re, im: self.im - o.im }
    }
}
impl Mul for GRat {
    type Output = GRat;
    fn mul(self, o: GRat) -> GRat {
        if Zero::is_zero(&self.im) && Zero::is_zero(&o.im) {
            return GRat::real(self.re * o.re);
        }
        GRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}
impl Div for GRat {
    type Output = GRat;
    fn div(self, o: GRat) -> GRat {
        if Zero::is_zero(&o.im) {
            return GRat { re: self.re / &o.re, im: self.im / &o.re };
        }
        self * o.inv()
    }
}
impl Neg for GRat {
    type Output = GRat;
    fn neg(self) -> GRat {
        GRat { re: -self.re, im: -self.im }
    }
}

impl Scalar for GRat {
    const EXACT: bool = true;
    fn zero() -> Self {
        GRat { re: Zero::zero(), im: Zero::zero() }
    }
    fn one() -> Self {
        GRat { re: One::one(), im: Zero::zero() }
    }
    fn from_rat(r: &Rat) -> Self {
        GRat::real(r.clone())
    }
    fn to_cx(&self) -> Cx {
        Cx::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn negligible(&self, _scale: f64, _tol: f64) -> bool {
        Field::is_zero(self)
    }
}

impl Field for GRat {
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn parts(&self) -> (Rat, Rat) {
        (self.re.clone(), self.im.clone())
    }
}

impl From<Rat> for GRat {
    fn from(r: Rat) -> Self {
        GRat::real(r)
    }
}

/// Coefficient embedding between scalar types (ℚ ⊂ ℚ(i) ⊂ ℂ).
pub trait Embed<T> {
    fn embed(&self) -> T;
}

impl<F: Field> Embed<Cx> for F {
    fn embed(&self) -> Cx {
        self.to_cx()
    }
}
impl Embed<Rat> for Rat {
    fn embed(&self) -> Rat {
        self.clone()
    }
}
impl Embed<GRat> for Rat {
    fn embed(&self) -> GRat {
        GRat::real(self.clone())
    }
}
impl Embed<GRat> for GRat {
    fn embed(&self) -> GRat {
        self.clone()
    }
}

/// Converts exact coefficients to complex floats after a common power-of-two rescaling,
/// so that huge rationals neither overflow nor underflow. Roots are unaffected.
pub fn to_cx_scaled<F: Field>(coeffs: &[F]) -> Vec<Cx> {
    let bits = |r: &Rat| -> i64 {
        if Zero::is_zero(r) {
            i64::MIN
        } else {
            r.numer().bits() as i64 - r.denom().bits() as i64
        }
    };
    let top = coeffs
        .iter()
        .map(|c| {
            let (re, im) = c.parts();
            bits(&re).max(bits(&im))
        })
        .max()
        .unwrap_or(i64::MIN);
    if top == i64::MIN {
        return vec![Cx::new(0.0, 0.0); coeffs.len()];
    }
    let shift = |r: &Rat| -> f64 {
        if Zero::is_zero(r) {
            return 0.0;
        }
        let scaled = if top > 0 {
            r / Rat::from_integer(BigInt::one() << (top as usize))
        } else {
            r * Rat::from_integer(BigInt::one() << ((-top) as usize))
        };
        rat_to_f64(&scaled)
    };
    coeffs
        .iter()
        .map(|c| {
            let (re, im) = c.parts();
            Cx::new(shift(&re), shift(&im))
        })
        .collect()
}

/// Nearest rational with denominator `2^bits`.
pub fn f64_to_rat(x: f64, bits: u32) -> Rat {
    let scale = (1u64 << bits) as f64;
    let n = (x * scale).round();
    Rat::new(BigInt::from(n as i128), BigInt::from(1u128 << bits))
}

/// Gaussian rational approximation of a complex float.
pub fn cx_to_grat(z: Cx, bits: u32) -> GRat {
    GRat::new(f64_to_rat(z.re, bits), f64_to_rat(z.im, bits))
}
