//! Text formats: polynomials in `x0, x1, x2` (or `t`), coordinate lists and matrix entries.
//!
//! Coefficients are exact: integers, fractions `p/q`, decimals (read as exact rationals) and
//! the imaginary unit `i`. Products may be written with `*` or by juxtaposition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One as _, Zero as _};

use crate::error::{Error, Result};
use crate::euclid::SymMat;
use crate::poly::{Exponent, Field, GRat, MPoly, Rat, Scalar, UniPoly};

type Poly = BTreeMap<Exponent, GRat>;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Variables {
    /// `x0, x1, x2`
    Projective,
    /// `t`, stored in the first slot
    Parameter,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: Variables,
}

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn add_into(acc: &mut Poly, e: Exponent, c: GRat) {
    let entry = acc.entry(e).or_insert_with(GRat::zero);
    *entry = entry.clone() + c;
    if entry.is_zero() {
        acc.remove(&e);
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            add_into(&mut out, [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca.clone() * cb.clone());
        }
    }
    out
}

fn constant(c: GRat) -> Poly {
    let mut p = Poly::new();
    add_into(&mut p, [0, 0, 0], c);
    p
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                for (e, c) in self.term()? {
                    add_into(&mut acc, e, c);
                }
            } else if self.eat(b'-') {
                for (e, c) in self.term()? {
                    add_into(&mut acc, e, -c);
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), Some(b'0'..=b'9' | b'.' | b'(' | b'x' | b't' | b'i'))
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = mul(&acc, &self.unary()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                let c = match d.len() {
                    1 if d.contains_key(&[0, 0, 0]) => d[&[0, 0, 0]].clone(),
                    _ => return Err(err(at, "division by a non-constant")),
                };
                if c.is_zero() {
                    return Err(err(at, "division by zero"));
                }
                acc = acc.into_iter().map(|(e, x)| (e, x / c.clone())).collect();
            } else if self.starts_atom() {
                acc = mul(&acc, &self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat(b'-') {
            Ok(self.unary()?.into_iter().map(|(e, c)| (e, -c)).collect())
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let digits = self.digits();
            let k: u32 = digits.parse().map_err(|_| err(at, "expected a non-negative integer exponent"))?;
            let mut out = constant(GRat::one());
            for _ in 0..k {
                out = mul(&out, &base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<Rat> {
        let at = self.pos;
        let int = self.digits();
        let mut value: BigInt = if int.is_empty() { BigInt::zero() } else { int.parse().expect("digits") };
        let mut denom = BigInt::one();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            let frac = self.digits();
            if int.is_empty() && frac.is_empty() {
                return Err(err(at, "malformed number"));
            }
            for ch in frac.bytes() {
                value = value * 10 + BigInt::from(ch - b'0');
                denom *= 10;
            }
        }
        Ok(Rat::new(value, denom))
    }

    fn atom(&mut self) -> Result<Poly> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(err(self.pos, "expected ')'"));
                }
                Ok(e)
            }
            Some(b'0'..=b'9' | b'.') => Ok(constant(GRat::real(self.number()?))),
            Some(b'i') => {
                self.pos += 1;
                Ok(constant(GRat::int(0, 1)))
            }
            Some(b'x') if self.vars == Variables::Projective => {
                self.pos += 1;
                let k = match self.peek() {
                    Some(c @ b'0'..=b'2') => (c - b'0') as usize,
                    _ => return Err(err(self.pos, "expected variable x0, x1 or x2")),
                };
                self.pos += 1;
                let mut e = [0u32; 3];
                e[k] = 1;
                let mut p = Poly::new();
                p.insert(e, GRat::one());
                Ok(p)
            }
            Some(b't') if self.vars == Variables::Parameter => {
                self.pos += 1;
                let mut p = Poly::new();
                p.insert([1, 0, 0], GRat::one());
                Ok(p)
            }
            Some(c) => Err(err(at, format!("unexpected character '{}'", c as char))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

fn parse_poly(src: &str, vars: Variables) -> Result<Poly> {
    let mut p = Parser { src, pos: 0, vars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(err(p.pos, "unexpected trailing input"));
    }
    Ok(out)
}

fn mono_name(e: &Exponent) -> String {
    MPoly::<Rat>::from_terms([(*e, crate::poly::rat(1))]).expect("monomial").to_string()
}

/// A homogeneous ternary form with rational coefficients.
pub fn parse_curve(src: &str) -> Result<MPoly<Rat>> {
    let p = parse_poly(src, Variables::Projective)?;
    let degree = p.keys().map(|e| e.iter().sum::<u32>()).max().ok_or(Error::ZeroPolynomial)?;
    let offending: Vec<String> = p.keys().filter(|e| e.iter().sum::<u32>() != degree).map(mono_name).collect();
    if !offending.is_empty() {
        return Err(Error::NotHomogeneous { expected: degree, offending });
    }
    let mut terms = Vec::with_capacity(p.len());
    for (e, c) in p {
        if !Field::is_zero(&c.im) {
            return Err(Error::InvalidInput("curve coefficients must be rational".into()));
        }
        terms.push((e, c.re));
    }
    MPoly::from_terms(terms)
}

/// A univariate polynomial in `t` with Gaussian rational coefficients.
pub fn parse_parameter_poly(src: &str) -> Result<UniPoly<GRat>> {
    let p = parse_poly(src, Variables::Parameter)?;
    let deg = p.keys().map(|e| e[0] as usize).max().unwrap_or(0);
    let mut coeffs = vec![GRat::zero(); deg + 1];
    for (e, c) in p {
        coeffs[e[0] as usize] = c;
    }
    Ok(UniPoly::new(coeffs))
}

/// A constant such as `3/2`, `-0.5` or `1+2*i`.
pub fn parse_scalar(src: &str) -> Result<GRat> {
    let p = parse_poly(src, Variables::Parameter)?;
    if p.keys().any(|e| e[0] != 0) {
        return Err(err(0, "expected a constant"));
    }
    Ok(p.get(&[0, 0, 0]).cloned().unwrap_or_else(GRat::zero))
}

/// Comma separated constants.
pub fn parse_list(src: &str, len: usize) -> Result<Vec<GRat>> {
    let mut out = Vec::with_capacity(len);
    let mut offset = 0;
    for part in src.split(',') {
        out.push(parse_scalar(part).map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse { position: position + offset, message },
            other => other,
        })?);
        offset += part.len() + 1;
    }
    if out.len() != len {
        return Err(Error::InvalidInput(format!("expected {len} comma separated values, found {}", out.len())));
    }
    Ok(out)
}

/// A rational point `a,b,c`.
pub fn parse_point(src: &str) -> Result<[Rat; 3]> {
    let v = parse_list(src, 3)?;
    if v.iter().any(|c| !Field::is_zero(&c.im)) {
        return Err(Error::InvalidInput("point coordinates must be rational".into()));
    }
    if v.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("the zero vector is not a point".into()));
    }
    Ok(std::array::from_fn(|i| v[i].re.clone()))
}

/// A symmetric matrix from its entries `b00,b01,b02,b11,b12,b22`.
pub fn parse_sym_matrix(src: &str) -> Result<SymMat<GRat>> {
    let v = parse_list(src, 6)?;
    Ok(SymMat::new(std::array::from_fn(|k| v[k].clone())))
}

pub const MATRIX_SLOTS: [&str; 6] = ["b00", "b01", "b02", "b11", "b12", "b22"];

/// A matrix curve from a JSON object with one polynomial string in `t` per slot; missing
/// slots are zero.
pub fn parse_matrix_curve_json(src: &str) -> Result<SymMat<UniPoly<GRat>>> {
    let v: serde_json::Value = serde_json::from_str(src)
        .map_err(|e| Error::Parse { position: e.column(), message: format!("invalid JSON: {e}") })?;
    let obj = v.as_object().ok_or_else(|| Error::InvalidInput("matrix curve must be a JSON object".into()))?;
    if let Some(k) = obj.keys().find(|k| !MATRIX_SLOTS.contains(&k.as_str())) {
        return Err(Error::InvalidInput(format!("unknown matrix slot {k:?}")));
    }
    let mut entries = Vec::with_capacity(6);
    for slot in MATRIX_SLOTS {
        let p = match obj.get(slot) {
            None => UniPoly::zero(),
            Some(serde_json::Value::String(s)) => parse_parameter_poly(s)?,
            Some(serde_json::Value::Number(n)) => parse_parameter_poly(&n.to_string())?,
            Some(_) => return Err(Error::InvalidInput(format!("slot {slot} must be a string"))),
        };
        entries.push(p);
    }
    let e: [UniPoly<GRat>; 6] = entries.try_into().expect("six slots");
    Ok(SymMat::new(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn parses_curves() {
        let f = parse_curve("x0^2 + 2*x1^2 - x2^2").unwrap();
        assert_eq!(f.coeff(&[0, 2, 0]), rat(2));
        assert_eq!(f.coeff(&[0, 0, 2]), rat(-1));
        let g = parse_curve("3/2 x0 x1 - 0.25*(x1 - x2)^2 + x2*x0").unwrap();
        assert_eq!(g.coeff(&[1, 1, 0]), ratio(3, 2));
        assert_eq!(g.coeff(&[0, 1, 1]), ratio(1, 2));
        assert_eq!(g.coeff(&[0, 0, 2]), ratio(-1, 4));
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(parse_curve("x0^2 + x3"), Err(Error::Parse { position: 8, .. })));
        assert!(matches!(parse_curve("x0^2 + x1"), Err(Error::NotHomogeneous { expected: 2, .. })));
        assert!(matches!(parse_curve("(x0 + x1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_curve("x0 + i*x1"), Err(Error::InvalidInput(_))));
        assert_eq!(parse_curve("x0 - x0").unwrap_err(), Error::ZeroPolynomial);
        assert_eq!(parse_curve("x0 / x1").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn parses_parameter_polys_and_lists() {
        let p = parse_parameter_poly("1 + 3/2*t^2").unwrap();
        assert_eq!(p.coeffs(), &[GRat::int(1, 0), GRat::int(0, 0), GRat::real(ratio(3, 2))]);
        assert_eq!(parse_scalar("1+2*i").unwrap(), GRat::int(1, 2));
        let m = parse_sym_matrix("1,0,0,0,0,0").unwrap();
        assert_eq!(*m.get(0, 0), GRat::int(1, 0));
        assert!(matches!(parse_list("1,2,x", 3), Err(Error::Parse { position: 4, .. })));
        assert_eq!(parse_point("3,1,1").unwrap(), [rat(3), rat(1), rat(1)]);
    }

    #[test]
    fn parses_matrix_curve_json() {
        let m = parse_matrix_curve_json(r#"{"b00": "1", "b01": "t", "b11": "t^3"}"#).unwrap();
        assert_eq!(m.get(1, 1).degree(), Some(3));
        assert!(m.get(2, 2).is_zero());
        assert!(parse_matrix_curve_json(r#"{"b33": "1"}"#).is_err());
    }
}
