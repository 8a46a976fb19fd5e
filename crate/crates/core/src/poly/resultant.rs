//! Sylvester resultants of ternary forms, by fraction-free (Bareiss) elimination.

use super::binform::BinForm;
use super::mpoly::MPoly;
use super::scalar::Field;
use super::univariate::UniPoly;
use crate::error::{Error, Result};

/// Determinant of a square matrix over `F[t]` by Bareiss elimination.
pub fn bareiss_det<F: Field>(mut m: Vec<Vec<UniPoly<F>>>) -> UniPoly<F> {
    let n = m.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut negate = false;
    let mut prev = UniPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return UniPoly::zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Sylvester matrix of two polynomials in `z` whose coefficients lie in `F[t]`;
/// `a[i]`, `b[j]` are the coefficients of `z^i`, `z^j`.
pub fn sylvester_matrix<F: Field>(a: &[UniPoly<F>], b: &[UniPoly<F>]) -> Vec<Vec<UniPoly<F>>> {
    let p = a.len() - 1;
    let q = b.len() - 1;
    let n = p + q;
    let mut m = vec![vec![UniPoly::zero(); n]; n];
    for r in 0..q {
        for (i, ai) in a.iter().enumerate() {
            m[r][r + p - i] = ai.clone();
        }
    }
    for r in 0..p {
        for (j, bj) in b.iter().enumerate() {
            m[q + r][r + q - j] = bj.clone();
        }
    }
    m
}

/// Resultant of `f` and `g` with respect to `x_axis`, as a binary form in the other two
/// variables (in increasing index order).
///
/// For forms of degrees `d, e` and degrees `p, q` in the eliminated variable the result is
/// homogeneous of degree `q·d + p·e − p·q`, which is `d·e` when both leading coefficients
/// are non-zero constants.
pub fn resultant_wrt<F: Field>(f: &MPoly<F>, g: &MPoly<F>, axis: usize) -> Result<BinForm<F>> {
    let p = f.degree_in(axis) as usize;
    let q = g.degree_in(axis) as usize;
    if f.is_zero() || p == 0 {
        return Err(Error::ConstantInVariable { axis });
    }
    if g.is_zero() || q == 0 {
        return Err(Error::ConstantInVariable { axis });
    }
    let d = f.nominal_degree() as usize;
    let e = g.nominal_degree() as usize;
    let a = f.coefficients_in(axis);
    let b = g.coefficients_in(axis);
    let det = bareiss_det(sylvester_matrix(&a, &b));
    let degree = q * d + p * e - p * q;
    Ok(BinForm::from_dehomogenized(degree, det))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::{rat, Rat};

    fn m(terms: &[([u32; 3], i64)]) -> MPoly<Rat> {
        MPoly::from_terms(terms.iter().map(|&(e, c)| (e, rat(c)))).unwrap()
    }

    #[test]
    fn circle_and_tangent_line() {
        let f = m(&[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], -1)]);
        let g = m(&[([1, 0, 0], 1), ([0, 0, 1], -1)]);
        let r = resultant_wrt(&f, &g, 2).unwrap();
        assert_eq!(r.degree(), 2);
        let monic = r.dehomogenized().monic();
        assert_eq!(monic, UniPoly::monomial(rat(1), 2));
    }

    #[test]
    fn substitution_case() {
        let f = m(&[([1, 0, 1], 1), ([0, 2, 0], -1)]);
        let g = m(&[([0, 0, 1], 1)]);
        let r = resultant_wrt(&f, &g, 2).unwrap();
        assert_eq!(r.degree(), 2);
        assert_eq!(r.dehomogenized().monic(), UniPoly::monomial(rat(1), 2));
    }

    #[test]
    fn constant_in_variable_errors() {
        let f = m(&[([2, 0, 0], 1), ([0, 2, 0], 1)]);
        let g = m(&[([0, 0, 1], 1)]);
        assert_eq!(resultant_wrt(&f, &g, 2), Err(Error::ConstantInVariable { axis: 2 }));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let c = |v: i64| UniPoly::constant(rat(v));
        let mat = vec![
            vec![c(2), c(0), c(1)],
            vec![c(1), c(3), c(2)],
            vec![c(1), c(1), c(1)],
        ];
        // 2(3−2) − 0 + 1(1−3) = 0
        assert!(bareiss_det(mat).is_zero());
        let mat = vec![vec![c(0), c(1)], vec![c(1), c(0)]];
        assert_eq!(bareiss_det(mat), c(-1));
    }
}
