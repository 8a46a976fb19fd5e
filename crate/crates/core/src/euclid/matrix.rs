use std::fmt;

use serde::Serialize;

use crate::poly::{Embed, Field, MPoly, Rat, Scalar};

/// Symmetric 3×3 matrix stored by its upper triangle `b00, b01, b02, b11, b12, b22`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymMat<T> {
    e: [T; 6],
}

fn sym_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        (2, 2) => 5,
        _ => panic!("index out of range"),
    }
}

/// Row and column of the `k`-th stored entry.
pub const SYM_SLOTS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

impl<T: Clone> SymMat<T> {
    pub fn new(e: [T; 6]) -> Self {
        SymMat { e }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        SymMat { e: SYM_SLOTS.map(|(i, j)| f(i, j)) }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.e[sym_index(i, j)]
    }

    pub fn entries(&self) -> &[T; 6] {
        &self.e
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> SymMat<U> {
        SymMat { e: std::array::from_fn(|k| f(&self.e[k])) }
    }

    pub fn rows(&self) -> [[T; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.get(i, j).clone()))
    }
}

impl<S: Scalar> SymMat<S> {
    pub fn zero() -> Self {
        SymMat { e: std::array::from_fn(|_| S::zero()) }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn mul_vec(&self, v: &[S; 3]) -> [S; 3] {
        std::array::from_fn(|i| {
            (0..3).fold(S::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone())
        })
    }

    /// The bilinear form `ᵗv·B·w`.
    pub fn bilinear(&self, v: &[S; 3], w: &[S; 3]) -> S {
        super::dot(v, &self.mul_vec(w))
    }

    pub fn add(&self, o: &Self) -> Self {
        SymMat { e: std::array::from_fn(|k| self.e[k].clone() + o.e[k].clone()) }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn det(&self) -> S {
        let m = self.rows();
        m[0][0].clone() * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
            - m[0][1].clone() * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
            + m[0][2].clone() * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
    }

    /// Symmetrized outer product `(a·ᵗb + b·ᵗa) / 2`.
    pub fn sym_outer(a: &[S; 3], b: &[S; 3]) -> Self {
        let half = S::one() / S::from_int(2);
        Self::from_fn(|i, j| (a[i].clone() * b[j].clone() + b[i].clone() * a[j].clone()) * half.clone())
    }
}

impl<F: Field> SymMat<F> {
    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| x.is_zero())
    }

    /// Matrix of the quadratic form `q(v) = ᵗv·B·v` of a ternary quadric.
    pub fn from_quadric(q: &MPoly<F>) -> Self {
        let half = F::one() / F::from_int(2);
        Self::from_fn(|i, j| {
            if i == j {
                let mut e = [0u32; 3];
                e[i] = 2;
                q.coeff(&e)
            } else {
                let mut e = [0u32; 3];
                e[i] = 1;
                e[j] = 1;
                q.coeff(&e) * half.clone()
            }
        })
    }

    pub fn to_quadric(&self) -> MPoly<F> {
        let mut terms = Vec::new();
        for &(i, j) in &SYM_SLOTS {
            let mut e = [0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let c = if i == j { self.get(i, j).clone() } else { self.get(i, j).clone() * F::from_int(2) };
            terms.push((e, c));
        }
        MPoly::from_terms(terms).expect("quadric is homogeneous")
    }
}

impl SymMat<MPoly<Rat>> {
    /// Pointwise evaluation of a polynomial matrix.
    pub fn eval<S: Scalar>(&self, p: &[S; 3]) -> SymMat<S>
    where
        Rat: Embed<S>,
    {
        self.map(|q| q.eval(p))
    }
}

impl<T: fmt::Display + Clone> fmt::Display for SymMat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rows();
        write!(f, "[[{}, {}, {}], [{}, {}, {}], [{}, {}, {}]]", r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2])
    }
}

/// Skew-symmetric 3×3 matrix stored by `a01, a02, a12`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMat<T> {
    e: [T; 3],
}

impl<T: Clone> SkewMat<T> {
    pub fn new(e: [T; 3]) -> Self {
        SkewMat { e }
    }

    pub fn entries(&self) -> &[T; 3] {
        &self.e
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> SkewMat<U> {
        SkewMat { e: std::array::from_fn(|k| f(&self.e[k])) }
    }
}

impl<S: Scalar> SkewMat<S> {
    pub fn get(&self, i: usize, j: usize) -> S {
        let k = |a, b| match (a, b) {
            (0, 1) => 0,
            (0, 2) => 1,
            _ => 2,
        };
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => S::zero(),
            std::cmp::Ordering::Less => self.e[k(i, j)].clone(),
            std::cmp::Ordering::Greater => -self.e[k(j, i)].clone(),
        }
    }

    pub fn mul_vec(&self, v: &[S; 3]) -> [S; 3] {
        std::array::from_fn(|i| (0..3).fold(S::zero(), |acc, j| acc + self.get(i, j) * v[j].clone()))
    }

    pub fn rows(&self) -> [[S; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.get(i, j)))
    }
}

impl SkewMat<MPoly<Rat>> {
    pub fn eval<S: Scalar>(&self, p: &[S; 3]) -> SkewMat<S>
    where
        Rat: Embed<S>,
    {
        self.map(|q| q.eval(p))
    }
}
