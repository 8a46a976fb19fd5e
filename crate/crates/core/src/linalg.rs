//! Small dense linear algebra: exact row reduction over a field, complex SVD for the
//! numeric paths.

use nalgebra::DMatrix;

use crate::poly::{Cx, Field};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(rows: &mut [Vec<F>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = F::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let k = rows[i][c].clone();
            for j in c..ncols {
                let v = rows[i][j].clone() - k.clone() * rows[r][j].clone();
                rows[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{v : rows·v = 0}`.
pub fn nullspace<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![F::zero(); ncols];
            v[fc] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `rows·x = rhs`, if the system is consistent.
pub fn solve<F: Field>(rows: &[Vec<F>], rhs: &[F]) -> Option<Vec<F>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<F>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][n].clone();
    }
    Some(x)
}

/// Singular values in decreasing order with the matching right singular vectors.
pub fn svd(rows: &[Vec<Cx>]) -> (Vec<f64>, Vec<Vec<Cx>>) {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    let mut m = DMatrix::<Cx>::from_fn(nr, nc, |i, j| rows[i][j]);
    // pad wide matrices with zero rows so that all right singular vectors are returned
    if nr < nc {
        m = m.resize_vertically(nc, Cx::new(0.0, 0.0));
    }
    let dec = m.svd(false, true);
    let vt = dec.v_t.expect("requested");
    let mut order: Vec<usize> = (0..dec.singular_values.len()).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    let sv = order.iter().map(|&k| dec.singular_values[k]).collect();
    let vecs = order.iter().map(|&k| (0..nc).map(|j| vt[(k, j)].conj()).collect()).collect();
    (sv, vecs)
}
