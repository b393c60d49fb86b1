//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntMatrix;

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal, `d_1 | d_2 | ...`.
///
/// `v_inv` is kept alongside `v` so that canonical generators can be written
/// back in terms of the original ones without a second inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// Diagonal entries `d_k` for `k < cols`, zero past the rank.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.cols())
            .map(|k| {
                if k < self.d.rows() {
                    self.d[(k, k)].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect()
    }
}

fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            if best.as_ref().map_or(true, |(_, b)| abs < *b) {
                best = Some(((i, j), abs));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);
    let mut rank = 0;

    for t in 0..m.min(n) {
        let Some(_) = find_pivot(&d, t) else { break };
        loop {
            let (pi, pj) = find_pivot(&d, t).expect("block is nonzero");
            d.swap_rows(pi, t);
            u.swap_rows(pi, t);
            d.swap_cols(pj, t);
            v.swap_cols(pj, t);
            v_inv.swap_rows(pj, t);

            let p = d[(t, t)].clone();
            for i in t + 1..m {
                let q = d[(i, t)].div_floor(&p);
                if !q.is_zero() {
                    d.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-&q);
                }
            }
            for j in t + 1..n {
                let q = d[(t, j)].div_floor(&p);
                if !q.is_zero() {
                    d.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-&q);
                    v_inv.add_row_multiple(t, j, &q);
                }
            }

            let dirty = (t + 1..m).any(|i| !d[(i, t)].is_zero())
                || (t + 1..n).any(|j| !d[(t, j)].is_zero());
            if dirty {
                continue;
            }
            let bad_row = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match bad_row {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::from(1));
                    u.add_row_multiple(t, i, &BigInt::from(1));
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank = t + 1;
    }
    Snf { u, d, v, v_inv, rank }
}
