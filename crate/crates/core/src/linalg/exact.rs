//! Rank over Q by fraction-free sparse elimination.
//!
//! Reducing row `r` against pivot row `p` at column `c` replaces `r` by
//! `(p_c/g) r - (r_c/g) p` with `g = gcd(p_c, r_c)`, then divides out the
//! content of the result. Runs in checked `i128` first and restarts with
//! big integers on overflow.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SparseMatrixZ;

trait Coef: Clone + PartialEq + Sized {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn gcd(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
}

impl Coef for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl Coef for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

type Row<T> = Vec<(usize, T)>;

/// Exact rank of `m` over the rationals.
pub fn rank_exact(m: &SparseMatrixZ) -> usize {
    match eliminate::<i128>(m) {
        Some(r) => r,
        None => {
            log::debug!("i128 elimination overflowed on {}x{}; using big integers", m.rows(), m.cols());
            eliminate::<BigInt>(m).expect("big integer elimination cannot overflow")
        }
    }
}

fn eliminate<T: Coef>(m: &SparseMatrixZ) -> Option<usize> {
    let mut rows: Vec<Row<T>> = m
        .row_lists()
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|r| r.into_iter().map(|(c, v)| (c, T::from_i64(v))).collect())
        .collect();
    rows.sort_by_key(|r| r.len());
    let mut pivots: HashMap<usize, Row<T>> = HashMap::new();
    for mut row in rows {
        loop {
            let Some((c, a)) = row.first().cloned() else { break };
            match pivots.get_mut(&c) {
                None => {
                    pivots.insert(c, row);
                    break;
                }
                Some(piv) => {
                    // keep unit pivots where possible
                    if a.is_unit() && !piv[0].1.is_unit() {
                        std::mem::swap(piv, &mut row);
                        continue;
                    }
                    row = combine(&row, piv)?;
                }
            }
        }
    }
    Some(pivots.len())
}

/// Eliminates the leading entry of `r` using `p` (same leading column).
fn combine<T: Coef>(r: &Row<T>, p: &Row<T>) -> Option<Row<T>> {
    let a = &r[0].1;
    let b = &p[0].1;
    let g = a.gcd(b);
    let (sa, sb) = (b.div_exact(&g), a.div_exact(&g));
    let mut out: Row<T> = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (1, 1);
    while i < r.len() || j < p.len() {
        if j >= p.len() || (i < r.len() && r[i].0 < p[j].0) {
            out.push((r[i].0, r[i].1.mul(&sa)?));
            i += 1;
        } else if i >= r.len() || p[j].0 < r[i].0 {
            out.push((p[j].0, T::from_i64(0).sub(&p[j].1.mul(&sb)?)?));
            j += 1;
        } else {
            let v = r[i].1.mul(&sa)?.sub(&p[j].1.mul(&sb)?)?;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    if let Some(first) = out.first() {
        let mut content = first.1.clone();
        for (_, v) in &out[1..] {
            if content.is_unit() {
                break;
            }
            content = content.gcd(v);
        }
        if !content.is_unit() {
            for x in &mut out {
                x.1 = x.1.div_exact(&content);
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        assert_eq!(rank_exact(&SparseMatrixZ::zero(5, 7)), 0);
        assert_eq!(rank_exact(&SparseMatrixZ::identity(4)), 4);
        let m = SparseMatrixZ::from_dense(&[vec![5, 0], vec![0, 1]]);
        assert_eq!(rank_exact(&m), 2);
        let m = SparseMatrixZ::from_dense(&[vec![2, 4, 6], vec![3, 6, 9], vec![1, 0, 1]]);
        assert_eq!(rank_exact(&m), 2);
    }

    #[test]
    fn big_integer_path_agrees() {
        // Hilbert-like integer matrix with large entries forces growth
        let n = 9;
        let d: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| 2520 * 27720 / (i + j + 1) as i64 * (1 + (i * j) as i64 % 7)).collect())
            .collect();
        let m = SparseMatrixZ::from_dense(&d);
        assert_eq!(eliminate::<BigInt>(&m), Some(rank_exact(&m)));
    }
}
