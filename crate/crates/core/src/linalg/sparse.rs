use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Sparse integer matrix in sorted triplet form. No duplicate positions and
/// no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseMatrixZ {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i64)>,
}

impl SparseMatrixZ {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrixZ {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    /// Sums duplicate positions and drops zeros.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            let e = acc.entry((r, c)).or_insert(0);
            *e = e.checked_add(v).expect("entry overflow");
        }
        let entries = acc
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        SparseMatrixZ { rows, cols, entries }
    }

    pub fn from_dense(d: &[Vec<i64>]) -> Self {
        let rows = d.len();
        let cols = d.first().map_or(0, Vec::len);
        let t = d
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)));
        Self::from_triplets(rows, cols, t)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            d[r][c] = v;
        }
        d
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, 1)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, usize, i64)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&(r, c)))
            .map_or(0, |i| self.entries[i].2)
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable();
        SparseMatrixZ {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn neg(&self) -> Self {
        SparseMatrixZ {
            entries: self.entries.iter().map(|&(r, c, v)| (r, c, -v)).collect(),
            ..self.clone()
        }
    }

    /// Exact product; panics if an entry leaves the `i64` range.
    pub fn mul(&self, other: &SparseMatrixZ) -> SparseMatrixZ {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); other.rows];
        for &(r, c, v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), i128> = BTreeMap::new();
        for &(r, k, a) in &self.entries {
            for &(c, b) in &by_row[k] {
                *acc.entry((r, c)).or_insert(0) += a as i128 * b as i128;
            }
        }
        let entries = acc
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|((r, c), v)| (r, c, i64::try_from(v).expect("product entry overflow")))
            .collect();
        SparseMatrixZ {
            rows: self.rows,
            cols: other.cols,
            entries,
        }
    }

    /// Rows as sorted `(col, value)` lists.
    pub fn row_lists(&self) -> Vec<Vec<(usize, i64)>> {
        let mut out = vec![Vec::new(); self.rows];
        for &(r, c, v) in &self.entries {
            out[r].push((c, v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let m = SparseMatrixZ::from_triplets(2, 2, [(0, 0, 1), (0, 0, -1), (1, 0, 2), (1, 0, 3)]);
        assert_eq!(m.entries(), &[(1, 0, 5)]);
        assert_eq!(m.get(0, 0), 0);
    }

    #[test]
    fn product() {
        let a = SparseMatrixZ::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = SparseMatrixZ::from_dense(&[vec![1, -2], vec![0, 1]]);
        assert_eq!(a.mul(&b), SparseMatrixZ::from_dense(&[vec![1, 0], vec![0, 1]]));
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 0], vec![2, 1]]);
    }
}
