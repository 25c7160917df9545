//! Exact linear algebra over Q for sparse integer matrices, and cohomology
//! of finite cochain complexes.

mod dense_q;
mod exact;
mod modular;
mod sparse;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dense_q::QMatrix;
pub use exact::rank_exact;
pub use modular::{is_prime, primes, rank_mod_p};
pub use sparse::SparseMatrixZ;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "policy")]
pub enum RankPolicy {
    /// Exact elimination for every matrix.
    Certified,
    /// Exact below `threshold` stored entries, modular (two primes) above;
    /// disagreeing primes fall back to exact.
    Auto { threshold: usize },
    /// Two primes only; results are flagged probabilistic.
    Modular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub certified: bool,
}

pub fn rank(m: &SparseMatrixZ, policy: RankPolicy) -> RankResult {
    if m.is_zero() {
        return RankResult { rank: 0, certified: true };
    }
    let exact = |m| RankResult {
        rank: rank_exact(m),
        certified: true,
    };
    match policy {
        RankPolicy::Certified => exact(m),
        RankPolicy::Auto { threshold } if m.nnz() <= threshold => exact(m),
        RankPolicy::Auto { .. } | RankPolicy::Modular => {
            let ps = primes(2);
            let (a, b) = rayon::join(|| rank_mod_p(m, ps[0]), || rank_mod_p(m, ps[1]));
            if a == b {
                RankResult { rank: a, certified: false }
            } else {
                log::info!("modular ranks disagree ({a} vs {b}); certifying");
                exact(m)
            }
        }
    }
}

/// A bounded cochain complex `C^{d_0} → C^{d_0+1} → …` of finite-dimensional
/// spaces. `differentials[i]` maps degree `degrees[i]` to `degrees[i] + 1`
/// and has `dims[i+1]` rows and `dims[i]` columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedComplex {
    pub degrees: Vec<i64>,
    pub dims: Vec<usize>,
    pub differentials: Vec<SparseMatrixZ>,
    /// Degrees whose cohomology is unreliable because of truncation.
    pub truncated: Vec<i64>,
}

impl GradedComplex {
    pub fn new(first_degree: i64, dims: Vec<usize>, differentials: Vec<SparseMatrixZ>) -> Self {
        let degrees = (0..dims.len() as i64).map(|i| first_degree + i).collect();
        let c = GradedComplex {
            degrees,
            dims,
            differentials,
            truncated: Vec::new(),
        };
        c.assert_shapes();
        c
    }

    fn assert_shapes(&self) {
        assert_eq!(self.differentials.len() + 1, self.dims.len().max(1));
        for (i, d) in self.differentials.iter().enumerate() {
            assert_eq!((d.rows(), d.cols()), (self.dims[i + 1], self.dims[i]), "shape of d in degree {}", self.degrees[i]);
        }
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.position(degree).map_or(0, |i| self.dims[i])
    }

    fn position(&self, degree: i64) -> Option<usize> {
        self.degrees.iter().position(|&d| d == degree)
    }

    /// Differential out of `degree`, if stored.
    pub fn differential(&self, degree: i64) -> Option<&SparseMatrixZ> {
        self.position(degree).and_then(|i| self.differentials.get(i))
    }

    /// Degree in which `d_{k+1} d_k` is nonzero, if any.
    pub fn d2_failure(&self) -> Option<i64> {
        self.differentials
            .windows(2)
            .enumerate()
            .find(|(_, w)| !w[1].mul(&w[0]).is_zero())
            .map(|(i, _)| self.degrees[i])
    }

    pub fn check_d2(&self) -> Result<()> {
        match self.d2_failure() {
            None => Ok(()),
            Some(k) => Err(Error::Consistency(format!("d∘d is nonzero starting in degree {k}"))),
        }
    }

    pub fn euler_from_dims(&self) -> i64 {
        euler(&self.degrees, &self.dims)
    }
}

fn euler(degrees: &[i64], values: &[usize]) -> i64 {
    degrees
        .iter()
        .zip(values)
        .map(|(&k, &v)| if k.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub degree: i64,
    pub dim: usize,
    /// Rank of the differential leaving this degree.
    pub rank: usize,
    pub betti: usize,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    pub rows: Vec<DegreeRow>,
    pub euler_from_dims: i64,
    pub euler_from_betti: i64,
    /// False when some rank came from modular arithmetic only.
    pub certified: bool,
}

impl BettiReport {
    pub fn betti(&self, degree: i64) -> usize {
        self.rows.iter().find(|r| r.degree == degree).map_or(0, |r| r.betti)
    }

    /// `(degree, betti)` for nonzero Betti numbers in reliable degrees.
    pub fn nonzero(&self) -> Vec<(i64, usize)> {
        self.rows
            .iter()
            .filter(|r| r.betti != 0 && !r.truncated)
            .map(|r| (r.degree, r.betti))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.nonzero().is_empty()
    }
}

/// Cohomology of `c`. Fails if `d∘d ≠ 0` or the two Euler characteristics differ.
pub fn betti_table(c: &GradedComplex, policy: RankPolicy) -> Result<BettiReport> {
    c.check_d2()?;
    let ranks: Vec<RankResult> = c.differentials.par_iter().map(|d| rank(d, policy)).collect();
    let mut rows = Vec::with_capacity(c.dims.len());
    for (i, (&degree, &dim)) in c.degrees.iter().zip(&c.dims).enumerate() {
        let out = ranks.get(i).map_or(0, |r| r.rank);
        let inc = if i > 0 { ranks[i - 1].rank } else { 0 };
        let betti = dim
            .checked_sub(out + inc)
            .ok_or_else(|| Error::Consistency(format!("ranks exceed dimension in degree {degree}")))?;
        rows.push(DegreeRow {
            degree,
            dim,
            rank: out,
            betti,
            truncated: c.truncated.contains(&degree),
        });
    }
    let betti: Vec<usize> = rows.iter().map(|r| r.betti).collect();
    let report = BettiReport {
        euler_from_dims: c.euler_from_dims(),
        euler_from_betti: euler(&c.degrees, &betti),
        certified: ranks.iter().all(|r| r.certified),
        rows,
    };
    if report.euler_from_dims != report.euler_from_betti {
        return Err(Error::Consistency(format!(
            "Euler characteristic mismatch: {} from dimensions, {} from cohomology",
            report.euler_from_dims, report.euler_from_betti
        )));
    }
    Ok(report)
}

/// Alternating sum of dimensions.
pub fn euler_characteristic(c: &GradedComplex) -> i64 {
    c.euler_from_dims()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn acyclic_pair() {
        let c = GradedComplex::new(0, vec![1, 1], vec![SparseMatrixZ::from_dense(&[vec![-1]])]);
        let r = betti_table(&c, RankPolicy::Certified).unwrap();
        assert!(r.is_acyclic());
        assert_eq!((r.euler_from_dims, r.euler_from_betti), (0, 0));
    }

    #[test]
    fn nonzero_square_is_fatal() {
        let d = SparseMatrixZ::identity(1);
        let c = GradedComplex::new(0, vec![1, 1, 1], vec![d.clone(), d]);
        assert!(matches!(betti_table(&c, RankPolicy::Certified), Err(Error::Consistency(_))));
    }

    #[test]
    fn policies_agree_on_small_input() {
        let m = SparseMatrixZ::from_dense(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, -1]]);
        for p in [RankPolicy::Certified, RankPolicy::Modular, RankPolicy::Auto { threshold: 2 }] {
            assert_eq!(rank(&m, p).rank, 2);
        }
        assert!(!rank(&m, RankPolicy::Modular).certified);
    }

    fn matrix() -> impl Strategy<Value = SparseMatrixZ> {
        (1usize..8, 1usize..8).prop_flat_map(|(r, c)| {
            proptest::collection::vec((0..r, 0..c, -3i64..4), 0..20)
                .prop_map(move |t| SparseMatrixZ::from_triplets(r, c, t))
        })
    }

    proptest! {
        #[test]
        fn rank_of_transpose(m in matrix()) {
            prop_assert_eq!(rank_exact(&m), rank_exact(&m.transpose()));
        }

        #[test]
        fn modular_rank_bounded_by_exact(m in matrix()) {
            let r = rank_exact(&m);
            prop_assert!(rank_mod_p(&m, 3) <= r);
            prop_assert_eq!(rank_mod_p(&m, primes(1)[0]), r);
        }

        #[test]
        fn rank_nullity_of_products(a in matrix(), b in matrix()) {
            if a.cols() == b.rows() {
                let ab = a.mul(&b);
                prop_assert!(rank_exact(&ab) <= rank_exact(&a).min(rank_exact(&b)));
            }
        }
    }
}
