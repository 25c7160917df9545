//! Vertex decorations: for each `(g, n)` a graded space `D(g, n)` with an
//! action of `Σ_n` on legs, and co-composition maps along one edge.
//!
//! Leg conventions. `ρ(σ)` relabels leg `i` as leg `σ(i)`. The non-loop map
//! for `((g1,n1),(g2,n2))` goes `D(g1+g2, n1+n2) → D(g1,n1+1) ⊗ D(g2,n2+1)`:
//! source legs `0..n1` become the first factor's legs in order, the remaining
//! source legs become the second factor's legs, and each node is the last leg
//! of its factor. Only `(g1,n1) ≤ (g2,n2)` is stored; the other order is
//! derived by relabeling the source legs, swapping factors and applying the
//! Koszul sign. The loop map for `(g, n)` goes `D(g,n) → D(g-1,n+2)` with the
//! two nodes as the last two legs. Koszul signs use the parity of generator
//! weights.

mod io;
pub mod tensor;
mod validate;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;

pub use io::{load_decoration, parse_decoration, save_decoration, to_json, SCHEMA_VERSION};
pub use validate::{validate_decoration, ValidationReport, Violation};

/// `(genus, number of legs)`.
pub type GN = (u32, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub generators: Vec<Generator>,
    /// `s_i` for `i = 0..n-1`, swapping legs `i` and `i+1`.
    pub transpositions: Vec<QMatrix>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecorationSystem {
    pub name: String,
    pub max_genus: u32,
    pub max_legs: usize,
    pub max_weight: u32,
    pub blocks: BTreeMap<GN, Block>,
    pub nonloop: BTreeMap<(GN, GN), QMatrix>,
    /// Keyed by source `(g, n)`.
    pub loops: BTreeMap<GN, QMatrix>,
    /// Optional hair-forgetting maps `D(g,n) → D(g,n+1)`, keyed by source.
    pub forget: BTreeMap<GN, QMatrix>,
}

pub(crate) fn stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

impl DecorationSystem {
    pub fn in_range(&self, g: u32, n: usize) -> bool {
        g <= self.max_genus && n <= self.max_legs && stable(g, n)
    }

    /// All `(g, n)` the system must provide.
    pub fn required_blocks(&self) -> Vec<GN> {
        let mut out = Vec::new();
        for g in 0..=self.max_genus {
            for n in 0..=self.max_legs {
                if stable(g, n) {
                    out.push((g, n));
                }
            }
        }
        out
    }

    /// Keys of non-loop maps the system must provide, in stored order.
    pub fn required_nonloop(&self) -> Vec<(GN, GN)> {
        // factor blocks (g1, n1+1) and (g2, n2+1) must exist
        let factors: Vec<GN> = self
            .required_blocks()
            .into_iter()
            .filter(|&(_, m)| m >= 1)
            .map(|(g, m)| (g, m - 1))
            .collect();
        let mut out = Vec::new();
        for &a in &factors {
            for &b in &factors {
                if a <= b && self.in_range(a.0 + b.0, a.1 + b.1) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn required_loops(&self) -> Vec<GN> {
        self.required_blocks()
            .into_iter()
            .filter(|&(g, n)| g >= 1 && self.in_range(g - 1, n + 2))
            .collect()
    }

    pub fn block(&self, g: u32, n: usize) -> Result<&Block> {
        self.blocks
            .get(&(g, n))
            .ok_or_else(|| Error::Decoration(format!("no block for (g,n)=({g},{n}) in '{}'", self.name)))
    }

    pub fn dim(&self, g: u32, n: usize) -> Result<usize> {
        Ok(self.block(g, n)?.dim())
    }

    pub fn parity(&self, g: u32, n: usize, i: usize) -> Result<bool> {
        Ok(self.block(g, n)?.generators[i].weight % 2 == 1)
    }

    /// `ρ(σ)` on `D(g, n)` for a permutation `σ` of the legs.
    pub fn rho(&self, g: u32, n: usize, sigma: &[usize]) -> Result<QMatrix> {
        let b = self.block(g, n)?;
        assert_eq!(sigma.len(), n);
        // bubble sort σ to the identity: σ ∘ s_{j1} ∘ … ∘ s_{jk} = id
        let mut a = sigma.to_vec();
        let mut word = Vec::new();
        for end in (1..n).rev() {
            for j in 0..end {
                if a[j] > a[j + 1] {
                    a.swap(j, j + 1);
                    word.push(j);
                }
            }
        }
        // σ = s_{jk} ∘ … ∘ s_{j1}
        let mut m = QMatrix::identity(b.dim());
        for &j in &word {
            m = m.mul(&b.transpositions[j]);
        }
        Ok(m)
    }

    /// Non-loop co-composition for the ordered pair `(a, b)`.
    pub fn nonloop_map(&self, a: GN, b: GN) -> Result<QMatrix> {
        if a <= b {
            return self.nonloop.get(&(a, b)).cloned().ok_or_else(|| {
                Error::Decoration(format!("no non-loop map for {a:?},{b:?} in '{}'", self.name))
            });
        }
        let stored = self.nonloop_map(b, a)?;
        let (na, nb) = (a.1, b.1);
        // relabel source legs [a-legs, b-legs] as [b-legs, a-legs]
        let tau: Vec<usize> = (0..na + nb).map(|i| if i < na { i + nb } else { i - na }).collect();
        let relabel = self.rho(a.0 + b.0, na + nb, &tau)?;
        let swap = self.swap_matrix((b.0, nb + 1), (a.0, na + 1))?;
        Ok(swap.mul(&stored).mul(&relabel))
    }

    /// `x ⊗ y ↦ (-1)^{|x||y|} y ⊗ x` from `D(p) ⊗ D(q)` to `D(q) ⊗ D(p)`.
    pub fn swap_matrix(&self, p: GN, q: GN) -> Result<QMatrix> {
        let (dp, dq) = (self.dim(p.0, p.1)?, self.dim(q.0, q.1)?);
        let mut m = QMatrix::zeros(dq * dp, dp * dq);
        for i in 0..dp {
            for j in 0..dq {
                let odd = self.parity(p.0, p.1, i)? && self.parity(q.0, q.1, j)?;
                m.set(j * dp + i, i * dq + j, int(if odd { -1 } else { 1 }));
            }
        }
        Ok(m)
    }

    pub fn loop_map(&self, g: u32, n: usize) -> Result<&QMatrix> {
        self.loops
            .get(&(g, n))
            .ok_or_else(|| Error::Decoration(format!("no loop map for ({g},{n}) in '{}'", self.name)))
    }
}

pub(crate) fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// One weight-zero generator per `(g, n)`; all maps are `1`.
pub fn trivial_decoration(max_genus: u32, max_legs: usize) -> DecorationSystem {
    constant_decoration("trivial", max_genus, max_legs, 1, |_| QMatrix::identity(1), QMatrix::identity(1), QMatrix::identity(1))
}

/// Two weight-zero generators `e0, e1` per `(g, n)`; every `s_i` swaps them,
/// and with `u = e0 + e1` both co-compositions send each generator to
/// `u ⊗ u / 2`, respectively `u / 2`. The span of `e0 - e1` is killed by
/// every map, so all relations hold.
pub fn synthetic_decoration(max_genus: u32, max_legs: usize) -> DecorationSystem {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let swap = QMatrix::from_ints(&[&[0, 1], &[1, 0]]);
    let mut nonloop = QMatrix::zeros(4, 2);
    let mut lp = QMatrix::zeros(2, 2);
    for c in 0..2 {
        for r in 0..4 {
            nonloop.set(r, c, half.clone());
        }
        for r in 0..2 {
            lp.set(r, c, half.clone());
        }
    }
    constant_decoration("synthetic", max_genus, max_legs, 2, |_| swap.clone(), nonloop, lp)
}

fn constant_decoration(
    name: &str,
    max_genus: u32,
    max_legs: usize,
    dim: usize,
    transposition: impl Fn(usize) -> QMatrix,
    nonloop: QMatrix,
    lp: QMatrix,
) -> DecorationSystem {
    let mut ds = DecorationSystem {
        name: name.to_string(),
        max_genus,
        max_legs,
        max_weight: 0,
        blocks: BTreeMap::new(),
        nonloop: BTreeMap::new(),
        loops: BTreeMap::new(),
        forget: BTreeMap::new(),
    };
    for (g, n) in ds.required_blocks() {
        let generators = (0..dim)
            .map(|i| Generator {
                id: if dim == 1 { "1".to_string() } else { format!("e{i}") },
                weight: 0,
            })
            .collect();
        let transpositions = (0..n.saturating_sub(1)).map(&transposition).collect();
        ds.blocks.insert((g, n), Block { generators, transpositions });
    }
    for key in ds.required_nonloop() {
        ds.nonloop.insert(key, nonloop.clone());
    }
    for key in ds.required_loops() {
        ds.loops.insert(key, lp.clone());
    }
    for (g, n) in ds.required_blocks() {
        if ds.in_range(g, n + 1) {
            ds.forget.insert((g, n), QMatrix::identity(dim));
        }
    }
    ds
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_is_a_homomorphism() {
        let mut ds = trivial_decoration(0, 4);
        // give (0,4) a faithful-ish action: the sign character
        let b = ds.blocks.get_mut(&(0, 4)).unwrap();
        b.transpositions = vec![QMatrix::from_ints(&[&[-1]]); 3];
        let s = |p: &[usize]| ds.rho(0, 4, p).unwrap().get(0, 0).clone();
        assert_eq!(s(&[1, 2, 3, 0]), int(-1));
        assert_eq!(s(&[1, 0, 3, 2]), int(1));
        assert_eq!(s(&[0, 1, 2, 3]), int(1));
    }

    #[test]
    fn trivial_blocks() {
        let ds = trivial_decoration(2, 5);
        for (g, n) in ds.required_blocks() {
            assert_eq!(ds.dim(g, n).unwrap(), 1);
        }
        assert!(ds.nonloop.contains_key(&((0, 2), (1, 1))));
        assert!(ds.loops.contains_key(&(1, 3)));
        assert_eq!(ds.nonloop_map((1, 1), (0, 2)).unwrap(), QMatrix::identity(1));
    }
}
