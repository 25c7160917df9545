//! GK complexes with vertex decorations. The space attached to a graph `Γ`
//! is `(T_k(Γ) ⊗ det E(Γ))^{Aut Γ}`, where `T_k(Γ)` is the weight-`k` part of
//! `⊗_v D(w(v), n_v)`; the differential pulls decorations back along the
//! co-composition maps of the decoration system.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{CanonicalKey, Mode};
use crate::decorations::tensor::{differential_block, invariant_basis, InvariantBasis};
use crate::decorations::{validate_decoration, DecorationSystem};
use crate::enumeration::{contraction_terms, enumerate_graphs, max_edge_count, ContractionTerm, Enumeration, GraphClass};
use crate::error::{Error, Result};
use crate::linalg::{GradedComplex, SparseMatrixZ};

use super::{BasisLabel, ChainComplexQ};

/// Sizes of one degree of a decorated complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedBasisInfo {
    pub degree: i64,
    pub classes: usize,
    /// `Σ_Γ dim T_k(Γ)` over all classes, before taking invariants.
    pub pre_invariant_dim: usize,
    pub invariant_dim: usize,
}

/// Largest vertex valence among stable graphs of type `(g, n)`.
pub fn legs_needed(g: u32, n: usize) -> usize {
    n + 2 * g as usize
}

/// Decorated GK complex of `(g, n)` in internal weight `k`. The decoration
/// is validated first.
pub fn build_decorated_gk(g: u32, n: usize, ds: &DecorationSystem, k: u32) -> Result<ChainComplexQ> {
    let report = validate_decoration(ds);
    if let Some(v) = report.violations.first() {
        return Err(Error::Decoration(format!(
            "'{}' fails validation ({} violations); first: {} at {}: {}",
            ds.name,
            report.violations.len(),
            v.check,
            v.location,
            v.detail
        )));
    }
    let e = enumerate_graphs(g, n, Mode::Labeled, None)?;
    Ok(build_decorated_gk_from(&e, ds, k)?.0)
}

struct Level<'a> {
    classes: Vec<(&'a GraphClass, InvariantBasis)>,
    pre_invariant_dim: usize,
    num_classes: usize,
}

impl Level<'_> {
    fn dim(&self) -> usize {
        self.classes.iter().map(|(_, b)| b.dim()).sum()
    }
}

/// Like [`build_decorated_gk`] over an existing labeled enumeration, without
/// the up-front validation.
pub fn build_decorated_gk_from(
    e: &Enumeration,
    ds: &DecorationSystem,
    k: u32,
) -> Result<(ChainComplexQ, Vec<DecoratedBasisInfo>)> {
    if e.mode != Mode::Labeled {
        return Err(Error::Parameter("decorated complexes use labeled graphs".into()));
    }
    let top = e.top_edges();
    let levels: Vec<Level> = (0..=top)
        .map(|edges| {
            let all = e.with_edges(edges);
            let bases: Vec<InvariantBasis> = all
                .par_iter()
                .map(|c| invariant_basis(ds, &c.graph, &c.aut, k))
                .collect::<Result<_>>()?;
            let pre_invariant_dim = bases.iter().map(|b| b.space.dim()).sum();
            let classes = all.iter().zip(bases).filter(|(_, b)| b.dim() > 0).collect();
            Ok(Level {
                classes,
                pre_invariant_dim,
                num_classes: all.len(),
            })
        })
        .collect::<Result<_>>()?;
    let rational: Vec<Vec<(usize, usize, BigRational)>> = (0..top)
        .map(|i| level_differential(ds, &levels[i], &levels[i + 1], k))
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = levels.iter().map(Level::dim).collect();
    let differentials = integral_form(&dims, rational)?;
    let mut complex = GradedComplex::new(0, dims, differentials);
    if e.max_edges.is_some_and(|m| m < max_edge_count(e.g, e.n)) {
        complex.truncated.push(top as i64);
    }
    let basis = levels
        .iter()
        .map(|l| {
            l.classes
                .iter()
                .flat_map(|(c, b)| {
                    let base = BasisLabel::of(c);
                    (0..b.dim()).map(move |j| BasisLabel {
                        key: if j == 0 { base.key.clone() } else { format!("{}/{j}", base.key) },
                        ..base.clone()
                    })
                })
                .collect()
        })
        .collect();
    let info = levels
        .iter()
        .enumerate()
        .map(|(i, l)| DecoratedBasisInfo {
            degree: i as i64,
            classes: l.num_classes,
            pre_invariant_dim: l.pre_invariant_dim,
            invariant_dim: l.dim(),
        })
        .collect();
    let chain = ChainComplexQ {
        kind: format!("decorated:{}:w{k}", ds.name),
        g: e.g,
        n: e.n,
        mode: Mode::Labeled,
        basis,
        complex,
    };
    Ok((chain, info))
}

/// Rational matrix entries of the differential between two levels, in the
/// invariant bases.
fn level_differential(ds: &DecorationSystem, src: &Level, dst: &Level, k: u32) -> Result<Vec<(usize, usize, BigRational)>> {
    let index: HashMap<&CanonicalKey, usize> = src.classes.iter().enumerate().map(|(i, (c, _))| (&c.key, i)).collect();
    let col_offset: Vec<usize> = offsets(src);
    let row_offset: Vec<usize> = offsets(dst);
    let blocks: Vec<Vec<(usize, usize, BigRational)>> = dst
        .classes
        .par_iter()
        .enumerate()
        .map(|(ri, (target, tb))| {
            let mut by_source: HashMap<usize, Vec<ContractionTerm>> = HashMap::new();
            for term in contraction_terms(&target.graph, Mode::Labeled) {
                if let Some(&si) = index.get(&term.target) {
                    by_source.entry(si).or_default().push(term);
                }
            }
            let mut sources: Vec<_> = by_source.into_iter().collect();
            sources.sort_by_key(|(si, _)| *si);
            let mut out = Vec::new();
            for (si, terms) in sources {
                let (source, sb) = &src.classes[si];
                let m = differential_block(ds, &source.graph, &sb.space, &target.graph, &tb.space, &terms, k)?;
                for (j, v) in sb.vectors.iter().enumerate() {
                    let y: Vec<BigRational> = (0..m.rows())
                        .map(|r| (0..m.cols()).map(|c| m.get(r, c) * &v[c]).sum())
                        .collect();
                    for (i, x) in tb.coordinates(&y)?.into_iter().enumerate() {
                        if !x.is_zero() {
                            out.push((row_offset[ri] + i, col_offset[si] + j, x));
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

fn offsets(l: &Level) -> Vec<usize> {
    let mut acc = 0;
    l.classes
        .iter()
        .map(|(_, b)| {
            let o = acc;
            acc += b.dim();
            o
        })
        .collect()
}

/// Rescales basis vectors degree by degree so that every differential has
/// integer entries. Vector `r` of the next degree is divided by the lcm of
/// the denominators in its row, which leaves cohomology unchanged.
fn integral_form(dims: &[usize], rational: Vec<Vec<(usize, usize, BigRational)>>) -> Result<Vec<SparseMatrixZ>> {
    let mut scale: Vec<BigRational> = vec![BigRational::one(); dims[0]];
    let mut out = Vec::with_capacity(rational.len());
    for (i, entries) in rational.into_iter().enumerate() {
        let scaled: Vec<(usize, usize, BigRational)> = entries.into_iter().map(|(r, c, x)| (r, c, x * &scale[c])).collect();
        let mut lcm = vec![BigInt::one(); dims[i + 1]];
        for (r, _, x) in &scaled {
            lcm[*r] = lcm[*r].lcm(x.denom());
        }
        let mut triplets = Vec::with_capacity(scaled.len());
        for (r, c, x) in scaled {
            let v = x * BigRational::from_integer(lcm[r].clone());
            debug_assert!(v.is_integer());
            let v = v
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Consistency("decorated differential entry exceeds 64 bits".into()))?;
            triplets.push((r, c, v));
        }
        out.push(SparseMatrixZ::from_triplets(dims[i + 1], dims[i], triplets));
        scale = lcm.into_iter().map(|l| BigRational::new(BigInt::one(), l)).collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::build_weight0_gk;
    use crate::decorations::tensor::transport;
    use crate::decorations::{synthetic_decoration, trivial_decoration};
    use crate::canonical::Isomorphism;

    #[test]
    fn trivial_decoration_reproduces_weight_zero() {
        for (g, n) in [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1)] {
            let ds = trivial_decoration(g, legs_needed(g, n));
            let a = build_decorated_gk(g, n, &ds, 0).unwrap();
            let b = build_weight0_gk(g, n).unwrap();
            assert_eq!(a.complex, b.complex, "({g},{n})");
        }
    }

    #[test]
    fn synthetic_counts_and_square() {
        for (g, n) in [(0, 4), (1, 1), (1, 2), (2, 0), (2, 1)] {
            let ds = synthetic_decoration(g, legs_needed(g, n));
            let e = enumerate_graphs(g, n, Mode::Labeled, None).unwrap();
            let (c, info) = build_decorated_gk_from(&e, &ds, 0).unwrap();
            c.complex.check_d2().unwrap();
            for (edges, row) in info.iter().enumerate() {
                let classes = e.with_edges(edges);
                let expected: usize = classes.iter().map(|x| 1usize << x.graph.num_vertices()).sum();
                assert_eq!(row.pre_invariant_dim, expected);
                // invariant dimension = averaged character
                let mut chi = BigRational::zero();
                for x in classes {
                    let els = x.aut.elements(x.graph.num_half_edges());
                    let mut s = BigRational::zero();
                    for p in &els {
                        let iso = Isomorphism::from_half_edge_perm(&x.graph, p.clone());
                        let t = transport(&ds, &x.graph, &x.graph, &iso, 0).unwrap();
                        let sg = iso.orientation_sign(&x.graph, &x.graph, Mode::Labeled);
                        s += t.trace() * BigRational::from_integer(sg.into());
                    }
                    chi += s / BigRational::from_integer((els.len() as i64).into());
                }
                assert_eq!(chi, BigRational::from_integer(row.invariant_dim.into()));
            }
            // weight one is empty for this decoration
            let (c1, _) = build_decorated_gk_from(&e, &ds, 1).unwrap();
            assert!(c1.complex.dims.iter().all(|&d| d == 0));
        }
    }

    /// `1` in weight 0 and a primitive odd class `a` in weight 1 at every
    /// vertex; weight `k` then counts vertex sets of size `k` with Koszul signs.
    fn primitive_odd(max_genus: u32, max_legs: usize) -> DecorationSystem {
        use crate::decorations::{Block, Generator};
        use crate::linalg::QMatrix;
        let mut ds = trivial_decoration(max_genus, max_legs);
        ds.name = "odd".into();
        ds.max_weight = 1;
        for (&(_, n), b) in ds.blocks.iter_mut() {
            *b = Block {
                generators: vec![
                    Generator { id: "1".into(), weight: 0 },
                    Generator { id: "a".into(), weight: 1 },
                ],
                transpositions: vec![QMatrix::identity(2); n.saturating_sub(1)],
            };
        }
        let delta = QMatrix::from_ints(&[&[1, 0], &[0, 1], &[0, 1], &[0, 0]]);
        for m in ds.nonloop.values_mut() {
            *m = delta.clone();
        }
        for m in ds.loops.values_mut() {
            *m = QMatrix::identity(2);
        }
        for m in ds.forget.values_mut() {
            *m = QMatrix::identity(2);
        }
        ds
    }

    #[test]
    fn odd_decoration_squares_to_zero() {
        for (g, n) in [(0, 5), (1, 2), (1, 3), (2, 1)] {
            let ds = primitive_odd(g, legs_needed(g, n));
            let r = validate_decoration(&ds);
            assert!(r.is_clean(), "{:?}", r.violations.first());
            let e = enumerate_graphs(g, n, Mode::Labeled, None).unwrap();
            for k in 0..=3 {
                let (c, info) = build_decorated_gk_from(&e, &ds, k).unwrap();
                c.complex.check_d2().unwrap();
                for (edges, row) in info.iter().enumerate() {
                    let expected: usize = e
                        .with_edges(edges)
                        .iter()
                        .map(|x| binomial(x.graph.num_vertices(), k as usize))
                        .sum();
                    assert_eq!(row.pre_invariant_dim, expected);
                }
                crate::linalg::betti_table(&c.complex, crate::linalg::RankPolicy::Certified).unwrap();
            }
        }
    }

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn invalid_decoration_is_rejected() {
        let mut ds = trivial_decoration(0, 6);
        ds.nonloop.get_mut(&((0, 2), (0, 2))).unwrap().set(0, 0, crate::decorations::int(-1));
        assert!(matches!(build_decorated_gk(0, 6, &ds, 0), Err(Error::Decoration(_))));
    }

    #[test]
    fn missing_block_is_an_error() {
        let ds = trivial_decoration(1, 2);
        let e = enumerate_graphs(1, 2, Mode::Labeled, None).unwrap();
        assert!(matches!(build_decorated_gk_from(&e, &ds, 0), Err(Error::Decoration(_))));
    }
}
