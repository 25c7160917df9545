//! Hair insertion `χ` and the total complex of `δ` and `χ`.
//!
//! `χ` inserts a hair at every vertex, the new hair taking the last hair
//! slot before transport to the canonical representative. With this
//! convention `χ` commutes with the contraction differential `δ`, so on the block with
//! `E` edges the total differential is `δ + (-1)^E χ`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::canonical::{canonical_form, CanonicalKey, Mode};
use crate::enumeration::{enumerate_graphs, max_edge_count, Enumeration, GraphClass};
use crate::error::{Error, Result};
use crate::linalg::{GradedComplex, SparseMatrixZ};

use super::{contraction_matrix, BasisLabel, ChainComplexQ, Family};

/// Matrix of `χ` from hairy classes with `n` hairs to classes with `n+1`
/// hairs, both with the same edge count.
///
/// The coefficient of `Γ''` in `χ Γ` counts hairs `h` of `Γ''` with
/// `Γ'' ∖ h ≅ Γ`, each with the sign of moving `h` to the last hair slot
/// times the transport sign. This is the vertex-insertion sum written in the
/// same class normalization as the contraction differential (the two differ
/// by conjugation with `diag |Aut Γ|`).
pub fn chi_matrix(src: &[&GraphClass], dst: &[&GraphClass]) -> SparseMatrixZ {
    let index: HashMap<&CanonicalKey, usize> = src.iter().enumerate().map(|(i, c)| (&c.key, i)).collect();
    let triplets: Vec<(usize, usize, i64)> = dst
        .par_iter()
        .enumerate()
        .flat_map_iter(|(row, c)| {
            let mut out = Vec::new();
            let hairs = c.graph.hairs();
            let last = hairs.len() - 1;
            for (p, &h) in hairs.iter().enumerate() {
                let Ok(smaller) = c.graph.forget_hair(h) else { continue };
                let form = canonical_form(&smaller, Mode::Hairy);
                if let Some(&col) = index.get(&form.key) {
                    let s = form.relabeling.orientation_sign(&smaller, &form.representative, Mode::Hairy);
                    let s = if (last - p) % 2 == 0 { s } else { -s };
                    out.push((row, col, s as i64));
                }
            }
            out
        })
        .collect();
    SparseMatrixZ::from_triplets(dst.len(), src.len(), triplets)
}

/// `χ` from `(g, n)` to `(g, n+1)`, one matrix per edge count.
pub fn build_chi(g: u32, n: usize, family: Family) -> Result<Vec<SparseMatrixZ>> {
    let top = max_edge_count(g, n);
    let a = enumerate_graphs(g, n, Mode::Hairy, None)?;
    let b = enumerate_graphs(g, n + 1, Mode::Hairy, Some(top))?;
    Ok((0..=top)
        .map(|k| chi_matrix(&level(&a, k, family), &level(&b, k, family)))
        .collect())
}

pub(crate) fn level(e: &Enumeration, k: usize, family: Family) -> Vec<&GraphClass> {
    e.with_edges(k).iter().filter(|c| c.survives() && family.admits(c)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TotalOptions {
    pub family: Family,
    pub include_delta: bool,
    pub include_chi: bool,
}

/// Total complex of `δ + (-1)^E χ` over blocks `(E, n)` with `n ≥ 1` hairs
/// and `E + n ≤ max_degree`, degree `E + n`. The top degree is flagged as
/// truncated. `enumerate` supplies the hairy enumerations.
pub fn total_complex(
    g: u32,
    max_degree: usize,
    opts: TotalOptions,
    kind: &str,
    enumerate: &(dyn Fn(u32, usize, Mode, Option<usize>) -> Result<Enumeration> + Sync),
) -> Result<ChainComplexQ> {
    if max_degree < 1 {
        return Err(Error::Parameter("max degree must be at least 1".into()));
    }
    let n_min = if g == 0 { 3 } else { 1 };
    let hair_counts: Vec<usize> = (n_min..=max_degree).collect();
    let enums: Vec<Enumeration> = hair_counts
        .iter()
        .map(|&n| enumerate(g, n, Mode::Hairy, Some(max_degree - n)))
        .collect::<Result<_>>()?;
    let enum_of = |n: usize| n.checked_sub(n_min).and_then(|i| enums.get(i));
    let block = |e_count: usize, n: usize| -> Vec<&GraphClass> {
        match enum_of(n) {
            Some(e) if e_count + n <= max_degree => level(e, e_count, opts.family),
            _ => Vec::new(),
        }
    };

    let degrees: Vec<usize> = (n_min..=max_degree).collect();
    // per degree: blocks (E, n) in increasing n, with offsets
    let mut layout: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    let mut basis = Vec::new();
    let mut dims = Vec::new();
    for &t in &degrees {
        let mut off = 0;
        let mut blocks = Vec::new();
        let mut labels = Vec::new();
        for n in n_min..=t {
            let b = block(t - n, n);
            blocks.push((t - n, n, off));
            off += b.len();
            labels.extend(b.iter().map(|c| BasisLabel::of(c)));
        }
        layout.push(blocks);
        basis.push(labels);
        dims.push(off);
    }

    let mut differentials = Vec::new();
    for i in 0..degrees.len().saturating_sub(1) {
        let mut trip = Vec::new();
        let target_off = |e_count: usize, n: usize| {
            layout[i + 1]
                .iter()
                .find(|&&(e2, n2, _)| e2 == e_count && n2 == n)
                .map(|&(_, _, o)| o)
        };
        for &(e_count, n, off) in &layout[i] {
            let src = block(e_count, n);
            if src.is_empty() {
                continue;
            }
            if opts.include_delta {
                let dst = block(e_count + 1, n);
                let m = contraction_matrix(&src, &dst, Mode::Hairy);
                let o = target_off(e_count + 1, n).expect("delta target block");
                trip.extend(m.entries().iter().map(|&(r, c, v)| (o + r, off + c, v)));
            }
            if opts.include_chi {
                let dst = block(e_count, n + 1);
                let m = chi_matrix(&src, &dst);
                let o = target_off(e_count, n + 1).expect("chi target block");
                let s = if e_count % 2 == 0 { 1 } else { -1 };
                trip.extend(m.entries().iter().map(|&(r, c, v)| (o + r, off + c, s * v)));
            }
        }
        differentials.push(SparseMatrixZ::from_triplets(dims[i + 1], dims[i], trip));
    }
    let mut complex = GradedComplex::new(n_min as i64, dims, differentials);
    complex.truncated.push(max_degree as i64);
    Ok(ChainComplexQ {
        kind: kind.to_string(),
        g,
        n: 0,
        mode: Mode::Hairy,
        basis,
        complex,
    })
}

/// `δ + χ` total complex over the reduced hairy family.
pub fn build_total_delta_chi(g: u32, max_degree: usize) -> Result<ChainComplexQ> {
    let opts = TotalOptions {
        family: Family::Reduced,
        include_delta: true,
        include_chi: true,
    };
    total_complex(g, max_degree, opts, "total", &enumerate_graphs)
}

/// Same blocks as the total complex with `χ` as the only differential.
pub fn build_chi_complex(g: u32, max_degree: usize) -> Result<ChainComplexQ> {
    let opts = TotalOptions {
        family: Family::Reduced,
        include_delta: false,
        include_chi: true,
    };
    total_complex(g, max_degree, opts, "chi", &enumerate_graphs)
}
