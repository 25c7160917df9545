//! Graph complexes spanned by oriented isomorphism classes.
//!
//! The basis in each degree is the list of classes whose orientation line is
//! not reversed by an automorphism. Each basis element is oriented by the edge
//! order (and in hairy mode the hair order) of its canonical representative.
//! The differential sends a class with `k` edges to the classes with `k+1`
//! edges that contract onto it: the coefficient of `Γ'` in `d Γ` is the sum
//! over edges `e` of `Γ'` with `Γ'/e ≅ Γ` of `(-1)^{pos(e)}` times the sign of
//! the transport isomorphism `Γ'/e → Γ`.

mod antiinvariants;
mod decorated;
mod gk;
mod total;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{CanonicalKey, Mode};
use crate::enumeration::{contraction_terms, GraphClass};
use crate::linalg::{GradedComplex, SparseMatrixZ};

pub use antiinvariants::{antiinvariants_dim, hairy_surviving_count, labeled_antiinvariant_count, AntiinvariantCount};
pub use decorated::{build_decorated_gk, build_decorated_gk_from, legs_needed, DecoratedBasisInfo};
pub use gk::{build_hairy_gk, build_reduced_hairy_gc, build_weight0_gk, graph_complex};
pub use total::{build_chi, build_chi_complex, build_total_delta_chi, chi_matrix, total_complex, TotalOptions};

/// Which graphs span the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// All stable graphs.
    Full,
    /// Loopless graphs with all weights zero.
    Reduced,
}

impl Family {
    pub fn admits(self, c: &GraphClass) -> bool {
        match self {
            Family::Full => true,
            Family::Reduced => c.is_loopless_weight_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisLabel {
    pub key: String,
    pub edges: usize,
    pub hairs: usize,
}

impl BasisLabel {
    fn of(c: &GraphClass) -> Self {
        BasisLabel {
            key: c.key.to_hex(),
            edges: c.num_edges(),
            hairs: c.num_hairs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplexQ {
    pub kind: String,
    pub g: u32,
    pub n: usize,
    pub mode: Mode,
    /// Basis labels per degree, aligned with `complex.degrees`.
    pub basis: Vec<Vec<BasisLabel>>,
    pub complex: GradedComplex,
}

/// Matrix of the differential from `src` (k edges) to `dst` (k+1 edges).
pub(crate) fn contraction_matrix(src: &[&GraphClass], dst: &[&GraphClass], mode: Mode) -> SparseMatrixZ {
    let index: HashMap<&CanonicalKey, usize> = src.iter().enumerate().map(|(i, c)| (&c.key, i)).collect();
    let triplets: Vec<(usize, usize, i64)> = dst
        .par_iter()
        .enumerate()
        .flat_map_iter(|(row, c)| {
            let mut out = Vec::new();
            for term in contraction_terms(&c.graph, mode) {
                if let Some(&col) = index.get(&term.target) {
                    debug_assert_eq!(term.target_graph, src[col].graph);
                    out.push((row, col, term.sign as i64));
                }
            }
            out
        })
        .collect();
    SparseMatrixZ::from_triplets(dst.len(), src.len(), triplets)
}
