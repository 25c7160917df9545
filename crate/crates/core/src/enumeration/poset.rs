use std::collections::BTreeMap;

use crate::canonical::{canonical_form, CanonicalKey, Isomorphism, Mode};
use crate::enumeration::Enumeration;
use crate::graph::{Contraction, StableGraph};

/// One edge contraction of a class representative, transported to the
/// canonical representative of the target class.
#[derive(Clone, Debug)]
pub struct ContractionTerm {
    /// Index of the contracted edge in the source representative.
    pub edge: usize,
    pub target: CanonicalKey,
    /// `(-1)^edge` times the orientation sign of the transport.
    pub sign: i32,
    pub contraction: Contraction,
    /// Isomorphism from the contracted graph to the target representative.
    pub transport: Isomorphism,
    pub target_graph: StableGraph,
}

/// Contracts every edge of `g` in turn.
pub fn contraction_terms(g: &StableGraph, mode: Mode) -> Vec<ContractionTerm> {
    (0..g.num_edges())
        .map(|t| {
            let contraction = g
                .contract_edge_with_map(t)
                .expect("contraction of a stable graph is stable");
            let form = canonical_form(&contraction.graph, mode);
            let s = form
                .relabeling
                .orientation_sign(&contraction.graph, &form.representative, mode);
            ContractionTerm {
                edge: t,
                target: form.key,
                sign: if t % 2 == 0 { s } else { -s },
                contraction,
                transport: form.relabeling,
                target_graph: form.representative,
            }
        })
        .collect()
}

/// Covering relations of the strata poset, by class index in an [`Enumeration`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataPoset {
    /// `(source, target) → number of edges of source contracting to target`.
    pub covers: BTreeMap<(usize, usize), usize>,
    pub num_nodes: usize,
}

impl StrataPoset {
    pub fn covers_of(&self, source: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.covers
            .range((source, 0)..(source + 1, 0))
            .map(|(&(_, t), &m)| (t, m))
    }

    /// Nodes that cover nothing.
    pub fn minimal_nodes(&self) -> Vec<usize> {
        (0..self.num_nodes)
            .filter(|&s| self.covers_of(s).next().is_none())
            .collect()
    }
}

pub fn strata_poset(e: &Enumeration) -> StrataPoset {
    let index = e.index();
    let mut covers = BTreeMap::new();
    for (i, c) in e.classes.iter().enumerate() {
        for term in contraction_terms(&c.graph, e.mode) {
            let j = index[&term.target];
            *covers.entry((i, j)).or_insert(0) += 1;
        }
    }
    StrataPoset {
        covers,
        num_nodes: e.classes.len(),
    }
}
