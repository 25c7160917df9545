//! Isomorphism classes of stable graphs of fixed genus and hair count.
//!
//! Classes are generated from the corolla `•_{g,n}` by inverse contractions
//! (splitting a vertex along a new edge, or trading one unit of weight for a
//! loop) and deduplicated by canonical key. Every stable graph with an edge
//! contracts to a stable graph with one edge fewer, so the closure is complete.

mod cache;
mod poset;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::canonical::{analyze, AutData, CanonicalKey, Mode};
use crate::error::{check_stable_range, Result};
use crate::graph::StableGraph;

pub use cache::{cache_file_name, enumerate_cached, load_cache, save_cache, CACHE_ENV};
pub use poset::{contraction_terms, strata_poset, ContractionTerm, StrataPoset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphClass {
    pub key: CanonicalKey,
    /// Canonical ordered representative.
    pub graph: StableGraph,
    /// Automorphisms of `graph`.
    pub aut: AutData,
}

impl GraphClass {
    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn num_hairs(&self) -> usize {
        self.graph.num_hairs()
    }

    pub fn survives(&self) -> bool {
        self.aut.survives()
    }

    pub fn is_loopless_weight_zero(&self) -> bool {
        !self.graph.has_loops() && !self.graph.has_positive_weight()
    }
}

/// All classes for `(g, n, mode)`, sorted by `(edge count, key bytes)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub g: u32,
    pub n: usize,
    pub mode: Mode,
    pub max_edges: Option<usize>,
    pub classes: Vec<GraphClass>,
}

impl Enumeration {
    /// Classes with exactly `k` edges.
    pub fn with_edges(&self, k: usize) -> &[GraphClass] {
        let lo = self.classes.partition_point(|c| c.num_edges() < k);
        let hi = self.classes.partition_point(|c| c.num_edges() <= k);
        &self.classes[lo..hi]
    }

    pub fn top_edges(&self) -> usize {
        self.classes.last().map_or(0, |c| c.num_edges())
    }

    pub fn counts_by_edges(&self) -> Vec<usize> {
        (0..=self.top_edges()).map(|k| self.with_edges(k).len()).collect()
    }

    pub fn index(&self) -> HashMap<&CanonicalKey, usize> {
        self.classes.iter().enumerate().map(|(i, c)| (&c.key, i)).collect()
    }
}

/// Largest possible edge count: all vertices trivalent of weight zero.
pub fn max_edge_count(g: u32, n: usize) -> usize {
    (3 * g as usize + n).saturating_sub(3)
}

pub fn enumerate_graphs(g: u32, n: usize, mode: Mode, max_edges: Option<usize>) -> Result<Enumeration> {
    check_stable_range(g, n)?;
    let top = max_edge_count(g, n).min(max_edges.unwrap_or(usize::MAX));
    let root = StableGraph::corolla(g, n, mode == Mode::Labeled);
    let (form, aut) = analyze(&root, mode);
    let mut classes = vec![GraphClass {
        key: form.key,
        aut: aut.conjugate(&form.relabeling),
        graph: form.representative,
    }];
    let mut frontier: Vec<StableGraph> = vec![classes[0].graph.clone()];
    for k in 1..=top {
        let found: HashMap<CanonicalKey, (StableGraph, AutData)> = frontier
            .par_iter()
            .fold(HashMap::new, |mut acc, parent| {
                for child in inverse_contractions(parent) {
                    let (form, aut) = analyze(&child, mode);
                    acc.entry(form.key)
                        .or_insert_with(|| (form.representative, aut.conjugate(&form.relabeling)));
                }
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                if a.len() < b.len() {
                    return merge(b, a);
                }
                for (k, v) in b {
                    a.entry(k).or_insert(v);
                }
                a
            });
        let mut level: Vec<GraphClass> = found
            .into_iter()
            .map(|(key, (graph, aut))| GraphClass { key, graph, aut })
            .collect();
        level.sort_by(|a, b| a.key.cmp(&b.key));
        log::debug!("(g,n)=({g},{n}) {mode}: {} classes with {k} edges", level.len());
        frontier = level.iter().map(|c| c.graph.clone()).collect();
        classes.extend(level);
    }
    Ok(Enumeration {
        g,
        n,
        mode,
        max_edges,
        classes,
    })
}

fn merge<K: std::hash::Hash + Eq, V>(mut a: HashMap<K, V>, b: HashMap<K, V>) -> HashMap<K, V> {
    for (k, v) in b {
        a.entry(k).or_insert(v);
    }
    a
}

/// All graphs contracting to `g` along their last edge, before deduplication.
pub fn inverse_contractions(g: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    for v in 0..g.num_vertices() {
        let w = g.weight(v);
        if w >= 1 {
            out.push(g.weight_to_loop(v));
        }
        let hv = g.half_edges_at(v);
        if hv.is_empty() {
            for w2 in 1..=w / 2 {
                out.push(g.split_vertex(v, &[], w2));
            }
            continue;
        }
        // the new vertex receives a subset avoiding hv[0]
        let rest = &hv[1..];
        for mask in 0u64..(1u64 << rest.len()) {
            let moved: Vec<usize> = (0..rest.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| rest[i])
                .collect();
            let n_new = moved.len() as i64 + 1;
            let n_old = hv.len() as i64 - moved.len() as i64 + 1;
            for w2 in 0..=w {
                let w1 = w - w2;
                if 2 * w2 as i64 - 2 + n_new > 0 && 2 * w1 as i64 - 2 + n_old > 0 {
                    out.push(g.split_vertex(v, &moved, w2));
                }
            }
        }
    }
    out
}
