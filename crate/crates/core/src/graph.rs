//! Half-edge representation of stable weighted marked graphs.
//!
//! A graph is a set of half-edges `0..H`, a map from half-edges to vertices,
//! and a partial fixed-point-free involution pairing half-edges into edges.
//! Unpaired half-edges are hairs (legs). In labeled mode every hair carries a
//! distinct marking label in `1..=n`; in hairy mode hairs are unlabeled.
//!
//! Edges are ordered by their lower half-edge index and hairs by half-edge
//! index. These orders are the ones used for orientations.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("half-edge {half_edge} refers to vertex {vertex}, but the graph has {num_vertices} vertices")]
    BadVertex {
        half_edge: usize,
        vertex: usize,
        num_vertices: usize,
    },
    #[error("pairing is not a fixed-point-free involution at half-edge {0}")]
    BadPairing(usize),
    #[error("hair labels must be present exactly on the hairs and form 1..=n")]
    BadLabels,
    #[error("field lengths disagree")]
    LengthMismatch,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {0} does not exist")]
    NotAnEdge(usize),
    #[error("half-edge {0} is not a hair")]
    NotAHair(usize),
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("operation forbidden: vertex {0} would be unstable")]
    Unstable(usize),
}

/// A connected weighted graph with hairs. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableGraph {
    weights: Vec<u32>,
    vertex_of: Vec<usize>,
    partner: Vec<Option<usize>>,
    labels: Vec<Option<u32>>,
    // derived
    edges: Vec<(usize, usize)>,
    hairs: Vec<usize>,
}

/// Result of contracting one edge, with the induced maps on half-edges and vertices.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: StableGraph,
    /// Old half-edge index to new index; `None` for the two halves of the contracted edge.
    pub half_edge_map: Vec<Option<usize>>,
    /// Old vertex index to new vertex index.
    pub vertex_map: Vec<usize>,
    pub kind: ContractionKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionKind {
    /// A loop at `vertex` became one unit of weight.
    Loop { vertex: usize },
    /// Vertices `low < high` merged into `low`; `high` was deleted.
    Bridge { low: usize, high: usize },
}

impl StableGraph {
    /// Builds a graph from raw parts, checking the structural invariants
    /// (vertex indices, involution, labels). Connectivity and stability are
    /// queried separately with [`is_connected`](Self::is_connected) and
    /// [`is_stable`](Self::is_stable).
    pub fn from_parts(
        weights: Vec<u32>,
        vertex_of: Vec<usize>,
        partner: Vec<Option<usize>>,
        labels: Vec<Option<u32>>,
    ) -> Result<Self, GraphError> {
        let nh = vertex_of.len();
        if partner.len() != nh || labels.len() != nh {
            return Err(GraphError::LengthMismatch);
        }
        for (h, &v) in vertex_of.iter().enumerate() {
            if v >= weights.len() {
                return Err(GraphError::BadVertex {
                    half_edge: h,
                    vertex: v,
                    num_vertices: weights.len(),
                });
            }
        }
        for (h, p) in partner.iter().enumerate() {
            if let Some(p) = *p {
                if p == h || p >= nh || partner[p] != Some(h) {
                    return Err(GraphError::BadPairing(h));
                }
                if labels[h].is_some() {
                    return Err(GraphError::BadLabels);
                }
            }
        }
        let hairs: Vec<usize> = (0..nh).filter(|&h| partner[h].is_none()).collect();
        let labeled = hairs.iter().filter(|&&h| labels[h].is_some()).count();
        if labeled != 0 {
            if labeled != hairs.len() {
                return Err(GraphError::BadLabels);
            }
            let mut seen = vec![false; hairs.len()];
            for &h in &hairs {
                let l = labels[h].unwrap() as usize;
                if l == 0 || l > hairs.len() || seen[l - 1] {
                    return Err(GraphError::BadLabels);
                }
                seen[l - 1] = true;
            }
        }
        let edges = (0..nh)
            .filter_map(|h| match partner[h] {
                Some(p) if p > h => Some((h, p)),
                _ => None,
            })
            .collect();
        Ok(StableGraph {
            weights,
            vertex_of,
            partner,
            labels,
            edges,
            hairs,
        })
    }

    /// The single-vertex graph `•_{g,n}`, labeled `1..=n` or unlabeled.
    pub fn corolla(genus: u32, hairs: usize, labeled: bool) -> Self {
        let labels = (0..hairs)
            .map(|i| labeled.then_some(i as u32 + 1))
            .collect();
        StableGraph::from_parts(vec![genus], vec![0; hairs], vec![None; hairs], labels)
            .expect("corolla is well formed")
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.vertex_of.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_hairs(&self) -> usize {
        self.hairs.len()
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn partner(&self, h: usize) -> Option<usize> {
        self.partner[h]
    }

    pub fn label(&self, h: usize) -> Option<u32> {
        self.labels[h]
    }

    /// Edges as `(lower half, upper half)`, ordered by lower half-edge.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Hair half-edges in increasing index order.
    pub fn hairs(&self) -> &[usize] {
        &self.hairs
    }

    /// True when hairs carry marking labels (vacuously false with no hairs).
    pub fn is_labeled(&self) -> bool {
        self.hairs.first().is_some_and(|&h| self.labels[h].is_some())
    }

    /// Position of the edge containing half-edge `h` in [`edges`](Self::edges).
    pub fn edge_index_of(&self, h: usize) -> Option<usize> {
        let p = self.partner[h]?;
        let lo = h.min(p);
        self.edges.binary_search_by_key(&lo, |e| e.0).ok()
    }

    /// Position of hair `h` in [`hairs`](Self::hairs).
    pub fn hair_index_of(&self, h: usize) -> Option<usize> {
        self.hairs.binary_search(&h).ok()
    }

    /// Half-edges at `v` in increasing index order; this is the leg order of `v`.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges())
            .filter(|&h| self.vertex_of[h] == v)
            .collect()
    }

    /// `n_v`: number of half-edges (edge ends and hairs) at `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.vertex_of.iter().filter(|&&x| x == v).count()
    }

    pub fn hairs_at(&self, v: usize) -> usize {
        self.hairs.iter().filter(|&&h| self.vertex_of[h] == v).count()
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| self.vertex_of[a] == v && self.vertex_of[b] == v)
            .count()
    }

    pub fn is_loop(&self, edge: usize) -> bool {
        let (a, b) = self.edges[edge];
        self.vertex_of[a] == self.vertex_of[b]
    }

    pub fn has_loops(&self) -> bool {
        (0..self.num_edges()).any(|e| self.is_loop(e))
    }

    pub fn has_positive_weight(&self) -> bool {
        self.weights.iter().any(|&w| w > 0)
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.num_vertices();
        if nv == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        let mut comps = nv;
        for &(a, b) in &self.edges {
            let (ra, rb) = (
                find(&mut parent, self.vertex_of[a]),
                find(&mut parent, self.vertex_of[b]),
            );
            if ra != rb {
                parent[ra] = rb;
                comps -= 1;
            }
        }
        comps == 1
    }

    /// `b_1(Γ) + Σ_v w(v)`.
    pub fn genus(&self) -> Result<u32, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let b1 = self.num_edges() + 1 - self.num_vertices();
        Ok(b1 as u32 + self.weights.iter().sum::<u32>())
    }

    pub fn vertex_is_stable(&self, v: usize) -> bool {
        2 * self.weights[v] as i64 - 2 + self.valence(v) as i64 > 0
    }

    /// Every vertex satisfies `2w(v) - 2 + n_v > 0`.
    pub fn is_stable(&self) -> bool {
        let mut val = vec![0i64; self.num_vertices()];
        for &v in &self.vertex_of {
            val[v] += 1;
        }
        self.weights
            .iter()
            .zip(&val)
            .all(|(&w, &n)| 2 * w as i64 - 2 + n > 0)
    }

    pub fn contract_edge(&self, edge: usize) -> Result<StableGraph, GraphError> {
        self.contract_edge_with_map(edge).map(|c| c.graph)
    }

    /// Contracts `edge`. A non-loop merges its endpoints into the lower-indexed
    /// one (weights add); a loop is deleted and its vertex gains one unit of
    /// weight. Surviving half-edges keep their relative order.
    pub fn contract_edge_with_map(&self, edge: usize) -> Result<Contraction, GraphError> {
        let &(h0, h1) = self.edges.get(edge).ok_or(GraphError::NotAnEdge(edge))?;
        let (a, b) = (self.vertex_of[h0], self.vertex_of[h1]);
        let nh = self.num_half_edges();
        let mut half_edge_map = vec![None; nh];
        let mut next = 0;
        for (h, slot) in half_edge_map.iter_mut().enumerate() {
            if h != h0 && h != h1 {
                *slot = Some(next);
                next += 1;
            }
        }
        let (kind, vertex_map, weights) = if a == b {
            let mut w = self.weights.clone();
            w[a] += 1;
            (
                ContractionKind::Loop { vertex: a },
                (0..self.num_vertices()).collect::<Vec<_>>(),
                w,
            )
        } else {
            let (low, high) = (a.min(b), a.max(b));
            let vmap: Vec<usize> = (0..self.num_vertices())
                .map(|v| match v.cmp(&high) {
                    std::cmp::Ordering::Less => v,
                    std::cmp::Ordering::Equal => low,
                    std::cmp::Ordering::Greater => v - 1,
                })
                .collect();
            let mut w: Vec<u32> = Vec::with_capacity(self.num_vertices() - 1);
            for v in 0..self.num_vertices() {
                if v == high {
                    continue;
                }
                w.push(if v == low {
                    self.weights[low] + self.weights[high]
                } else {
                    self.weights[v]
                });
            }
            (ContractionKind::Bridge { low, high }, vmap, w)
        };
        let mut vertex_of = Vec::with_capacity(nh - 2);
        let mut partner = Vec::with_capacity(nh - 2);
        let mut labels = Vec::with_capacity(nh - 2);
        for h in 0..nh {
            if half_edge_map[h].is_none() {
                continue;
            }
            vertex_of.push(vertex_map[self.vertex_of[h]]);
            partner.push(self.partner[h].map(|p| half_edge_map[p].unwrap()));
            labels.push(self.labels[h]);
        }
        let graph = StableGraph::from_parts(weights, vertex_of, partner, labels)?;
        if !graph.is_stable() {
            let v = match kind {
                ContractionKind::Loop { vertex } => vertex,
                ContractionKind::Bridge { low, .. } => low,
            };
            return Err(GraphError::Unstable(v));
        }
        Ok(Contraction {
            graph,
            half_edge_map,
            vertex_map,
            kind,
        })
    }

    /// Attaches a new hair at `v`. The new half-edge gets the highest index, so
    /// it is the last hair. A labeled graph gives it label `n + 1`; a graph
    /// without hairs gets an unlabeled one.
    pub fn add_hair(&self, v: usize) -> Result<StableGraph, GraphError> {
        if self.is_labeled() {
            return self.add_labeled_hair(v);
        }
        if v >= self.num_vertices() {
            return Err(GraphError::NoSuchVertex(v));
        }
        let mut vertex_of = self.vertex_of.clone();
        let mut partner = self.partner.clone();
        let mut labels = self.labels.clone();
        vertex_of.push(v);
        partner.push(None);
        labels.push(None);
        StableGraph::from_parts(self.weights.clone(), vertex_of, partner, labels)
    }

    /// Like [`add_hair`](Self::add_hair) but forces labeled mode for graphs
    /// with no hairs yet.
    pub fn add_labeled_hair(&self, v: usize) -> Result<StableGraph, GraphError> {
        if v >= self.num_vertices() {
            return Err(GraphError::NoSuchVertex(v));
        }
        let mut vertex_of = self.vertex_of.clone();
        let mut partner = self.partner.clone();
        let mut labels = self.labels.clone();
        vertex_of.push(v);
        partner.push(None);
        labels.push(Some(self.num_hairs() as u32 + 1));
        StableGraph::from_parts(self.weights.clone(), vertex_of, partner, labels)
    }

    /// Removes hair `h`. No stabilization is attempted: if the vertex becomes
    /// unstable the move is rejected. Larger labels shift down by one.
    pub fn forget_hair(&self, h: usize) -> Result<StableGraph, GraphError> {
        if h >= self.num_half_edges() || self.partner[h].is_some() {
            return Err(GraphError::NotAHair(h));
        }
        let v = self.vertex_of[h];
        if 2 * self.weights[v] as i64 - 2 + self.valence(v) as i64 - 1 <= 0 {
            return Err(GraphError::Unstable(v));
        }
        let removed = self.labels[h];
        let shift = |x: usize| if x > h { x - 1 } else { x };
        let mut vertex_of = Vec::with_capacity(self.num_half_edges() - 1);
        let mut partner = Vec::with_capacity(self.num_half_edges() - 1);
        let mut labels = Vec::with_capacity(self.num_half_edges() - 1);
        for k in 0..self.num_half_edges() {
            if k == h {
                continue;
            }
            vertex_of.push(self.vertex_of[k]);
            partner.push(self.partner[k].map(shift));
            labels.push(self.labels[k].map(|l| match removed {
                Some(r) if l > r => l - 1,
                _ => l,
            }));
        }
        StableGraph::from_parts(self.weights.clone(), vertex_of, partner, labels)
    }

    /// Applies a permutation to the marking labels: label `l` becomes `perm[l-1] + 1`.
    pub fn permute_labels(&self, perm: &[usize]) -> StableGraph {
        let labels = self
            .labels
            .iter()
            .map(|l| l.map(|l| perm[l as usize - 1] as u32 + 1))
            .collect();
        StableGraph {
            labels,
            ..self.clone()
        }
    }

    /// Forgets marking labels, turning a labeled graph into a hairy one.
    pub fn unlabeled(&self) -> StableGraph {
        StableGraph {
            labels: vec![None; self.labels.len()],
            ..self.clone()
        }
    }

    /// Appends a vertex of weight `w` and an edge joining it to `v`;
    /// `moved` half-edges of `v` are reattached to the new vertex.
    pub(crate) fn split_vertex(&self, v: usize, moved: &[usize], w_new: u32) -> StableGraph {
        let nv = self.num_vertices();
        let mut weights = self.weights.clone();
        weights[v] -= w_new;
        weights.push(w_new);
        let mut vertex_of = self.vertex_of.clone();
        for &h in moved {
            vertex_of[h] = nv;
        }
        let nh = self.num_half_edges();
        let mut partner = self.partner.clone();
        let mut labels = self.labels.clone();
        vertex_of.push(v);
        vertex_of.push(nv);
        partner.push(Some(nh + 1));
        partner.push(Some(nh));
        labels.push(None);
        labels.push(None);
        StableGraph::from_parts(weights, vertex_of, partner, labels).expect("split is well formed")
    }

    /// Lowers the weight of `v` by one and attaches a loop at `v`.
    pub(crate) fn weight_to_loop(&self, v: usize) -> StableGraph {
        let mut weights = self.weights.clone();
        weights[v] -= 1;
        let nh = self.num_half_edges();
        let mut vertex_of = self.vertex_of.clone();
        let mut partner = self.partner.clone();
        let mut labels = self.labels.clone();
        vertex_of.extend([v, v]);
        partner.extend([Some(nh + 1), Some(nh)]);
        labels.extend([None, None]);
        StableGraph::from_parts(weights, vertex_of, partner, labels).expect("loop is well formed")
    }
}

impl fmt::Display for StableGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w={:?} e=[", self.weights)?;
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}-{}", self.vertex_of[a], self.vertex_of[b])?;
        }
        write!(f, "] h=[")?;
        for (i, &h) in self.hairs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match self.labels[h] {
                Some(l) => write!(f, "{}:{}", self.vertex_of[h], l)?,
                None => write!(f, "{}", self.vertex_of[h])?,
            }
        }
        write!(f, "]")
    }
}

/// Incremental construction of graphs, mostly for tests and examples.
#[derive(Default, Clone, Debug)]
pub struct GraphBuilder {
    weights: Vec<u32>,
    vertex_of: Vec<usize>,
    partner: Vec<Option<usize>>,
    labels: Vec<Option<u32>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, weight: u32) -> usize {
        self.weights.push(weight);
        self.weights.len() - 1
    }

    pub fn edge(&mut self, a: usize, b: usize) -> &mut Self {
        let h = self.vertex_of.len();
        self.vertex_of.extend([a, b]);
        self.partner.extend([Some(h + 1), Some(h)]);
        self.labels.extend([None, None]);
        self
    }

    pub fn hair(&mut self, v: usize) -> &mut Self {
        self.vertex_of.push(v);
        self.partner.push(None);
        self.labels.push(None);
        self
    }

    pub fn labeled_hair(&mut self, v: usize, label: u32) -> &mut Self {
        self.vertex_of.push(v);
        self.partner.push(None);
        self.labels.push(Some(label));
        self
    }

    pub fn build(&self) -> Result<StableGraph, GraphError> {
        StableGraph::from_parts(
            self.weights.clone(),
            self.vertex_of.clone(),
            self.partner.clone(),
            self.labels.clone(),
        )
    }
}
