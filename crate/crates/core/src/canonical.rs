//! Canonical forms, isomorphisms and automorphism groups of stable graphs.
//!
//! Vertices are canonically ordered by color refinement with individualization
//! (no automorphism pruning, graphs here have at most a dozen vertices). The
//! certificate of a discrete ordering records weights, hair data and the edge
//! multiplicity matrix; the smallest certificate wins. Every leaf reaching it
//! differs from the first by a vertex automorphism, so the leaves also give
//! the vertex-level automorphism group. Half-edge automorphisms fixing all
//! vertices (permuting parallel edges, flipping loops, permuting hairs in
//! hairy mode) are added in closed form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::StableGraph;
use crate::perm;

/// Labeled graphs have hairs carrying the markings `1..=n`; hairy graphs
/// have interchangeable hairs whose permutations count as automorphisms and
/// enter the orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Labeled,
    Hairy,
}

impl Mode {
    pub fn tag(self) -> u8 {
        match self {
            Mode::Labeled => 0,
            Mode::Hairy => 1,
        }
    }

    pub fn from_tag(t: u8) -> Option<Mode> {
        match t {
            0 => Some(Mode::Labeled),
            1 => Some(Mode::Hairy),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Labeled => "labeled",
            Mode::Hairy => "hairy",
        })
    }
}

/// Byte string identifying an isomorphism class within one mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn from_bytes(b: Vec<u8>) -> Self {
        CanonicalKey(b)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A bijection between two graphs given on half-edges and vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub half_edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl Isomorphism {
    pub fn identity(g: &StableGraph) -> Self {
        Isomorphism {
            half_edges: perm::identity(g.num_half_edges()),
            vertices: perm::identity(g.num_vertices()),
        }
    }

    /// Builds the vertex map from a half-edge automorphism of `g`.
    pub fn from_half_edge_perm(g: &StableGraph, p: Vec<usize>) -> Self {
        let mut vertices = perm::identity(g.num_vertices());
        for (h, &x) in p.iter().enumerate() {
            vertices[g.vertex_of(h)] = g.vertex_of(x);
        }
        Isomorphism {
            half_edges: p,
            vertices,
        }
    }

    pub fn inverse(&self) -> Self {
        Isomorphism {
            half_edges: perm::inverse(&self.half_edges),
            vertices: perm::inverse(&self.vertices),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Isomorphism) -> Self {
        Isomorphism {
            half_edges: perm::compose(&next.half_edges, &self.half_edges),
            vertices: perm::compose(&next.vertices, &self.vertices),
        }
    }

    /// Permutation of edge slots induced from `src` to `dst`.
    pub fn edge_permutation(&self, src: &StableGraph, dst: &StableGraph) -> Vec<usize> {
        src.edges()
            .iter()
            .map(|&(a, _)| dst.edge_index_of(self.half_edges[a]).expect("edge maps to edge"))
            .collect()
    }

    /// Permutation of hair slots induced from `src` to `dst`.
    pub fn hair_permutation(&self, src: &StableGraph, dst: &StableGraph) -> Vec<usize> {
        src.hairs()
            .iter()
            .map(|&h| dst.hair_index_of(self.half_edges[h]).expect("hair maps to hair"))
            .collect()
    }

    /// Sign by which this map transports the orientation of `src` to that of `dst`.
    pub fn orientation_sign(&self, src: &StableGraph, dst: &StableGraph, mode: Mode) -> i32 {
        let e = perm::sign(&self.edge_permutation(src, dst));
        match mode {
            Mode::Labeled => e,
            Mode::Hairy => e * perm::sign(&self.hair_permutation(src, dst)),
        }
    }

    /// Checks that this is an isomorphism `src → dst` in the given mode.
    pub fn is_valid(&self, src: &StableGraph, dst: &StableGraph, mode: Mode) -> bool {
        if src.num_half_edges() != dst.num_half_edges()
            || src.num_vertices() != dst.num_vertices()
            || !perm::is_permutation(&self.half_edges)
            || !perm::is_permutation(&self.vertices)
        {
            return false;
        }
        (0..src.num_vertices()).all(|v| src.weight(v) == dst.weight(self.vertices[v]))
            && (0..src.num_half_edges()).all(|h| {
                let x = self.half_edges[h];
                dst.vertex_of(x) == self.vertices[src.vertex_of(h)]
                    && dst.partner(x) == src.partner(h).map(|p| self.half_edges[p])
                    && (mode == Mode::Hairy || dst.label(x) == src.label(h))
            })
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// The fixed ordered representative of the class.
    pub representative: StableGraph,
    /// Isomorphism from the input graph to `representative`.
    pub relabeling: Isomorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationCharacter {
    Trivial,
    Nontrivial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutData {
    pub order: u64,
    /// Generators as half-edge permutations of the analyzed graph.
    pub generators: Vec<Vec<usize>>,
    pub orientation: OrientationCharacter,
}

impl AutData {
    pub fn survives(&self) -> bool {
        self.orientation == OrientationCharacter::Trivial
    }

    /// All group elements; only sensible for small groups.
    pub fn elements(&self, num_half_edges: usize) -> Vec<Vec<usize>> {
        perm::closure(&self.generators, num_half_edges)
    }

    /// The same group acting on the target of `iso`: each generator `p` becomes
    /// `iso ∘ p ∘ iso⁻¹`.
    pub fn conjugate(&self, iso: &Isomorphism) -> AutData {
        let inv = perm::inverse(&iso.half_edges);
        AutData {
            order: self.order,
            generators: self
                .generators
                .iter()
                .map(|p| perm::compose(&iso.half_edges, &perm::compose(p, &inv)))
                .collect(),
            orientation: self.orientation,
        }
    }
}

pub fn canonical_form(g: &StableGraph, mode: Mode) -> CanonicalForm {
    analyze(g, mode).0
}

pub fn automorphism_group(g: &StableGraph, mode: Mode) -> AutData {
    analyze(g, mode).1
}

pub fn orientation_character(g: &StableGraph, mode: Mode) -> OrientationCharacter {
    analyze(g, mode).1.orientation
}

/// Canonical form and automorphism data in one pass.
pub fn analyze(g: &StableGraph, mode: Mode) -> (CanonicalForm, AutData) {
    let prep = Prep::new(g, mode);
    let mut search = Search {
        prep: &prep,
        best: None,
        leaves: Vec::new(),
    };
    search.run(prep.initial_colors());
    let best = search.best.expect("at least one leaf");
    let leaves = search.leaves;

    let mut key = Vec::with_capacity(1 + 4 * best.len());
    key.push(mode.tag());
    for x in &best {
        key.extend_from_slice(&x.to_be_bytes());
    }
    let key = CanonicalKey(key);

    let (rep, psi0) = build_representative(g, &prep, &leaves[0]);
    let psi0_inv = psi0.inverse();

    let mut generators = Vec::new();
    for leaf in &leaves[1..] {
        let (_, psi) = build_representative(g, &prep, leaf);
        generators.push(psi.then(&psi0_inv).half_edges);
    }
    let (kernel, kernel_order) = kernel_generators(g, mode);
    generators.extend(kernel);

    let order = leaves.len() as u64 * kernel_order;
    let reversing = generators.iter().any(|p| {
        let iso = Isomorphism::from_half_edge_perm(g, p.clone());
        iso.orientation_sign(g, g, mode) < 0
    });
    let aut = AutData {
        order,
        generators,
        orientation: if reversing {
            OrientationCharacter::Nontrivial
        } else {
            OrientationCharacter::Trivial
        },
    };
    (
        CanonicalForm {
            key,
            representative: rep,
            relabeling: psi0,
        },
        aut,
    )
}

/// Automorphisms fixing every vertex, with the order of the group they generate.
fn kernel_generators(g: &StableGraph, mode: Mode) -> (Vec<Vec<usize>>, u64) {
    let nh = g.num_half_edges();
    let mut gens = Vec::new();
    let mut order: u64 = 1;
    // bucket edges by unordered endpoint pair, orienting non-loops from the smaller vertex
    let mut buckets: std::collections::BTreeMap<(usize, usize), Vec<(usize, usize)>> =
        Default::default();
    for &(a, b) in g.edges() {
        let (va, vb) = (g.vertex_of(a), g.vertex_of(b));
        let (x, y) = if va <= vb { (a, b) } else { (b, a) };
        buckets.entry((va.min(vb), va.max(vb))).or_default().push((x, y));
    }
    for ((u, v), es) in &buckets {
        let m = es.len() as u64;
        order *= factorial(m);
        for w in es.windows(2) {
            let mut p = perm::identity(nh);
            p.swap(w[0].0, w[1].0);
            p.swap(w[0].1, w[1].1);
            gens.push(p);
        }
        if u == v {
            order *= 1 << m;
            for &(x, y) in es {
                let mut p = perm::identity(nh);
                p.swap(x, y);
                gens.push(p);
            }
        }
    }
    if mode == Mode::Hairy {
        for v in 0..g.num_vertices() {
            let hs: Vec<usize> = g.hairs().iter().copied().filter(|&h| g.vertex_of(h) == v).collect();
            order *= factorial(hs.len() as u64);
            for w in hs.windows(2) {
                let mut p = perm::identity(nh);
                p.swap(w[0], w[1]);
                gens.push(p);
            }
        }
    }
    (gens, order)
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

struct Prep {
    nv: usize,
    mode: Mode,
    weights: Vec<u32>,
    /// Symmetric multiplicity matrix, loops on the diagonal.
    mult: Vec<u32>,
    nbrs: Vec<Vec<(usize, u32)>>,
    hair_count: Vec<u32>,
    hair_labels: Vec<Vec<u32>>,
}

impl Prep {
    fn new(g: &StableGraph, mode: Mode) -> Self {
        let nv = g.num_vertices();
        let mut mult = vec![0u32; nv * nv];
        for &(a, b) in g.edges() {
            let (u, v) = (g.vertex_of(a), g.vertex_of(b));
            mult[u * nv + v] += 1;
            if u != v {
                mult[v * nv + u] += 1;
            }
        }
        let nbrs = (0..nv)
            .map(|u| {
                (0..nv)
                    .filter(|&v| v != u && mult[u * nv + v] > 0)
                    .map(|v| (v, mult[u * nv + v]))
                    .collect()
            })
            .collect();
        let mut hair_count = vec![0u32; nv];
        let mut hair_labels = vec![Vec::new(); nv];
        for &h in g.hairs() {
            let v = g.vertex_of(h);
            hair_count[v] += 1;
            if mode == Mode::Labeled {
                if let Some(l) = g.label(h) {
                    hair_labels[v].push(l);
                }
            }
        }
        for l in &mut hair_labels {
            l.sort_unstable();
        }
        Prep {
            nv,
            mode,
            weights: g.weights().to_vec(),
            mult,
            nbrs,
            hair_count,
            hair_labels,
        }
    }

    fn initial_colors(&self) -> Vec<u32> {
        let sigs: Vec<_> = (0..self.nv)
            .map(|v| {
                let deg: u32 = self.nbrs[v].iter().map(|x| x.1).sum();
                (
                    self.weights[v],
                    self.hair_count[v],
                    self.hair_labels[v].clone(),
                    self.mult[v * self.nv + v],
                    deg,
                )
            })
            .collect();
        rank(&sigs)
    }

    fn refine(&self, mut col: Vec<u32>) -> Vec<u32> {
        let mut k = num_cells(&col);
        loop {
            if k == self.nv {
                return col;
            }
            let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..self.nv)
                .map(|v| {
                    let mut s: Vec<(u32, u32)> =
                        self.nbrs[v].iter().map(|&(u, m)| (col[u], m)).collect();
                    s.sort_unstable();
                    (col[v], s)
                })
                .collect();
            let new = rank(&sigs);
            let k2 = num_cells(&new);
            if k2 == k {
                return col;
            }
            col = new;
            k = k2;
        }
    }

    /// Certificate of the ordering `pi` (position → vertex).
    fn certificate(&self, pi: &[usize]) -> Vec<u32> {
        let nv = self.nv;
        let mut c = Vec::with_capacity(2 + 2 * nv + nv * (nv + 1) / 2);
        c.push(nv as u32);
        c.extend(pi.iter().map(|&v| self.weights[v]));
        for &v in pi {
            c.push(self.hair_count[v]);
            if self.mode == Mode::Labeled {
                c.extend_from_slice(&self.hair_labels[v]);
            }
        }
        for i in 0..nv {
            for j in i..nv {
                c.push(self.mult[pi[i] * nv + pi[j]]);
            }
        }
        c
    }
}

fn rank<T: Ord>(sigs: &[T]) -> Vec<u32> {
    let mut idx: Vec<usize> = (0..sigs.len()).collect();
    idx.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
    let mut out = vec![0u32; sigs.len()];
    let mut r = 0;
    for w in 0..idx.len() {
        if w > 0 && sigs[idx[w]] != sigs[idx[w - 1]] {
            r += 1;
        }
        out[idx[w]] = r;
    }
    out
}

fn num_cells(col: &[u32]) -> usize {
    col.iter().max().map_or(0, |&m| m as usize + 1)
}

struct Search<'a> {
    prep: &'a Prep,
    best: Option<Vec<u32>>,
    leaves: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, col: Vec<u32>) {
        let col = self.prep.refine(col);
        let nv = self.prep.nv;
        let k = num_cells(&col);
        if k == nv {
            let mut pi = vec![0usize; nv];
            for (v, &c) in col.iter().enumerate() {
                pi[c as usize] = v;
            }
            let cert = self.prep.certificate(&pi);
            match &self.best {
                Some(b) if cert > *b => {}
                Some(b) if cert == *b => self.leaves.push(pi),
                _ => {
                    self.best = Some(cert);
                    self.leaves.clear();
                    self.leaves.push(pi);
                }
            }
            return;
        }
        let mut sizes = vec![0usize; k];
        for &c in &col {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1).unwrap() as u32;
        for v in 0..nv {
            if col[v] != target {
                continue;
            }
            let next: Vec<u32> = col
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + u32::from(c == target && u != v))
                .collect();
            self.run(rank(&next));
        }
    }
}

/// Ordered representative for the ordering `pi`, and the isomorphism onto it.
///
/// Layout: vertex `i` is `pi[i]`; edges sorted by endpoint positions `(i, j)`,
/// `i <= j`, edge `t` owning half-edges `2t` (at `i`) and `2t+1`; hairs follow,
/// sorted by vertex and then label.
fn build_representative(g: &StableGraph, prep: &Prep, pi: &[usize]) -> (StableGraph, Isomorphism) {
    let nv = prep.nv;
    let mut pos = vec![0usize; nv];
    for (i, &v) in pi.iter().enumerate() {
        pos[v] = i;
    }
    // bucket offsets in (i, j) lexicographic order
    let mut offset = vec![usize::MAX; nv * nv];
    let mut ne = 0;
    for i in 0..nv {
        for j in i..nv {
            offset[i * nv + j] = ne;
            ne += prep.mult[pi[i] * nv + pi[j]] as usize;
        }
    }
    let nh = g.num_half_edges();
    let mut half_map = vec![usize::MAX; nh];
    let mut filled = vec![0usize; nv * nv];
    for &(a, b) in g.edges() {
        let (pa, pb) = (pos[g.vertex_of(a)], pos[g.vertex_of(b)]);
        let (i, j) = (pa.min(pb), pa.max(pb));
        let t = offset[i * nv + j] + filled[i * nv + j];
        filled[i * nv + j] += 1;
        if pa <= pb {
            half_map[a] = 2 * t;
            half_map[b] = 2 * t + 1;
        } else {
            half_map[b] = 2 * t;
            half_map[a] = 2 * t + 1;
        }
    }
    let mut rep_vertex = Vec::with_capacity(nh);
    let mut rep_partner = Vec::with_capacity(nh);
    let mut rep_label = Vec::with_capacity(nh);
    for i in 0..nv {
        for j in i..nv {
            for _ in 0..prep.mult[pi[i] * nv + pi[j]] {
                let h = rep_vertex.len();
                rep_vertex.extend([i, j]);
                rep_partner.extend([Some(h + 1), Some(h)]);
                rep_label.extend([None, None]);
            }
        }
    }
    // hairs: by position, then label (labeled) or original index (hairy)
    let mut hairs: Vec<(usize, u32, usize)> = g
        .hairs()
        .iter()
        .map(|&h| {
            let l = match prep.mode {
                Mode::Labeled => g.label(h).unwrap_or(0),
                Mode::Hairy => 0,
            };
            (pos[g.vertex_of(h)], l, h)
        })
        .collect();
    hairs.sort_unstable();
    for &(i, l, h) in &hairs {
        half_map[h] = rep_vertex.len();
        rep_vertex.push(i);
        rep_partner.push(None);
        rep_label.push(match prep.mode {
            Mode::Labeled => g.label(h).map(|_| l),
            Mode::Hairy => None,
        });
    }
    let weights = pi.iter().map(|&v| prep.weights[v]).collect();
    let rep = StableGraph::from_parts(weights, rep_vertex, rep_partner, rep_label)
        .expect("representative is well formed");
    (
        rep,
        Isomorphism {
            half_edges: half_map,
            vertices: pos,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::samples::*;
    use crate::graph::GraphBuilder;

    /// Brute force over all half-edge bijections `g → h`.
    fn brute_isos(g: &StableGraph, h: &StableGraph, mode: Mode) -> Vec<Isomorphism> {
        let mut out = Vec::new();
        if g.num_half_edges() != h.num_half_edges() || g.num_vertices() != h.num_vertices() {
            return out;
        }
        let nv = g.num_vertices();
        perm::for_each_permutation(nv, |vp| {
            perm::for_each_permutation(g.num_half_edges(), |hp| {
                let iso = Isomorphism {
                    half_edges: hp.to_vec(),
                    vertices: vp.to_vec(),
                };
                if iso.is_valid(g, h, mode) {
                    out.push(iso);
                }
            });
        });
        out
    }

    fn relabel(g: &StableGraph, hp: &[usize], vp: &[usize]) -> StableGraph {
        let nh = g.num_half_edges();
        let mut vertex_of = vec![0; nh];
        let mut partner = vec![None; nh];
        let mut labels = vec![None; nh];
        let mut weights = vec![0; g.num_vertices()];
        for h in 0..nh {
            vertex_of[hp[h]] = vp[g.vertex_of(h)];
            partner[hp[h]] = g.partner(h).map(|p| hp[p]);
            labels[hp[h]] = g.label(h);
        }
        for v in 0..g.num_vertices() {
            weights[vp[v]] = g.weight(v);
        }
        StableGraph::from_parts(weights, vertex_of, partner, labels).unwrap()
    }

    fn small_graphs() -> Vec<StableGraph> {
        let mut out = vec![theta(), dumbbell(), one_loop(1), one_loop(2)];
        out.push(StableGraph::corolla(0, 3, true));
        out.push(StableGraph::corolla(1, 2, false));
        out.push(StableGraph::corolla(0, 5, false));
        let mut b = GraphBuilder::new();
        let (u, v) = (b.vertex(0), b.vertex(1));
        b.edge(u, v).edge(u, v).hair(u).hair(u);
        out.push(b.build().unwrap());
        let mut b = GraphBuilder::new();
        let (u, v) = (b.vertex(0), b.vertex(0));
        b.edge(u, v).labeled_hair(u, 2).labeled_hair(u, 1).labeled_hair(v, 3).labeled_hair(v, 4);
        out.push(b.build().unwrap());
        let mut b = GraphBuilder::new();
        let (u, v) = (b.vertex(0), b.vertex(0));
        b.edge(u, v).edge(v, v).hair(u).hair(u);
        out.push(b.build().unwrap());
        out
    }

    #[test]
    fn theta_has_twelve_automorphisms() {
        let t = theta();
        assert_eq!(automorphism_group(&t, Mode::Labeled).order, 12);
        assert_eq!(brute_isos(&t, &t, Mode::Labeled).len(), 12);
    }

    #[test]
    fn order_matches_brute_force() {
        for g in small_graphs() {
            if g.num_half_edges() > 6 {
                continue;
            }
            for mode in [Mode::Labeled, Mode::Hairy] {
                if mode == Mode::Labeled && g.num_hairs() > 0 && !g.is_labeled() {
                    continue;
                }
                let aut = automorphism_group(&g, mode);
                let brute = brute_isos(&g, &g, mode);
                assert_eq!(aut.order as usize, brute.len(), "{g} {mode}");
                assert_eq!(aut.elements(g.num_half_edges()).len(), brute.len(), "{g} {mode}");
                let rev = brute.iter().any(|i| i.orientation_sign(&g, &g, mode) < 0);
                assert_eq!(aut.survives(), !rev, "{g} {mode}");
            }
        }
    }

    #[test]
    fn corolla_groups() {
        assert_eq!(automorphism_group(&StableGraph::corolla(1, 4, true), Mode::Labeled).order, 1);
        assert_eq!(automorphism_group(&StableGraph::corolla(1, 4, false), Mode::Hairy).order, 24);
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation_character(&theta(), Mode::Labeled), OrientationCharacter::Nontrivial);
        assert_eq!(
            orientation_character(&StableGraph::corolla(1, 2, false), Mode::Hairy),
            OrientationCharacter::Nontrivial
        );
        assert_eq!(orientation_character(&one_loop(1), Mode::Labeled), OrientationCharacter::Trivial);
        assert_eq!(orientation_character(&dumbbell(), Mode::Labeled), OrientationCharacter::Nontrivial);
    }

    #[test]
    fn distinct_classes() {
        assert_ne!(canonical_form(&theta(), Mode::Labeled).key, canonical_form(&dumbbell(), Mode::Labeled).key);
    }

    #[test]
    fn loop_with_two_labels() {
        let g = one_loop(2);
        let swapped = g.permute_labels(&[1, 0]);
        for mode in [Mode::Labeled, Mode::Hairy] {
            assert_eq!(canonical_form(&g, mode).key, canonical_form(&swapped, mode).key);
        }
    }

    #[test]
    fn labels_distinguish_in_labeled_mode_only() {
        let mut b = GraphBuilder::new();
        let (u, v) = (b.vertex(0), b.vertex(0));
        b.edge(u, v).labeled_hair(u, 1).labeled_hair(u, 2).labeled_hair(v, 3).labeled_hair(v, 4);
        let g = b.build().unwrap();
        let h = g.permute_labels(&[0, 2, 1, 3]);
        assert_ne!(canonical_form(&g, Mode::Labeled).key, canonical_form(&h, Mode::Labeled).key);
        assert_eq!(canonical_form(&g, Mode::Hairy).key, canonical_form(&h, Mode::Hairy).key);
    }

    #[test]
    fn relabeling_invariance_and_valid_isos() {
        let mut seed = 7u64;
        let mut next = move |n: usize| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as usize % n
        };
        for g in small_graphs() {
            for mode in [Mode::Labeled, Mode::Hairy] {
                let cf = canonical_form(&g, mode);
                assert!(cf.relabeling.is_valid(&g, &cf.representative, mode));
                let again = canonical_form(&cf.representative, mode);
                assert_eq!(again.key, cf.key);
                assert_eq!(again.representative, cf.representative);
                for _ in 0..20 {
                    let mut hp = perm::identity(g.num_half_edges());
                    let mut vp = perm::identity(g.num_vertices());
                    for i in (1..hp.len()).rev() {
                        hp.swap(i, next(i + 1));
                    }
                    for i in (1..vp.len()).rev() {
                        vp.swap(i, next(i + 1));
                    }
                    let r = relabel(&g, &hp, &vp);
                    let cr = canonical_form(&r, mode);
                    assert_eq!(cr.key, cf.key);
                    assert_eq!(cr.representative, cf.representative);
                    assert_eq!(automorphism_group(&r, mode).order, automorphism_group(&g, mode).order);
                }
            }
        }
    }

    #[test]
    fn generators_are_automorphisms() {
        for g in small_graphs() {
            for mode in [Mode::Labeled, Mode::Hairy] {
                for p in automorphism_group(&g, mode).generators {
                    let iso = Isomorphism::from_half_edge_perm(&g, p);
                    assert!(iso.is_valid(&g, &g, mode));
                }
            }
        }
    }
}
