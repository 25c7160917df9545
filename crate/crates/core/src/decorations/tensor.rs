//! Decorations of a whole graph: `T_k(Γ) = ⊗_v D(w(v), n_v)` restricted to
//! total internal weight `k`, with the maps induced by isomorphisms and by
//! one-edge contractions.
//!
//! The legs of vertex `v` are its half-edges in increasing order. Basis
//! elements of `T_k(Γ)` are multi-indices (one generator per vertex, in
//! vertex order), listed lexicographically.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::canonical::{AutData, Isomorphism, Mode};
use crate::error::{Error, Result};
use crate::graph::{Contraction, ContractionKind, StableGraph};
use crate::linalg::QMatrix;

use super::{int, DecorationSystem, GN};

#[derive(Clone, Debug)]
pub struct TensorSpace {
    pub factors: Vec<GN>,
    pub basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl TensorSpace {
    pub fn new(ds: &DecorationSystem, g: &StableGraph, weight: u32) -> Result<Self> {
        let factors: Vec<GN> = (0..g.num_vertices()).map(|v| (g.weight(v), g.valence(v))).collect();
        let weights: Vec<Vec<u32>> = factors
            .iter()
            .map(|&(w, n)| Ok(ds.block(w, n)?.generators.iter().map(|x| x.weight).collect()))
            .collect::<Result<_>>()?;
        let mut basis = Vec::new();
        let mut cur = Vec::with_capacity(factors.len());
        fill(&weights, weight, &mut cur, &mut basis);
        let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        Ok(TensorSpace { factors, basis, index })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, x: &[usize]) -> Option<usize> {
        self.index.get(x).copied()
    }

    fn position_or_err(&self, x: &[usize]) -> Result<usize> {
        self.position(x)
            .ok_or_else(|| Error::Decoration(format!("a structure map does not preserve weight (image {x:?})")))
    }
}

fn fill(weights: &[Vec<u32>], left: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let v = cur.len();
    if v == weights.len() {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for (i, &w) in weights[v].iter().enumerate() {
        if w <= left {
            cur.push(i);
            fill(weights, left - w, cur, out);
            cur.pop();
        }
    }
}

fn odd(ds: &DecorationSystem, t: GN, i: usize) -> Result<bool> {
    ds.parity(t.0, t.1, i)
}

/// Position of each leg of `v` among the sorted legs of `g`'s vertex `v`.
fn leg_position(g: &StableGraph, v: usize, h: usize) -> usize {
    g.half_edges_at(v).iter().position(|&x| x == h).expect("half-edge at vertex")
}

/// Matrix `T_k(src) → T_k(dst)` induced by an isomorphism, including the
/// Koszul sign of reordering odd factors. Edge orientation is not included.
pub fn transport(ds: &DecorationSystem, src: &StableGraph, dst: &StableGraph, iso: &Isomorphism, k: u32) -> Result<QMatrix> {
    let s = TensorSpace::new(ds, src, k)?;
    let t = TensorSpace::new(ds, dst, k)?;
    transport_between(ds, src, dst, iso, &s, &t)
}

fn transport_between(
    ds: &DecorationSystem,
    src: &StableGraph,
    dst: &StableGraph,
    iso: &Isomorphism,
    s: &TensorSpace,
    t: &TensorSpace,
) -> Result<QMatrix> {
    let nv = src.num_vertices();
    let local: Vec<QMatrix> = (0..nv)
        .map(|v| {
            let legs = src.half_edges_at(v);
            let sigma: Vec<usize> = legs.iter().map(|&h| leg_position(dst, iso.vertices[v], iso.half_edges[h])).collect();
            ds.rho(src.weight(v), legs.len(), &sigma)
        })
        .collect::<Result<_>>()?;
    let mut m = QMatrix::zeros(t.dim(), s.dim());
    for (c, x) in s.basis.iter().enumerate() {
        // expand ⊗_v ρ(σ_v) x_v, placing factor v at iso.vertices[v]
        let mut terms: Vec<(Vec<usize>, BigRational)> = vec![(vec![0; nv], BigRational::one())];
        for v in 0..nv {
            let mut next = Vec::new();
            for (y, coef) in &terms {
                for r in 0..local[v].rows() {
                    let a = local[v].get(r, x[v]);
                    if !a.is_zero() {
                        let mut y = y.clone();
                        y[iso.vertices[v]] = r;
                        next.push((y, coef * a));
                    }
                }
            }
            terms = next;
        }
        let mut odd_images = Vec::new();
        for v in 0..nv {
            if odd(ds, s.factors[v], x[v])? {
                odd_images.push(iso.vertices[v]);
            }
        }
        let inversions = (0..odd_images.len())
            .flat_map(|i| (i + 1..odd_images.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| odd_images[i] > odd_images[j])
            .count();
        for (y, coef) in terms {
            let r = t.position_or_err(&y)?;
            let coef = if inversions % 2 == 1 { -coef } else { coef };
            m.add_at(r, c, &coef);
        }
    }
    Ok(m)
}

/// Local co-composition at the contracted vertex, from its decoration in
/// `graph/e` to the decorations of the edge's end(s) in `graph`. For a
/// non-loop the output index is `a * dim(high) + b`.
fn local_map(ds: &DecorationSystem, graph: &StableGraph, c: &Contraction) -> Result<QMatrix> {
    let (h0, h1) = graph.edges()[edge_of(graph, c)];
    match c.kind {
        ContractionKind::Loop { vertex: v } => {
            let legs = graph.half_edges_at(v);
            let n = legs.len();
            // loop ordering: the other legs in order, then h0, h1
            let order: Vec<usize> = legs.iter().copied().filter(|&h| h != h0 && h != h1).chain([h0, h1]).collect();
            let sigma: Vec<usize> = order.iter().map(|&h| leg_position(graph, v, h)).collect();
            let w = graph.weight(v);
            let lp = ds.loop_map(w + 1, n - 2)?;
            Ok(ds.rho(w, n, &sigma)?.mul(lp))
        }
        ContractionKind::Bridge { low, high } => {
            let (node_low, node_high) = if graph.vertex_of(h0) == low { (h0, h1) } else { (h1, h0) };
            let legs_low = graph.half_edges_at(low);
            let legs_high = graph.half_edges_at(high);
            let (nl, nh) = (legs_low.len(), legs_high.len());
            let a: GN = (graph.weight(low), nl - 1);
            let b: GN = (graph.weight(high), nh - 1);
            // σ0: merged legs, sorted, to [low legs, high legs] without nodes
            let merged = c.graph.half_edges_at(c.vertex_map[low]);
            let inverse: HashMap<usize, usize> = c
                .half_edge_map
                .iter()
                .enumerate()
                .filter_map(|(old, new)| new.map(|x| (x, old)))
                .collect();
            let order: Vec<usize> = legs_low
                .iter()
                .chain(&legs_high)
                .copied()
                .filter(|&h| h != node_low && h != node_high)
                .collect();
            let sigma0: Vec<usize> = merged
                .iter()
                .map(|x| order.iter().position(|&h| h == inverse[x]).expect("merged leg"))
                .collect();
            let sigma_for = |legs: &[usize], node: usize| -> Vec<usize> {
                legs.iter()
                    .copied()
                    .filter(|&h| h != node)
                    .chain([node])
                    .map(|h| legs.iter().position(|&x| x == h).unwrap())
                    .collect()
            };
            let ra = ds.rho(a.0, a.1 + 1, &sigma_for(&legs_low, node_low))?;
            let rb = ds.rho(b.0, b.1 + 1, &sigma_for(&legs_high, node_high))?;
            let delta = ds.nonloop_map(a, b)?;
            let rm = ds.rho(a.0 + b.0, a.1 + b.1, &sigma0)?;
            Ok(ra.kron(&rb).mul(&delta).mul(&rm))
        }
    }
}

fn edge_of(graph: &StableGraph, c: &Contraction) -> usize {
    graph
        .edges()
        .iter()
        .position(|&(a, _)| c.half_edge_map[a].is_none())
        .expect("contracted edge")
}

/// Matrix `T_k(graph/e) → T_k(graph)` of the co-composition along edge `e`,
/// with Koszul signs for moving the new factor into place.
pub fn pullback(ds: &DecorationSystem, graph: &StableGraph, edge: usize, k: u32) -> Result<(QMatrix, Contraction)> {
    let c = graph.contract_edge_with_map(edge)?;
    let s = TensorSpace::new(ds, &c.graph, k)?;
    let t = TensorSpace::new(ds, graph, k)?;
    let m = pullback_between(ds, graph, &c, &s, &t)?;
    Ok((m, c))
}

fn pullback_between(
    ds: &DecorationSystem,
    graph: &StableGraph,
    c: &Contraction,
    s: &TensorSpace,
    t: &TensorSpace,
) -> Result<QMatrix> {
    let local = local_map(ds, graph, c)?;
    let nv = graph.num_vertices();
    let mut m = QMatrix::zeros(t.dim(), s.dim());
    for (col, x) in s.basis.iter().enumerate() {
        match c.kind {
            ContractionKind::Loop { vertex } => {
                for r in 0..local.rows() {
                    let a = local.get(r, x[vertex]);
                    if a.is_zero() {
                        continue;
                    }
                    let mut y = x.clone();
                    y[vertex] = r;
                    m.add_at(t.position_or_err(&y)?, col, a);
                }
            }
            ContractionKind::Bridge { low, high } => {
                let db = ds.dim(graph.weight(high), graph.valence(high))?;
                let merged = c.vertex_map[low];
                for r in 0..local.rows() {
                    let coef = local.get(r, x[merged]);
                    if coef.is_zero() {
                        continue;
                    }
                    let y: Vec<usize> = (0..nv)
                        .map(|v| {
                            if v == low {
                                r / db
                            } else if v == high {
                                r % db
                            } else {
                                x[c.vertex_map[v]]
                            }
                        })
                        .collect();
                    // the second factor travels past vertices low+1..high
                    let mut sign = false;
                    if odd(ds, t.factors[high], y[high])? {
                        for v in low + 1..high {
                            sign ^= odd(ds, t.factors[v], y[v])?;
                        }
                    }
                    let coef = if sign { -coef.clone() } else { coef.clone() };
                    m.add_at(t.position_or_err(&y)?, col, &coef);
                }
            }
        }
    }
    Ok(m)
}

/// Invariants of `Aut(graph)` acting on `T_k(graph) ⊗ det(E)`.
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub space: TensorSpace,
    /// Basis vectors in `T_k` coordinates, in reduced echelon form.
    pub vectors: Vec<Vec<BigRational>>,
    /// `vectors[i]` has a `1` at `pivots[i]` and zeros at the other pivots.
    pub pivots: Vec<usize>,
}

impl InvariantBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates of an invariant vector; errors if `y` is not invariant.
    pub fn coordinates(&self, y: &[BigRational]) -> Result<Vec<BigRational>> {
        let coords: Vec<BigRational> = self.pivots.iter().map(|&p| y[p].clone()).collect();
        for (j, yj) in y.iter().enumerate() {
            let mut back = BigRational::zero();
            for (c, v) in coords.iter().zip(&self.vectors) {
                back += c * &v[j];
            }
            if &back != yj {
                return Err(Error::Consistency("image of the decorated differential is not invariant".into()));
            }
        }
        Ok(coords)
    }
}

/// Orientation-twisted invariants, from the averaging projector.
pub fn invariant_basis(ds: &DecorationSystem, graph: &StableGraph, aut: &AutData, k: u32) -> Result<InvariantBasis> {
    let space = TensorSpace::new(ds, graph, k)?;
    let d = space.dim();
    let elements = aut.elements(graph.num_half_edges());
    let mut p = QMatrix::zeros(d, d);
    for e in elements.iter() {
        let iso = Isomorphism::from_half_edge_perm(graph, e.clone());
        debug_assert!(iso.is_valid(graph, graph, Mode::Labeled));
        let t = transport_between(ds, graph, graph, &iso, &space, &space)?;
        let s = iso.orientation_sign(graph, graph, Mode::Labeled);
        p = p.add(&t.scale(&int(s as i64)));
    }
    let p = p.scale(&BigRational::new(1.into(), (elements.len() as i64).into()));
    let (vectors, pivots) = p.transpose().rref();
    Ok(InvariantBasis { space, vectors, pivots })
}

/// The decorated differential restricted to one source/target pair, in
/// `T_k` coordinates: `Σ_e (-1)^e sgn(ψ) · pullback_e ∘ transport(ψ⁻¹)` over
/// the edges `e` of `target` with `target/e ≅ source` via `ψ`.
pub(crate) fn differential_block(
    ds: &DecorationSystem,
    source: &StableGraph,
    s: &TensorSpace,
    target: &StableGraph,
    t: &TensorSpace,
    terms: &[crate::enumeration::ContractionTerm],
    k: u32,
) -> Result<QMatrix> {
    let mut m = QMatrix::zeros(t.dim(), s.dim());
    for term in terms {
        let c = &term.contraction;
        let mid = TensorSpace::new(ds, &c.graph, k)?;
        let back = transport_between(ds, source, &c.graph, &term.transport.inverse(), s, &mid)?;
        let pb = pullback_between(ds, target, c, &mid, t)?;
        m = m.add(&pb.mul(&back).scale(&int(term.sign as i64)));
    }
    Ok(m)
}
