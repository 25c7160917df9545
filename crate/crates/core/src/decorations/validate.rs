//! Consistency checks for decoration data: symmetric-group relations,
//! weight preservation, equivariance of the structure maps, and agreement of
//! the two ways of contracting a pair of edges.

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::Mode;
use crate::enumeration::enumerate_graphs;
use crate::graph::{ContractionKind, StableGraph};
use crate::linalg::QMatrix;

use super::tensor::pullback;
use super::{DecorationSystem, GN};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub location: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Number of two-edge graphs compared.
    pub two_edge_graphs: usize,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Sink(Vec<Violation>);

impl Sink {
    fn push(&mut self, check: &str, location: String, detail: impl Into<String>) {
        self.0.push(Violation {
            check: check.to_string(),
            location,
            detail: detail.into(),
        });
    }

    fn expect_eq(&mut self, check: &str, location: impl Fn() -> String, lhs: &QMatrix, rhs: &QMatrix) {
        if lhs != rhs {
            let detail = first_difference(lhs, rhs);
            self.push(check, location(), detail);
        }
    }
}

fn first_difference(a: &QMatrix, b: &QMatrix) -> String {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return format!("shapes {}x{} and {}x{}", a.rows(), a.cols(), b.rows(), b.cols());
    }
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if a.get(r, c) != b.get(r, c) {
                return format!("entry [{r}][{c}]: {} vs {}", a.get(r, c), b.get(r, c));
            }
        }
    }
    unreachable!()
}

fn gen(ds: &DecorationSystem, t: GN, i: usize) -> QMatrix {
    ds.blocks[&t].transpositions[i].clone()
}

fn weights(ds: &DecorationSystem, t: GN) -> Vec<u32> {
    ds.blocks[&t].generators.iter().map(|x| x.weight).collect()
}

/// Every nonzero entry of `m` connects generators of equal weight.
fn check_weights(sink: &mut Sink, check: &str, loc: &str, m: &QMatrix, rows: &[u32], cols: &[u32]) {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !num_traits::Zero::is_zero(m.get(r, c)) && rows[r] != cols[c] {
                sink.push(check, loc.to_string(), format!("entry [{r}][{c}] maps weight {} to {}", cols[c], rows[r]));
                return;
            }
        }
    }
}

fn check_block(ds: &DecorationSystem, t: GN) -> Vec<Violation> {
    let mut sink = Sink(Vec::new());
    let (g, n) = t;
    let b = &ds.blocks[&t];
    let id = QMatrix::identity(b.dim());
    let w = weights(ds, t);
    for i in 0..b.transpositions.len() {
        let s = &b.transpositions[i];
        check_weights(&mut sink, "weight", &format!("block ({g},{n}) s_{i}"), s, &w, &w);
        sink.expect_eq("involution", || format!("block ({g},{n}) s_{i}"), &s.mul(s), &id);
        if i + 1 < b.transpositions.len() {
            let t2 = &b.transpositions[i + 1];
            let st = s.mul(t2);
            sink.expect_eq("braid", || format!("block ({g},{n}) s_{i}, s_{}", i + 1), &st.mul(&st).mul(&st), &id);
        }
        for j in i + 2..b.transpositions.len() {
            let t2 = &b.transpositions[j];
            sink.expect_eq("commute", || format!("block ({g},{n}) s_{i}, s_{j}"), &s.mul(t2), &t2.mul(s));
        }
    }
    if let Some(f) = ds.forget.get(&t) {
        let target = (g, n + 1);
        let loc = format!("forget ({g},{n})");
        check_weights(&mut sink, "weight", &loc, f, &weights(ds, target), &w);
        for i in 0..n.saturating_sub(1) {
            sink.expect_eq(
                "forget equivariance",
                || format!("{loc} s_{i}"),
                &f.mul(&gen(ds, t, i)),
                &gen(ds, target, i).mul(f),
            );
        }
    }
    sink.0
}

fn check_nonloop(ds: &DecorationSystem, a: GN, b: GN) -> Vec<Violation> {
    let mut sink = Sink(Vec::new());
    let loc = format!("nonloop ({},{}),({},{})", a.0, a.1, b.0, b.1);
    let m = &ds.nonloop[&(a, b)];
    let src: GN = (a.0 + b.0, a.1 + b.1);
    let fa: GN = (a.0, a.1 + 1);
    let fb: GN = (b.0, b.1 + 1);
    let (wa, wb) = (weights(ds, fa), weights(ds, fb));
    let rows: Vec<u32> = wa.iter().flat_map(|x| wb.iter().map(move |y| x + y)).collect();
    check_weights(&mut sink, "weight", &loc, m, &rows, &weights(ds, src));
    let (ia, ib) = (QMatrix::identity(wa.len()), QMatrix::identity(wb.len()));
    for i in 0..a.1.saturating_sub(1) {
        let lhs = m.mul(&gen(ds, src, i));
        let rhs = gen(ds, fa, i).kron(&ib).mul(m);
        sink.expect_eq("nonloop equivariance", || format!("{loc} s_{i} on the first factor"), &lhs, &rhs);
    }
    for i in 0..b.1.saturating_sub(1) {
        let lhs = m.mul(&gen(ds, src, a.1 + i));
        let rhs = ia.kron(&gen(ds, fb, i)).mul(m);
        sink.expect_eq("nonloop equivariance", || format!("{loc} s_{} on the second factor", a.1 + i), &lhs, &rhs);
    }
    if a == b {
        let n = a.1;
        let tau: Vec<usize> = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
        let flipped = ds
            .swap_matrix(fa, fa)
            .and_then(|s| Ok(s.mul(m).mul(&ds.rho(src.0, src.1, &tau)?)));
        match flipped {
            Ok(f) => sink.expect_eq("factor symmetry", || loc.clone(), &f, m),
            Err(e) => sink.push("factor symmetry", loc.clone(), e.to_string()),
        }
    }
    sink.0
}

fn check_loop(ds: &DecorationSystem, t: GN) -> Vec<Violation> {
    let mut sink = Sink(Vec::new());
    let (g, n) = t;
    let loc = format!("loop ({g},{n})");
    let m = &ds.loops[&t];
    let target = (g - 1, n + 2);
    check_weights(&mut sink, "weight", &loc, m, &weights(ds, target), &weights(ds, t));
    for i in 0..n.saturating_sub(1) {
        sink.expect_eq(
            "loop equivariance",
            || format!("{loc} s_{i}"),
            &m.mul(&gen(ds, t, i)),
            &gen(ds, target, i).mul(m),
        );
    }
    sink.expect_eq("node symmetry", || loc.clone(), &gen(ds, target, n).mul(m), m);
    sink.0
}

/// Name of the structure map used when contracting `edge`.
fn map_used(g: &StableGraph, edge: usize) -> String {
    let c = g.contract_edge_with_map(edge).expect("stable contraction");
    match c.kind {
        ContractionKind::Loop { vertex } => {
            format!("loop ({},{})", g.weight(vertex) + 1, g.valence(vertex) - 2)
        }
        ContractionKind::Bridge { low, high } => {
            let a = (g.weight(low), g.valence(low) - 1);
            let b = (g.weight(high), g.valence(high) - 1);
            let (a, b) = (a.min(b), a.max(b));
            format!("nonloop ({},{}),({},{})", a.0, a.1, b.0, b.1)
        }
    }
}

/// Both contraction orders of a two-edge graph must give the same map from
/// the decorations of the one-vertex graph.
fn check_two_edge(ds: &DecorationSystem, t: GN) -> (Vec<Violation>, usize) {
    let mut sink = Sink(Vec::new());
    let (g, n) = t;
    let Ok(e) = enumerate_graphs(g, n, Mode::Labeled, Some(2)) else {
        return (Vec::new(), 0);
    };
    let mut count = 0;
    for class in e.with_edges(2) {
        let gr = &class.graph;
        let fits = |x: &StableGraph| (0..x.num_vertices()).all(|v| ds.in_range(x.weight(v), x.valence(v)));
        let (Ok(c0), Ok(c1)) = (gr.contract_edge(0), gr.contract_edge(1)) else {
            continue;
        };
        if !(fits(gr) && fits(&c0) && fits(&c1)) {
            continue;
        }
        count += 1;
        for k in 0..=ds.max_weight {
            let path = |first: usize| -> crate::error::Result<QMatrix> {
                let (outer, c) = pullback(ds, gr, first, k)?;
                // the remaining edge keeps its relative position
                let (inner, _) = pullback(ds, &c.graph, 0, k)?;
                Ok(outer.mul(&inner))
            };
            let loc = || {
                format!(
                    "({g},{n}) graph {gr}, weight {k}: [{} then {}] vs [{} then {}]",
                    map_used(gr, 0),
                    map_used(&c0, 0),
                    map_used(gr, 1),
                    map_used(&c1, 0),
                )
            };
            match (path(0), path(1)) {
                (Ok(x), Ok(y)) => sink.expect_eq("two-edge compatibility", loc, &x, &y),
                (Err(err), _) | (_, Err(err)) => sink.push("two-edge compatibility", loc(), err.to_string()),
            }
        }
    }
    (sink.0, count)
}

pub fn validate_decoration(ds: &DecorationSystem) -> ValidationReport {
    let mut report = ValidationReport::default();
    let blocks = ds.required_blocks();
    let mut v: Vec<Violation> = blocks.par_iter().flat_map_iter(|&t| check_block(ds, t)).collect();
    let nonloop = ds.required_nonloop();
    v.extend(nonloop.par_iter().flat_map_iter(|&(a, b)| check_nonloop(ds, a, b)).collect::<Vec<_>>());
    v.extend(ds.required_loops().par_iter().flat_map_iter(|&t| check_loop(ds, t)).collect::<Vec<_>>());
    report.violations = v;
    // relations first; the two-edge check presumes well-formed maps
    if report.is_clean() {
        let results: Vec<(Vec<Violation>, usize)> = blocks.par_iter().map(|&t| check_two_edge(ds, t)).collect();
        for (v, c) in results {
            report.violations.extend(v);
            report.two_edge_graphs += c;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decorations::{int, synthetic_decoration, trivial_decoration};

    #[test]
    fn builtins_are_clean() {
        let r = validate_decoration(&trivial_decoration(2, 4));
        assert!(r.is_clean(), "{:?}", r.violations);
        assert!(r.two_edge_graphs > 0);
        let r = validate_decoration(&synthetic_decoration(2, 4));
        assert!(r.is_clean(), "{:?}", r.violations);
    }

    #[test]
    fn negated_entry_breaks_associativity() {
        let mut ds = trivial_decoration(0, 6);
        let key = ((0, 2), (0, 2));
        ds.nonloop.get_mut(&key).unwrap().set(0, 0, int(-1));
        let r = validate_decoration(&ds);
        assert!(!r.is_clean());
        assert!(r.violations.iter().all(|v| v.check == "two-edge compatibility"));
        assert!(r.violations.iter().any(|v| v.location.contains("nonloop (0,2),(0,2)")), "{:?}", r.violations);
    }

    #[test]
    fn negated_entry_breaks_equivariance() {
        let mut ds = synthetic_decoration(1, 4);
        let m = ds.nonloop.get_mut(&((0, 2), (0, 2))).unwrap();
        let x = -m.get(1, 0).clone();
        m.set(1, 0, x);
        let r = validate_decoration(&ds);
        assert!(r.violations.iter().any(|v| v.location == "nonloop (0,2),(0,2)"), "{:?}", r.violations);
    }

    #[test]
    fn broken_braid_relation() {
        let mut ds = trivial_decoration(0, 4);
        ds.blocks.get_mut(&(0, 4)).unwrap().transpositions[0] = QMatrix::from_ints(&[&[2]]);
        let r = validate_decoration(&ds);
        assert!(r.violations.iter().any(|v| v.check == "involution" && v.location == "block (0,4) s_0"));
    }
}
