use crate::canonical::Mode;
use crate::enumeration::{enumerate_graphs, Enumeration, GraphClass};
use crate::error::Result;
use crate::linalg::GradedComplex;

use super::{contraction_matrix, BasisLabel, ChainComplexQ, Family};

/// Graph complex over an enumeration. Degree is the edge count, plus the
/// hair count in hairy mode.
pub fn graph_complex(e: &Enumeration, family: Family, kind: &str) -> ChainComplexQ {
    let top = e.top_edges();
    let levels: Vec<Vec<&GraphClass>> = (0..=top)
        .map(|k| e.with_edges(k).iter().filter(|c| c.survives() && family.admits(c)).collect())
        .collect();
    let differentials = (0..top)
        .map(|k| contraction_matrix(&levels[k], &levels[k + 1], e.mode))
        .collect();
    let offset = match e.mode {
        Mode::Labeled => 0,
        Mode::Hairy => e.n as i64,
    };
    let mut complex = GradedComplex::new(offset, levels.iter().map(Vec::len).collect(), differentials);
    if e.max_edges.is_some_and(|m| m < crate::enumeration::max_edge_count(e.g, e.n)) {
        // the last computed degree is missing its outgoing differential
        complex.truncated.push(offset + top as i64);
    }
    ChainComplexQ {
        kind: kind.to_string(),
        g: e.g,
        n: e.n,
        mode: e.mode,
        basis: levels
            .iter()
            .map(|l| l.iter().map(|c| BasisLabel::of(c)).collect())
            .collect(),
        complex,
    }
}

/// Weight-zero GK complex: all stable labeled graphs.
pub fn build_weight0_gk(g: u32, n: usize) -> Result<ChainComplexQ> {
    let e = enumerate_graphs(g, n, Mode::Labeled, None)?;
    Ok(graph_complex(&e, Family::Full, "w0gk"))
}

/// Reduced hairy graph complex: loopless labeled graphs with all weights zero.
pub fn build_reduced_hairy_gc(g: u32, n: usize) -> Result<ChainComplexQ> {
    let e = enumerate_graphs(g, n, Mode::Labeled, None)?;
    Ok(graph_complex(&e, Family::Reduced, "hgc"))
}

/// Weight-zero complex with unlabeled hairs and the hair orientation.
pub fn build_hairy_gk(g: u32, n: usize, family: Family) -> Result<ChainComplexQ> {
    let e = enumerate_graphs(g, n, Mode::Hairy, None)?;
    Ok(graph_complex(&e, family, "hairy"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{betti_table, RankPolicy};

    #[test]
    fn w0gk_small_values() {
        let c = build_weight0_gk(1, 1).unwrap();
        assert_eq!(c.complex.dims, vec![1, 1]);
        assert_eq!(c.complex.differentials[0].entries()[0].2.abs(), 1);
        assert!(betti_table(&c.complex, RankPolicy::Certified).unwrap().is_acyclic());

        let c = build_weight0_gk(0, 3).unwrap();
        assert_eq!(c.complex.dims, vec![1]);
        let r = betti_table(&c.complex, RankPolicy::Certified).unwrap();
        assert_eq!(r.nonzero(), vec![(0, 1)]);
        assert_eq!(r.euler_from_dims, 1);
    }

    #[test]
    fn hgc_small_values() {
        let c = build_reduced_hairy_gc(2, 0).unwrap();
        assert!(c.complex.dims.iter().all(|&d| d == 0));
        let c = build_reduced_hairy_gc(3, 0).unwrap();
        let r = betti_table(&c.complex, RankPolicy::Certified).unwrap();
        assert_eq!(r.nonzero(), vec![(6, 1)]);
    }

    #[test]
    fn full_and_reduced_agree_small() {
        for (g, n) in [(1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (0, 5)] {
            let a = betti_table(&build_weight0_gk(g, n).unwrap().complex, RankPolicy::Certified).unwrap();
            let b = betti_table(&build_reduced_hairy_gc(g, n).unwrap().complex, RankPolicy::Certified).unwrap();
            let ba: Vec<_> = a.rows.iter().map(|r| r.betti).collect();
            let bb: Vec<_> = b.rows.iter().map(|r| r.betti).collect();
            assert_eq!(ba, bb, "({g},{n})");
        }
    }

    #[test]
    fn genus_zero_hairy_is_zero() {
        for n in 3..=6 {
            let c = build_hairy_gk(0, n, Family::Full).unwrap();
            assert!(c.complex.dims.iter().all(|&d| d == 0));
        }
    }
}
