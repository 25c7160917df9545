mod common;

use common::{brute_force_counts, envelope, Legs};
use gkgraph::canonical::Mode;
use gkgraph::enumeration::enumerate_graphs;

fn library_counts(g: u32, n: usize, mode: Mode) -> Vec<(usize, usize)> {
    let e = enumerate_graphs(g, n, mode, None).unwrap();
    (0..=e.top_edges())
        .map(|k| {
            let cs = e.with_edges(k);
            (cs.len(), cs.iter().filter(|c| c.survives()).count())
        })
        .collect()
}

#[test]
fn labeled_counts_match_brute_force() {
    for (g, n) in envelope(4) {
        assert_eq!(library_counts(g, n, Mode::Labeled), brute_force_counts(g, n, Legs::Labeled), "(g,n)=({g},{n})");
    }
}

#[test]
fn hairy_counts_match_brute_force() {
    for (g, n) in envelope(4) {
        assert_eq!(library_counts(g, n, Mode::Hairy), brute_force_counts(g, n, Legs::Hairs), "(g,n)=({g},{n})");
    }
}

#[test]
fn known_counts() {
    // trees with four leaves; the genus-two list from the one-edge level up
    assert_eq!(brute_force_counts(0, 4, Legs::Labeled), vec![(1, 1), (3, 3)]);
    assert_eq!(
        brute_force_counts(2, 0, Legs::Labeled).iter().map(|c| c.0).collect::<Vec<_>>(),
        vec![1, 2, 2, 2]
    );
}
