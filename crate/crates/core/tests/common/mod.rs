//! Brute-force stable graph counts, independent of the library.
//!
//! A graph is a vertex set with weights, an edge multiplicity for every
//! unordered vertex pair (loops on the diagonal) and a vertex for every leg.
//! Isomorphism classes come from minimizing over all vertex permutations,
//! which is only feasible for tiny graphs.

#![allow(dead_code)]

use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Legs {
    /// Legs carry distinct labels.
    Labeled,
    /// Legs are indistinguishable hairs.
    Hairs,
}

/// Per edge count: `(classes, surviving classes)`.
pub fn brute_force_counts(g: u32, n: usize, legs: Legs) -> Vec<(usize, usize)> {
    let top = (3 * g as usize + n).saturating_sub(3);
    (0..=top).map(|e| count_with_edges(g, n, e, legs)).collect()
}

fn permutations(v: usize) -> Vec<Vec<usize>> {
    if v == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(v - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, v - 1);
            out.push(q);
        }
    }
    out
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Weights followed by the upper triangle of the multiplicity matrix.
type Base = Vec<usize>;

fn pair_index(v: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // row-major upper triangle including the diagonal
    i * v - i * (i + 1) / 2 + j + v
}

fn mult(b: &Base, v: usize, i: usize, j: usize) -> usize {
    b[pair_index(v, i, j)]
}

fn permute_base(b: &Base, v: usize, p: &[usize]) -> Base {
    let mut out = b.clone();
    for i in 0..v {
        out[p[i]] = b[i];
        for j in i..v {
            out[pair_index(v, p[i], p[j])] = b[pair_index(v, i, j)];
        }
    }
    out
}

fn connected(b: &Base, v: usize) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..v {
            if !seen[j] && mult(b, v, i, j) > 0 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn count_with_edges(g: u32, n: usize, e: usize, legs: Legs) -> (usize, usize) {
    let mut classes = 0;
    let mut surviving = 0;
    for v in 1..=e + 1 {
        let h1 = e + 1 - v;
        if h1 > g as usize {
            continue;
        }
        let total_weight = g as usize - h1;
        let perms = permutations(v);
        let slots = v * (v + 1) / 2;
        let mut bases = BTreeSet::new();
        for w in compositions(total_weight, v) {
            for m in compositions(e, slots) {
                let b: Base = w.iter().chain(&m).copied().collect();
                if !connected(&b, v) {
                    continue;
                }
                let canon = perms.iter().map(|p| permute_base(&b, v, p)).min().unwrap();
                bases.insert(canon);
            }
        }
        for b in bases {
            let auts: Vec<&Vec<usize>> = perms.iter().filter(|p| permute_base(&b, v, p) == b).collect();
            let (c, s) = count_leg_orbits(&b, v, n, legs, &auts);
            classes += c;
            surviving += s;
        }
    }
    (classes, surviving)
}

fn stable(b: &Base, v: usize, hairs_at: &[usize]) -> bool {
    (0..v).all(|i| {
        let val: usize = (0..v).map(|j| if i == j { 2 * mult(b, v, i, i) } else { mult(b, v, i, j) }).sum::<usize>()
            + hairs_at[i];
        2 * b[i] + val > 2
    })
}

fn perm_sign(images: &[usize]) -> i32 {
    let mut seen = vec![false; images.len()];
    let mut sign = 1;
    for s in 0..images.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = images[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Sign of the edge permutation induced by a vertex automorphism, for a
/// graph without repeated edges.
fn edge_sign(b: &Base, v: usize, p: &[usize]) -> i32 {
    let edges: Vec<(usize, usize)> = (0..v)
        .flat_map(|i| (i..v).map(move |j| (i, j)))
        .filter(|&(i, j)| mult(b, v, i, j) == 1)
        .collect();
    let images: Vec<usize> = edges
        .iter()
        .map(|&(i, j)| {
            let (a, c) = (p[i].min(p[j]), p[i].max(p[j]));
            edges.iter().position(|&x| x == (a, c)).unwrap()
        })
        .collect();
    perm_sign(&images)
}

fn count_leg_orbits(b: &Base, v: usize, n: usize, legs: Legs, auts: &[&Vec<usize>]) -> (usize, usize) {
    let repeated_edge = (0..v).any(|i| (i..v).any(|j| mult(b, v, i, j) > 1));
    let mut classes = 0;
    let mut surviving = 0;
    match legs {
        Legs::Labeled => {
            // assignments of legs to vertices, one orbit representative each
            let total = v.pow(n as u32);
            for code in 0..total {
                let mut assign = vec![0; n];
                let mut c = code;
                for a in assign.iter_mut() {
                    *a = c % v;
                    c /= v;
                }
                let image = |p: &Vec<usize>| assign.iter().map(|&x| p[x]).collect::<Vec<_>>();
                if auts.iter().any(|p| image(p) < assign) {
                    continue;
                }
                let mut hairs_at = vec![0; v];
                for &a in &assign {
                    hairs_at[a] += 1;
                }
                if !stable(b, v, &hairs_at) {
                    continue;
                }
                classes += 1;
                let dies = repeated_edge
                    || auts.iter().any(|p| image(p) == assign && edge_sign(b, v, p) < 0);
                if !dies {
                    surviving += 1;
                }
            }
        }
        Legs::Hairs => {
            for hairs_at in compositions(n, v) {
                let image = |p: &Vec<usize>| {
                    let mut out = vec![0; v];
                    for i in 0..v {
                        out[p[i]] = hairs_at[i];
                    }
                    out
                };
                if auts.iter().any(|p| image(p) < hairs_at) {
                    continue;
                }
                if !stable(b, v, &hairs_at) {
                    continue;
                }
                classes += 1;
                let dies = repeated_edge
                    || hairs_at.iter().any(|&h| h > 1)
                    || auts.iter().any(|p| {
                        if image(p) != hairs_at {
                            return false;
                        }
                        let holders: Vec<usize> = (0..v).filter(|&i| hairs_at[i] == 1).collect();
                        let images: Vec<usize> =
                            holders.iter().map(|&i| holders.iter().position(|&x| x == p[i]).unwrap()).collect();
                        edge_sign(b, v, p) * perm_sign(&images) < 0
                    });
                if !dies {
                    surviving += 1;
                }
            }
        }
    }
    (classes, surviving)
}

/// All `(g, n)` with `2g - 2 + n > 0` and `3g - 3 + n <= bound`.
pub fn envelope(bound: usize) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for g in 0..=(bound as u32 + 3) / 3 {
        for n in 0..=bound + 3 {
            if 2 * g as usize + n > 2 && 3 * g as usize + n <= bound + 3 {
                out.push((g, n));
            }
        }
    }
    out
}
