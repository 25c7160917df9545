//! Small helpers for permutations stored as image vectors (`p[i]` is the image of `i`).

use std::collections::{HashSet, VecDeque};

/// Sign of a permutation, `1` or `-1`.
pub fn sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut s = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            s = -s;
        }
    }
    s
}

/// `a ∘ b`, i.e. apply `b` first.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

pub fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// All elements of the group generated by `gens` acting on `0..n`,
/// in breadth-first order starting from the identity.
pub fn closure(gens: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let id = identity(n);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(g, &x);
            if seen.insert(y.clone()) {
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    out
}

/// Adjacent transposition `s_i` swapping `i` and `i+1` on `0..n`.
pub fn adjacent_transposition(n: usize, i: usize) -> Vec<usize> {
    let mut p = identity(n);
    p.swap(i, i + 1);
    p
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p = identity(n);
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs() {
        assert_eq!(sign(&[0, 1, 2]), 1);
        assert_eq!(sign(&[1, 0, 2]), -1);
        assert_eq!(sign(&[1, 2, 0]), 1);
        assert_eq!(sign(&[]), 1);
    }

    #[test]
    fn compose_and_inverse() {
        let a = vec![1, 2, 0];
        let b = vec![0, 2, 1];
        let ab = compose(&a, &b);
        assert_eq!(ab, vec![1, 0, 2]);
        assert_eq!(compose(&a, &inverse(&a)), identity(3));
        assert_eq!(sign(&ab), sign(&a) * sign(&b));
    }

    #[test]
    fn symmetric_group_closure() {
        let gens: Vec<_> = (0..3).map(|i| adjacent_transposition(4, i)).collect();
        assert_eq!(closure(&gens, 4).len(), 24);
    }

    #[test]
    fn heap_visits_all() {
        let mut all = HashSet::new();
        for_each_permutation(5, |p| {
            all.insert(p.to_vec());
        });
        assert_eq!(all.len(), 120);
    }
}
