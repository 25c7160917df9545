//! Rank modulo word-sized primes.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SparseMatrixZ;

const SEED: u64 = 0x6b67_7261_7068;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `count` distinct 62-bit primes from a fixed-seed generator.
pub fn primes(count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime(c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn reduce(v: i64, p: u64) -> u64 {
    (v as i128).rem_euclid(p as i128) as u64
}

/// Rank of `m` over `F_p`.
pub fn rank_mod_p(m: &SparseMatrixZ, p: u64) -> usize {
    let mut rows: Vec<Vec<(usize, u64)>> = m
        .row_lists()
        .into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c, reduce(v, p))).filter(|x| x.1 != 0).collect())
        .filter(|r: &Vec<(usize, u64)>| !r.is_empty())
        .collect();
    rows.sort_by_key(|r| r.len());
    // pivot rows are normalized to leading coefficient 1
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for mut row in rows {
        loop {
            let Some(&(c, a)) = row.first() else { break };
            match pivots.get(&c) {
                Some(piv) => row = axpy(&row, piv, p - a, p),
                None => {
                    let inv = powmod(a, p - 2, p);
                    for x in &mut row {
                        x.1 = mulmod(x.1, inv, p);
                    }
                    pivots.insert(c, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `x + s*y` for sorted sparse rows mod `p`.
fn axpy(x: &[(usize, u64)], y: &[(usize, u64)], s: u64, p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i]);
            i += 1;
        } else if take_y {
            out.push((y[j].0, mulmod(y[j].1, s, p)));
            j += 1;
        } else {
            let v = (x[i].1 + mulmod(y[j].1, s, p)) % p;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(97) && is_prime((1 << 61) - 1));
        assert!(!is_prime(1) && !is_prime(561) && !is_prime(3215031751));
        for p in primes(3) {
            assert!(is_prime(p) && (1 << 61..1 << 62).contains(&p));
        }
    }

    #[test]
    fn small_ranks() {
        let p = primes(1)[0];
        assert_eq!(rank_mod_p(&SparseMatrixZ::zero(5, 7), p), 0);
        assert_eq!(rank_mod_p(&SparseMatrixZ::identity(4), p), 4);
        let m = SparseMatrixZ::from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank_mod_p(&m, p), 2);
        // rank drops modulo 5
        let m = SparseMatrixZ::from_dense(&[vec![5, 0], vec![0, 1]]);
        assert_eq!(rank_mod_p(&m, 5), 1);
    }
}
