//! Sign-isotypic part of the labeled complex under relabeling of markings,
//! compared with the count of surviving unlabeled (hairy) classes.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_form, CanonicalKey, Mode};
use crate::enumeration::{enumerate_graphs, Enumeration};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiinvariantCount {
    pub g: u32,
    pub n: usize,
    pub edges: usize,
    pub labeled: usize,
    pub hairy: usize,
}

/// Dimension of `{x : σx = sgn(σ)x for all σ ∈ Σ_n}` inside the span of the
/// surviving labeled classes with `k` edges.
///
/// The span is a signed permutation module, so the sign-isotypic part has
/// one dimension per orbit on which the required coefficients `c(s_i Γ) =
/// -ε c(Γ)` are consistent, `ε` being the transport sign of `s_i`.
pub fn labeled_antiinvariant_count(e: &Enumeration, k: usize) -> Result<usize> {
    assert_eq!(e.mode, Mode::Labeled);
    let classes: Vec<_> = e.with_edges(k).iter().filter(|c| c.survives()).collect();
    let index: HashMap<&CanonicalKey, usize> = classes.iter().enumerate().map(|(i, c)| (&c.key, i)).collect();
    let n = e.n;
    let act = |i: usize, s: usize| -> Result<(usize, i32)> {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(s, s + 1);
        let moved = classes[i].graph.permute_labels(&p);
        let form = canonical_form(&moved, Mode::Labeled);
        let j = *index.get(&form.key).ok_or_else(|| {
            Error::Consistency("relabeling maps a surviving class to a killed one".into())
        })?;
        let eps = form.relabeling.orientation_sign(&moved, &form.representative, Mode::Labeled);
        Ok((j, eps))
    };
    let mut coef: Vec<i32> = vec![0; classes.len()];
    let mut count = 0;
    for start in 0..classes.len() {
        if coef[start] != 0 {
            continue;
        }
        coef[start] = 1;
        let mut consistent = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for s in 0..n.saturating_sub(1) {
                let (j, eps) = act(i, s)?;
                let want = -eps * coef[i];
                if coef[j] == 0 {
                    coef[j] = want;
                    queue.push_back(j);
                } else if coef[j] != want {
                    consistent = false;
                }
            }
        }
        if consistent {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of surviving hairy classes with `k` edges.
pub fn hairy_surviving_count(e: &Enumeration, k: usize) -> usize {
    assert_eq!(e.mode, Mode::Hairy);
    e.with_edges(k).iter().filter(|c| c.survives()).count()
}

/// Both counts for every edge degree of `(g, n)`; errors on a mismatch.
pub fn antiinvariants_dim(g: u32, n: usize) -> Result<Vec<AntiinvariantCount>> {
    let lab = enumerate_graphs(g, n, Mode::Labeled, None)?;
    let hairy = enumerate_graphs(g, n, Mode::Hairy, None)?;
    let mut out = Vec::new();
    for k in 0..=lab.top_edges().max(hairy.top_edges()) {
        let c = AntiinvariantCount {
            g,
            n,
            edges: k,
            labeled: labeled_antiinvariant_count(&lab, k)?,
            hairy: hairy_surviving_count(&hairy, k),
        };
        if c.labeled != c.hairy {
            return Err(Error::Consistency(format!(
                "antiinvariants at (g,n,k)=({g},{n},{k}): labeled {} vs hairy {}",
                c.labeled, c.hairy
            )));
        }
        out.push(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corolla_one_two() {
        let r = antiinvariants_dim(1, 2).unwrap();
        assert_eq!((r[0].labeled, r[0].hairy), (0, 0));
    }

    #[test]
    fn agree_small() {
        for (g, n) in [(0, 4), (0, 5), (1, 3), (2, 1), (2, 2)] {
            antiinvariants_dim(g, n).unwrap();
        }
    }
}
