//! Exhaustive enumeration of the topologies on a small labelled ground set.
//!
//! A finite topology is fixed by its minimal neighbourhoods, which form a
//! preorder. The search assigns neighbourhoods point by point and prunes as
//! soon as transitivity fails among the assigned points.

use crate::bits::{self, Subset};
use crate::error::{Error, Result};
use crate::topology::{FinTopology, GroundSet};

/// Hard cap for the enumerator; 6 points already give 209527 topologies.
pub const ENUM_LIMIT: usize = 6;

/// All topologies on `ground`, sorted by their open-set lists.
pub fn all_topologies(ground: &GroundSet) -> Result<Vec<FinTopology>> {
    let n = ground.len();
    if n > ENUM_LIMIT {
        return Err(Error::Capacity(format!(
            "cannot enumerate topologies on {n} points"
        )));
    }
    let mut nb = vec![0 as Subset; n];
    let mut out = Vec::new();
    dfs(ground, 0, &mut nb, &mut out);
    out.sort_by(|a, b| a.opens().cmp(b.opens()));
    Ok(out)
}

fn dfs(ground: &GroundSet, i: usize, nb: &mut Vec<Subset>, out: &mut Vec<FinTopology>) {
    let n = nb.len();
    if i == n {
        if consistent(nb, n) {
            out.push(FinTopology::from_min_neighbourhoods(ground.clone(), nb));
        }
        return;
    }
    let others = bits::full(n) & !bits::single(i);
    let mut extra: Subset = 0;
    loop {
        nb[i] = extra | bits::single(i);
        if consistent(nb, i + 1) {
            dfs(ground, i + 1, nb, out);
        }
        if extra == others {
            break;
        }
        extra = (extra.wrapping_sub(others)) & others;
    }
}

/// Transitivity restricted to the first `k` points.
fn consistent(nb: &[Subset], k: usize) -> bool {
    let known = bits::full(k);
    for a in 0..k {
        for b in bits::members(nb[a] & known) {
            if !bits::is_subset(nb[b], nb[a]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Independent oracle: every family of subsets containing ∅ and X that is
    /// closed under union and intersection.
    fn brute_force(n: usize) -> BTreeSet<Vec<Subset>> {
        let full = bits::full(n);
        let middle: Vec<Subset> = (1..full).collect();
        let mut out = BTreeSet::new();
        for pick in 0u64..(1u64 << middle.len()) {
            let mut fam = vec![0, full];
            for (k, &s) in middle.iter().enumerate() {
                if pick >> k & 1 == 1 {
                    fam.push(s);
                }
            }
            let set: BTreeSet<Subset> = fam.iter().copied().collect();
            let closed = set.iter().all(|&a| {
                set.iter()
                    .all(|&b| set.contains(&(a | b)) && set.contains(&(a & b)))
            });
            if closed {
                out.insert(set.into_iter().collect());
            }
        }
        out
    }

    #[test]
    fn counts_match_brute_force() {
        for n in 1..=4 {
            let g = GroundSet::anonymous(n).unwrap();
            let fast: BTreeSet<Vec<Subset>> = all_topologies(&g)
                .unwrap()
                .iter()
                .map(|t| t.opens().to_vec())
                .collect();
            let slow = brute_force(n);
            assert_eq!(fast, slow, "n = {n}");
        }
    }

    #[test]
    fn known_counts() {
        let counts: Vec<usize> = (1..=5)
            .map(|n| {
                all_topologies(&GroundSet::anonymous(n).unwrap())
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(counts, vec![1, 4, 29, 355, 6942]);
    }

    #[test]
    fn deterministic_order() {
        let g = GroundSet::anonymous(3).unwrap();
        assert_eq!(all_topologies(&g).unwrap(), all_topologies(&g).unwrap());
    }
}
