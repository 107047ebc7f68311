//! Johnson's enumeration of elementary circuits.

use crate::error::{Error, Result};
use crate::game::{Game, VertexId};
use crate::graph::{induced_adjacency, scc};
use crate::vertex_set::VertexSet;

pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

/// Simple cycles of an induced subgraph, each starting at its least vertex,
/// in a deterministic order.
pub type SimpleCycleSet = Vec<Vec<VertexId>>;

/// Simple cycles of the subgraph of `game` induced by `set`.
pub fn simple_cycles(game: &Game, set: VertexSet, cap: usize) -> Result<SimpleCycleSet> {
    let adj = induced_adjacency(game, set);
    Ok(simple_cycles_adj(&adj, cap)?
        .into_iter()
        .map(|c| c.into_iter().map(VertexId).collect())
        .collect())
}

/// Simple cycles of the digraph `adj`. Each cycle starts at its least node;
/// cycles are ordered by least node, then by depth-first discovery along
/// increasing successors. Fails once more than `cap` cycles are found.
pub fn simple_cycles_adj(adj: &[Vec<usize>], cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = adj.len();
    let mut adj: Vec<Vec<usize>> = adj.to_vec();
    for l in &mut adj {
        l.sort_unstable();
        l.dedup();
    }
    let mut out = Vec::new();
    for s in 0..n {
        // Component of s in the subgraph induced by nodes >= s.
        let active: Vec<bool> = (0..n).map(|v| v >= s).collect();
        let cond = scc(&adj, Some(&active));
        let comp = cond.comp_of[s];
        let allowed: Vec<bool> = (0..n).map(|v| v >= s && cond.comp_of[v] == comp).collect();
        let mut search = Search {
            adj: &adj,
            allowed: &allowed,
            start: s,
            blocked: vec![false; n],
            blist: vec![Vec::new(); n],
            stack: Vec::new(),
            out: &mut out,
            cap,
        };
        search.circuit(s)?;
    }
    Ok(out)
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    allowed: &'a [bool],
    start: usize,
    blocked: Vec<bool>,
    blist: Vec<Vec<usize>>,
    stack: Vec<usize>,
    out: &'a mut Vec<Vec<usize>>,
    cap: usize,
}

impl Search<'_> {
    fn circuit(&mut self, v: usize) -> Result<bool> {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in self.adj[v].iter().filter(|&&w| self.allowed[w]) {
            if w == self.start {
                if self.out.len() >= self.cap {
                    return Err(Error::CapExceeded {
                        what: "simple cycles",
                        cap: self.cap,
                    });
                }
                self.out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in self.adj[v].iter().filter(|&&w| self.allowed[w]) {
                if !self.blist[w].contains(&v) {
                    self.blist[w].push(v);
                }
            }
        }
        self.stack.pop();
        Ok(found)
    }

    fn unblock(&mut self, u: usize) {
        self.blocked[u] = false;
        for w in std::mem::take(&mut self.blist[u]) {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures;
    use crate::testgen;
    use proptest::prelude::*;
    use rand::Rng;
    use std::collections::BTreeSet;

    /// Exhaustive DFS over simple paths from each start, closing back to it.
    pub(crate) fn brute_cycles(adj: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
        fn go(adj: &[Vec<usize>], path: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
            let last = *path.last().unwrap();
            for &w in &adj[last] {
                if w == path[0] {
                    out.insert(path.clone());
                } else if w > path[0] && !path.contains(&w) {
                    path.push(w);
                    go(adj, path, out);
                    path.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        for s in 0..adj.len() {
            go(adj, &mut vec![s], &mut out);
        }
        out
    }

    #[test]
    fn two_state_has_three_cycles() {
        let g = fixtures::two_state();
        let cs = simple_cycles(&g, g.all_vertices(), DEFAULT_CYCLE_CAP).unwrap();
        let a = VertexId(0);
        let b = VertexId(1);
        assert_eq!(cs, vec![vec![a], vec![a, b], vec![b]]);
    }

    #[test]
    fn single_vertex_without_loop_has_none() {
        let g = fixtures::tree7();
        let a = g.vertex_by_name("a").unwrap();
        assert!(simple_cycles(&g, VertexSet::singleton(a), 10)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn cap_is_reported() {
        let g = fixtures::two_state();
        let err = simple_cycles(&g, g.all_vertices(), 2).unwrap_err();
        assert!(err.is_cap());
    }

    #[test]
    fn matches_brute_force_on_random_digraphs() {
        let mut r = testgen::rng(5);
        for _ in 0..300 {
            let n = r.gen_range(1..=7);
            let p = r.gen_range(0.1..0.6);
            let adj: Vec<Vec<usize>> = (0..n)
                .map(|_| (0..n).filter(|_| r.gen_bool(p)).collect())
                .collect();
            let got = simple_cycles_adj(&adj, DEFAULT_CYCLE_CAP).unwrap();
            let set: BTreeSet<Vec<usize>> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len(), "duplicates in {got:?}");
            assert_eq!(set, brute_cycles(&adj));
        }
    }

    proptest! {
        #[test]
        fn cycles_grow_with_the_inducing_set(seed in 0u64..400, a in 0u64..64, b in 0u64..64) {
            let g = testgen::random_game(seed, 6, 2);
            let small = VertexSet(a & b & 0b111111);
            let big = VertexSet((a | b) & 0b111111);
            let cs: BTreeSet<_> = simple_cycles(&g, small, DEFAULT_CYCLE_CAP).unwrap().into_iter().collect();
            let cb: BTreeSet<_> = simple_cycles(&g, big, DEFAULT_CYCLE_CAP).unwrap().into_iter().collect();
            prop_assert!(cs.is_subset(&cb));
            for c in &cb {
                prop_assert!(c.iter().all(|&v| big.contains(v)));
            }
        }
    }
}
