use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// Strongly connected components with their condensation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    /// Components in topological order: arcs only go from lower to higher
    /// indices. Each component lists its nodes in increasing order.
    pub components: Vec<Vec<usize>>,
    /// Component index of every node.
    pub comp_of: Vec<usize>,
    /// Deduplicated arcs between distinct components.
    pub dag_arcs: BTreeSet<(usize, usize)>,
}

impl Condensation {
    /// True iff the condensation admits exactly one topological order, that
    /// is, consecutive components are joined by an arc.
    pub fn has_unique_topological_order(&self) -> bool {
        (1..self.components.len()).all(|k| self.dag_arcs.contains(&(k - 1, k)))
    }
}

/// Computes the SCCs of the digraph given by `adj` restricted to the nodes
/// with `active[v]` set (all nodes when `active` is `None`). Inactive nodes
/// get `comp_of = usize::MAX`.
pub fn scc(adj: &[Vec<usize>], active: Option<&[bool]>) -> Condensation {
    let n = adj.len();
    let on = |v: usize| active.is_none_or(|a| a[v]);
    let mut g: DiGraph<usize, ()> = DiGraph::new();
    let mut idx = vec![None; n];
    for v in (0..n).filter(|&v| on(v)) {
        idx[v] = Some(g.add_node(v));
    }
    for u in (0..n).filter(|&u| on(u)) {
        for &v in &adj[u] {
            if let (Some(a), Some(b)) = (idx[u], idx[v]) {
                g.add_edge(a, b, ());
            }
        }
    }
    // tarjan_scc yields components in reverse topological order.
    let mut raw: Vec<Vec<NodeIndex>> = tarjan_scc(&g);
    raw.reverse();
    let mut comp_of = vec![usize::MAX; n];
    let components: Vec<Vec<usize>> = raw
        .iter()
        .enumerate()
        .map(|(k, comp)| {
            let mut nodes: Vec<usize> = comp.iter().map(|&i| g[i]).collect();
            nodes.sort_unstable();
            for &v in &nodes {
                comp_of[v] = k;
            }
            nodes
        })
        .collect();
    let mut dag_arcs = BTreeSet::new();
    for u in (0..n).filter(|&u| on(u)) {
        for &v in adj[u].iter().filter(|&&v| on(v)) {
            if comp_of[u] != comp_of[v] {
                dag_arcs.insert((comp_of[u], comp_of[v]));
            }
        }
    }
    Condensation {
        components,
        comp_of,
        dag_arcs,
    }
}
