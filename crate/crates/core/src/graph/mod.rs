//! Graph algorithms over game arenas and weighted digraphs.

mod coverage;
mod cycles;
mod karp;
mod maximin;
mod scc;

pub use coverage::{coverage_walk_exists, is_strongly_connected};
pub use cycles::{simple_cycles, simple_cycles_adj, SimpleCycleSet, DEFAULT_CYCLE_CAP};
pub use karp::{karp_max_mean_cycle, MeanCycle};
pub use maximin::{maximin_cycle_above, maximin_cycle_value};
pub use scc::{scc, Condensation};

use crate::ext_rat::Rational;
use crate::game::{Game, VertexId};
use crate::vertex_set::VertexSet;

/// An arc with an exact weight and a positive integer length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedArc {
    pub src: usize,
    pub dst: usize,
    pub weight: Rational,
    pub length: usize,
}

/// A digraph on nodes `0..num_nodes` whose arcs stand for walks of a given
/// length and total weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedDigraph {
    pub num_nodes: usize,
    pub arcs: Vec<WeightedArc>,
}

impl WeightedDigraph {
    pub fn new(num_nodes: usize) -> Self {
        WeightedDigraph {
            num_nodes,
            arcs: Vec::new(),
        }
    }

    /// Adds an arc; lengths below 1 are rejected by a panic since every
    /// caller builds lengths from nonempty walks.
    pub fn add_arc(&mut self, src: usize, dst: usize, weight: Rational, length: usize) {
        assert!(length >= 1, "arc length must be positive");
        assert!(src < self.num_nodes && dst < self.num_nodes);
        self.arcs.push(WeightedArc {
            src,
            dst,
            weight,
            length,
        });
    }

    /// Outgoing arc indices per node.
    pub fn out_arcs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_nodes];
        for (k, a) in self.arcs.iter().enumerate() {
            out[a.src].push(k);
        }
        out
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for a in &self.arcs {
            adj[a.src].push(a.dst);
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }

    /// Nodes reachable from `source`, source included.
    pub fn reachable_from(&self, source: usize) -> Vec<bool> {
        reachable(&self.adjacency(), source)
    }

    /// Game graph with the rewards of one player, all arcs of length 1.
    pub fn from_game(game: &Game, player: crate::game::PlayerId) -> Self {
        let mut g = WeightedDigraph::new(game.num_vertices());
        for e in game.edges() {
            g.add_arc(e.from.0, e.to.0, e.rewards[player.0].clone(), 1);
        }
        g
    }
}

pub(crate) fn reachable(adj: &[Vec<usize>], source: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![source];
    seen[source] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Adjacency lists of the subgraph of `game` induced by `set`, indexed by
/// vertex id; vertices outside `set` get empty lists.
pub fn induced_adjacency(game: &Game, set: VertexSet) -> Vec<Vec<usize>> {
    game.vertices()
        .map(|v| {
            if set.contains(v) {
                game.successors(v)
                    .filter(|&w| set.contains(w))
                    .map(|w| w.0)
                    .collect()
            } else {
                Vec::new()
            }
        })
        .collect()
}

/// Shortest walk (fewest edges) inside `set` from `from` to a vertex
/// satisfying `goal`, ties broken towards smaller vertex ids.
pub fn bfs_path(
    game: &Game,
    set: VertexSet,
    from: VertexId,
    goal: impl Fn(VertexId) -> bool,
) -> Option<Vec<VertexId>> {
    if !set.contains(from) {
        return None;
    }
    let n = game.num_vertices();
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([from]);
    seen[from.0] = true;
    while let Some(u) = queue.pop_front() {
        if goal(u) {
            let mut path = vec![u];
            let mut cur = u;
            while let Some(p) = parent[cur.0] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for w in game.successors(u) {
            if set.contains(w) && !seen[w.0] {
                seen[w.0] = true;
                parent[w.0] = Some(u);
                queue.push_back(w);
            }
        }
    }
    None
}
