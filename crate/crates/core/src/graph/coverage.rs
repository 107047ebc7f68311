use crate::error::{Error, Result};
use crate::game::{Game, VertexId};
use crate::graph::{induced_adjacency, scc};
use crate::vertex_set::VertexSet;

/// True iff `set` is nonempty, strongly connected in the subgraph it
/// induces, and carries at least one edge (so a play can stay in it).
pub fn is_strongly_connected(game: &Game, set: VertexSet) -> bool {
    let Some(first) = set.first() else {
        return false;
    };
    let adj = induced_adjacency(game, set);
    let active: Vec<bool> = game.vertices().map(|v| set.contains(v)).collect();
    let cond = scc(&adj, Some(&active));
    let comp = cond.comp_of[first.0];
    set.iter().all(|v| cond.comp_of[v.0] == comp) && (set.len() > 1 || adj[first.0].contains(&first.0))
}

/// Decides whether a finite walk from `v0` inside `wp` visits exactly the
/// vertices of `wp` and ends on a vertex with an edge into `w`.
///
/// Such a walk crosses the components of the subgraph induced by `wp` in
/// topological order and cannot come back, so it exists iff that
/// condensation is a chain starting with the component of `v0` and ending
/// with the one containing `w`.
pub fn coverage_walk_exists(game: &Game, v0: VertexId, w: VertexSet, wp: VertexSet) -> Result<bool> {
    if !w.is_subset_of(wp) {
        return Err(Error::Precondition("W is not a subset of W'".into()));
    }
    if !wp.contains(v0) {
        return Err(Error::Precondition("the initial vertex is not in W'".into()));
    }
    if !is_strongly_connected(game, w) {
        return Err(Error::Precondition("W is not strongly connected".into()));
    }
    let adj = induced_adjacency(game, wp);
    let active: Vec<bool> = game.vertices().map(|v| wp.contains(v)).collect();
    let cond = scc(&adj, Some(&active));
    let last = cond.components.len() - 1;
    Ok(cond.has_unique_topological_order()
        && cond.comp_of[v0.0] == 0
        && w.iter().all(|x| cond.comp_of[x.0] == last))
}
