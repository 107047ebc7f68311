//! Punishment families `h c^∞ ρ` and the moves they offer the challenger.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ext_rat::Rational;
use crate::game::{canonical_rotation, cycle_mean_rewards, Game, PayoffVector, PlayerId, Requirement, VertexId};
use crate::graph::{bfs_path, induced_adjacency, is_strongly_connected, scc, simple_cycles};
use crate::linprog::sealed_feasible;
use crate::vertex_set::VertexSet;

/// A simple history `h`, a simple cycle `c` repeated a growing number of
/// times, then a tail play with payoff `tail_payoff` visiting exactly
/// `tail_occ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PunishmentFamily {
    pub h: Vec<VertexId>,
    pub c: Vec<VertexId>,
    pub tail_payoff: PayoffVector,
    pub tail_occ: VertexSet,
}

impl PunishmentFamily {
    pub fn anchor(&self) -> VertexId {
        self.h.first().copied().unwrap_or(self.c[0])
    }

    /// `h · c` as one walk.
    pub fn stem(&self) -> Vec<VertexId> {
        self.h.iter().chain(&self.c).copied().collect()
    }

    /// Every vertex visited by any element of the family.
    pub fn occ(&self) -> VertexSet {
        VertexSet::from_vertices(self.stem()).union(self.tail_occ)
    }

    pub fn tail_values(&self) -> Result<Vec<Rational>> {
        self.tail_payoff
            .0
            .iter()
            .map(|x| {
                x.as_finite()
                    .cloned()
                    .ok_or_else(|| Error::InvalidFamily("tail payoff must be finite".into()))
            })
            .collect()
    }

    /// Structural checks: simple `h` and `c`, `h · c` a walk closing on
    /// `first(c)`, finite tail payoff over all players, and a tail
    /// occurrence set entered from `last(c)`.
    pub fn check_shape(&self, game: &Game) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidFamily(m.to_string()));
        let n = game.num_vertices();
        if self.c.is_empty() {
            return bad("the punishing cycle is empty");
        }
        if self.h.iter().chain(&self.c).any(|v| v.0 >= n) || !self.tail_occ.is_subset_of(game.all_vertices()) {
            return bad("unknown vertex");
        }
        if VertexSet::from_vertices(self.h.iter().copied()).len() != self.h.len() {
            return bad("the history is not simple");
        }
        if VertexSet::from_vertices(self.c.iter().copied()).len() != self.c.len() {
            return bad("the cycle is not simple");
        }
        let mut walk = self.stem();
        walk.push(self.c[0]);
        if walk.windows(2).any(|w| !game.has_edge(w[0], w[1])) {
            return bad("h·c is not a walk closing on the cycle");
        }
        if self.tail_payoff.len() != game.num_players() {
            return bad("tail payoff has the wrong dimension");
        }
        self.tail_values()?;
        if self.tail_start(game).is_none() {
            return bad("no covering tail starts after the cycle");
        }
        Ok(())
    }

    /// First vertex of the tail: the least successor of `last(c)` lying in
    /// the first component of the tail's occurrence set, provided those
    /// components form a chain.
    pub fn tail_start(&self, game: &Game) -> Option<VertexId> {
        let (first, _) = chain_ends(game, self.tail_occ)?;
        let last_c = *self.c.last()?;
        game.successors(last_c).find(|&s| first.contains(s))
    }
}

/// First and last components of the subgraph induced by `set`, when its
/// condensation is a chain.
pub(crate) fn chain_ends(game: &Game, set: VertexSet) -> Option<(VertexSet, VertexSet)> {
    if set.is_empty() {
        return None;
    }
    let adj = induced_adjacency(game, set);
    let active: Vec<bool> = game.vertices().map(|v| set.contains(v)).collect();
    let cond = scc(&adj, Some(&active));
    if !cond.has_unique_topological_order() {
        return None;
    }
    let comp = |k: usize| VertexSet::from_vertices(cond.components[k].iter().map(|&v| VertexId(v)));
    Some((comp(0), comp(cond.components.len() - 1)))
}

/// True iff every vertex visited by the family gets its demand: the
/// common payoff of the family dominates `λ` on `Occ(h) ∪ Occ(c) ∪ W`.
pub fn family_is_consistent(game: &Game, lam: &Requirement, fam: &PunishmentFamily) -> bool {
    fam.occ()
        .iter()
        .all(|u| fam.tail_payoff.get(game.owner(u)) >= lam.get(u))
}

/// Checks that some play visiting exactly `W` after `c` has payoff `x̄`:
/// a strongly connected `W₂` in the last component of `W`, reachable by a
/// covering walk from the tail start, whose sealed cycle hull contains `x̄`.
pub fn family_is_realizable(game: &Game, fam: &PunishmentFamily, cycle_cap: usize) -> Result<bool> {
    fam.check_shape(game)?;
    let Some((_, last)) = chain_ends(game, fam.tail_occ) else {
        return Ok(false);
    };
    let x = &fam.tail_payoff.0;
    for w2 in last.subsets().filter(|&s| is_strongly_connected(game, s)) {
        let points: Vec<Vec<Rational>> = simple_cycles(game, w2, cycle_cap)?
            .iter()
            .map(|c| cycle_mean_rewards(game, c))
            .collect::<Result<_>>()?;
        if sealed_feasible(&points, x, x)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A walk in the game standing for one arc of the deviation graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    /// Total reward per player, the edge into the next segment included.
    pub rewards: Vec<Rational>,
    /// Number of edges.
    pub length: usize,
}

impl Segment {
    fn of_walk(game: &Game, walk: &[VertexId]) -> Segment {
        let rewards = game
            .players()
            .map(|p| game.walk_reward(walk, p).expect("segments follow edges"))
            .collect();
        Segment {
            rewards,
            length: walk.len() - 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreDeviation {
    pub at: VertexId,
    pub target: VertexId,
    pub segment: Segment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostDeviation {
    pub target: VertexId,
    pub segment: Segment,
}

/// Everything the challenger of player `i` can do against one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMoves {
    pub accept_tag: Rational,
    pub pre: Vec<PreDeviation>,
    pub post: Vec<PostDeviation>,
    /// Canonical rotation of the punishing cycle.
    pub cycle: Vec<VertexId>,
    /// Mean reward of player `i` along the punishing cycle.
    pub post_tag: Rational,
}

/// Deviations offered to player `i` by a family of valid shape.
///
/// Before the cycle, `i` may leave `h · c` at any of its vertices, the whole
/// stem included, by any edge other than the proposed continuation. After
/// the cycle, `i` may leave from any of its vertices in the tail or in the
/// cycle; such a deviation is worth at most the cycle's mean reward, which
/// becomes the tag. Its segment is a representative walk through one lap
/// of the cycle and a shortest connection inside the tail.
pub fn family_moves(game: &Game, player: PlayerId, fam: &PunishmentFamily) -> FamilyMoves {
    let stem = fam.stem();
    let mut pre = Vec::new();
    for (j, &at) in stem.iter().enumerate() {
        if game.owner(at) != player {
            continue;
        }
        let next = stem.get(j + 1).copied().unwrap_or(fam.c[0]);
        for target in game.successors(at).filter(|&u| u != next) {
            let mut walk = stem[..=j].to_vec();
            walk.push(target);
            pre.push(PreDeviation {
                at,
                target,
                segment: Segment::of_walk(game, &walk),
            });
        }
    }
    let mine = game.owned_by(player);
    let in_tail = fam.tail_occ.intersection(mine);
    let in_cycle = VertexSet::from_vertices(fam.c.iter().copied()).intersection(mine);
    let start = fam.tail_start(game);
    let mut targets = VertexSet::EMPTY;
    for y in in_tail.union(in_cycle).iter() {
        for u in game.successors(y) {
            targets = targets.with(u);
        }
    }
    let post = targets
        .iter()
        .map(|u| {
            let via_tail = start.and_then(|s| {
                bfs_path(game, fam.tail_occ, s, |y| in_tail.contains(y) && game.has_edge(y, u))
            });
            let mut walk = stem.clone();
            match via_tail {
                Some(path) => walk.extend(path),
                None => {
                    walk.push(fam.c[0]);
                    let k = fam.c.iter().position(|&y| in_cycle.contains(y) && game.has_edge(y, u));
                    walk.extend(&fam.c[1..=k.expect("target comes from the tail or the cycle")]);
                }
            }
            walk.push(u);
            PostDeviation {
                target: u,
                segment: Segment::of_walk(game, &walk),
            }
        })
        .collect();
    let post_tag = cycle_mean_rewards(game, &fam.c).expect("valid family")[player.0].clone();
    FamilyMoves {
        accept_tag: fam.tail_payoff.get(player).as_finite().cloned().unwrap_or_else(Rational::zero),
        pre,
        post,
        cycle: canonical_rotation(&fam.c),
        post_tag,
    }
}
