//! Desk-scale evaluation of the negotiation function.
//!
//! For each player `i` the prover's candidate families are enumerated per
//! anchor, families that can only lose are pruned, and the best memoryless
//! prover strategy from each root owned by `i` is found by branch and bound
//! over the deviation graph value.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::ext_rat::{ExtRat, Rational};
use crate::game::{cycle_mean_rewards, Game, PayoffVector, PlayerId, Requirement, VertexId};
use crate::graph::{is_strongly_connected, simple_cycles, DEFAULT_CYCLE_CAP};
use crate::linprog::lexmin_in_hull;
use crate::negotiation::deviation::{assemble, prover_value, Choice, DevNode, ProverStrategy};
use crate::negotiation::family::{chain_ends, family_moves, FamilyMoves, PunishmentFamily};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegotiationOracleConfig {
    pub max_vertices: usize,
    pub max_simple_paths: usize,
    pub max_families: usize,
    /// Branch-and-bound nodes per root.
    pub max_search_nodes: usize,
    pub cycle_cap: usize,
    pub epsilon: Rational,
    pub max_iterations: usize,
}

impl Default for NegotiationOracleConfig {
    fn default() -> Self {
        NegotiationOracleConfig {
            max_vertices: 6,
            max_simple_paths: 100_000,
            max_families: 500_000,
            max_search_nodes: 1_000_000,
            cycle_cap: DEFAULT_CYCLE_CAP,
            epsilon: Rational::from_integer(0.into()),
            max_iterations: 64,
        }
    }
}

impl NegotiationOracleConfig {
    pub fn check(&self) -> Result<()> {
        let caps = [
            self.max_vertices,
            self.max_simple_paths,
            self.max_families,
            self.max_search_nodes,
            self.cycle_cap,
            self.max_iterations,
        ];
        if caps.contains(&0) {
            return Err(Error::Precondition("oracle caps must be positive".into()));
        }
        if self.epsilon < Rational::from_integer(0.into()) {
            return Err(Error::Precondition("epsilon must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Values of the negotiation function with, for each vertex, a prover
/// strategy achieving the value from there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegotiationOutcome {
    pub values: Requirement,
    pub strategies: Vec<ProverStrategy>,
}

/// A tail occurrence set `W` whose components form a chain, with the
/// strongly connected subsets of its last component and their cycle payoffs.
struct TailShape {
    occ: VertexSet,
    first: VertexSet,
    ends: Vec<(VertexSet, Vec<Vec<Rational>>)>,
}

/// Game-dependent data reused across requirements.
pub struct Oracle<'g> {
    game: &'g Game,
    cfg: NegotiationOracleConfig,
    lassos: Vec<Vec<(Vec<VertexId>, Vec<VertexId>)>>,
    tails: Vec<TailShape>,
}

struct Candidate {
    family: PunishmentFamily,
    moves: FamilyMoves,
    pre_max: BTreeMap<(VertexId, usize), Rational>,
    post_targets: VertexSet,
}

impl Candidate {
    fn new(game: &Game, player: PlayerId, family: PunishmentFamily) -> Self {
        let moves = family_moves(game, player, &family);
        let mut pre_max: BTreeMap<(VertexId, usize), Rational> = BTreeMap::new();
        for d in &moves.pre {
            let r = &d.segment.rewards[player.0];
            pre_max
                .entry((d.target, d.segment.length))
                .and_modify(|m| {
                    if r > m {
                        *m = r.clone()
                    }
                })
                .or_insert_with(|| r.clone());
        }
        let post_targets = VertexSet::from_vertices(moves.post.iter().map(|d| d.target));
        Candidate {
            family,
            moves,
            pre_max,
            post_targets,
        }
    }

    fn targets(&self) -> VertexSet {
        VertexSet::from_vertices(self.pre_max.keys().map(|k| k.0)).union(self.post_targets)
    }

    /// Whatever the challenger does against `other` it can do against
    /// `self` for at least as much: no larger acceptance tag, each
    /// pre-cycle deviation matched by one to the same target over a segment
    /// of the same length and no smaller reward, and post-cycle deviations
    /// to a subset of targets under a cycle tag no larger.
    fn dominates(&self, other: &Candidate) -> bool {
        self.moves.accept_tag <= other.moves.accept_tag
            && self
                .pre_max
                .iter()
                .all(|(k, r)| other.pre_max.get(k).is_some_and(|s| r <= s))
            && (self.post_targets.is_empty()
                || (self.post_targets.is_subset_of(other.post_targets) && self.moves.post_tag <= other.moves.post_tag))
    }
}

impl<'g> Oracle<'g> {
    pub fn new(game: &'g Game, cfg: &NegotiationOracleConfig) -> Result<Self> {
        cfg.check()?;
        if game.num_vertices() > cfg.max_vertices {
            return Err(Error::CapExceeded {
                what: "game vertices for the negotiation oracle",
                cap: cfg.max_vertices,
            });
        }
        let mut paths = 0usize;
        let mut lassos = Vec::new();
        for v in game.vertices() {
            let mut out = Vec::new();
            let mut path = vec![v];
            lasso_forms(game, &mut path, &mut out, &mut paths, cfg.max_simple_paths)?;
            lassos.push(out);
        }
        let mut tails = Vec::new();
        for occ in game.all_vertices().subsets().filter(|s| !s.is_empty()) {
            let Some((first, last)) = chain_ends(game, occ) else { continue };
            let mut ends = Vec::new();
            for w2 in last.subsets().filter(|&s| is_strongly_connected(game, s)) {
                let points = simple_cycles(game, w2, cfg.cycle_cap)?
                    .iter()
                    .map(|c| cycle_mean_rewards(game, c))
                    .collect::<Result<Vec<_>>>()?;
                ends.push((w2, points));
            }
            if !ends.is_empty() {
                tails.push(TailShape { occ, first, ends });
            }
        }
        Ok(Oracle {
            game,
            cfg: cfg.clone(),
            lassos,
            tails,
        })
    }

    /// Candidate families per anchor for the challenger of `player`,
    /// consistent with `lam`: for every lasso `h c` from the anchor and every
    /// tail shape entered from `last(c)`, the lexicographically least
    /// consistent tail payoff (the player's own coordinate first).
    pub fn candidate_families(&self, lam: &Requirement, player: PlayerId) -> Result<Vec<Vec<PunishmentFamily>>> {
        lam.check_for(self.game)?;
        let game = self.game;
        let mut order = vec![player.0];
        order.extend((0..game.num_players()).filter(|&j| j != player.0));
        let mut memo: HashMap<(VertexSet, VertexSet), Option<Vec<Rational>>> = HashMap::new();
        let mut total = 0usize;
        let mut out = Vec::new();
        for forms in &self.lassos {
            let mut fams = Vec::new();
            for (h, c) in forms {
                let stem = VertexSet::from_vertices(h.iter().chain(c).copied());
                let last = *c.last().expect("nonempty cycle");
                for tail in &self.tails {
                    if !game.successors(last).any(|s| tail.first.contains(s)) {
                        continue;
                    }
                    let s = stem.union(tail.occ);
                    let demands = lam.demands(game, s);
                    if demands.contains(&ExtRat::PosInf) {
                        continue;
                    }
                    let mut best: Option<Vec<Rational>> = None;
                    for (w2, points) in &tail.ends {
                        let x = memo
                            .entry((*w2, s))
                            .or_insert_with(|| lexmin_in_hull(points, &demands, &order))
                            .clone();
                        if let Some(x) = x {
                            let key = |z: &Vec<Rational>| order.iter().map(|&j| z[j].clone()).collect::<Vec<_>>();
                            if best.as_ref().is_none_or(|b| key(&x) < key(b)) {
                                best = Some(x);
                            }
                        }
                    }
                    if let Some(x) = best {
                        total += 1;
                        if total > self.cfg.max_families {
                            return Err(Error::CapExceeded {
                                what: "punishment families",
                                cap: self.cfg.max_families,
                            });
                        }
                        fams.push(PunishmentFamily {
                            h: h.clone(),
                            c: c.clone(),
                            tail_payoff: PayoffVector::from_rationals(x),
                            tail_occ: tail.occ,
                        });
                    }
                }
            }
            out.push(fams);
        }
        Ok(out)
    }

    /// Candidates that can matter: families that let the challenger reach a
    /// vertex without any candidate are dropped (the prover would have to
    /// give up there), then dominated families are dropped.
    fn pruned_candidates(&self, lam: &Requirement, player: PlayerId) -> Result<Vec<Vec<Candidate>>> {
        let mut cands: Vec<Vec<Candidate>> = self
            .candidate_families(lam, player)?
            .into_iter()
            .map(|fs| fs.into_iter().map(|f| Candidate::new(self.game, player, f)).collect())
            .collect();
        loop {
            let alive = VertexSet::from_vertices(self.game.vertices().filter(|v| !cands[v.0].is_empty()));
            let before: usize = cands.iter().map(Vec::len).sum();
            for list in &mut cands {
                list.retain(|c| c.targets().is_subset_of(alive));
            }
            if cands.iter().map(Vec::len).sum::<usize>() == before {
                break;
            }
        }
        for list in &mut cands {
            list.sort_by(|a, b| {
                a.moves
                    .accept_tag
                    .cmp(&b.moves.accept_tag)
                    .then(a.pre_max.len().cmp(&b.pre_max.len()))
                    .then(a.post_targets.len().cmp(&b.post_targets.len()))
            });
            let mut kept: Vec<Candidate> = Vec::new();
            for c in list.drain(..) {
                if !kept.iter().any(|k| k.dominates(&c)) {
                    kept.push(c);
                }
            }
            *list = kept;
        }
        Ok(cands)
    }

    /// Evaluates the negotiation function at `lam`.
    pub fn negotiate(&self, lam: &Requirement) -> Result<NegotiationOutcome> {
        let game = self.game;
        lam.check_for(game)?;
        let mut values = vec![ExtRat::PosInf; game.num_vertices()];
        let mut strategies = vec![ProverStrategy::give_up_everywhere(game); game.num_vertices()];
        for player in game.players() {
            let roots = game.owned_by(player);
            if roots.is_empty() {
                continue;
            }
            let cands = self.pruned_candidates(lam, player)?;
            for root in roots.iter() {
                if cands[root.0].is_empty() {
                    continue;
                }
                let (value, choice) = self.branch_and_bound(&cands, player, root)?;
                values[root.0] = value;
                let mut tau = ProverStrategy::give_up_everywhere(game);
                for v in game.vertices() {
                    if let Some(k) = choice[v.0] {
                        tau.set(v, Some(cands[v.0][k].family.clone()));
                    }
                }
                strategies[root.0] = tau;
            }
        }
        Ok(NegotiationOutcome {
            values: Requirement(values),
            strategies,
        })
    }

    fn branch_and_bound(
        &self,
        cands: &[Vec<Candidate>],
        player: PlayerId,
        root: VertexId,
    ) -> Result<(ExtRat, Vec<Option<usize>>)> {
        let n = self.game.num_vertices();
        let mut search = Search {
            cands,
            player,
            root,
            assign: vec![None; n],
            best: ExtRat::PosInf,
            best_assign: None,
            nodes: 0,
            cap: self.cfg.max_search_nodes,
        };
        search.run()?;
        let assign = search.best_assign.expect("every reachable vertex has a candidate");
        Ok((search.best, assign))
    }
}

struct Search<'a> {
    cands: &'a [Vec<Candidate>],
    player: PlayerId,
    root: VertexId,
    assign: Vec<Option<usize>>,
    best: ExtRat,
    best_assign: Option<Vec<Option<usize>>>,
    nodes: usize,
    cap: usize,
}

impl Search<'_> {
    fn run(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::CapExceeded {
                what: "branch-and-bound nodes",
                cap: self.cap,
            });
        }
        let cands = self.cands;
        let dg = assemble(self.player, self.root, |v| match self.assign[v.0] {
            Some(k) => Choice::Family(&cands[v.0][k].moves),
            None => Choice::Open,
        });
        // Completing the strategy only adds behaviours, and each open vertex
        // will accept some family's tag.
        let mut bound = prover_value(&dg, self.player);
        let mut open = None;
        for node in &dg.nodes {
            if let DevNode::Base(v) = node {
                if self.assign[v.0].is_none() {
                    open.get_or_insert(*v);
                    let least = ExtRat::Finite(cands[v.0][0].moves.accept_tag.clone());
                    bound = bound.max(least);
                }
            }
        }
        if bound >= self.best && self.best_assign.is_some() {
            return Ok(());
        }
        let Some(v) = open else {
            self.best = bound;
            self.best_assign = Some(self.assign.clone());
            return Ok(());
        };
        for k in 0..cands[v.0].len() {
            self.assign[v.0] = Some(k);
            self.run()?;
        }
        self.assign[v.0] = None;
        Ok(())
    }
}

/// Simple paths from `path[0]`, each closed by an edge back onto itself,
/// split into history and cycle.
fn lasso_forms(
    game: &Game,
    path: &mut Vec<VertexId>,
    out: &mut Vec<(Vec<VertexId>, Vec<VertexId>)>,
    count: &mut usize,
    cap: usize,
) -> Result<()> {
    *count += 1;
    if *count > cap {
        return Err(Error::CapExceeded {
            what: "simple paths",
            cap,
        });
    }
    let last = *path.last().expect("nonempty path");
    for (k, &u) in path.iter().enumerate() {
        if game.has_edge(last, u) {
            out.push((path[..k].to_vec(), path[k..].to_vec()));
        }
    }
    for u in game.successors(last) {
        if !path.contains(&u) {
            path.push(u);
            lasso_forms(game, path, out, count, cap)?;
            path.pop();
        }
    }
    Ok(())
}

/// The negotiation function at `lam`.
pub fn nego_oracle(game: &Game, lam: &Requirement, cfg: &NegotiationOracleConfig) -> Result<Requirement> {
    Ok(Oracle::new(game, cfg)?.negotiate(lam)?.values)
}
