//! The deviation graph of a memoryless prover strategy and its value.

use std::collections::{HashMap, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ext_rat::{ExtRat, Rational};
use crate::game::{Game, PlayerId, Requirement, VertexId};
use crate::graph::{karp_max_mean_cycle, maximin_cycle_value, WeightedDigraph};
use crate::negotiation::family::{family_is_consistent, family_moves, FamilyMoves, PunishmentFamily, Segment};

/// What the prover proposes at each vertex; `None` gives up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverStrategy {
    pub choice: Vec<Option<PunishmentFamily>>,
}

impl ProverStrategy {
    pub fn give_up_everywhere(game: &Game) -> Self {
        ProverStrategy {
            choice: vec![None; game.num_vertices()],
        }
    }

    pub fn get(&self, v: VertexId) -> Option<&PunishmentFamily> {
        self.choice.get(v.0).and_then(Option::as_ref)
    }

    pub fn set(&mut self, v: VertexId, fam: Option<PunishmentFamily>) {
        self.choice[v.0] = fam;
    }

    /// Families must sit at their own anchor, have a valid shape and be
    /// consistent with `lam`.
    pub fn check(&self, game: &Game, lam: &Requirement) -> Result<()> {
        if self.choice.len() != game.num_vertices() {
            return Err(Error::InvalidStrategy(format!(
                "{} choices for {} vertices",
                self.choice.len(),
                game.num_vertices()
            )));
        }
        for v in game.vertices() {
            let Some(fam) = self.get(v) else { continue };
            let name = game.vertex_name(v);
            if fam.anchor() != v {
                return Err(Error::InvalidStrategy(format!("family chosen at {name} starts elsewhere")));
            }
            fam.check_shape(game)
                .map_err(|e| Error::InvalidStrategy(format!("family at {name}: {e}")))?;
            if !family_is_consistent(game, lam, fam) {
                return Err(Error::InvalidStrategy(format!("family at {name} is not consistent")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DevNode {
    /// The prover is about to propose at this vertex.
    Base(VertexId),
    /// The family proposed at this vertex; the tag is its tail payoff for
    /// the challenger's player.
    Proposal { anchor: VertexId, tag: Rational },
    /// Leaving the proposal before the punishing cycle, at `at`, for `target`.
    PreDev { at: VertexId, target: VertexId },
    /// Leaving for `target` once `cycle` (canonical rotation) has been
    /// repeated; the tag is the cycle's mean reward for the player.
    PostDev { cycle: Vec<VertexId>, target: VertexId, tag: Rational },
    Accept,
    GiveUp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DevArc {
    pub src: usize,
    pub dst: usize,
    /// The game walk this arc stands for; `None` on bookkeeping arcs.
    pub segment: Option<Segment>,
}

/// Reachable part of the two-player game between prover and the challenger
/// of `player` once the prover's memoryless strategy is fixed. Node 0 is the
/// root's base node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationGraph {
    pub player: PlayerId,
    pub root: VertexId,
    pub nodes: Vec<DevNode>,
    pub arcs: Vec<DevArc>,
}

#[derive(Clone, Copy)]
pub(crate) enum Choice<'a> {
    Family(&'a FamilyMoves),
    GiveUp,
    /// Not decided yet: the base node gets no outgoing arc.
    Open,
}

#[derive(Hash, PartialEq, Eq)]
enum Key {
    Base(VertexId),
    Proposal(VertexId),
    PreDev(VertexId, VertexId),
    PostDev(Vec<VertexId>, VertexId),
    Accept,
    GiveUp,
}

struct Builder {
    nodes: Vec<DevNode>,
    arcs: Vec<DevArc>,
    index: HashMap<Key, usize>,
    queue: VecDeque<VertexId>,
}

impl Builder {
    fn node(&mut self, key: Key, make: impl FnOnce() -> DevNode) -> usize {
        if let Some(&k) = self.index.get(&key) {
            return k;
        }
        if let Key::Base(v) = key {
            self.queue.push_back(v);
        }
        self.nodes.push(make());
        self.index.insert(key, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn arc(&mut self, src: usize, dst: usize, segment: Option<Segment>) {
        self.arcs.push(DevArc { src, dst, segment });
    }
}

pub(crate) fn assemble<'a>(player: PlayerId, root: VertexId, choice: impl Fn(VertexId) -> Choice<'a>) -> DeviationGraph {
    let mut b = Builder {
        nodes: Vec::new(),
        arcs: Vec::new(),
        index: HashMap::new(),
        queue: VecDeque::new(),
    };
    b.node(Key::Base(root), || DevNode::Base(root));
    while let Some(v) = b.queue.pop_front() {
        let base = b.index[&Key::Base(v)];
        let moves = match choice(v) {
            Choice::Open => continue,
            Choice::GiveUp => {
                let bot = b.node(Key::GiveUp, || DevNode::GiveUp);
                b.arc(base, bot, None);
                continue;
            }
            Choice::Family(m) => m,
        };
        let prop = b.node(Key::Proposal(v), || DevNode::Proposal {
            anchor: v,
            tag: moves.accept_tag.clone(),
        });
        b.arc(base, prop, None);
        let top = b.node(Key::Accept, || DevNode::Accept);
        b.arc(prop, top, None);
        for d in &moves.pre {
            let (at, target) = (d.at, d.target);
            let node = b.node(Key::PreDev(at, target), || DevNode::PreDev { at, target });
            b.arc(prop, node, Some(d.segment.clone()));
            let next = b.node(Key::Base(target), || DevNode::Base(target));
            if !b.arcs.iter().any(|a| a.src == node && a.dst == next) {
                b.arc(node, next, None);
            }
        }
        for d in &moves.post {
            let target = d.target;
            let node = b.node(Key::PostDev(moves.cycle.clone(), target), || DevNode::PostDev {
                cycle: moves.cycle.clone(),
                target,
                tag: moves.post_tag.clone(),
            });
            b.arc(prop, node, Some(d.segment.clone()));
            let next = b.node(Key::Base(target), || DevNode::Base(target));
            if !b.arcs.iter().any(|a| a.src == node && a.dst == next) {
                b.arc(node, next, None);
            }
        }
    }
    DeviationGraph {
        player,
        root,
        nodes: b.nodes,
        arcs: b.arcs,
    }
}

/// Builds the deviation graph of `tau` for the challenger of `player`,
/// starting at `root`.
pub fn build_deviation_graph(
    game: &Game,
    lam: &Requirement,
    player: PlayerId,
    root: VertexId,
    tau: &ProverStrategy,
) -> Result<DeviationGraph> {
    lam.check_for(game)?;
    if root.0 >= game.num_vertices() || player.0 >= game.num_players() {
        return Err(Error::Precondition("unknown root or player".into()));
    }
    tau.check(game, lam)?;
    let moves: Vec<Option<FamilyMoves>> = tau
        .choice
        .iter()
        .map(|f| f.as_ref().map(|f| family_moves(game, player, f)))
        .collect();
    Ok(assemble(player, root, |v| match &moves[v.0] {
        Some(m) => Choice::Family(m),
        None => Choice::GiveUp,
    }))
}

/// Supremum of the challenger's payoff for `player` over all behaviours in
/// the graph.
///
/// Reaching the give-up node is worth `+∞`. Otherwise the challenger either
/// accepts some proposal, deviates forever before punishing cycles (best
/// mean over segments), or deviates after punishing cycles infinitely often
/// (worth the least cycle tag met infinitely often).
pub fn prover_value(dg: &DeviationGraph, player: PlayerId) -> ExtRat {
    if dg.nodes.contains(&DevNode::GiveUp) {
        return ExtRat::PosInf;
    }
    let mut best = ExtRat::NegInf;
    for n in &dg.nodes {
        if let DevNode::Proposal { tag, .. } = n {
            best = best.max(ExtRat::Finite(tag.clone()));
        }
    }
    // Contract base → proposal → pre-deviation → base into one weighted arc.
    // A virtual source reaches every base node: each is reachable in the full
    // graph, possibly through post-cycle deviations.
    let n = dg.nodes.len();
    let mut base_of = HashMap::new();
    for (k, node) in dg.nodes.iter().enumerate() {
        if let DevNode::Base(v) = node {
            base_of.insert(*v, k);
        }
    }
    let mut karp = WeightedDigraph::new(n + 1);
    for &k in base_of.values() {
        karp.add_arc(n, k, Rational::zero(), 1);
    }
    for a in &dg.arcs {
        if let (DevNode::Proposal { anchor, .. }, DevNode::PreDev { target, .. }) = (&dg.nodes[a.src], &dg.nodes[a.dst]) {
            let seg = a.segment.as_ref().expect("deviation arcs carry segments");
            karp.add_arc(base_of[anchor], base_of[target], seg.rewards[player.0].clone(), seg.length);
        }
    }
    if let Some(c) = karp_max_mean_cycle(&karp, n) {
        best = best.max(c.value_ext());
    }
    let mut plain = WeightedDigraph::new(n);
    for a in &dg.arcs {
        plain.add_arc(a.src, a.dst, Rational::zero(), 1);
    }
    let tags: Vec<Option<ExtRat>> = dg
        .nodes
        .iter()
        .map(|node| match node {
            DevNode::PostDev { tag, .. } => Some(ExtRat::Finite(tag.clone())),
            _ => None,
        })
        .collect();
    if let Some(t) = maximin_cycle_value(&plain, 0, &tags) {
        best = best.max(t);
    }
    best
}

/// True iff `tau` keeps the challenger of `player` at or below `alpha`
/// from `root`.
pub fn verify_prover_strategy(
    game: &Game,
    lam: &Requirement,
    player: PlayerId,
    root: VertexId,
    tau: &ProverStrategy,
    alpha: &ExtRat,
) -> Result<bool> {
    let dg = build_deviation_graph(game, lam, player, root, tau)?;
    Ok(prover_value(&dg, player) <= *alpha)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ext_rat::{int, rat};
    use crate::fixtures;
    use crate::game::{cycle_mean_rewards, PayoffVector};
    use crate::testgen;
    use crate::vertex_set::VertexSet;
    use rand::Rng;

    fn two_state_tau(g: &Game) -> ProverStrategy {
        let v = |n: &str| g.vertex_by_name(n).unwrap();
        let fam = |h: Vec<VertexId>| PunishmentFamily {
            h,
            c: vec![v("b")],
            tail_payoff: PayoffVector::from_rationals(vec![int(1), int(1)]),
            tail_occ: g.all_vertices(),
        };
        ProverStrategy {
            choice: vec![Some(fam(vec![v("a")])), Some(fam(vec![]))],
        }
    }

    #[test]
    fn two_state_example_graph() {
        let g = fixtures::two_state();
        let lam = Requirement::uniform(&g, ExtRat::from_int(1));
        let tau = two_state_tau(&g);
        let circle = PlayerId(0);
        let dg = build_deviation_graph(&g, &lam, circle, VertexId(0), &tau).unwrap();
        assert!(dg.nodes.contains(&DevNode::Accept));
        assert!(!dg.nodes.contains(&DevNode::GiveUp));
        assert!(dg.nodes.iter().any(|n| matches!(n,
            DevNode::PostDev { cycle, target, tag } if *cycle == vec![VertexId(1)] && *target == VertexId(1) && *tag == int(1))));
        assert_eq!(prover_value(&dg, circle), ExtRat::from_int(1));
        let one = ExtRat::from_int(1);
        assert!(verify_prover_strategy(&g, &lam, circle, VertexId(0), &tau, &one).unwrap());
        let below = ExtRat::from_ratio(99, 100);
        assert!(!verify_prover_strategy(&g, &lam, circle, VertexId(0), &tau, &below).unwrap());
    }

    #[test]
    fn giving_up_at_the_root() {
        let g = fixtures::two_state();
        let lam = Requirement::bottom(&g);
        let tau = ProverStrategy::give_up_everywhere(&g);
        let dg = build_deviation_graph(&g, &lam, PlayerId(0), VertexId(0), &tau).unwrap();
        assert_eq!(dg.nodes, vec![DevNode::Base(VertexId(0)), DevNode::GiveUp]);
        assert_eq!(prover_value(&dg, PlayerId(0)), ExtRat::PosInf);
        let big = ExtRat::from_int(1_000_000);
        assert!(!verify_prover_strategy(&g, &lam, PlayerId(0), VertexId(0), &tau, &big).unwrap());
    }

    #[test]
    fn reachable_give_up_is_infinite() {
        let g = fixtures::two_state();
        let lam = Requirement::uniform(&g, ExtRat::from_int(1));
        let mut tau = two_state_tau(&g);
        tau.set(VertexId(1), None);
        let dg = build_deviation_graph(&g, &lam, PlayerId(0), VertexId(0), &tau).unwrap();
        assert_eq!(prover_value(&dg, PlayerId(0)), ExtRat::PosInf);
    }

    #[test]
    fn strategy_errors() {
        let g = fixtures::two_state();
        let mut tau = two_state_tau(&g);
        let lam = Requirement(vec![ExtRat::from_int(2), ExtRat::from_int(1)]);
        assert!(matches!(
            build_deviation_graph(&g, &lam, PlayerId(0), VertexId(0), &tau),
            Err(Error::InvalidStrategy(_))
        ));
        tau.choice.swap(0, 1);
        let lam = Requirement::bottom(&g);
        assert!(matches!(
            build_deviation_graph(&g, &lam, PlayerId(0), VertexId(0), &tau),
            Err(Error::InvalidStrategy(_))
        ));
    }

    /// A family whose tail keeps turning around its own cycle.
    pub(crate) fn self_tailed(game: &Game, h: Vec<VertexId>, c: Vec<VertexId>) -> PunishmentFamily {
        let x = cycle_mean_rewards(game, &c).unwrap();
        PunishmentFamily {
            h,
            tail_occ: VertexSet::from_vertices(c.iter().copied()),
            c,
            tail_payoff: PayoffVector::from_rationals(x),
        }
    }

    /// A random family anchored at `v`: a random simple path closed by a
    /// random back edge, if the path meets one.
    pub(crate) fn random_family(game: &Game, r: &mut impl Rng, v: VertexId) -> Option<PunishmentFamily> {
        let mut path = vec![v];
        loop {
            let last = *path.last().unwrap();
            let succ: Vec<VertexId> = game.successors(last).collect();
            let back: Vec<usize> = (0..path.len()).filter(|&k| game.has_edge(last, path[k])).collect();
            let fresh: Vec<VertexId> = succ.iter().copied().filter(|u| !path.contains(u)).collect();
            if !back.is_empty() && (fresh.is_empty() || r.gen_bool(0.5)) {
                let k = back[r.gen_range(0..back.len())];
                return Some(self_tailed(game, path[..k].to_vec(), path[k..].to_vec()));
            }
            if fresh.is_empty() {
                return None;
            }
            path.push(fresh[r.gen_range(0..fresh.len())]);
        }
    }

    pub(crate) fn random_strategy(game: &Game, r: &mut impl Rng, give_up: f64) -> ProverStrategy {
        let choice = game
            .vertices()
            .map(|v| if r.gen_bool(give_up) { None } else { random_family(game, r, v) })
            .collect();
        ProverStrategy { choice }
    }

    #[test]
    fn node_counts_within_bounds() {
        let mut r = testgen::rng(11);
        for seed in 0..100 {
            let n = r.gen_range(2..=5);
            let g = testgen::random_game(seed, n, r.gen_range(1..=3));
            let tau = random_strategy(&g, &mut r, 0.1);
            let root = VertexId(r.gen_range(0..n));
            let player = g.owner(root);
            let dg = build_deviation_graph(&g, &Requirement::bottom(&g), player, root, &tau).unwrap();
            let count = |f: fn(&DevNode) -> bool| dg.nodes.iter().filter(|x| f(x)).count();
            assert!(count(|x| matches!(x, DevNode::Base(_))) <= n);
            assert!(count(|x| matches!(x, DevNode::Proposal { .. })) <= n);
            assert!(count(|x| matches!(x, DevNode::PostDev { .. })) <= n * n);
            assert!(count(|x| matches!(x, DevNode::PreDev { .. })) <= 2 * n * n);
            assert!(dg.nodes.len() <= 2 * n + 3 * n * n + 2);
            let plain: Vec<Vec<usize>> = {
                let mut adj = vec![Vec::new(); dg.nodes.len()];
                for a in &dg.arcs {
                    adj[a.src].push(a.dst);
                }
                adj
            };
            assert!(crate::graph::reachable(&plain, 0).iter().all(|&b| b));
        }
    }

    /// Exhaustive search over the challenger's behaviours: every simple path
    /// from the root, closed either at a sink or by returning to a node on
    /// the path. A closing cycle is worth its least post-cycle tag when it
    /// has one, its segment mean otherwise.
    fn game_tree_value(dg: &DeviationGraph, player: PlayerId) -> ExtRat {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); dg.nodes.len()];
        for (k, a) in dg.arcs.iter().enumerate() {
            out[a.src].push(k);
        }
        fn walk(dg: &DeviationGraph, out: &[Vec<usize>], p: PlayerId, stack: &mut Vec<usize>, arcs: &mut Vec<usize>) -> ExtRat {
            let u = *stack.last().unwrap();
            let mut best = ExtRat::NegInf;
            match &dg.nodes[u] {
                DevNode::GiveUp => return ExtRat::PosInf,
                DevNode::Accept => {
                    let prop = dg.arcs[*arcs.last().unwrap()].src;
                    if let DevNode::Proposal { tag, .. } = &dg.nodes[prop] {
                        return ExtRat::Finite(tag.clone());
                    }
                }
                _ => {}
            }
            for &k in &out[u] {
                let v = dg.arcs[k].dst;
                arcs.push(k);
                if let Some(pos) = stack.iter().position(|&x| x == v) {
                    let cyc = &arcs[pos..];
                    let tags: Vec<&Rational> = cyc
                        .iter()
                        .filter_map(|&a| match &dg.nodes[dg.arcs[a].src] {
                            DevNode::PostDev { tag, .. } => Some(tag),
                            _ => None,
                        })
                        .collect();
                    let val = if let Some(t) = tags.into_iter().min() {
                        t.clone()
                    } else {
                        let (mut s, mut l) = (Rational::zero(), 0usize);
                        for &a in cyc {
                            if let Some(seg) = &dg.arcs[a].segment {
                                s += &seg.rewards[p.0];
                                l += seg.length;
                            }
                        }
                        s / Rational::from_integer(l.into())
                    };
                    best = best.max(ExtRat::Finite(val));
                } else {
                    stack.push(v);
                    best = best.max(walk(dg, out, p, stack, arcs));
                    stack.pop();
                }
                arcs.pop();
            }
            best
        }
        walk(dg, &out, player, &mut vec![0], &mut Vec::new())
    }

    #[test]
    fn value_matches_exhaustive_search() {
        let mut r = testgen::rng(12);
        let mut finite = 0;
        for seed in 0..150 {
            let n = r.gen_range(2..=4);
            let g = testgen::random_game(1000 + seed, n, r.gen_range(1..=3));
            let tau = random_strategy(&g, &mut r, 0.05);
            let root = VertexId(r.gen_range(0..n));
            let player = g.owner(root);
            let dg = build_deviation_graph(&g, &Requirement::bottom(&g), player, root, &tau).unwrap();
            let v = prover_value(&dg, player);
            assert_eq!(v, game_tree_value(&dg, player), "seed {seed}");
            finite += v.is_finite() as usize;
        }
        assert!(finite > 50);
    }

    #[test]
    fn value_dominates_acceptance_and_verification_is_monotone() {
        let mut r = testgen::rng(13);
        for seed in 0..60 {
            let n = r.gen_range(2..=4);
            let g = testgen::random_game(2000 + seed, n, 2);
            let tau = random_strategy(&g, &mut r, 0.0);
            let root = VertexId(0);
            let p = g.owner(root);
            let lam = Requirement::bottom(&g);
            let dg = build_deviation_graph(&g, &lam, p, root, &tau).unwrap();
            let v = prover_value(&dg, p);
            for node in &dg.nodes {
                if let DevNode::Proposal { tag, .. } = node {
                    assert!(v >= ExtRat::Finite(tag.clone()));
                }
            }
            let mut prev = false;
            for k in -8..=8 {
                let ok = verify_prover_strategy(&g, &lam, p, root, &tau, &ExtRat::Finite(rat(k, 2))).unwrap();
                assert!(!prev || ok);
                prev = ok;
            }
        }
    }
}
