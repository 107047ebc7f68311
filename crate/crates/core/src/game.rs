//! The game model: arenas with per-player rational rewards, lasso plays,
//! requirements and payoff vectors.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ext_rat::{ExtRat, Rational};
use crate::vertex_set::VertexSet;

/// Hard limit on the number of vertices: vertex sets are 64-bit masks.
pub const MAX_GAME_VERTICES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl PlayerId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    /// One reward per player, indexed by `PlayerId`.
    pub rewards: Vec<Rational>,
}

/// A finite multiplayer mean-payoff arena.
///
/// Vertices and players are identified by their position in declaration
/// order. Every vertex has at least one successor and every edge carries a
/// reward for every player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    players: Vec<String>,
    vertices: Vec<String>,
    owner: Vec<PlayerId>,
    edges: Vec<Edge>,
    init: Option<VertexId>,
    succ: Vec<Vec<usize>>,
    edge_index: HashMap<(VertexId, VertexId), usize>,
}

impl Game {
    pub fn new(
        players: Vec<String>,
        vertices: Vec<(String, PlayerId)>,
        edges: Vec<Edge>,
        init: Option<VertexId>,
    ) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidGame(m));
        if players.is_empty() {
            return invalid("no players".into());
        }
        if vertices.is_empty() {
            return invalid("no vertices".into());
        }
        if vertices.len() > MAX_GAME_VERTICES {
            return invalid(format!(
                "{} vertices exceed the supported maximum of {MAX_GAME_VERTICES}",
                vertices.len()
            ));
        }
        check_unique("player", players.iter())?;
        check_unique("vertex", vertices.iter().map(|(n, _)| n))?;
        let n = vertices.len();
        let (names, owner): (Vec<String>, Vec<PlayerId>) = vertices.into_iter().unzip();
        if let Some(p) = owner.iter().find(|p| p.0 >= players.len()) {
            return invalid(format!("owner index {} is not a player", p.0));
        }
        if let Some(v) = init {
            if v.0 >= n {
                return invalid(format!("initial vertex {} out of range", v.0));
            }
        }
        let mut succ = vec![Vec::new(); n];
        let mut edge_index = HashMap::new();
        for (k, e) in edges.iter().enumerate() {
            if e.from.0 >= n || e.to.0 >= n {
                return invalid(format!("edge {k} references an unknown vertex"));
            }
            if e.rewards.len() != players.len() {
                return invalid(format!(
                    "edge {} -> {} has {} rewards for {} players",
                    names[e.from.0],
                    names[e.to.0],
                    e.rewards.len(),
                    players.len()
                ));
            }
            if edge_index.insert((e.from, e.to), k).is_some() {
                return invalid(format!(
                    "duplicate edge {} -> {}",
                    names[e.from.0], names[e.to.0]
                ));
            }
            succ[e.from.0].push(k);
        }
        for list in &mut succ {
            list.sort_by_key(|&k| edges[k].to);
        }
        if let Some(v) = succ.iter().position(|s| s.is_empty()) {
            return invalid(format!("vertex {} has no outgoing edge", names[v]));
        }
        Ok(Game {
            players,
            vertices: names,
            owner,
            edges,
            init,
            succ,
            edge_index,
        })
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.players.len()).map(PlayerId)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertices.len())
    }

    pub fn player_name(&self, p: PlayerId) -> &str {
        &self.players[p.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn player_by_name(&self, name: &str) -> Option<PlayerId> {
        self.players.iter().position(|p| p == name).map(PlayerId)
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(VertexId)
    }

    pub fn owner(&self, v: VertexId) -> PlayerId {
        self.owner[v.0]
    }

    pub fn init(&self) -> Option<VertexId> {
        self.init
    }

    pub fn with_init(&self, v: VertexId) -> Game {
        let mut g = self.clone();
        g.init = Some(v);
        g
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, from: VertexId, to: VertexId) -> Option<&Edge> {
        self.edge_index.get(&(from, to)).map(|&k| &self.edges[k])
    }

    pub fn has_edge(&self, from: VertexId, to: VertexId) -> bool {
        self.edge_index.contains_key(&(from, to))
    }

    pub fn reward(&self, from: VertexId, to: VertexId, player: PlayerId) -> Option<&Rational> {
        self.edge(from, to).map(|e| &e.rewards[player.0])
    }

    /// Successors of `v` in increasing vertex order.
    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.succ[v.0].iter().map(move |&k| self.edges[k].to)
    }

    pub fn owned_by(&self, p: PlayerId) -> VertexSet {
        VertexSet::from_vertices(self.vertices().filter(|&v| self.owner(v) == p))
    }

    /// Sum of the rewards of `player` along the walk `path` (consecutive pairs).
    pub fn walk_reward(&self, path: &[VertexId], player: PlayerId) -> Result<Rational> {
        let mut total = Rational::zero();
        for w in path.windows(2) {
            let r = self.reward(w[0], w[1], player).ok_or_else(|| {
                Error::MalformedCycle(format!(
                    "{} -> {} is not an edge",
                    self.vertex_name(w[0]),
                    self.vertex_name(w[1])
                ))
            })?;
            total += r;
        }
        Ok(total)
    }

    pub fn format_vertices(&self, vs: &[VertexId]) -> String {
        vs.iter()
            .map(|&v| self.vertex_name(v))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn check_unique<'a>(kind: &str, names: impl Iterator<Item = &'a String>) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::InvalidGame(format!("duplicate {kind} `{n}`")));
        }
    }
    Ok(())
}

/// Per-player payoff values, indexed by `PlayerId`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PayoffVector(pub Vec<ExtRat>);

impl PayoffVector {
    pub fn from_rationals(values: Vec<Rational>) -> Self {
        PayoffVector(values.into_iter().map(ExtRat::Finite).collect())
    }

    pub fn uniform(n: usize, value: ExtRat) -> Self {
        PayoffVector(vec![value; n])
    }

    pub fn get(&self, p: PlayerId) -> &ExtRat {
        &self.0[p.0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pointwise `self <= other`.
    pub fn leq(&self, other: &PayoffVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for PayoffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Checks that `cycle` is a nonempty closed walk and returns its exact mean
/// reward vector `(1/n) Σ r(c_k c_{k+1})`, indices taken modulo `n`.
pub fn cycle_mean_rewards(game: &Game, cycle: &[VertexId]) -> Result<Vec<Rational>> {
    if cycle.is_empty() {
        return Err(Error::MalformedCycle("empty cycle".into()));
    }
    let n = cycle.len();
    let mut sums = vec![Rational::zero(); game.num_players()];
    for k in 0..n {
        let (u, v) = (cycle[k], cycle[(k + 1) % n]);
        if u.0 >= game.num_vertices() || v.0 >= game.num_vertices() {
            return Err(Error::MalformedCycle("unknown vertex".into()));
        }
        let e = game.edge(u, v).ok_or_else(|| {
            Error::MalformedCycle(format!(
                "{} -> {} is not an edge",
                game.vertex_name(u),
                game.vertex_name(v)
            ))
        })?;
        for (s, r) in sums.iter_mut().zip(&e.rewards) {
            *s += r;
        }
    }
    let len = Rational::from_integer(n.into());
    Ok(sums.into_iter().map(|s| s / &len).collect())
}

/// Mean-payoff vector of the play `cycle^ω`.
pub fn mp_of_cycle(game: &Game, cycle: &[VertexId]) -> Result<PayoffVector> {
    cycle_mean_rewards(game, cycle).map(PayoffVector::from_rationals)
}

/// Lexicographically least rotation of a cycle. For a simple cycle this is
/// the rotation starting at its smallest vertex.
pub fn canonical_rotation(cycle: &[VertexId]) -> Vec<VertexId> {
    let n = cycle.len();
    if n == 0 {
        return Vec::new();
    }
    let best = (0..n)
        .min_by(|&a, &b| {
            let ra = cycle[a..].iter().chain(&cycle[..a]);
            let rb = cycle[b..].iter().chain(&cycle[..b]);
            ra.cmp(rb).then(a.cmp(&b))
        })
        .unwrap_or(0);
    cycle[best..].iter().chain(&cycle[..best]).copied().collect()
}

/// An ultimately periodic play `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoPlay {
    prefix: Vec<VertexId>,
    cycle: Vec<VertexId>,
}

impl LassoPlay {
    pub fn new(game: &Game, prefix: Vec<VertexId>, cycle: Vec<VertexId>) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedLasso(m));
        if cycle.is_empty() {
            return bad("cycle must be nonempty".into());
        }
        let n = game.num_vertices();
        if prefix.iter().chain(&cycle).any(|v| v.0 >= n) {
            return bad("unknown vertex".into());
        }
        let walk: Vec<VertexId> = prefix
            .iter()
            .chain(&cycle)
            .chain(std::iter::once(&cycle[0]))
            .copied()
            .collect();
        for w in walk.windows(2) {
            if !game.has_edge(w[0], w[1]) {
                return bad(format!(
                    "{} -> {} is not an edge",
                    game.vertex_name(w[0]),
                    game.vertex_name(w[1])
                ));
            }
        }
        Ok(LassoPlay { prefix, cycle })
    }

    pub fn prefix(&self) -> &[VertexId] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[VertexId] {
        &self.cycle
    }

    pub fn first(&self) -> VertexId {
        self.prefix.first().copied().unwrap_or(self.cycle[0])
    }

    /// Vertices visited at least once.
    pub fn occ(&self) -> VertexSet {
        VertexSet::from_vertices(self.prefix.iter().chain(&self.cycle).copied())
    }

    /// Vertices visited infinitely often.
    pub fn inf(&self) -> VertexSet {
        VertexSet::from_vertices(self.cycle.iter().copied())
    }
}

/// Mean payoff of a lasso; the prefix has no influence on a liminf average.
pub fn payoff_of_lasso(game: &Game, play: &LassoPlay) -> Result<PayoffVector> {
    mp_of_cycle(game, &play.cycle)
}

/// A requirement: one extended-rational demand per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Requirement(pub Vec<ExtRat>);

impl Requirement {
    pub fn uniform(game: &Game, value: ExtRat) -> Self {
        Requirement(vec![value; game.num_vertices()])
    }

    pub fn bottom(game: &Game) -> Self {
        Requirement::uniform(game, ExtRat::NegInf)
    }

    pub fn get(&self, v: VertexId) -> &ExtRat {
        &self.0[v.0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check_for(&self, game: &Game) -> Result<()> {
        if self.0.len() != game.num_vertices() {
            return Err(Error::DimensionMismatch(format!(
                "requirement has {} entries for {} vertices",
                self.0.len(),
                game.num_vertices()
            )));
        }
        Ok(())
    }

    /// Largest demand over the vertices of `set` owned by `player`
    /// (`−∞` when there is none).
    pub fn max_demand(&self, game: &Game, set: VertexSet, player: PlayerId) -> ExtRat {
        set.iter()
            .filter(|&v| game.owner(v) == player)
            .map(|v| self.0[v.0].clone())
            .max()
            .unwrap_or(ExtRat::NegInf)
    }

    /// Per-player lower bounds induced by visiting every vertex of `set`.
    pub fn demands(&self, game: &Game, set: VertexSet) -> Vec<ExtRat> {
        game.players()
            .map(|p| self.max_demand(game, set, p))
            .collect()
    }

    pub fn format(&self, game: &Game) -> String {
        game.vertices()
            .map(|v| format!("{}:{}", game.vertex_name(v), self.0[v.0]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Pointwise order on requirements over the same vertex set.
pub fn requirement_leq(a: &Requirement, b: &Requirement) -> Result<bool> {
    if a.0.len() != b.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "requirements over {} and {} vertices",
            a.0.len(),
            b.0.len()
        )));
    }
    Ok(a.0.iter().zip(&b.0).all(|(x, y)| x <= y))
}

/// `true` iff every visited vertex's owner receives at least its demand.
/// Mean payoff is prefix-independent, so every suffix of the lasso has the
/// payoff of the whole play.
pub fn lasso_is_consistent(game: &Game, lam: &Requirement, play: &LassoPlay) -> Result<bool> {
    lam.check_for(game)?;
    let payoff = payoff_of_lasso(game, play)?;
    Ok(play
        .occ()
        .iter()
        .all(|v| payoff.get(game.owner(v)) >= lam.get(v)))
}
