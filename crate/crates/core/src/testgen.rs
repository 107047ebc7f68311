//! Seeded random instances for unit tests and property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ext_rat::{int, ExtRat};
use crate::game::{Edge, Game, PlayerId, Requirement, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random game with `n` vertices, `players` players, out-degree 1..=3 and
/// integer rewards in [-2, 3].
pub fn random_game(seed: u64, n: usize, players: usize) -> Game {
    let mut r = rng(seed);
    random_game_with(&mut r, n, players, 3, -2, 3)
}

pub fn random_game_with(
    r: &mut impl Rng,
    n: usize,
    players: usize,
    max_out: usize,
    lo: i64,
    hi: i64,
) -> Game {
    let names: Vec<String> = (0..players).map(|p| format!("p{p}")).collect();
    let vertices: Vec<(String, PlayerId)> = (0..n)
        .map(|v| (format!("v{v}"), PlayerId(r.gen_range(0..players))))
        .collect();
    let mut edges = Vec::new();
    for v in 0..n {
        let k = r.gen_range(1..=max_out.min(n));
        let mut targets: Vec<usize> = (0..n).collect();
        for t in 0..k {
            let j = r.gen_range(t..n);
            targets.swap(t, j);
        }
        for &t in &targets[..k] {
            edges.push(Edge {
                from: VertexId(v),
                to: VertexId(t),
                rewards: (0..players).map(|_| int(r.gen_range(lo..=hi))).collect(),
            });
        }
    }
    Game::new(names, vertices, edges, Some(VertexId(0))).expect("random game is valid")
}

/// Some closed walk, found by following random successors until a vertex
/// repeats.
pub fn some_cycle(g: &Game, seed: u64) -> Option<Vec<VertexId>> {
    let mut r = rng(seed ^ 0x9e37);
    let mut walk = vec![VertexId(r.gen_range(0..g.num_vertices()))];
    loop {
        let last = *walk.last()?;
        let succ: Vec<VertexId> = g.successors(last).collect();
        let next = succ[r.gen_range(0..succ.len())];
        if let Some(pos) = walk.iter().position(|&v| v == next) {
            return Some(walk[pos..].to_vec());
        }
        walk.push(next);
    }
}

/// A random walk of length >= 1 whose last vertex has an edge into `target`.
pub fn walk_into(g: &Game, target: VertexId, seed: u64) -> Option<Vec<VertexId>> {
    let mut r = rng(seed ^ 0x51ed);
    let preds: Vec<VertexId> = g.vertices().filter(|&u| g.has_edge(u, target)).collect();
    let mut walk = vec![preds[r.gen_range(0..preds.len())]];
    for _ in 0..r.gen_range(0..4) {
        let first = walk[0];
        let before: Vec<VertexId> = g.vertices().filter(|&u| g.has_edge(u, first)).collect();
        if before.is_empty() {
            break;
        }
        walk.insert(0, before[r.gen_range(0..before.len())]);
    }
    Some(walk)
}

/// Random requirement with values in {-inf} ∪ [-2, 2] halves.
pub fn random_requirement(g: &Game, seed: u64) -> Requirement {
    let mut r = rng(seed ^ 0x7a11);
    Requirement(
        g.vertices()
            .map(|_| {
                if r.gen_bool(0.3) {
                    ExtRat::NegInf
                } else {
                    ExtRat::from_ratio(r.gen_range(-4..=4), 2)
                }
            })
            .collect(),
    )
}
