//! Small reference games used by tests, examples and the CLI fixtures.

use crate::ext_rat::int;
use crate::game::{Edge, Game, PlayerId, VertexId};

/// Builds a game from name tables. Rewards are listed in player order.
///
/// Panics on inconsistent tables; meant for hard-coded games.
pub fn game_from_table(
    players: &[&str],
    vertices: &[(&str, &str)],
    edges: &[(&str, &str, &[i64])],
    init: Option<&str>,
) -> Game {
    let pid = |name: &str| {
        PlayerId(
            players
                .iter()
                .position(|p| *p == name)
                .unwrap_or_else(|| panic!("unknown player {name}")),
        )
    };
    let vid = |name: &str| {
        VertexId(
            vertices
                .iter()
                .position(|(v, _)| *v == name)
                .unwrap_or_else(|| panic!("unknown vertex {name}")),
        )
    };
    let edges = edges
        .iter()
        .map(|(from, to, rewards)| Edge {
            from: vid(from),
            to: vid(to),
            rewards: rewards.iter().map(|&r| int(r)).collect(),
        })
        .collect();
    Game::new(
        players.iter().map(|p| p.to_string()).collect(),
        vertices
            .iter()
            .map(|(v, o)| (v.to_string(), pid(o)))
            .collect(),
        edges,
        init.map(vid),
    )
    .expect("fixture game is well formed")
}

/// Two vertices `a` (circle) and `b` (square): `a <-> b` pays 2 to both,
/// the loop on `a` pays (0, 1) and the loop on `b` pays (1, 0).
pub fn two_state() -> Game {
    game_from_table(
        &["circle", "square"],
        &[("a", "circle"), ("b", "square")],
        &[
            ("a", "a", &[0, 1]),
            ("a", "b", &[2, 2]),
            ("b", "a", &[2, 2]),
            ("b", "b", &[1, 0]),
        ],
        Some("a"),
    )
}

/// A chain `a - b - c - d` with loops on both ends. Only the loop on `a`
/// pays anything: (1, 1).
pub fn chain4() -> Game {
    game_from_table(
        &["circle", "square"],
        &[
            ("a", "circle"),
            ("b", "square"),
            ("c", "circle"),
            ("d", "square"),
        ],
        &[
            ("a", "a", &[1, 1]),
            ("a", "b", &[0, 0]),
            ("b", "a", &[0, 0]),
            ("b", "c", &[0, 0]),
            ("c", "b", &[0, 0]),
            ("c", "d", &[0, 0]),
            ("d", "c", &[0, 0]),
            ("d", "d", &[0, 0]),
        ],
        Some("a"),
    )
}

/// A two-level tree from `a` with a sink loop on each leaf; only the loop on
/// `d` pays (1, 1).
pub fn tree7() -> Game {
    game_from_table(
        &["circle", "square"],
        &[
            ("a", "circle"),
            ("b", "square"),
            ("c", "square"),
            ("d", "circle"),
            ("e", "circle"),
            ("f", "circle"),
            ("g", "circle"),
        ],
        &[
            ("a", "b", &[0, 0]),
            ("a", "c", &[0, 0]),
            ("b", "d", &[0, 0]),
            ("b", "e", &[0, 0]),
            ("c", "f", &[0, 0]),
            ("c", "g", &[0, 0]),
            ("d", "d", &[1, 1]),
            ("e", "e", &[0, 0]),
            ("f", "f", &[0, 0]),
            ("g", "g", &[0, 0]),
        ],
        Some("a"),
    )
}
