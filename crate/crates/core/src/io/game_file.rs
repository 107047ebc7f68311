//! The game format:
//!
//! ```text
//! player circle
//! player square
//! vertex a circle
//! vertex b square
//! edge a b circle=2 square=2
//! init a
//! ```

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::ext_rat::{format_rational, Rational};
use crate::game::{Edge, Game, PlayerId, VertexId};
use crate::io::is_valid_name;
use crate::io::lexer::{lines, rational, Line, Token};

fn name<'a>(line: &Line, tok: &Token<'a>) -> Result<&'a str> {
    if is_valid_name(tok.text) {
        Ok(tok.text)
    } else {
        Err(line.at(tok, format!("invalid name `{}`", tok.text)))
    }
}

pub fn parse_game(text: &str) -> Result<Game> {
    let mut players: Vec<String> = Vec::new();
    let mut player_ids: HashMap<String, PlayerId> = HashMap::new();
    let mut vertices: Vec<(String, PlayerId)> = Vec::new();
    let mut vertex_ids: HashMap<String, VertexId> = HashMap::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut seen_edges: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut init = None;
    let mut last_line = 0;
    for line in lines(text) {
        last_line = line.number;
        let head = line.tokens[0];
        let lookup_vertex = |tok: &Token| {
            vertex_ids
                .get(tok.text)
                .copied()
                .ok_or_else(|| line.at(tok, format!("unknown vertex `{}`", tok.text)))
        };
        match head.text {
            "player" => {
                line.expect_len(2, "player <name>")?;
                let tok = line.tokens[1];
                let n = name(&line, &tok)?;
                if player_ids.insert(n.to_string(), PlayerId(players.len())).is_some() {
                    return Err(line.at(&tok, format!("duplicate player `{n}`")));
                }
                players.push(n.to_string());
            }
            "vertex" => {
                line.expect_len(3, "vertex <name> <owner>")?;
                let (tv, to) = (line.tokens[1], line.tokens[2]);
                let n = name(&line, &tv)?;
                let owner = *player_ids
                    .get(to.text)
                    .ok_or_else(|| line.at(&to, format!("unknown player `{}`", to.text)))?;
                if vertex_ids.insert(n.to_string(), VertexId(vertices.len())).is_some() {
                    return Err(line.at(&tv, format!("duplicate vertex `{n}`")));
                }
                vertices.push((n.to_string(), owner));
            }
            "edge" => {
                if line.tokens.len() < 3 {
                    return Err(line.at(&head, "expected `edge <from> <to> <player>=<reward> ...`"));
                }
                let from = lookup_vertex(&line.tokens[1])?;
                let to = lookup_vertex(&line.tokens[2])?;
                if !seen_edges.insert((from, to)) {
                    return Err(line.at(&head, "duplicate edge"));
                }
                let mut rewards: Vec<Option<Rational>> = vec![None; players.len()];
                for tok in &line.tokens[3..] {
                    let Some((p, r)) = tok.text.split_once('=') else {
                        return Err(line.at(tok, "expected `<player>=<reward>`"));
                    };
                    let p = *player_ids
                        .get(p)
                        .ok_or_else(|| line.at(tok, format!("unknown player `{p}`")))?;
                    if rewards[p.0].is_some() {
                        return Err(line.at(tok, "reward assigned twice"));
                    }
                    rewards[p.0] = Some(rational(&line, tok, r)?);
                }
                if let Some(k) = rewards.iter().position(Option::is_none) {
                    return Err(line.at(&head, format!("missing reward for player `{}`", players[k])));
                }
                edges.push(Edge {
                    from,
                    to,
                    rewards: rewards.into_iter().flatten().collect(),
                });
            }
            "init" => {
                line.expect_len(2, "init <vertex>")?;
                if init.is_some() {
                    return Err(line.at(&head, "initial vertex given twice"));
                }
                init = Some(lookup_vertex(&line.tokens[1])?);
            }
            other => return Err(line.at(&head, format!("unknown directive `{other}`"))),
        }
    }
    if players.is_empty() {
        return Err(Error::Parse {
            line: last_line.max(1),
            column: 1,
            message: "no players declared".into(),
        });
    }
    Game::new(players, vertices, edges, init)
}

pub fn print_game(game: &Game) -> String {
    let mut out = String::new();
    for p in game.players() {
        out += &format!("player {}\n", game.player_name(p));
    }
    for v in game.vertices() {
        out += &format!("vertex {} {}\n", game.vertex_name(v), game.player_name(game.owner(v)));
    }
    for e in game.edges() {
        out += &format!("edge {} {}", game.vertex_name(e.from), game.vertex_name(e.to));
        for p in game.players() {
            out += &format!(" {}={}", game.player_name(p), format_rational(&e.rewards[p.0]));
        }
        out.push('\n');
    }
    if let Some(v) = game.init() {
        out += &format!("init {}\n", game.vertex_name(v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::testgen;

    const TWO_STATE: &str = "\
# two vertices, one per player
player circle
player square
vertex a circle
vertex b square
edge a a circle=0 square=1
edge a b circle=2 square=2
edge b a circle=2 square=2
edge b b circle=1 square=0
init a
";

    #[test]
    fn two_state_text() {
        let g = parse_game(TWO_STATE).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.edges().len(), 4);
        assert_eq!(g, fixtures::two_state());
        assert_eq!(parse_game(&print_game(&g)).unwrap(), g);
    }

    #[test]
    fn fixtures_round_trip() {
        for g in [fixtures::two_state(), fixtures::chain4(), fixtures::tree7()] {
            let text = print_game(&g);
            assert_eq!(parse_game(&text).unwrap(), g);
            assert_eq!(print_game(&parse_game(&text).unwrap()), text);
        }
    }

    #[test]
    fn random_games_round_trip() {
        for seed in 0..50 {
            let g = testgen::random_game(seed, 1 + seed as usize % 6, 1 + seed as usize % 3);
            assert_eq!(parse_game(&print_game(&g)).unwrap(), g);
        }
    }

    fn error_at(text: &str) -> (usize, usize) {
        match parse_game(text) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_are_located() {
        assert_eq!(error_at(""), (1, 1));
        assert_eq!(error_at("vertex a p\n"), (1, 10));
        assert_eq!(error_at("player p\nplayer p\n"), (2, 8));
        assert_eq!(error_at("player p\nvertex a p\nedge a a p=x\n"), (3, 10));
        assert_eq!(error_at("player p\nplayer q\nvertex a p\nedge a a p=1\n"), (4, 1));
        assert_eq!(error_at("player p\nvertex a p\nedge a b p=1\n"), (3, 8));
        assert_eq!(error_at("player p\nvertex a p\nedge a a p=1 p=2\n"), (3, 14));
        assert_eq!(error_at("player p\nvertex a p\nedge a a p=inf\n"), (3, 10));
        assert_eq!(error_at("player p\nbogus\n"), (2, 1));
        assert_eq!(error_at("player p q\n"), (1, 10));
    }

    #[test]
    fn semantic_errors_come_from_the_game() {
        assert!(matches!(
            parse_game("player p\nvertex a p\nvertex b p\nedge a b p=0\n"),
            Err(Error::InvalidGame(_))
        ));
    }
}
