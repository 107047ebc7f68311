//! Requirements and witnesses.
//!
//! A requirement lists `<vertex> <value>` lines, one per vertex; values may
//! be `inf` or `-inf`. A witness reads:
//!
//! ```text
//! EPSILON 0
//! LAMBDA
//! a 1
//! b 1
//! PLAY
//! W a,b
//! W' a,b
//! alpha circle a,b 1/3
//! STRATEGY a
//! a family h=a c=b x=circle=1,square=1 W=a,b
//! b giveup
//! ```
//!
//! Cycles are written from their least vertex, alpha entries left out are
//! zero and vertices left out of a strategy block give up.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ext_rat::{format_rational, ExtRat, Rational};
use crate::game::{canonical_rotation, Game, PayoffVector, PlayerId, Requirement, VertexId};
use crate::graph::simple_cycles;
use crate::io::lexer::{ext_rational, format_list, lines, player, rational, vertex, vertex_list, vertex_set, Line, Token};
use crate::linprog::SealedCombination;
use crate::negotiation::{ProverStrategy, PunishmentFamily};
use crate::vertex_set::VertexSet;
use crate::witness::Witness;

fn missing(message: String) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message,
    }
}

/// Reads one `<vertex> <value>` line into `values`.
fn lambda_line(game: &Game, line: &Line, values: &mut [Option<ExtRat>]) -> Result<()> {
    line.expect_len(2, "<vertex> <value>")?;
    let (tv, tx) = (&line.tokens[0], &line.tokens[1]);
    let v = vertex(game, line, tv, tv.text)?;
    if values[v.0].is_some() {
        return Err(line.at(tv, format!("value for `{}` given twice", tv.text)));
    }
    values[v.0] = Some(ext_rational(line, tx, tx.text)?);
    Ok(())
}

fn complete(game: &Game, values: Vec<Option<ExtRat>>) -> Result<Requirement> {
    if let Some(k) = values.iter().position(Option::is_none) {
        return Err(missing(format!("no value for vertex `{}`", game.vertex_name(VertexId(k)))));
    }
    Ok(Requirement(values.into_iter().flatten().collect()))
}

pub fn parse_requirement(game: &Game, text: &str) -> Result<Requirement> {
    let mut values = vec![None; game.num_vertices()];
    for line in lines(text) {
        lambda_line(game, &line, &mut values)?;
    }
    complete(game, values)
}

pub fn print_requirement(game: &Game, lam: &Requirement) -> String {
    game.vertices()
        .map(|v| format!("{} {}\n", game.vertex_name(v), lam.get(v)))
        .collect()
}

fn family(game: &Game, line: &Line, toks: &[Token]) -> Result<PunishmentFamily> {
    let mut fields: HashMap<&str, (Token, &str)> = HashMap::new();
    for tok in toks {
        let Some((key, value)) = tok.text.split_once('=') else {
            return Err(line.at(tok, "expected `<field>=<value>`"));
        };
        if !["h", "c", "x", "W"].contains(&key) {
            return Err(line.at(tok, format!("unknown family field `{key}`")));
        }
        if fields.insert(key, (*tok, value)).is_some() {
            return Err(line.at(tok, format!("field `{key}` given twice")));
        }
    }
    let get = |key: &str| {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| line.err(toks.first().map_or(1, |t| t.column), format!("missing family field `{key}`")))
    };
    let (th, h) = get("h")?;
    let (tc, c) = get("c")?;
    let (tx, x) = get("x")?;
    let (tw, w) = get("W")?;
    let mut payoff: Vec<Option<Rational>> = vec![None; game.num_players()];
    for part in x.split(',').filter(|s| !s.is_empty()) {
        let Some((p, r)) = part.split_once('=') else {
            return Err(line.at(&tx, "expected `x=<player>=<value>,...`"));
        };
        let p = player(game, line, &tx, p)?;
        if payoff[p.0].is_some() {
            return Err(line.at(&tx, "tail payoff entry given twice"));
        }
        payoff[p.0] = Some(rational(line, &tx, r)?);
    }
    if let Some(k) = payoff.iter().position(Option::is_none) {
        return Err(line.at(&tx, format!("no tail payoff for `{}`", game.player_name(PlayerId(k)))));
    }
    Ok(PunishmentFamily {
        h: vertex_list(game, line, &th, h)?,
        c: vertex_list(game, line, &tc, c)?,
        tail_payoff: PayoffVector::from_rationals(payoff.into_iter().flatten().collect()),
        tail_occ: vertex_set(game, line, &tw, w)?,
    })
}

enum Section {
    Top,
    Lambda,
    Play,
    Strategy(VertexId),
}

pub fn parse_witness(game: &Game, text: &str, cycle_cap: usize) -> Result<Witness> {
    let n = game.num_vertices();
    let mut section = Section::Top;
    let mut epsilon = None;
    let mut lambda = vec![None; n];
    let mut w: Option<VertexSet> = None;
    let mut wp: Option<VertexSet> = None;
    let mut alpha_lines: Vec<(Line, PlayerId, Vec<VertexId>, Rational)> = Vec::new();
    let mut strategies: Vec<Option<ProverStrategy>> = vec![None; n];
    for line in lines(text) {
        let head = line.tokens[0];
        match head.text {
            "EPSILON" => {
                line.expect_len(2, "EPSILON <value>")?;
                if epsilon.is_some() {
                    return Err(line.at(&head, "EPSILON given twice"));
                }
                let e = rational(&line, &line.tokens[1], line.tokens[1].text)?;
                if e < Rational::zero() {
                    return Err(line.at(&line.tokens[1], "epsilon must be nonnegative"));
                }
                epsilon = Some(e);
                continue;
            }
            "LAMBDA" => {
                line.expect_len(1, "LAMBDA")?;
                section = Section::Lambda;
                continue;
            }
            "PLAY" => {
                line.expect_len(1, "PLAY")?;
                section = Section::Play;
                continue;
            }
            "STRATEGY" => {
                line.expect_len(2, "STRATEGY <vertex>")?;
                let v = vertex(game, &line, &line.tokens[1], line.tokens[1].text)?;
                if strategies[v.0].is_some() {
                    return Err(line.at(&line.tokens[1], "strategy block given twice"));
                }
                strategies[v.0] = Some(ProverStrategy::give_up_everywhere(game));
                section = Section::Strategy(v);
                continue;
            }
            _ => {}
        }
        match section {
            Section::Top => return Err(line.at(&head, format!("unexpected `{}` outside a section", head.text))),
            Section::Lambda => lambda_line(game, &line, &mut lambda)?,
            Section::Play => match head.text {
                "W" | "W'" => {
                    line.expect_len(2, "W <vertices>")?;
                    let set = vertex_set(game, &line, &line.tokens[1], line.tokens[1].text)?;
                    let slot = if head.text == "W" { &mut w } else { &mut wp };
                    if slot.replace(set).is_some() {
                        return Err(line.at(&head, format!("{} given twice", head.text)));
                    }
                }
                "alpha" => {
                    line.expect_len(4, "alpha <player> <cycle> <weight>")?;
                    let p = player(game, &line, &line.tokens[1], line.tokens[1].text)?;
                    let cycle = vertex_list(game, &line, &line.tokens[2], line.tokens[2].text)?;
                    let a = rational(&line, &line.tokens[3], line.tokens[3].text)?;
                    alpha_lines.push((line.clone(), p, cycle, a));
                }
                other => return Err(line.at(&head, format!("unknown play entry `{other}`"))),
            },
            Section::Strategy(v) => {
                if line.tokens.len() < 2 {
                    return Err(line.at(&head, "expected `<vertex> family ...` or `<vertex> giveup`"));
                }
                let u = vertex(game, &line, &head, head.text)?;
                let tau = strategies[v.0].as_mut().expect("block opened");
                if tau.get(u).is_some() {
                    return Err(line.at(&head, format!("choice at `{}` given twice", head.text)));
                }
                match line.tokens[1].text {
                    "giveup" => line.expect_len(2, "<vertex> giveup")?,
                    "family" => tau.set(u, Some(family(game, &line, &line.tokens[2..])?)),
                    other => return Err(line.at(&line.tokens[1], format!("unknown choice `{other}`"))),
                }
            }
        }
    }
    let epsilon = epsilon.ok_or_else(|| missing("missing EPSILON".into()))?;
    let w = w.ok_or_else(|| missing("missing W".into()))?;
    let wp = wp.ok_or_else(|| missing("missing W'".into()))?;
    let cycles = simple_cycles(game, w, cycle_cap)?;
    let mut alphas = vec![vec![Rational::zero(); cycles.len()]; game.num_players()];
    let mut given = vec![vec![false; cycles.len()]; game.num_players()];
    for (line, p, cycle, a) in alpha_lines {
        let tok = &line.tokens[2];
        let canon = canonical_rotation(&cycle);
        let k = cycles
            .iter()
            .position(|c| *c == canon)
            .ok_or_else(|| line.at(tok, "not a simple cycle inside W"))?;
        if std::mem::replace(&mut given[p.0][k], true) {
            return Err(line.at(tok, "weight given twice"));
        }
        alphas[p.0][k] = a;
    }
    Ok(Witness {
        w,
        wp,
        alphas: SealedCombination { alphas },
        lambda: complete(game, lambda)?,
        strategies: strategies
            .into_iter()
            .map(|s| s.unwrap_or_else(|| ProverStrategy::give_up_everywhere(game)))
            .collect(),
        epsilon,
    })
}

fn print_family(game: &Game, f: &PunishmentFamily) -> String {
    let x: Vec<String> = game
        .players()
        .map(|p| format!("{}={}", game.player_name(p), f.tail_payoff.get(p)))
        .collect();
    format!(
        "family h={} c={} x={} W={}",
        format_list(game, f.h.iter().copied()),
        format_list(game, f.c.iter().copied()),
        x.join(","),
        format_list(game, f.tail_occ.iter())
    )
}

/// Canonical text of a witness. Fails if the alpha rows do not match the
/// simple cycles of `W`.
pub fn print_witness(game: &Game, w: &Witness, cycle_cap: usize) -> Result<String> {
    let cycles = simple_cycles(game, w.w, cycle_cap)?;
    w.alphas.validate(game.num_players(), cycles.len())?;
    let mut out = format!("EPSILON {}\nLAMBDA\n", format_rational(&w.epsilon));
    out += &print_requirement(game, &w.lambda);
    out += &format!(
        "PLAY\nW {}\nW' {}\n",
        format_list(game, w.w.iter()),
        format_list(game, w.wp.iter())
    );
    for p in game.players() {
        for (c, a) in cycles.iter().zip(&w.alphas.alphas[p.0]) {
            if !a.is_zero() {
                out += &format!(
                    "alpha {} {} {}\n",
                    game.player_name(p),
                    format_list(game, c.iter().copied()),
                    format_rational(a)
                );
            }
        }
    }
    for v in game.vertices() {
        out += &format!("STRATEGY {}\n", game.vertex_name(v));
        for u in game.vertices() {
            if let Some(f) = w.strategies[v.0].get(u) {
                out += &format!("{} {}\n", game.vertex_name(u), print_family(game, f));
            }
        }
    }
    Ok(out)
}
