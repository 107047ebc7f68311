//! Splitting text into located tokens.

use crate::error::{Error, Result};
use crate::ext_rat::{parse_rational, ExtRat, Rational};
use crate::game::{Game, PlayerId, VertexId};
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    /// 1-based character column.
    pub column: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Line<'a> {
    /// 1-based line number.
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    pub fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    pub fn at(&self, tok: &Token, message: impl Into<String>) -> Error {
        self.err(tok.column, message)
    }

    /// Errors unless the line has exactly `n` tokens.
    pub fn expect_len(&self, n: usize, usage: &str) -> Result<()> {
        if self.tokens.len() == n {
            return Ok(());
        }
        let column = self.tokens.get(n).map_or_else(|| self.end_column(), |t| t.column);
        Err(self.err(column, format!("expected `{usage}`")))
    }

    fn end_column(&self) -> usize {
        self.tokens
            .last()
            .map_or(1, |t| t.column + t.text.chars().count())
    }
}

/// Nonempty lines with comments removed.
pub(crate) fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start: Option<(usize, usize)> = None;
        let mut column = 0;
        for (byte, c) in content.char_indices() {
            column += 1;
            match (c.is_whitespace(), start) {
                (true, Some((b, col))) => {
                    tokens.push(Token {
                        text: &content[b..byte],
                        column: col,
                    });
                    start = None;
                }
                (false, None) => start = Some((byte, column)),
                _ => {}
            }
        }
        if let Some((b, col)) = start {
            tokens.push(Token {
                text: &content[b..],
                column: col,
            });
        }
        if !tokens.is_empty() {
            out.push(Line { number: k + 1, tokens });
        }
    }
    out
}

pub(crate) fn rational(line: &Line, tok: &Token, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|_| line.at(tok, format!("malformed rational `{text}`")))
}

pub(crate) fn ext_rational(line: &Line, tok: &Token, text: &str) -> Result<ExtRat> {
    text.parse::<ExtRat>()
        .map_err(|_| line.at(tok, format!("malformed value `{text}`")))
}

pub(crate) fn vertex(game: &Game, line: &Line, tok: &Token, name: &str) -> Result<VertexId> {
    game.vertex_by_name(name)
        .ok_or_else(|| line.at(tok, format!("unknown vertex `{name}`")))
}

pub(crate) fn player(game: &Game, line: &Line, tok: &Token, name: &str) -> Result<PlayerId> {
    game.player_by_name(name)
        .ok_or_else(|| line.at(tok, format!("unknown player `{name}`")))
}

/// A comma-separated vertex list; the empty string is the empty list.
pub(crate) fn vertex_list(game: &Game, line: &Line, tok: &Token, text: &str) -> Result<Vec<VertexId>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|name| vertex(game, line, tok, name)).collect()
}

pub(crate) fn vertex_set(game: &Game, line: &Line, tok: &Token, text: &str) -> Result<VertexSet> {
    let list = vertex_list(game, line, tok, text)?;
    let set = VertexSet::from_vertices(list.iter().copied());
    if set.len() != list.len() {
        return Err(line.at(tok, "vertex listed twice"));
    }
    Ok(set)
}

pub(crate) fn format_list(game: &Game, vs: impl IntoIterator<Item = VertexId>) -> String {
    vs.into_iter()
        .map(|v| game.vertex_name(v).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_and_comments() {
        let ls = lines("  player  circle # note\n\n# only a comment\nvertex a circle");
        assert_eq!(ls.len(), 2);
        assert_eq!(ls[0].number, 1);
        assert_eq!(ls[0].tokens[0].column, 3);
        assert_eq!(ls[0].tokens[1].text, "circle");
        assert_eq!(ls[0].tokens[1].column, 11);
        assert_eq!(ls[1].number, 4);
        assert_eq!(ls[1].tokens.len(), 3);
    }
}
