//! Line-oriented text formats for games, requirements and witnesses, and
//! DIMACS CNF input.
//!
//! Blank lines are ignored and `#` starts a comment. Names may not contain
//! whitespace, `#`, `,` or `=`.

mod dimacs;
mod game_file;
mod lexer;
mod witness_file;

pub use dimacs::{parse_dimacs, print_dimacs};
pub use game_file::{parse_game, print_game};
pub use witness_file::{parse_requirement, parse_witness, print_requirement, print_witness};

/// True iff `name` can be written in the text formats.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || matches!(c, '#' | ',' | '='))
}
