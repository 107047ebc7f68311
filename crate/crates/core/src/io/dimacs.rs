//! DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header and
//! clauses as literal lists terminated by `0`, possibly across lines.

use crate::error::{Error, Result};
use crate::reductions::CnfFormula;

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let err = |line: usize, column: usize, message: &str| Error::Parse {
        line,
        column,
        message: message.to_string(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut last = 1;
    for (k, raw) in text.lines().enumerate() {
        let number = k + 1;
        last = number;
        let trimmed = raw.trim_start();
        let indent = raw.len() - trimmed.len() + 1;
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(err(number, indent, "second header"));
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| err(number, indent, "expected `p cnf <vars> <clauses>`"))?);
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(err(number, indent, "clause before the `p cnf` header"));
        };
        let mut column = 1;
        for piece in raw.split(' ') {
            if !piece.trim().is_empty() {
                let lit: i64 = piece
                    .trim()
                    .parse()
                    .map_err(|_| err(number, column, "expected an integer literal"))?;
                if lit == 0 {
                    if current.is_empty() {
                        return Err(err(number, column, "empty clause"));
                    }
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > vars {
                    return Err(err(number, column, "variable out of range"));
                } else {
                    current.push(lit);
                }
            }
            column += piece.chars().count() + 1;
        }
    }
    let (vars, count) = header.ok_or_else(|| err(last, 1, "missing `p cnf` header"))?;
    if !current.is_empty() {
        return Err(err(last, 1, "last clause is not terminated by 0"));
    }
    if clauses.len() != count {
        return Err(err(last, 1, &format!("header announces {count} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(vars, clauses)
}

pub fn print_dimacs(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.num_vars(), phi.clauses().len());
    for c in phi.clauses() {
        for l in c {
            out += &format!("{l} ");
        }
        out += "0\n";
    }
    out
}
