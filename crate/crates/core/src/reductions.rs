//! Games encoding CNF satisfiability.
//!
//! In `G^φ` a solver player walks around the clauses, picking one literal
//! state per clause; the variable player owning a literal state may leave a
//! negative literal for a sink `bot` that ruins the solver. `H^φ` wraps it
//! with two more players so that an equilibrium exists iff `φ` is
//! satisfiable.

use crate::error::{Error, Result};
use crate::ext_rat::{int, Rational};
use crate::game::{Edge, Game, PlayerId, VertexId};
use crate::negotiation::NegotiationOracleConfig;
use crate::witness::{spe_exists, SearchOutcome};

/// A formula in conjunctive normal form; literal `k > 0` is variable `k`,
/// `-k` its negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::InvalidFormula("no clauses".into()));
        }
        for (k, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidFormula(format!("clause {} is empty", k + 1)));
            }
            if let Some(l) = c.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::InvalidFormula(format!("literal {l} out of range in clause {}", k + 1)));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }

    /// Clause literals without repetitions, in first-occurrence order.
    fn distinct_literals(&self, k: usize) -> Vec<i64> {
        let mut out: Vec<i64> = Vec::new();
        for &l in &self.clauses[k] {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        out
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// Satisfiability by trying every assignment.
    pub fn brute_force_satisfiable(&self) -> Result<bool> {
        if self.num_vars > 24 {
            return Err(Error::CapExceeded {
                what: "variables for truth-table search",
                cap: 24,
            });
        }
        Ok((0u64..1 << self.num_vars).any(|bits| {
            let a: Vec<bool> = (0..self.num_vars).map(|v| bits >> v & 1 == 1).collect();
            self.is_satisfied_by(&a)
        }))
    }
}

fn literal_name(k: usize, l: i64) -> String {
    if l > 0 {
        format!("C{}_x{l}", k + 1)
    } else {
        format!("C{}_nx{}", k + 1, -l)
    }
}

struct Tables {
    players: Vec<String>,
    vertices: Vec<(String, PlayerId)>,
    edges: Vec<(String, String, Vec<Rational>)>,
}

impl Tables {
    fn index(&self, name: &str) -> VertexId {
        VertexId(self.vertices.iter().position(|(v, _)| v == name).expect("known vertex"))
    }

    fn build(self, init: &str) -> Result<Game> {
        let init = self.index(init);
        let edges = self
            .edges
            .iter()
            .map(|(f, t, r)| Edge {
                from: self.index(f),
                to: self.index(t),
                rewards: r.clone(),
            })
            .collect();
        Game::new(self.players, self.vertices, edges, Some(init))
    }
}

/// Player `S` then `x1..xn`; clause states `C1..Cm` owned by `S`, literal
/// states owned by their variable, and `bot` owned by `S`.
fn g_phi_tables(phi: &CnfFormula) -> Tables {
    let n = phi.num_vars;
    let solver = PlayerId(0);
    let mut players = vec!["S".to_string()];
    players.extend((1..=n).map(|v| format!("x{v}")));
    let ones = || vec![int(1); n + 1];
    let m = phi.clauses.len();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for k in 0..m {
        vertices.push((format!("C{}", k + 1), solver));
    }
    for k in 0..m {
        for l in phi.distinct_literals(k) {
            let name = literal_name(k, l);
            vertices.push((name.clone(), PlayerId(l.unsigned_abs() as usize)));
            let mut enter = ones();
            if l > 0 {
                enter[l as usize] = int(0);
            }
            edges.push((format!("C{}", k + 1), name.clone(), enter));
            edges.push((name.clone(), format!("C{}", (k + 1) % m + 1), ones()));
            if l < 0 {
                edges.push((name, "bot".to_string(), ones()));
            }
        }
    }
    vertices.push(("bot".to_string(), solver));
    let mut sink = ones();
    sink[0] = int(0);
    edges.push(("bot".to_string(), "bot".to_string(), sink));
    Tables {
        players,
        vertices,
        edges,
    }
}

/// The SAT game `G^φ`, starting at `C1`.
pub fn build_g_phi(phi: &CnfFormula) -> Result<Game> {
    g_phi_tables(phi).build("C1")
}

/// `G^φ` wrapped with players `circle` and `square` and vertices `a`, `b`,
/// `c`, starting at `a`.
pub fn build_h_phi(phi: &CnfFormula) -> Result<Game> {
    let mut t = g_phi_tables(phi);
    let n = t.players.len();
    let circle = PlayerId(n);
    let square = PlayerId(n + 1);
    t.players.push("circle".into());
    t.players.push("square".into());
    for (_, _, r) in &mut t.edges {
        let other = int(1) - &r[0];
        r.push(other.clone());
        r.push(other);
    }
    t.vertices.push(("a".into(), circle));
    t.vertices.push(("b".into(), square));
    t.vertices.push(("c".into(), square));
    let with = |pairs: &[(usize, i64)]| {
        let mut r = vec![int(0); n + 2];
        for &(p, x) in pairs {
            r[p] = int(x);
        }
        r
    };
    let ab = with(&[(circle.0, 0), (square.0, 3)]);
    t.edges.push(("a".into(), "b".into(), ab.clone()));
    t.edges.push(("b".into(), "a".into(), ab));
    t.edges.push(("a".into(), "C1".into(), with(&[])));
    t.edges.push(("b".into(), "c".into(), with(&[])));
    t.edges.push(("c".into(), "c".into(), with(&[(circle.0, 2), (square.0, 2)])));
    t.build("a")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SanityReport {
    pub satisfiable: bool,
    /// `None` when the solver hit a cap.
    pub spe_exists: Option<bool>,
}

impl SanityReport {
    pub fn agree(&self) -> Option<bool> {
        self.spe_exists.map(|e| e == self.satisfiable)
    }
}

/// Solves SPE existence on `H^φ` and compares with a truth table. The
/// oracle's vertex cap is raised to the size of `H^φ`; other caps apply.
pub fn reduction_sanity(phi: &CnfFormula, cfg: &NegotiationOracleConfig) -> Result<SanityReport> {
    let h = build_h_phi(phi)?;
    let cfg = NegotiationOracleConfig {
        max_vertices: cfg.max_vertices.max(h.num_vertices()),
        ..cfg.clone()
    };
    let spe = match spe_exists(&h, int(0), &cfg)? {
        SearchOutcome::Found(_) => Some(true),
        SearchOutcome::NotFound { .. } => Some(false),
        SearchOutcome::Indeterminate(_) => None,
    };
    Ok(SanityReport {
        satisfiable: phi.brute_force_satisfiable()?,
        spe_exists: spe,
    })
}
