//! Exact decision and certification of subgame-perfect equilibrium
//! threshold problems in multiplayer mean-payoff games.
//!
//! The crate is organised bottom-up:
//!
//! * [`ext_rat`], [`game`]: exact arithmetic, arenas, plays and requirements;
//! * [`graph`]: SCCs, simple cycles, mean-cycle optimisation, coverage walks;
//! * [`linprog`]: an exact simplex and sealed convex-combination feasibility;
//! * [`negotiation`]: punishment families, deviation graphs, the
//!   negotiation-function oracle and its least fixed point;
//! * [`witness`]: certificates, their polynomial-time check and a
//!   desk-scale search;
//! * [`reductions`]: SAT hardness instances;
//! * [`io`]: text formats.

// Matrix and table code reads best with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod ext_rat;
pub mod fixtures;
pub mod game;
pub mod graph;
pub mod io;
pub mod linprog;
pub mod negotiation;
pub mod reductions;
pub mod vertex_set;
pub mod witness;

#[cfg(test)]
pub(crate) mod test_oracles;
#[cfg(test)]
pub(crate) mod testgen;

pub use error::{Error, Result};
pub use ext_rat::{ExtRat, Rational};
pub use game::{Game, LassoPlay, PayoffVector, PlayerId, Requirement, VertexId};
pub use vertex_set::VertexSet;
