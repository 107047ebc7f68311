//! Punishment families, deviation graphs, the negotiation function and its
//! least fixed point.

mod deviation;
mod family;

pub use deviation::{
    build_deviation_graph, prover_value, verify_prover_strategy, DevArc, DevNode, DeviationGraph, ProverStrategy,
};
pub use family::{
    family_is_consistent, family_is_realizable, family_moves, FamilyMoves, PostDeviation, PreDeviation,
    PunishmentFamily, Segment,
};

mod fixpoint;
mod oracle;

pub use fixpoint::{iterate_from, least_fixed_point, FixpointResult};
pub use oracle::{nego_oracle, NegotiationOracleConfig, NegotiationOutcome, Oracle};
