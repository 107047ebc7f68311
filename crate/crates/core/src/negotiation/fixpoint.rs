//! Least ε-fixed point of the negotiation function by iteration from below.

use crate::error::Result;
use crate::game::{Game, Requirement};
use crate::negotiation::deviation::ProverStrategy;
use crate::negotiation::oracle::{NegotiationOracleConfig, Oracle};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointResult {
    /// The last requirement reached.
    pub lambda: Requirement,
    /// Every requirement visited, starting point first.
    pub trace: Vec<Requirement>,
    /// True iff the negotiation function maps `lambda` within `ε` of itself.
    pub converged: bool,
    /// Number of evaluations of the negotiation function.
    pub oracle_calls: usize,
    /// When converged, per vertex a prover strategy holding the challenger
    /// to within `ε` of `lambda`.
    pub strategies: Vec<ProverStrategy>,
}

/// Iterates the negotiation function from `λ ≡ -∞`.
pub fn least_fixed_point(game: &Game, cfg: &NegotiationOracleConfig) -> Result<FixpointResult> {
    iterate_from(game, Requirement::bottom(game), cfg)
}

/// Iterates the negotiation function from `start` until two successive
/// requirements agree within `ε` everywhere or the iteration cap is hit.
pub fn iterate_from(game: &Game, start: Requirement, cfg: &NegotiationOracleConfig) -> Result<FixpointResult> {
    start.check_for(game)?;
    let oracle = Oracle::new(game, cfg)?;
    let mut lambda = start;
    let mut trace = vec![lambda.clone()];
    for calls in 1..=cfg.max_iterations {
        let out = oracle.negotiate(&lambda)?;
        let close = out
            .values
            .0
            .iter()
            .zip(&lambda.0)
            .all(|(next, cur)| next.within(cur, &cfg.epsilon));
        if close {
            return Ok(FixpointResult {
                lambda,
                trace,
                converged: true,
                oracle_calls: calls,
                strategies: out.strategies,
            });
        }
        lambda = out.values;
        trace.push(lambda.clone());
    }
    Ok(FixpointResult {
        lambda,
        trace,
        converged: false,
        oracle_calls: cfg.max_iterations,
        strategies: Vec::new(),
    })
}
