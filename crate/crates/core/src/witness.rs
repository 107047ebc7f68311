//! Certificates for the ε-SPE threshold problem: a lasso-free description
//! of the equilibrium outcome plus one prover strategy per vertex.

use crate::error::{Error, Result};
use crate::ext_rat::{ExtRat, Rational};
use crate::game::{cycle_mean_rewards, Game, PayoffVector, Requirement, VertexId};
use crate::graph::{coverage_walk_exists, is_strongly_connected, simple_cycles, SimpleCycleSet};
use crate::linprog::{sealed_feasible, SealedCombination};
use crate::negotiation::{
    build_deviation_graph, family_is_realizable, least_fixed_point, prover_value, NegotiationOracleConfig,
    ProverStrategy,
};
use crate::vertex_set::VertexSet;

/// Does the game have an ε-SPE from its initial vertex whose payoff lies
/// between `lower` and `upper`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdInstance {
    pub game: Game,
    pub lower: PayoffVector,
    pub upper: PayoffVector,
    pub epsilon: Rational,
}

impl ThresholdInstance {
    pub fn new(game: Game, lower: PayoffVector, upper: PayoffVector, epsilon: Rational) -> Result<Self> {
        let n = game.num_players();
        if lower.len() != n || upper.len() != n {
            return Err(Error::DimensionMismatch(format!("thresholds must have {n} entries")));
        }
        if epsilon < Rational::from_integer(0.into()) {
            return Err(Error::Precondition("epsilon must be nonnegative".into()));
        }
        if game.init().is_none() {
            return Err(Error::Precondition("the game has no initial vertex".into()));
        }
        Ok(ThresholdInstance {
            game,
            lower,
            upper,
            epsilon,
        })
    }

    /// The threshold-free instance.
    pub fn unconstrained(game: Game, epsilon: Rational) -> Result<Self> {
        let n = game.num_players();
        Self::new(
            game,
            PayoffVector::uniform(n, ExtRat::NegInf),
            PayoffVector::uniform(n, ExtRat::PosInf),
            epsilon,
        )
    }

    fn init(&self) -> VertexId {
        self.game.init().expect("checked at construction")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Vertices visited infinitely often.
    pub w: VertexSet,
    /// Vertices visited at all.
    pub wp: VertexSet,
    /// Weights over the simple cycles of `w`, in [`simple_cycles`] order.
    pub alphas: SealedCombination,
    pub lambda: Requirement,
    pub strategies: Vec<ProverStrategy>,
    pub epsilon: Rational,
}

/// Outcome of a check: the first entry of `diagnostics` names the first
/// failing clause; `payoff` is the realized payoff when it could be computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub valid: bool,
    pub payoff: Option<Vec<Rational>>,
    pub diagnostics: Vec<String>,
}

impl CheckReport {
    fn fail(&mut self, msg: String) {
        self.valid = false;
        self.diagnostics.push(msg);
    }
}

/// Checks that a play from the initial vertex visiting exactly `wp`, then
/// `w` infinitely often, can realize the sealed combination `alphas` of the
/// cycles of `w`, within the thresholds and consistently with `lam`.
pub fn check_play_witness(
    inst: &ThresholdInstance,
    w: VertexSet,
    wp: VertexSet,
    alphas: &SealedCombination,
    lam: &Requirement,
    cycle_cap: usize,
) -> Result<CheckReport> {
    let game = &inst.game;
    lam.check_for(game)?;
    if w.is_empty() || !w.is_subset_of(wp) || !wp.is_subset_of(game.all_vertices()) {
        return Err(Error::MalformedWitness("expected ∅ ≠ W ⊆ W' ⊆ V".into()));
    }
    let cycles = simple_cycles(game, w, cycle_cap)?;
    alphas.validate(game.num_players(), cycles.len())?;
    let mut report = CheckReport {
        valid: true,
        payoff: None,
        diagnostics: Vec::new(),
    };
    if !is_strongly_connected(game, w) {
        report.fail("W is not strongly connected".into());
        return Ok(report);
    }
    if !wp.contains(inst.init()) || !coverage_walk_exists(game, inst.init(), w, wp)? {
        report.fail("no walk from the initial vertex covers exactly W' and enters W".into());
    }
    let points = cycle_points(game, &cycles)?;
    let z = alphas.value(&points);
    for p in game.players() {
        let zp = ExtRat::Finite(z[p.0].clone());
        let name = game.player_name(p);
        if zp < *inst.lower.get(p) || zp > *inst.upper.get(p) {
            report.fail(format!("payoff {} of {name} is outside the thresholds", zp));
        }
    }
    for u in wp.iter() {
        let j = game.owner(u);
        if ExtRat::Finite(z[j.0].clone()) < *lam.get(u) {
            report.fail(format!(
                "payoff of {} is below the requirement at {}",
                game.player_name(j),
                game.vertex_name(u)
            ));
        }
    }
    report.payoff = Some(z);
    Ok(report)
}

fn cycle_points(game: &Game, cycles: &SimpleCycleSet) -> Result<Vec<Vec<Rational>>> {
    cycles.iter().map(|c| cycle_mean_rewards(game, c)).collect()
}

/// Full check: the play clause, then for each vertex `v` that the strategy
/// there consists of realizable, consistent families and keeps the
/// challenger of `v`'s owner at or below `λ(v) + ε`.
pub fn check_witness(inst: &ThresholdInstance, w: &Witness, cycle_cap: usize) -> Result<CheckReport> {
    let game = &inst.game;
    if w.strategies.len() != game.num_vertices() {
        return Err(Error::MalformedWitness(format!(
            "{} strategies for {} vertices",
            w.strategies.len(),
            game.num_vertices()
        )));
    }
    let mut report = check_play_witness(inst, w.w, w.wp, &w.alphas, &w.lambda, cycle_cap)?;
    if w.epsilon > inst.epsilon {
        report.fail(format!(
            "the witness is built for epsilon {} above the instance's",
            crate::ext_rat::format_rational(&w.epsilon)
        ));
    }
    for v in game.vertices() {
        let name = game.vertex_name(v);
        let player = game.owner(v);
        let tau = &w.strategies[v.0];
        let dg = match build_deviation_graph(game, &w.lambda, player, v, tau) {
            Ok(dg) => dg,
            Err(e) => {
                report.fail(format!("strategy at {name}: {e}"));
                continue;
            }
        };
        let mut realizable = true;
        for u in game.vertices() {
            if let Some(fam) = tau.get(u) {
                if !family_is_realizable(game, fam, cycle_cap)? {
                    report.fail(format!(
                        "strategy at {name}: the family at {} has no realizing tail",
                        game.vertex_name(u)
                    ));
                    realizable = false;
                }
            }
        }
        if !realizable {
            continue;
        }
        let bound = w.lambda.get(v).checked_add(&ExtRat::Finite(w.epsilon.clone()))?;
        let value = prover_value(&dg, player);
        if value > bound {
            report.fail(format!("strategy at {name} lets the challenger reach {value} > {bound}"));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Box<Witness>),
    /// Every candidate `(W, W')` was examined; `pairs` counts them.
    NotFound { pairs: usize },
    /// A cap was hit; the reason says which.
    Indeterminate(String),
}

/// Desk-scale solver: computes the least ε-fixed point, then looks for the
/// first `(W, W')` in increasing bitmask order admitting a sealed
/// combination within the thresholds and above the requirements on `W'`.
pub fn search_witness(inst: &ThresholdInstance, cfg: &NegotiationOracleConfig) -> Result<SearchOutcome> {
    let game = &inst.game;
    let cfg = NegotiationOracleConfig {
        epsilon: inst.epsilon.clone(),
        ..cfg.clone()
    };
    let fp = match least_fixed_point(game, &cfg) {
        Ok(fp) => fp,
        Err(e) if e.is_cap() => return Ok(SearchOutcome::Indeterminate(e.to_string())),
        Err(e) => return Err(e),
    };
    if !fp.converged {
        return Ok(SearchOutcome::Indeterminate(format!(
            "no ε-fixed point within {} iterations",
            cfg.max_iterations
        )));
    }
    let (w, wp, alphas) = match find_play(inst, &fp.lambda, cfg.cycle_cap) {
        Ok(PlaySearch::Found { w, wp, alphas, .. }) => (w, wp, alphas),
        Ok(PlaySearch::NotFound { pairs }) => return Ok(SearchOutcome::NotFound { pairs }),
        Err(e) if e.is_cap() => return Ok(SearchOutcome::Indeterminate(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(SearchOutcome::Found(Box::new(Witness {
        w,
        wp,
        alphas,
        lambda: fp.lambda,
        strategies: fp.strategies,
        epsilon: inst.epsilon.clone(),
    })))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaySearch {
    Found {
        w: VertexSet,
        wp: VertexSet,
        alphas: SealedCombination,
        payoff: Vec<Rational>,
    },
    NotFound {
        pairs: usize,
    },
}

/// Looks for a `lam`-consistent play from the initial vertex with payoff
/// within the thresholds: the first `(W, W')` in increasing bitmask order
/// with a covering walk and a sealed combination of the cycles of `W` above
/// the lower threshold and the requirements on `W'`, below the upper one.
pub fn find_play(inst: &ThresholdInstance, lam: &Requirement, cycle_cap: usize) -> Result<PlaySearch> {
    let game = &inst.game;
    lam.check_for(game)?;
    let v0 = inst.init();
    let all = game.all_vertices();
    let mut pairs = 0;
    for w in all.subsets().filter(|&s| is_strongly_connected(game, s)) {
        let points = cycle_points(game, &simple_cycles(game, w, cycle_cap)?)?;
        for extra in complement(w, game).subsets() {
            let wp = w.union(extra);
            if !wp.contains(v0) {
                continue;
            }
            pairs += 1;
            if !coverage_walk_exists(game, v0, w, wp)? {
                continue;
            }
            let lower: Vec<ExtRat> = lam
                .demands(game, wp)
                .into_iter()
                .zip(&inst.lower.0)
                .map(|(d, x)| d.max(x.clone()))
                .collect();
            if let Some(alphas) = sealed_feasible(&points, &lower, &inst.upper.0)? {
                let payoff = alphas.value(&points);
                return Ok(PlaySearch::Found { w, wp, alphas, payoff });
            }
        }
    }
    Ok(PlaySearch::NotFound { pairs })
}

fn complement(set: VertexSet, game: &Game) -> VertexSet {
    VertexSet(game.all_vertices().0 & !set.0)
}

/// Existence of an ε-SPE from the initial vertex, with no threshold.
pub fn spe_exists(game: &Game, epsilon: Rational, cfg: &NegotiationOracleConfig) -> Result<SearchOutcome> {
    search_witness(&ThresholdInstance::unconstrained(game.clone(), epsilon)?, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext_rat::{int, rat};
    use crate::fixtures;
    use crate::negotiation::PunishmentFamily;

    fn ext(xs: &[i64]) -> PayoffVector {
        PayoffVector(xs.iter().map(|&x| ExtRat::from_int(x)).collect())
    }

    fn req(xs: &[i64]) -> Requirement {
        Requirement(xs.iter().map(|&x| ExtRat::from_int(x)).collect())
    }

    fn set(g: &Game, names: &[&str]) -> VertexSet {
        VertexSet::from_vertices(names.iter().map(|n| g.vertex_by_name(n).unwrap()))
    }

    fn tree7_cfg() -> NegotiationOracleConfig {
        NegotiationOracleConfig {
            max_vertices: 7,
            ..Default::default()
        }
    }

    fn two_state_witness(g: &Game, lam: Requirement) -> Witness {
        let fam = |h: Vec<VertexId>, c: usize| {
            Some(PunishmentFamily {
                h,
                c: vec![VertexId(c)],
                tail_payoff: PayoffVector::from_rationals(vec![int(1), int(1)]),
                tail_occ: g.all_vertices(),
            })
        };
        // circle is punished by the loop on b, square by the loop on a
        let at_a = ProverStrategy {
            choice: vec![fam(vec![VertexId(0)], 1), fam(vec![], 1)],
        };
        let at_b = ProverStrategy {
            choice: vec![fam(vec![], 0), fam(vec![VertexId(1)], 0)],
        };
        Witness {
            w: g.all_vertices(),
            wp: g.all_vertices(),
            alphas: SealedCombination {
                alphas: vec![vec![rat(1, 3); 3]; 2],
            },
            lambda: lam,
            strategies: vec![at_a, at_b],
            epsilon: int(0),
        }
    }

    #[test]
    fn tree7_play_witness() {
        let g = fixtures::tree7();
        let fp = least_fixed_point(&g, &tree7_cfg()).unwrap();
        assert!(fp.converged);
        let inst = ThresholdInstance::new(g.clone(), ext(&[1, 1]), ext(&[1, 1]), int(0)).unwrap();
        let one = SealedCombination {
            alphas: vec![vec![int(1)]; 2],
        };
        let r = check_play_witness(&inst, set(&g, &["d"]), set(&g, &["a", "b", "d"]), &one, &fp.lambda, 1000).unwrap();
        assert!(r.valid, "{:?}", r.diagnostics);
        assert_eq!(r.payoff, Some(vec![int(1), int(1)]));
        let r = check_play_witness(&inst, set(&g, &["d"]), set(&g, &["a", "d"]), &one, &fp.lambda, 1000).unwrap();
        assert!(!r.valid);
    }

    #[test]
    fn two_state_play_witness() {
        let g = fixtures::two_state();
        let inst = ThresholdInstance::new(g.clone(), ext(&[1, 1]), ext(&[1, 1]), int(0)).unwrap();
        let w = two_state_witness(&g, req(&[1, 1]));
        let r = check_play_witness(&inst, w.w, w.wp, &w.alphas, &w.lambda, 1000).unwrap();
        assert!(r.valid);
        assert_eq!(r.payoff, Some(vec![int(1), int(1)]));
    }

    #[test]
    fn two_state_full_witness() {
        let g = fixtures::two_state();
        let inst = ThresholdInstance::new(g.clone(), ext(&[1, 1]), ext(&[1, 1]), int(0)).unwrap();
        let r = check_witness(&inst, &two_state_witness(&g, req(&[1, 1])), 1000).unwrap();
        assert!(r.valid, "{:?}", r.diagnostics);
        let r = check_witness(&inst, &two_state_witness(&g, req(&[0, 0])), 1000).unwrap();
        assert!(!r.valid);
        assert!(r.diagnostics[0].contains("challenger"), "{:?}", r.diagnostics);
        let mut gives_up = two_state_witness(&g, req(&[1, 1]));
        gives_up.strategies[0].set(VertexId(1), None);
        assert!(!check_witness(&inst, &gives_up, 1000).unwrap().valid);
    }

    #[test]
    fn unrealizable_family_is_rejected() {
        let g = fixtures::two_state();
        let inst = ThresholdInstance::new(g.clone(), ext(&[1, 1]), ext(&[1, 1]), int(0)).unwrap();
        let mut w = two_state_witness(&g, req(&[1, 1]));
        for tau in &mut w.strategies {
            for f in tau.choice.iter_mut().flatten() {
                f.tail_occ = VertexSet::singleton(VertexId(1));
            }
        }
        let r = check_witness(&inst, &w, 1000).unwrap();
        assert!(!r.valid);
    }

    #[test]
    fn malformed_alphas_are_errors() {
        let g = fixtures::two_state();
        let inst = ThresholdInstance::new(g.clone(), ext(&[1, 1]), ext(&[1, 1]), int(0)).unwrap();
        let bad = SealedCombination {
            alphas: vec![vec![rat(1, 2), rat(1, 2), rat(1, 2)]; 2],
        };
        let all = g.all_vertices();
        assert!(check_play_witness(&inst, all, all, &bad, &req(&[1, 1]), 1000).is_err());
    }

    fn solve(g: &Game, lower: PayoffVector, upper: PayoffVector, cfg: &NegotiationOracleConfig) -> SearchOutcome {
        let inst = ThresholdInstance::new(g.clone(), lower, upper, int(0)).unwrap();
        let out = search_witness(&inst, cfg).unwrap();
        if let SearchOutcome::Found(w) = &out {
            let r = check_witness(&inst, w, 1000).unwrap();
            assert!(r.valid, "{:?}", r.diagnostics);
        }
        out
    }

    #[test]
    fn tree7_search() {
        let g = fixtures::tree7();
        assert!(matches!(solve(&g, ext(&[1, 1]), ext(&[1, 1]), &tree7_cfg()), SearchOutcome::Found(_)));
    }

    #[test]
    fn two_state_search() {
        let g = fixtures::two_state();
        let cfg = NegotiationOracleConfig::default();
        let inf = PayoffVector::uniform(2, ExtRat::PosInf);
        assert!(matches!(solve(&g, ext(&[2, 2]), ext(&[2, 2]), &cfg), SearchOutcome::Found(_)));
        assert!(matches!(solve(&g, ext(&[0, 1]), ext(&[0, 1]), &cfg), SearchOutcome::NotFound { .. }));
        assert!(matches!(solve(&g, ext(&[3, 3]), inf, &cfg), SearchOutcome::NotFound { .. }));
        assert!(matches!(spe_exists(&g, int(0), &cfg).unwrap(), SearchOutcome::Found(_)));
    }
}
