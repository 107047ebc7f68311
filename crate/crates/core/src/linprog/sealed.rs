//! Downward-sealed convex combinations of cycle payoffs.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ext_rat::{ExtRat, Rational};
use crate::linprog::{dot, lp_feasible, lp_minimize, LinearSystem, LpOutcome, RelationKind};

/// Weights `alphas[j][c]`: one probability vector over cycles per player.
/// The value in dimension `i` is `min_j Σ_c alphas[j][c] · point_c[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SealedCombination {
    pub alphas: Vec<Vec<Rational>>,
}

impl SealedCombination {
    /// Rejects negative weights, rows that do not sum to one and shape
    /// mismatches.
    pub fn validate(&self, players: usize, cycles: usize) -> Result<()> {
        if self.alphas.len() != players {
            return Err(Error::MalformedWitness(format!(
                "{} alpha rows for {players} players",
                self.alphas.len()
            )));
        }
        for (j, row) in self.alphas.iter().enumerate() {
            if row.len() != cycles {
                return Err(Error::MalformedWitness(format!(
                    "alpha row {j} has {} entries for {cycles} cycles",
                    row.len()
                )));
            }
            if row.iter().any(Signed::is_negative) {
                return Err(Error::MalformedWitness(format!("alpha row {j} has a negative entry")));
            }
            if row.iter().fold(Rational::zero(), |s, a| s + a) != Rational::one() {
                return Err(Error::MalformedWitness(format!("alpha row {j} does not sum to 1")));
            }
        }
        Ok(())
    }

    /// Per-dimension value for the given cycle payoffs (`points[c][i]`).
    pub fn value(&self, points: &[Vec<Rational>]) -> Vec<Rational> {
        let dims = points.first().map_or(0, |p| p.len());
        (0..dims)
            .map(|i| {
                self.alphas
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(points)
                            .fold(Rational::zero(), |s, (a, p)| s + a * &p[i])
                    })
                    .min()
                    .expect("at least one player")
            })
            .collect()
    }
}

/// Finds weights whose sealed value lies in `[lower_i, upper_i]` for every
/// dimension `i`, where dimensions and players coincide (`lower.len()`).
///
/// Lower bounds constrain every row. Each finite upper bound needs one
/// row to stay below it; those choices are enumerated in a fixed order and
/// each yields one linear program.
pub fn sealed_feasible(
    points: &[Vec<Rational>],
    lower: &[ExtRat],
    upper: &[ExtRat],
) -> Result<Option<SealedCombination>> {
    let players = lower.len();
    if points.is_empty() {
        return Err(Error::Precondition("no cycles to combine".into()));
    }
    if upper.len() != players || points.iter().any(|p| p.len() != players) || players == 0 {
        return Err(Error::DimensionMismatch("bounds and cycle payoffs disagree".into()));
    }
    if lower.contains(&ExtRat::PosInf) || upper.contains(&ExtRat::NegInf) {
        return Ok(None);
    }
    let cycles = points.len();
    let capped: Vec<usize> = (0..players).filter(|&i| upper[i].is_finite()).collect();
    let total = players
        .checked_pow(capped.len() as u32)
        .ok_or(Error::CapExceeded { what: "selector functions", cap: usize::MAX })?;
    let var = |j: usize, c: usize| j * cycles + c;
    for code in 0..total {
        let mut selector = vec![0; players];
        let mut rest = code;
        for &i in &capped {
            selector[i] = rest % players;
            rest /= players;
        }
        let mut sys = LinearSystem::new(players * cycles);
        let mut possible = true;
        for j in 0..players {
            let mut sum = vec![Rational::zero(); players * cycles];
            for c in 0..cycles {
                sum[var(j, c)] = Rational::one();
                let mut e = vec![Rational::zero(); players * cycles];
                e[var(j, c)] = Rational::one();
                sys.add_ge(e, Rational::zero())?;
            }
            sys.add_eq(sum, Rational::one())?;
            for i in 0..players {
                let mut row = vec![Rational::zero(); players * cycles];
                for c in 0..cycles {
                    row[var(j, c)] = points[c][i].clone();
                }
                if let ExtRat::Finite(lo) = &lower[i] {
                    possible &= sys.add_or_eval(row.clone(), RelationKind::Ge, lo.clone());
                }
                if let (ExtRat::Finite(hi), true) = (&upper[i], selector[i] == j) {
                    if capped.contains(&i) {
                        let neg = row.iter().map(|x| -x.clone()).collect();
                        possible &= sys.add_or_eval(neg, RelationKind::Ge, -hi.clone());
                    }
                }
            }
        }
        if !possible {
            continue;
        }
        if let Some(x) = lp_feasible(&sys) {
            let alphas = (0..players)
                .map(|j| (0..cycles).map(|c| x[var(j, c)].clone()).collect())
                .collect();
            return Ok(Some(SealedCombination { alphas }));
        }
    }
    Ok(None)
}

/// Lexicographically least point of `Conv(points)` (following the
/// dimension order `order`) among those with `z_i >= lower_i` for every
/// `i`; `None` when no such point exists.
pub fn lexmin_in_hull(points: &[Vec<Rational>], lower: &[ExtRat], order: &[usize]) -> Option<Vec<Rational>> {
    if points.is_empty() || lower.contains(&ExtRat::PosInf) {
        return None;
    }
    let c = points.len();
    let dims = lower.len();
    let mut sys = LinearSystem::new(c);
    for k in 0..c {
        let mut e = vec![Rational::zero(); c];
        e[k] = Rational::one();
        sys.add_ge(e, Rational::zero()).ok()?;
    }
    sys.add_eq(vec![Rational::one(); c], Rational::one()).ok()?;
    let row = |i: usize| -> Vec<Rational> { points.iter().map(|p| p[i].clone()).collect() };
    for i in 0..dims {
        if let ExtRat::Finite(lo) = &lower[i] {
            if !sys.add_or_eval(row(i), RelationKind::Ge, lo.clone()) {
                return None;
            }
        }
    }
    let mut beta = lp_feasible(&sys)?;
    for &i in order {
        let obj = row(i);
        match lp_minimize(&sys, &obj) {
            LpOutcome::Optimal { value, point } => {
                beta = point;
                // fix this coordinate before optimising the next one
                sys.add_or_eval(obj, RelationKind::Eq, value);
            }
            _ => unreachable!("a nonempty subset of a simplex is bounded"),
        }
    }
    Some((0..dims).map(|i| dot(&row(i), &beta)).collect())
}
