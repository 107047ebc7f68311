//! Exact rational linear programming.

mod sealed;
mod simplex;
mod vertices;

pub use sealed::{lexmin_in_hull, sealed_feasible, SealedCombination};
pub use simplex::{lp_feasible, lp_minimize, LpOutcome};
pub use vertices::{vertices_of, DEFAULT_DIMENSION_CAP};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ext_rat::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    /// `coeffs · x = rhs`
    Eq,
    /// `coeffs · x >= rhs`
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub coeffs: Vec<Rational>,
    pub kind: RelationKind,
    pub rhs: Rational,
}

impl Relation {
    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.kind {
            RelationKind::Eq => lhs == self.rhs,
            RelationKind::Ge => lhs >= self.rhs,
        }
    }
}

/// Equations and inequations over free variables `0..dims`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    dims: usize,
    relations: Vec<Relation>,
}

impl LinearSystem {
    pub fn new(dims: usize) -> Self {
        LinearSystem {
            dims,
            relations: Vec::new(),
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Adds a relation. The coefficient vector must have `dims` entries and
    /// must not be identically zero.
    pub fn add(&mut self, coeffs: Vec<Rational>, kind: RelationKind, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.dims {
            return Err(Error::DimensionMismatch(format!(
                "relation has {} coefficients for {} dimensions",
                coeffs.len(),
                self.dims
            )));
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::Precondition("relation with a zero coefficient vector".into()));
        }
        self.relations.push(Relation { coeffs, kind, rhs });
        Ok(())
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.add(coeffs, RelationKind::Eq, rhs)
    }

    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.add(coeffs, RelationKind::Ge, rhs)
    }

    /// `coeffs · x <= rhs`, stored as `-coeffs · x >= -rhs`.
    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.add(coeffs.into_iter().map(|c| -c).collect(), RelationKind::Ge, -rhs)
    }

    /// Like [`add`](Self::add), but a zero coefficient vector is accepted
    /// and evaluated on the spot: returns `false` iff it can never hold.
    pub(crate) fn add_or_eval(&mut self, coeffs: Vec<Rational>, kind: RelationKind, rhs: Rational) -> bool {
        if coeffs.iter().all(Zero::is_zero) {
            return match kind {
                RelationKind::Eq => rhs.is_zero(),
                RelationKind::Ge => rhs <= Rational::zero(),
            };
        }
        self.relations.push(Relation { coeffs, kind, rhs });
        true
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.dims && self.relations.iter().all(|r| r.holds_at(x))
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Row echelon helper: solves the square-or-overdetermined system
/// `rows · x = rhs` when it has a unique solution.
pub(crate) fn solve_unique(rows: &[Vec<Rational>], rhs: &[Rational], dims: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = eliminate(&mut m, dims);
    if pivots.len() < dims {
        return None;
    }
    // inconsistent rows have a nonzero rhs with zero coefficients
    if m.iter().skip(pivots.len()).any(|r| !r[dims].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); dims];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][dims].clone();
    }
    Some(x)
}

/// Gauss-Jordan elimination on the first `cols` columns; returns pivot
/// columns, row `k` holding the pivot of `pivots[k]` normalised to 1.
pub(crate) fn eliminate(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for x in m[row].iter_mut() {
            *x /= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// A nonzero vector `d` with `rows · d = 0`, if the rows do not have full
/// column rank.
pub(crate) fn null_vector(rows: &[Vec<Rational>], dims: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let pivots = eliminate(&mut m, dims);
    let free = (0..dims).find(|c| !pivots.contains(c))?;
    let mut d = vec![Rational::zero(); dims];
    d[free] = Rational::from_integer(1.into());
    for (r, &c) in pivots.iter().enumerate() {
        d[c] = -m[r][free].clone();
    }
    Some(d)
}

pub(crate) fn rank(rows: &[Vec<Rational>], dims: usize) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    eliminate(&mut m, dims).len()
}
