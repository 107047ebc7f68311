//! Two-phase tableau simplex over exact rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::ext_rat::{ExtRat, Rational};
use crate::linprog::{dot, null_vector, rank, LinearSystem, RelationKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    /// The objective is unbounded below on a nonempty region.
    Unbounded,
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
}

impl LpOutcome {
    /// Optimum as an extended rational; `None` when infeasible.
    pub fn value(&self) -> Option<ExtRat> {
        match self {
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => Some(ExtRat::NegInf),
            LpOutcome::Optimal { value, .. } => Some(ExtRat::Finite(value.clone())),
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// A point satisfying every relation, or `None` when the system is
/// infeasible. Deterministic for a given input.
pub fn lp_feasible(sys: &LinearSystem) -> Option<Vec<Rational>> {
    let mut tab = Tableau::standard(sys);
    if !tab.phase_one() {
        return None;
    }
    Some(tab.point())
}

/// Minimises `objective · x` over the system. When the optimum is finite
/// and the region has a vertex, the returned point is a vertex.
pub fn lp_minimize(sys: &LinearSystem, objective: &[Rational]) -> LpOutcome {
    assert_eq!(objective.len(), sys.dims(), "objective dimension");
    let mut tab = Tableau::standard(sys);
    if !tab.phase_one() {
        return LpOutcome::Infeasible;
    }
    let d = sys.dims();
    let mut cost = vec![Rational::zero(); tab.cols];
    for k in 0..d {
        cost[k] = objective[k].clone();
        cost[d + k] = -objective[k].clone();
    }
    tab.set_objective(&cost);
    if !tab.run() {
        return LpOutcome::Unbounded;
    }
    let point = purify(sys, tab.point());
    LpOutcome::Optimal {
        value: dot(objective, &point),
        point,
    }
}

/// Moves an optimal point inside the face cut out by its tight relations
/// until those relations determine it, i.e. until it is a vertex. The
/// objective is constant along such moves since both directions stay
/// feasible for a small step.
fn purify(sys: &LinearSystem, mut x: Vec<Rational>) -> Vec<Rational> {
    let d = sys.dims();
    loop {
        let tight: Vec<Vec<Rational>> = sys
            .relations()
            .iter()
            .filter(|r| r.kind == RelationKind::Eq || dot(&r.coeffs, &x) == r.rhs)
            .map(|r| r.coeffs.clone())
            .collect();
        if rank(&tight, d) == d {
            return x;
        }
        let Some(dir) = null_vector(&tight, d) else {
            return x;
        };
        let step = |dir: &[Rational]| -> Option<Rational> {
            sys.relations()
                .iter()
                .filter_map(|r| {
                    let rate = dot(&r.coeffs, dir);
                    rate.is_negative()
                        .then(|| (dot(&r.coeffs, &x) - &r.rhs) / -rate)
                })
                .min()
        };
        let neg: Vec<Rational> = dir.iter().map(|v| -v.clone()).collect();
        let (dir, t) = match (step(&dir), step(&neg)) {
            (Some(t), _) => (dir, t),
            (None, Some(t)) => (neg, t),
            // the region contains a line: there is no vertex to reach
            (None, None) => return x,
        };
        for (xi, di) in x.iter_mut().zip(&dir) {
            *xi += &t * di;
        }
    }
}

/// Tableau for `min c·y, A y = b, y >= 0` with `b >= 0`. Free variables of
/// the original system are split as `x = y⁺ - y⁻`; `>=` rows get a surplus
/// column.
struct Tableau {
    dims: usize,
    /// Structural columns (split variables and surpluses).
    cols: usize,
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs, last entry is minus the objective value.
    obj: Vec<Rational>,
    /// Columns currently allowed to enter.
    active_cols: usize,
}

impl Tableau {
    fn standard(sys: &LinearSystem) -> Self {
        let d = sys.dims();
        let ge = sys
            .relations()
            .iter()
            .filter(|r| r.kind == RelationKind::Ge)
            .count();
        let cols = 2 * d + ge;
        let m = sys.relations().len();
        let width = cols + m + 1;
        let mut rows = Vec::with_capacity(m);
        let mut surplus = 2 * d;
        for (i, r) in sys.relations().iter().enumerate() {
            let mut row = vec![Rational::zero(); width];
            for k in 0..d {
                row[k] = r.coeffs[k].clone();
                row[d + k] = -r.coeffs[k].clone();
            }
            if r.kind == RelationKind::Ge {
                row[surplus] = -Rational::one();
                surplus += 1;
            }
            row[width - 1] = r.rhs.clone();
            if r.rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
            }
            row[cols + i] = Rational::one();
            rows.push(row);
        }
        Tableau {
            dims: d,
            cols,
            basis: (cols..cols + m).collect(),
            rows,
            obj: vec![Rational::zero(); width],
            active_cols: cols + m,
        }
    }

    fn width(&self) -> usize {
        self.obj.len()
    }

    /// Minimises the sum of artificials; on success drives them out of the
    /// basis (dropping redundant rows) and removes their columns.
    fn phase_one(&mut self) -> bool {
        let m = self.rows.len();
        let mut cost = vec![Rational::zero(); self.cols + m];
        for c in cost.iter_mut().skip(self.cols) {
            *c = Rational::one();
        }
        self.set_objective(&cost);
        let bounded = self.run();
        debug_assert!(bounded, "phase one is bounded below by zero");
        if !self.obj[self.width() - 1].is_zero() {
            return false;
        }
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.cols {
                match (0..self.cols).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        let rhs = self.width() - 1;
        for row in self.rows.iter_mut() {
            let b = row[rhs].clone();
            row.truncate(self.cols);
            row.push(b);
        }
        self.obj = vec![Rational::zero(); self.cols + 1];
        self.active_cols = self.cols;
        true
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        let w = self.width();
        let mut obj = vec![Rational::zero(); w];
        for (j, c) in cost.iter().enumerate() {
            obj[j] = c.clone();
        }
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if !cb.is_zero() {
                for j in 0..w {
                    obj[j] -= cb * &self.rows[i][j];
                }
            }
        }
        self.obj = obj;
    }

    /// Runs Bland pivots to optimality; `false` when unbounded.
    fn run(&mut self) -> bool {
        let rhs = self.width() - 1;
        loop {
            let Some(enter) = (0..self.active_cols).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if a.is_positive() {
                    let ratio = &self.rows[i][rhs] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, p) in self.obj.iter_mut().zip(&prow) {
                *v -= &f * p;
            }
        }
        self.basis[r] = c;
    }

    fn point(&self) -> Vec<Rational> {
        let rhs = self.width() - 1;
        let mut y = vec![Rational::zero(); self.cols];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.cols {
                y[b] = self.rows[i][rhs].clone();
            }
        }
        (0..self.dims).map(|k| &y[k] - &y[self.dims + k]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext_rat::{int, rat};
    use crate::test_oracles::{fm_feasible, vertices_by_subsets};
    use crate::testgen;
    use proptest::prelude::*;
    use rand::Rng;

    fn sys_from(rows: &[(&[i64], RelationKind, i64)], dims: usize) -> LinearSystem {
        let mut s = LinearSystem::new(dims);
        for (c, k, b) in rows {
            s.add(c.iter().map(|&x| int(x)).collect(), *k, int(*b)).unwrap();
        }
        s
    }

    fn random_system(r: &mut impl Rng, dims: usize, rels: usize) -> LinearSystem {
        let mut s = LinearSystem::new(dims);
        while s.relations().len() < rels {
            let coeffs: Vec<Rational> = (0..dims).map(|_| int(r.gen_range(-3..=3))).collect();
            let kind = if r.gen_bool(0.2) { RelationKind::Eq } else { RelationKind::Ge };
            let _ = s.add(coeffs, kind, int(r.gen_range(-4..=4)));
        }
        s
    }

    fn oracle_rows(s: &LinearSystem) -> Vec<(Vec<Rational>, Rational, bool)> {
        s.relations()
            .iter()
            .map(|r| (r.coeffs.clone(), r.rhs.clone(), r.kind == RelationKind::Eq))
            .collect()
    }

    #[test]
    fn empty_system_is_feasible_at_origin() {
        let s = LinearSystem::new(1);
        assert_eq!(lp_feasible(&s), Some(vec![int(0)]));
    }

    #[test]
    fn contradictory_bounds() {
        let s = sys_from(&[(&[1], RelationKind::Ge, 1), (&[-1], RelationKind::Ge, 0)], 1);
        assert_eq!(lp_feasible(&s), None);
    }

    #[test]
    fn minimize_simple_bound() {
        let s = sys_from(&[(&[1], RelationKind::Ge, 3)], 1);
        assert_eq!(
            lp_minimize(&s, &[int(1)]),
            LpOutcome::Optimal { value: int(3), point: vec![int(3)] }
        );
        assert_eq!(lp_minimize(&s, &[int(-1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn two_state_hull_minimum() {
        // z = β_a (0,1) + β_b (1,0) + β_ab (2,2), Σβ = 1, β >= 0, z >= (1,1);
        // variables (z0, z1, βa, βb, βab)
        let mut s = LinearSystem::new(5);
        let v = |xs: [i64; 5]| xs.iter().map(|&x| int(x)).collect::<Vec<_>>();
        s.add_eq(v([1, 0, 0, -1, -2]), int(0)).unwrap();
        s.add_eq(v([0, 1, -1, 0, -2]), int(0)).unwrap();
        s.add_eq(v([0, 0, 1, 1, 1]), int(1)).unwrap();
        for k in 2..5 {
            let mut e = [0; 5];
            e[k] = 1;
            s.add_ge(v(e), int(0)).unwrap();
        }
        s.add_ge(v([1, 0, 0, 0, 0]), int(1)).unwrap();
        s.add_ge(v([0, 1, 0, 0, 0]), int(1)).unwrap();
        let out = lp_minimize(&s, &v([1, 1, 0, 0, 0]));
        assert_eq!(out.value(), Some(ExtRat::from_int(2)));
        let p = out.point().unwrap();
        assert_eq!(&p[..2], &[int(1), int(1)]);
    }

    #[test]
    fn purified_point_is_a_vertex() {
        // minimise y over the strip 0 <= x <= 4, y >= 1: every point of the
        // bottom edge is optimal, only its endpoints are vertices
        let s = sys_from(
            &[
                (&[1, 0], RelationKind::Ge, 0),
                (&[-1, 0], RelationKind::Ge, -4),
                (&[0, 1], RelationKind::Ge, 1),
            ],
            2,
        );
        let out = lp_minimize(&s, &[int(0), int(1)]);
        let p = out.point().unwrap().to_vec();
        assert!(p == vec![int(0), int(1)] || p == vec![int(4), int(1)], "{p:?}");
    }

    #[test]
    fn feasibility_matches_fourier_motzkin() {
        let mut r = testgen::rng(17);
        let mut feasible = 0;
        for _ in 0..400 {
            let dims = r.gen_range(1..=4);
            let rels = r.gen_range(0..=8);
            let s = random_system(&mut r, dims, rels);
            let got = lp_feasible(&s);
            assert_eq!(got.is_some(), fm_feasible(&oracle_rows(&s), dims), "{s:?}");
            if let Some(x) = got {
                assert!(s.is_satisfied_by(&x));
                feasible += 1;
            }
        }
        assert!(feasible > 50);
    }

    #[test]
    fn bounded_minimum_matches_vertex_oracle() {
        let mut r = testgen::rng(23);
        for _ in 0..200 {
            let dims = r.gen_range(1..=3);
            let rels = r.gen_range(0..=5);
            let mut s = random_system(&mut r, dims, rels);
            // box the region so that a finite optimum exists when feasible
            for k in 0..dims {
                let mut e = vec![int(0); dims];
                e[k] = int(1);
                s.add_ge(e.clone(), int(-5)).unwrap();
                s.add_le(e, int(5)).unwrap();
            }
            let obj: Vec<Rational> = (0..dims).map(|_| int(r.gen_range(-3..=3))).collect();
            let verts = vertices_by_subsets(&oracle_rows(&s), dims);
            let best = verts.iter().map(|v| dot(&obj, v)).min();
            match lp_minimize(&s, &obj) {
                LpOutcome::Optimal { value, point } => {
                    assert_eq!(Some(value), best);
                    assert!(s.is_satisfied_by(&point));
                    assert!(verts.contains(&point), "{point:?} is not a vertex");
                }
                LpOutcome::Infeasible => assert!(verts.is_empty()),
                LpOutcome::Unbounded => panic!("boxed region cannot be unbounded"),
            }
        }
    }

    proptest! {
        #[test]
        fn returned_points_satisfy_every_relation(seed in 0u64..1000) {
            let mut r = testgen::rng(seed);
            let dims = r.gen_range(1..=4);
            let rels = r.gen_range(0..=8);
            let s = random_system(&mut r, dims, rels);
            let obj: Vec<Rational> = (0..dims).map(|_| rat(r.gen_range(-3..=3), 2)).collect();
            if let Some(x) = lp_feasible(&s) {
                prop_assert!(s.is_satisfied_by(&x));
            }
            if let LpOutcome::Optimal { point, value } = lp_minimize(&s, &obj) {
                prop_assert!(s.is_satisfied_by(&point));
                prop_assert_eq!(dot(&obj, &point), value);
            }
        }
    }
}
