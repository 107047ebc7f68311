//! Brute-force reference procedures for linear systems, used only by tests.
//!
//! This file depends on the numeric crates alone so that integration tests
//! can include it by path and check the library against it.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

/// A relation `coeffs · x (= or >=) rhs`; the flag marks equations.
pub type Row = (Vec<Q>, Q, bool);

/// Feasibility by Fourier–Motzkin elimination.
pub fn fm_feasible(rows: &[Row], dims: usize) -> bool {
    let mut ge: Vec<(Vec<Q>, Q)> = Vec::new();
    for (a, b, eq) in rows {
        ge.push((a.clone(), b.clone()));
        if *eq {
            ge.push((a.iter().map(|x| -x.clone()).collect(), -b.clone()));
        }
    }
    for k in 0..dims {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = Vec::new();
        for (a, b) in ge {
            if a[k].is_positive() {
                pos.push((a, b));
            } else if a[k].is_negative() {
                neg.push((a, b));
            } else {
                next.push((a, b));
            }
        }
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                // scale so that the k-th coefficients cancel
                let sp = -an[k].clone();
                let sn = ap[k].clone();
                let a: Vec<Q> = ap.iter().zip(an).map(|(x, y)| x * &sp + y * &sn).collect();
                next.push((a, bp * &sp + bn * &sn));
            }
        }
        ge = normalise(next);
    }
    ge.iter().all(|(_, b)| !b.is_positive())
}

/// Scales each row so its first nonzero coefficient has magnitude one and
/// keeps only the tightest right-hand side per coefficient vector.
fn normalise(rows: Vec<(Vec<Q>, Q)>) -> Vec<(Vec<Q>, Q)> {
    let mut best: std::collections::BTreeMap<Vec<Q>, Q> = Default::default();
    let mut constant = Vec::new();
    for (a, b) in rows {
        match a.iter().find(|x| !x.is_zero()) {
            None => constant.push((a, b)),
            Some(lead) => {
                let s = lead.abs();
                let a: Vec<Q> = a.iter().map(|x| x / &s).collect();
                let b = b / &s;
                let e = best.entry(a).or_insert_with(|| b.clone());
                if b > *e {
                    *e = b;
                }
            }
        }
    }
    constant.extend(best);
    constant
}

/// Every vertex: solve each `dims`-subset of relations as equalities and
/// keep the unique solutions that satisfy the whole system.
pub fn vertices_by_subsets(rows: &[Row], dims: usize) -> Vec<Vec<Q>> {
    let mut out = BTreeSet::new();
    let n = rows.len();
    if dims == 0 {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..dims).collect();
    if n < dims {
        return Vec::new();
    }
    loop {
        let a: Vec<Vec<Q>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Q> = idx.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(x) = gauss(a, b) {
            if rows.iter().all(|(c, r, eq)| {
                let lhs: Q = c.iter().zip(&x).map(|(p, q)| p * q).fold(Q::zero(), |s, t| s + t);
                if *eq {
                    lhs == *r
                } else {
                    lhs >= *r
                }
            }) {
                out.insert(x);
            }
        }
        // next combination
        let mut k = dims;
        loop {
            if k == 0 {
                return out.into_iter().collect();
            }
            k -= 1;
            if idx[k] < n - dims + k {
                idx[k] += 1;
                for j in k + 1..dims {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Unique solution of a square system by Gaussian elimination.
fn gauss(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = a.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    let mut x = vec![Q::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in r + 1..n {
            s -= &a[r][c] * &x[c];
        }
        x[r] = s / &a[r][r];
    }
    Some(x)
}

/// Vertices of the convex hull of planar points (Andrew's monotone chain,
/// collinear points dropped), sorted.
pub fn hull_2d(points: &[(Q, Q)]) -> Vec<(Q, Q)> {
    let mut pts: Vec<(Q, Q)> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &(Q, Q), a: &(Q, Q), b: &(Q, Q)| {
        (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
    };
    let mut lower: Vec<(Q, Q)> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<(Q, Q)> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    let mut hull: Vec<(Q, Q)> = lower.into_iter().chain(upper).collect();
    hull.sort();
    hull
}

/// Feasibility of the sealed-combination problem by brute force: every
/// selector function for the dimensions with a finite upper bound, each
/// player's row checked separately with Fourier–Motzkin.
///
/// `points[c][i]` is the payoff of cycle `c` for dimension `i`; bounds are
/// `None` for an infinite bound on that side.
pub fn sealed_brute(points: &[Vec<Q>], lower: &[Option<Q>], upper: &[Option<Q>], players: usize) -> bool {
    let dims = lower.len();
    let capped: Vec<usize> = (0..dims).filter(|&i| upper[i].is_some()).collect();
    let total = players.pow(capped.len() as u32);
    let c = points.len();
    (0..total).any(|code| {
        let mut sel = vec![usize::MAX; dims];
        let mut rest = code;
        for &i in &capped {
            sel[i] = rest % players;
            rest /= players;
        }
        (0..players).all(|j| {
            let mut rows: Vec<Row> = Vec::new();
            rows.push((vec![Q::one(); c], Q::one(), true));
            for k in 0..c {
                let mut e = vec![Q::zero(); c];
                e[k] = Q::one();
                rows.push((e, Q::zero(), false));
            }
            for i in 0..dims {
                let coeffs: Vec<Q> = points.iter().map(|p| p[i].clone()).collect();
                if let Some(lo) = &lower[i] {
                    rows.push((coeffs.clone(), lo.clone(), false));
                }
                if sel[i] == j {
                    let hi = upper[i].clone().unwrap();
                    rows.push((coeffs.iter().map(|x| -x.clone()).collect(), -hi, false));
                }
            }
            fm_feasible(&rows, c)
        })
    })
}
