use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ext_rat::Rational;
use crate::linprog::{lp_feasible, lp_minimize, rank, solve_unique, LinearSystem, LpOutcome, RelationKind};

pub const DEFAULT_DIMENSION_CAP: usize = 6;

/// All vertices of a bounded region, exact and deduplicated, in increasing
/// lexicographic order.
///
/// Faces are explored by tightening inequalities one at a time; infeasible
/// faces are pruned with the simplex, and a face whose tight relations have
/// full rank is a vertex.
pub fn vertices_of(sys: &LinearSystem, dim_cap: usize) -> Result<Vec<Vec<Rational>>> {
    let d = sys.dims();
    if d > dim_cap {
        return Err(Error::CapExceeded {
            what: "vertex enumeration dimension",
            cap: dim_cap,
        });
    }
    for k in 0..d {
        for sign in [1i64, -1] {
            let mut obj = vec![Rational::from_integer(0.into()); d];
            obj[k] = Rational::from_integer(sign.into());
            match lp_minimize(sys, &obj) {
                LpOutcome::Infeasible => return Ok(Vec::new()),
                LpOutcome::Unbounded => {
                    return Err(Error::Unbounded(format!("dimension {k} is unbounded")))
                }
                LpOutcome::Optimal { .. } => {}
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut chosen = Vec::new();
    descend(sys, &mut chosen, 0, &mut out);
    Ok(out.into_iter().collect())
}

fn descend(sys: &LinearSystem, chosen: &mut Vec<usize>, next: usize, out: &mut BTreeSet<Vec<Rational>>) {
    let d = sys.dims();
    let tight: Vec<usize> = sys
        .relations()
        .iter()
        .enumerate()
        .filter(|(i, r)| r.kind == RelationKind::Eq || chosen.contains(i))
        .map(|(i, _)| i)
        .collect();
    let mut face = LinearSystem::new(d);
    for (i, r) in sys.relations().iter().enumerate() {
        let kind = if tight.contains(&i) { RelationKind::Eq } else { r.kind };
        face.add(r.coeffs.clone(), kind, r.rhs.clone())
            .expect("relations of a valid system");
    }
    if lp_feasible(&face).is_none() {
        return;
    }
    let rows: Vec<Vec<Rational>> = tight.iter().map(|&i| sys.relations()[i].coeffs.clone()).collect();
    let r0 = rank(&rows, d);
    if r0 == d {
        let rhs: Vec<Rational> = tight.iter().map(|&i| sys.relations()[i].rhs.clone()).collect();
        if let Some(x) = solve_unique(&rows, &rhs, d) {
            out.insert(x);
        }
        return;
    }
    for i in next..sys.relations().len() {
        let r = &sys.relations()[i];
        if r.kind != RelationKind::Ge {
            continue;
        }
        let mut more = rows.clone();
        more.push(r.coeffs.clone());
        if rank(&more, d) == r0 {
            continue;
        }
        chosen.push(i);
        descend(sys, chosen, i + 1, out);
        chosen.pop();
    }
}
