//! Maximum mean cycle by Karp's recurrence.

use num_traits::Zero;

use crate::ext_rat::{ExtRat, Rational};
use crate::graph::WeightedDigraph;

/// A cycle of maximum mean weight per unit length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanCycle {
    pub value: Rational,
    /// Arc indices of one optimal cycle, in traversal order.
    pub arcs: Vec<usize>,
}

impl MeanCycle {
    pub fn value_ext(&self) -> ExtRat {
        ExtRat::Finite(self.value.clone())
    }

    pub fn nodes(&self, g: &WeightedDigraph) -> Vec<usize> {
        self.arcs.iter().map(|&k| g.arcs[k].src).collect()
    }
}

/// Maximum of `Σ weight / Σ length` over cycles reachable from `source`, or
/// `None` when the reachable part is acyclic.
///
/// Arcs of length `L` are expanded into chains of `L` unit arcs (the weight
/// sits on the first one) so that the textbook recurrence applies verbatim.
pub fn karp_max_mean_cycle(g: &WeightedDigraph, source: usize) -> Option<MeanCycle> {
    let reach = g.reachable_from(source);
    let value = karp_value(g, &reach, source)?;
    let arcs = extract_cycle(g, &reach, source, &value);
    Some(MeanCycle { value, arcs })
}

fn karp_value(g: &WeightedDigraph, reach: &[bool], source: usize) -> Option<Rational> {
    // Expanded unit-arc graph over reachable nodes.
    let mut num = g.num_nodes;
    let mut unit: Vec<(usize, usize, Rational)> = Vec::new();
    for a in g.arcs.iter().filter(|a| reach[a.src]) {
        let mut prev = a.src;
        for step in 0..a.length {
            let next = if step + 1 == a.length {
                a.dst
            } else {
                num += 1;
                num - 1
            };
            let w = if step == 0 {
                a.weight.clone()
            } else {
                Rational::zero()
            };
            unit.push((prev, next, w));
            prev = next;
        }
    }
    let live = reach.iter().filter(|&&r| r).count() + (num - g.num_nodes);
    // d[k][v]: maximum weight of a walk with exactly k unit arcs source -> v.
    let mut d: Vec<Vec<Option<Rational>>> = Vec::with_capacity(live + 1);
    let mut first = vec![None; num];
    first[source] = Some(Rational::zero());
    d.push(first);
    for k in 1..=live {
        let mut row: Vec<Option<Rational>> = vec![None; num];
        for (u, v, w) in &unit {
            if let Some(du) = &d[k - 1][*u] {
                let cand = du + w;
                if row[*v].as_ref().is_none_or(|cur| cand > *cur) {
                    row[*v] = Some(cand);
                }
            }
        }
        d.push(row);
    }
    let mut best: Option<Rational> = None;
    for v in 0..num {
        let Some(dn) = &d[live][v] else { continue };
        let worst = (0..live)
            .filter_map(|k| {
                d[k][v]
                    .as_ref()
                    .map(|dk| (dn - dk) / Rational::from_integer(((live - k) as i64).into()))
            })
            .min()
            .expect("k = 0 or a shorter walk exists when d[n][v] is finite");
        if best.as_ref().is_none_or(|b| worst > *b) {
            best = Some(worst);
        }
    }
    best
}

/// Finds a cycle attaining `value`: after shifting every arc by
/// `-value · length` no cycle is positive, and every arc of an optimal
/// cycle is tight for the longest-path potentials.
fn extract_cycle(g: &WeightedDigraph, reach: &[bool], source: usize, value: &Rational) -> Vec<usize> {
    let n = g.num_nodes;
    let shifted: Vec<Rational> = g
        .arcs
        .iter()
        .map(|a| &a.weight - value * Rational::from_integer((a.length as i64).into()))
        .collect();
    let mut pot: Vec<Option<Rational>> = vec![None; n];
    pot[source] = Some(Rational::zero());
    for _ in 0..n {
        let mut changed = false;
        for (k, a) in g.arcs.iter().enumerate() {
            if let Some(pu) = &pot[a.src] {
                let cand = pu + &shifted[k];
                if pot[a.dst].as_ref().is_none_or(|cur| cand > *cur) {
                    pot[a.dst] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut tight: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, a) in g.arcs.iter().enumerate() {
        if !reach[a.src] {
            continue;
        }
        if let (Some(pu), Some(pv)) = (&pot[a.src], &pot[a.dst]) {
            if pu + &shifted[k] == *pv {
                tight[a.src].push(k);
            }
        }
    }
    find_cycle(g, &tight).expect("an optimal cycle consists of tight arcs")
}

/// Any cycle in the subgraph given by per-node arc lists, as arc indices.
fn find_cycle(g: &WeightedDigraph, out: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = g.num_nodes;
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        let mut via: Vec<usize> = Vec::new();
        color[root] = 1;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < out[u].len() {
                let k = out[u][*next];
                *next += 1;
                let v = g.arcs[k].dst;
                match color[v] {
                    0 => {
                        color[v] = 1;
                        via.push(k);
                        stack.push((v, 0));
                    }
                    1 => {
                        let pos = stack.iter().position(|&(x, _)| x == v).unwrap();
                        let mut cycle: Vec<usize> = via[pos..].to_vec();
                        cycle.push(k);
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                color[u] = 2;
                stack.pop();
                via.pop();
            }
        }
    }
    None
}
