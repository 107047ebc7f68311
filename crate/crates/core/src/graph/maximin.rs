use crate::ext_rat::ExtRat;
use crate::graph::{reachable, scc, WeightedDigraph};

/// True iff some cycle reachable from `source` passes through at least one
/// tagged node and every tagged node on it has a tag strictly above `alpha`.
pub fn maximin_cycle_above(
    g: &WeightedDigraph,
    source: usize,
    tags: &[Option<ExtRat>],
    alpha: &ExtRat,
) -> bool {
    cycle_through_kept(g, source, tags, |t| t > alpha)
}

/// Largest `t` such that a reachable cycle through a tagged node has all of
/// its tags `>= t`; `None` when no reachable cycle meets a tagged node.
pub fn maximin_cycle_value(
    g: &WeightedDigraph,
    source: usize,
    tags: &[Option<ExtRat>],
) -> Option<ExtRat> {
    let mut candidates: Vec<&ExtRat> = tags.iter().flatten().collect();
    candidates.sort();
    candidates.dedup();
    candidates
        .into_iter()
        .rev()
        .find(|&t| cycle_through_kept(g, source, tags, |x| x >= t))
        .cloned()
}

fn cycle_through_kept(
    g: &WeightedDigraph,
    source: usize,
    tags: &[Option<ExtRat>],
    keep: impl Fn(&ExtRat) -> bool,
) -> bool {
    let adj = g.adjacency();
    let reach = reachable(&adj, source);
    let active: Vec<bool> = (0..g.num_nodes)
        .map(|v| reach[v] && tags[v].as_ref().is_none_or(&keep))
        .collect();
    let cond = scc(&adj, Some(&active));
    (0..g.num_nodes).any(|v| {
        active[v]
            && tags[v].is_some()
            && (cond.components[cond.comp_of[v]].len() > 1 || adj[v].contains(&v))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext_rat::int;
    use crate::graph::simple_cycles_adj;
    use crate::testgen;
    use rand::Rng;

    fn brute(g: &WeightedDigraph, source: usize, tags: &[Option<ExtRat>], alpha: &ExtRat) -> bool {
        let reach = g.reachable_from(source);
        let adj: Vec<Vec<usize>> = (0..g.num_nodes)
            .map(|u| if reach[u] { g.adjacency()[u].clone() } else { vec![] })
            .collect();
        simple_cycles_adj(&adj, 1_000_000).unwrap().iter().any(|c| {
            c.iter().any(|&v| tags[v].is_some())
                && c.iter().all(|&v| tags[v].as_ref().is_none_or(|t| t > alpha))
        })
    }

    fn loop_graph() -> (WeightedDigraph, Vec<Option<ExtRat>>) {
        let mut g = WeightedDigraph::new(2);
        g.add_arc(0, 1, int(0), 1);
        g.add_arc(1, 0, int(0), 1);
        (g, vec![None, Some(ExtRat::from_int(1))])
    }

    #[test]
    fn strict_threshold() {
        let (g, tags) = loop_graph();
        assert!(!maximin_cycle_above(&g, 0, &tags, &ExtRat::from_int(1)));
        assert!(maximin_cycle_above(&g, 0, &tags, &ExtRat::zero()));
        assert_eq!(maximin_cycle_value(&g, 0, &tags), Some(ExtRat::from_int(1)));
    }

    #[test]
    fn untagged_cycles_do_not_count() {
        let mut g = WeightedDigraph::new(2);
        g.add_arc(0, 0, int(0), 1);
        g.add_arc(0, 1, int(0), 1);
        let tags = vec![None, Some(ExtRat::from_int(3))];
        assert!(!maximin_cycle_above(&g, 0, &tags, &ExtRat::NegInf));
        assert_eq!(maximin_cycle_value(&g, 0, &tags), None);
    }

    #[test]
    fn matches_brute_force() {
        let mut r = testgen::rng(99);
        for _ in 0..300 {
            let n = r.gen_range(1..=8);
            let mut g = WeightedDigraph::new(n);
            for u in 0..n {
                for v in 0..n {
                    if r.gen_bool(0.25) {
                        g.add_arc(u, v, int(0), 1);
                    }
                }
            }
            let tags: Vec<Option<ExtRat>> = (0..n)
                .map(|_| r.gen_bool(0.4).then(|| ExtRat::from_int(r.gen_range(-2..=2))))
                .collect();
            for a in -3..=3 {
                let alpha = ExtRat::from_int(a);
                assert_eq!(
                    maximin_cycle_above(&g, 0, &tags, &alpha),
                    brute(&g, 0, &tags, &alpha)
                );
            }
            // the value is the largest threshold that still admits a cycle
            if let Some(v) = maximin_cycle_value(&g, 0, &tags) {
                let just_below = v.checked_sub(&ExtRat::from_ratio(1, 2)).unwrap();
                assert!(brute(&g, 0, &tags, &just_below));
                assert!(!brute(&g, 0, &tags, &v));
            } else {
                assert!(!brute(&g, 0, &tags, &ExtRat::NegInf));
            }
        }
    }
}
