use crate::graph::ImplicationDigraph;
use crate::scc::SccDecomposition;

/// Counts complementary pairs of simple directed cycles on strictly distinct
/// alleles. Entry `i - 2` holds the count for length `i`, `2 <= i <= m`.
pub fn cycle_census(graph: &ImplicationDigraph, m: usize) -> Vec<u64> {
    cycle_census_in(graph, &SccDecomposition::new(graph), m)
}

/// [`cycle_census`] reusing an existing decomposition.
///
/// Each directed cycle is found once, from its smallest vertex, by a
/// depth-bounded search that stays inside that vertex's strong component. It is
/// counted only if its smallest vertex is below every vertex of its
/// complementary cycle, so each pair contributes once.
pub fn cycle_census_in(graph: &ImplicationDigraph, scc: &SccDecomposition, m: usize) -> Vec<u64> {
    assert!(m >= 2, "cycle length bound must be at least 2");
    let mut counts = vec![0u64; m - 1];
    let mut locus_used = vec![false; graph.loci()];
    let mut path: Vec<usize> = Vec::with_capacity(m);
    // (vertex, next successor position)
    let mut frames: Vec<(usize, usize)> = Vec::with_capacity(m);

    for start in 0..graph.vertex_count() {
        let comp = scc.component(crate::model::Literal::from_vertex(start));
        if scc.is_trivial(comp) {
            continue;
        }
        path.push(start);
        locus_used[start >> 1] = true;
        frames.push((start, 0));

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            let succ = graph.successors(v);
            if *pos == succ.len() {
                frames.pop();
                let done = path.pop().expect("path tracks frames");
                locus_used[done >> 1] = false;
                continue;
            }
            let w = succ[*pos];
            *pos += 1;
            if w == start {
                if path.len() >= 2 {
                    let mirror_min = path.iter().map(|&x| x ^ 1).min().expect("nonempty");
                    if start < mirror_min {
                        counts[path.len() - 2] += 1;
                    }
                }
                continue;
            }
            if w < start
                || path.len() == m
                || locus_used[w >> 1]
                || scc.component(crate::model::Literal::from_vertex(w)) != comp
            {
                continue;
            }
            path.push(w);
            locus_used[w >> 1] = true;
            frames.push((w, 0));
        }
    }
    counts
}

/// Complementary pairs of distinct nontrivial components that are related in
/// the component order.
pub fn comparable_pairs(scc: &SccDecomposition) -> usize {
    (0..scc.len())
        .filter(|&c| {
            let other = scc.complement(c);
            !scc.is_trivial(c)
                && other != c
                && scc.members(c)[0] < scc.members(other)[0]
                && scc.comparable(c, other)
        })
        .count()
}

/// True when every nontrivial component is a single simple cycle of length at
/// most `m` on strictly distinct alleles.
pub fn simple_cycle_components(graph: &ImplicationDigraph, scc: &SccDecomposition, m: usize) -> bool {
    (0..scc.len()).filter(|&c| !scc.is_trivial(c)).all(|c| {
        let members = scc.members(c);
        if members.len() > m || scc.complement(c) == c {
            return false;
        }
        let internal_edges: usize = members
            .iter()
            .map(|&v| {
                graph
                    .successors(v)
                    .iter()
                    .filter(|&&w| members.binary_search(&w).is_ok())
                    .count()
            })
            .sum();
        internal_edges == members.len()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_formula, Formula, Literal};

    fn lit(s: &str) -> Literal {
        s.parse().unwrap()
    }

    fn formula(n: usize, pairs: &[(&str, &str)]) -> Formula {
        let pairs: Vec<_> = pairs.iter().map(|(a, b)| (lit(a), lit(b))).collect();
        build_formula(n, &pairs).unwrap()
    }

    fn census(f: &Formula, m: usize) -> Vec<u64> {
        cycle_census(&ImplicationDigraph::new(f), m)
    }

    #[test]
    fn f2_has_one_two_cycle_pair() {
        let f2 = formula(4, &[("0_2", "1_3"), ("0_1", "1_2"), ("1_1", "0_2")]);
        assert_eq!(census(&f2, 6), vec![1, 0, 0, 0, 0]);
        assert_eq!(census(&Formula::empty(5).unwrap(), 6), vec![0; 5]);
    }

    #[test]
    fn three_cycle_pair() {
        // 1_1 -> 1_2 -> 1_3 -> 1_1 and its complement
        let f = formula(3, &[("1_1", "0_2"), ("1_2", "0_3"), ("1_3", "0_1")]);
        assert_eq!(census(&f, 6), vec![0, 1, 0, 0, 0]);
        assert_eq!(census(&f, 2), vec![0]);
    }

    #[test]
    fn contradictory_cycles_are_excluded() {
        // every cycle passes through both alleles of locus 1
        let f = formula(3, &[("1_1", "0_2"), ("1_1", "1_2"), ("0_1", "0_3"), ("1_3", "0_1")]);
        let d = ImplicationDigraph::new(&f);
        let s = SccDecomposition::new(&d);
        assert!(!s.is_satisfiable());
        assert_eq!(cycle_census_in(&d, &s, 6), vec![0; 5]);
        assert_eq!(comparable_pairs(&s), 0);
        assert!(!simple_cycle_components(&d, &s, 6));
    }

    #[test]
    fn comparable_pair_counted() {
        let f3 = formula(4, &[("0_2", "1_3"), ("0_1", "1_2"), ("1_1", "0_2"), ("0_1", "0_2")]);
        let d = ImplicationDigraph::new(&f3);
        let s = SccDecomposition::new(&d);
        assert_eq!(comparable_pairs(&s), 1);
        assert!(simple_cycle_components(&d, &s, 6));
    }
}
