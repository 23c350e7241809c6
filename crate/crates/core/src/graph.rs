//! The implication digraph of a formula.

use crate::model::{Formula, Literal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Everything implied by the literal.
    Forward,
    /// Everything implying the literal.
    Backward,
}

/// Compressed adjacency lists, one slice per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Self {
        let mut offsets = vec![0usize; vertices + 1];
        for &(s, _) in edges {
            offsets[s + 1] += 1;
        }
        for v in 0..vertices {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; edges.len()];
        for &(s, t) in edges {
            targets[fill[s]] = t;
            fill[s] += 1;
        }
        for v in 0..vertices {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Self { offsets, targets }
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Vertices are literals indexed by [`Literal::vertex`]; each incompatibility
/// `(x, y)` contributes the edges `x -> !y` and `y -> !x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationDigraph {
    n: usize,
    forward: Csr,
    backward: Csr,
}

impl ImplicationDigraph {
    pub fn new(formula: &Formula) -> Self {
        let n = formula.n();
        let mut edges = Vec::with_capacity(2 * formula.len());
        for c in formula.clauses() {
            let (x, y) = (c.first(), c.second());
            edges.push((x.vertex(), y.negate().vertex()));
            edges.push((y.vertex(), x.negate().vertex()));
        }
        let forward = Csr::from_edges(2 * n, &edges);
        let reversed: Vec<_> = edges.iter().map(|&(s, t)| (t, s)).collect();
        let backward = Csr::from_edges(2 * n, &reversed);
        Self { n, forward, backward }
    }

    pub fn loci(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n
    }

    pub fn edge_count(&self) -> usize {
        self.forward.targets.len()
    }

    /// Out-neighbors of vertex `v`, ascending.
    pub fn successors(&self, v: usize) -> &[usize] {
        self.forward.neighbors(v)
    }

    /// In-neighbors of vertex `v`, ascending.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        self.backward.neighbors(v)
    }

    pub fn has_edge(&self, from: Literal, to: Literal) -> bool {
        self.successors(from.vertex()).binary_search(&to.vertex()).is_ok()
    }

    /// All edges as literal pairs, sorted by source then target.
    pub fn edges(&self) -> impl Iterator<Item = (Literal, Literal)> + '_ {
        (0..self.vertex_count()).flat_map(move |v| {
            self.successors(v)
                .iter()
                .map(move |&w| (Literal::from_vertex(v), Literal::from_vertex(w)))
        })
    }

    /// `L+(x)` or `L-(x)`; always contains `x`. Sorted by vertex index.
    pub fn reach_set(&self, x: Literal, direction: Direction) -> Vec<Literal> {
        let adj = match direction {
            Direction::Forward => &self.forward,
            Direction::Backward => &self.backward,
        };
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![x.vertex()];
        seen[x.vertex()] = true;
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            out.push(v);
            for &w in adj.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        out.into_iter().map(Literal::from_vertex).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_formula;

    fn lit(s: &str) -> Literal {
        s.parse().unwrap()
    }

    fn formula(n: usize, pairs: &[(&str, &str)]) -> Formula {
        let pairs: Vec<_> = pairs.iter().map(|(a, b)| (lit(a), lit(b))).collect();
        build_formula(n, &pairs).unwrap()
    }

    fn edge_set(d: &ImplicationDigraph) -> Vec<(Literal, Literal)> {
        d.edges().collect()
    }

    fn sorted(mut e: Vec<(Literal, Literal)>) -> Vec<(Literal, Literal)> {
        e.sort();
        e
    }

    #[test]
    fn worked_example_edges() {
        let f1 = formula(4, &[("0_2", "1_3"), ("0_1", "1_2")]);
        let d1 = ImplicationDigraph::new(&f1);
        let expected = sorted(vec![
            (lit("0_2"), lit("0_3")),
            (lit("1_3"), lit("1_2")),
            (lit("0_1"), lit("0_2")),
            (lit("1_2"), lit("1_1")),
        ]);
        assert_eq!(edge_set(&d1), expected);

        let f2 = f1.with(formula(4, &[("1_1", "0_2")]).clauses().to_vec()).unwrap();
        let d2 = ImplicationDigraph::new(&f2);
        let mut expected2 = expected.clone();
        expected2.push((lit("1_1"), lit("1_2")));
        expected2.push((lit("0_2"), lit("0_1")));
        assert_eq!(edge_set(&d2), sorted(expected2));
        assert_eq!(d2.edge_count(), 2 * f2.len());
    }

    #[test]
    fn empty_formula_has_isolated_vertices() {
        let d = ImplicationDigraph::new(&Formula::empty(3).unwrap());
        assert_eq!(d.vertex_count(), 6);
        assert_eq!(d.edge_count(), 0);
        assert_eq!(d.reach_set(lit("1_2"), Direction::Forward), vec![lit("1_2")]);
    }

    #[test]
    fn reach_sets_follow_chain() {
        let d = ImplicationDigraph::new(&formula(4, &[("0_2", "1_3"), ("0_1", "1_2")]));
        assert_eq!(
            d.reach_set(lit("0_1"), Direction::Forward),
            vec![lit("0_1"), lit("0_2"), lit("0_3")]
        );
        assert_eq!(
            d.reach_set(lit("1_1"), Direction::Backward),
            vec![lit("1_1"), lit("1_2"), lit("1_3")]
        );
    }

    #[test]
    fn edges_are_skew_symmetric() {
        let d = ImplicationDigraph::new(&formula(
            5,
            &[("0_1", "1_4"), ("1_2", "1_5"), ("0_3", "0_4"), ("1_1", "0_2")],
        ));
        for (a, b) in d.edges() {
            assert!(d.has_edge(b.negate(), a.negate()));
        }
    }
}
