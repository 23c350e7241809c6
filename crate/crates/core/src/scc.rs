//! Strong components of the implication digraph, their condensation and the
//! reachability order on it.

use crate::graph::ImplicationDigraph;
use crate::model::{Genotype, Literal};

/// Above this many components reachability is answered by search instead of
/// a precomputed closure.
pub const CLOSURE_LIMIT: usize = 4096;

#[derive(Debug, Clone)]
enum Reachability {
    /// Row `c` is the bitset of components reachable from `c`.
    Closure { words: usize, rows: Vec<u64> },
    OnDemand,
}

/// Strong components numbered in a topological order of the condensation:
/// every condensation edge goes from a lower to a higher index.
#[derive(Debug, Clone)]
pub struct SccDecomposition {
    n: usize,
    component_of: Vec<usize>,
    components: Vec<Vec<usize>>,
    complement_of: Vec<usize>,
    successors: Vec<Vec<usize>>,
    reach: Reachability,
}

impl SccDecomposition {
    pub fn new(graph: &ImplicationDigraph) -> Self {
        Self::with_closure_limit(graph, CLOSURE_LIMIT)
    }

    /// Like [`SccDecomposition::new`] but with an explicit closure threshold.
    pub fn with_closure_limit(graph: &ImplicationDigraph, closure_limit: usize) -> Self {
        let (component_of, count) = tarjan(graph);

        let mut components = vec![Vec::new(); count];
        for (v, &c) in component_of.iter().enumerate() {
            components[c].push(v);
        }
        let complement_of: Vec<usize> = components
            .iter()
            .map(|members| component_of[members[0] ^ 1])
            .collect();

        let mut successors = vec![Vec::new(); count];
        for v in 0..graph.vertex_count() {
            let cv = component_of[v];
            for &w in graph.successors(v) {
                let cw = component_of[w];
                if cw != cv {
                    successors[cv].push(cw);
                }
            }
        }
        for s in &mut successors {
            s.sort_unstable();
            s.dedup();
        }

        let reach = if count <= closure_limit {
            transitive_closure(&successors)
        } else {
            Reachability::OnDemand
        };

        Self {
            n: graph.loci(),
            component_of,
            components,
            complement_of,
            successors,
            reach,
        }
    }

    pub fn loci(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Index of `C(x)`.
    pub fn component(&self, x: Literal) -> usize {
        self.component_of[x.vertex()]
    }

    /// Member vertices of component `c`, ascending.
    pub fn members(&self, c: usize) -> &[usize] {
        &self.components[c]
    }

    pub fn literals(&self, c: usize) -> impl Iterator<Item = Literal> + '_ {
        self.components[c].iter().map(|&v| Literal::from_vertex(v))
    }

    pub fn size(&self, c: usize) -> usize {
        self.components[c].len()
    }

    pub fn is_trivial(&self, c: usize) -> bool {
        self.components[c].len() == 1
    }

    /// Index of the component made of the complements of `c`'s literals.
    pub fn complement(&self, c: usize) -> usize {
        self.complement_of[c]
    }

    /// Condensation out-neighbors of `c`, ascending.
    pub fn condensation_successors(&self, c: usize) -> &[usize] {
        &self.successors[c]
    }

    /// No literal shares a component with its complement.
    pub fn is_satisfiable(&self) -> bool {
        (0..self.n).all(|i| self.component_of[2 * i] != self.component_of[2 * i + 1])
    }

    /// True iff `a <= b`, i.e. some literal of `a` reaches some literal of `b`.
    pub fn reaches(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        if a > b {
            return false;
        }
        match &self.reach {
            Reachability::Closure { words, rows } => rows[a * words + b / 64] >> (b % 64) & 1 == 1,
            Reachability::OnDemand => self.search(a, Some(b)).contains(b),
        }
    }

    /// True iff `a` and `b` are related in the order on components.
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.reaches(a, b) || self.reaches(b, a)
    }

    /// Every component reachable from `a`, including `a`.
    pub fn reachable_from(&self, a: usize) -> ComponentSet {
        match &self.reach {
            Reachability::Closure { words, rows } => ComponentSet {
                bits: rows[a * words..(a + 1) * words].to_vec(),
            },
            Reachability::OnDemand => self.search(a, None),
        }
    }

    fn search(&self, start: usize, bound: Option<usize>) -> ComponentSet {
        let limit = bound.unwrap_or(usize::MAX);
        let mut seen = ComponentSet::empty(self.len());
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(c) = stack.pop() {
            if Some(c) == bound {
                break;
            }
            for &d in &self.successors[c] {
                if d <= limit && !seen.contains(d) {
                    seen.insert(d);
                    stack.push(d);
                }
            }
        }
        seen
    }

    /// A viable genotype, picking each locus' allele from the later of the
    /// two complementary components. `None` when unsatisfiable.
    pub fn solution(&self) -> Option<Genotype> {
        if !self.is_satisfiable() {
            return None;
        }
        Some(Genotype::from_alleles(
            (0..self.n).map(|i| self.component_of[2 * i + 1] > self.component_of[2 * i]),
        ))
    }
}

/// A bitset over component indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSet {
    bits: Vec<u64>,
}

impl ComponentSet {
    fn empty(len: usize) -> Self {
        Self {
            bits: vec![0; len.div_ceil(64)],
        }
    }

    fn insert(&mut self, c: usize) {
        self.bits[c / 64] |= 1 << (c % 64);
    }

    pub fn contains(&self, c: usize) -> bool {
        self.bits.get(c / 64).is_some_and(|w| w >> (c % 64) & 1 == 1)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn transitive_closure(successors: &[Vec<usize>]) -> Reachability {
    let count = successors.len();
    let words = count.div_ceil(64).max(1);
    let mut rows = vec![0u64; count * words];
    // Successors have larger indices, so filling from the end sees them first.
    for c in (0..count).rev() {
        rows[c * words + c / 64] |= 1 << (c % 64);
        for &d in &successors[c] {
            let (head, tail) = rows.split_at_mut(d * words);
            let dst = &mut head[c * words..(c + 1) * words];
            for (x, y) in dst.iter_mut().zip(&tail[..words]) {
                *x |= *y;
            }
        }
    }
    Reachability::Closure { words, rows }
}

/// Iterative Tarjan. Returns each vertex's component index, numbered so that
/// components come out in topological order, and the component count.
fn tarjan(graph: &ImplicationDigraph) -> (Vec<usize>, usize) {
    const UNVISITED: usize = usize::MAX;
    let v_count = graph.vertex_count();
    let mut index = vec![UNVISITED; v_count];
    let mut low = vec![0usize; v_count];
    let mut on_stack = vec![false; v_count];
    let mut stack = Vec::new();
    // Tarjan emits sinks first; ids are reversed at the end.
    let mut emitted = vec![UNVISITED; v_count];
    let mut count = 0usize;
    let mut next_index = 0usize;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..v_count {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = graph.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    emitted[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }

    let component_of = emitted.into_iter().map(|e| count - 1 - e).collect();
    (component_of, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_formula, Formula};

    fn lit(s: &str) -> Literal {
        s.parse().unwrap()
    }

    fn formula(n: usize, pairs: &[(&str, &str)]) -> Formula {
        let pairs: Vec<_> = pairs.iter().map(|(a, b)| (lit(a), lit(b))).collect();
        build_formula(n, &pairs).unwrap()
    }

    fn f2() -> Formula {
        formula(4, &[("0_2", "1_3"), ("0_1", "1_2"), ("1_1", "0_2")])
    }

    fn f3() -> Formula {
        formula(4, &[("0_2", "1_3"), ("0_1", "1_2"), ("1_1", "0_2"), ("0_1", "0_2")])
    }

    fn scc(f: &Formula) -> SccDecomposition {
        SccDecomposition::new(&ImplicationDigraph::new(f))
    }

    fn nontrivial(s: &SccDecomposition) -> Vec<Vec<Literal>> {
        (0..s.len())
            .filter(|&c| !s.is_trivial(c))
            .map(|c| s.literals(c).collect())
            .collect()
    }

    #[test]
    fn worked_example_components() {
        let s1 = scc(&formula(4, &[("0_2", "1_3"), ("0_1", "1_2")]));
        assert_eq!(s1.len(), 8);
        assert!(nontrivial(&s1).is_empty());

        let s2 = scc(&f2());
        assert_eq!(s2.len(), 6);
        let mut nt = nontrivial(&s2);
        nt.sort();
        assert_eq!(
            nt,
            vec![vec![lit("0_1"), lit("0_2")], vec![lit("1_1"), lit("1_2")]]
        );

        let s0 = scc(&Formula::empty(3).unwrap());
        assert_eq!(s0.len(), 6);
    }

    #[test]
    fn worked_example_order() {
        let s2 = scc(&f2());
        let (a, b) = (s2.component(lit("1_1")), s2.component(lit("0_1")));
        assert!(!s2.comparable(a, b));
        assert!(s2.comparable(a, a));

        let s3 = scc(&f3());
        let (a, b) = (s3.component(lit("1_1")), s3.component(lit("0_1")));
        assert!(s3.comparable(a, b));
        assert!(s3.reaches(b, a));
    }

    #[test]
    fn satisfiability() {
        assert!(scc(&f3()).is_satisfiable());
        assert!(scc(&Formula::empty(2).unwrap()).is_satisfiable());
        let all = formula(2, &[("1_1", "1_2"), ("1_1", "0_2"), ("0_1", "1_2"), ("0_1", "0_2")]);
        let s = scc(&all);
        assert!(!s.is_satisfiable());
        assert!(s.solution().is_none());
    }

    #[test]
    fn complement_is_involution_and_topological() {
        let f = formula(
            6,
            &[
                ("0_1", "1_2"),
                ("1_1", "0_2"),
                ("0_2", "1_3"),
                ("1_4", "0_5"),
                ("0_4", "1_5"),
                ("1_5", "1_6"),
            ],
        );
        let d = ImplicationDigraph::new(&f);
        let s = SccDecomposition::new(&d);
        for c in 0..s.len() {
            assert_eq!(s.complement(s.complement(c)), c);
            let comp: Vec<_> = s.literals(c).map(Literal::negate).collect();
            let mut other: Vec<_> = s.literals(s.complement(c)).collect();
            other.sort();
            let mut comp = comp;
            comp.sort();
            assert_eq!(comp, other);
            for &d in s.condensation_successors(c) {
                assert!(d > c);
            }
        }
        let g = s.solution().unwrap();
        assert!(f.violation(&g).unwrap().is_none());
    }

    #[test]
    fn on_demand_matches_closure() {
        let f = f3();
        let d = ImplicationDigraph::new(&f);
        let closed = SccDecomposition::new(&d);
        let lazy = SccDecomposition::with_closure_limit(&d, 0);
        for a in 0..closed.len() {
            for b in 0..closed.len() {
                assert_eq!(closed.reaches(a, b), lazy.reaches(a, b));
            }
            assert_eq!(closed.reachable_from(a), lazy.reachable_from(a));
        }
    }

    #[test]
    fn long_chain_does_not_recurse() {
        let n = 200_000;
        let clauses: Vec<_> = (0..n - 1)
            .map(|i| crate::model::Incompatibility::new(Literal::one(i), Literal::zero(i + 1)).unwrap())
            .collect();
        let f = Formula::new(n, clauses).unwrap();
        let s = scc(&f);
        assert_eq!(s.len(), 2 * n);
        assert!(s.is_satisfiable());
    }
}
