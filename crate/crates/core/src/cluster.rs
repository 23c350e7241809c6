//! Cluster structure of the viable genotypes.
//!
//! A splitting pair is a complementary pair of nontrivial strong components
//! `(C, !C)` that are unrelated in the component order. Every viable genotype
//! carries all of `C` or all of `!C`, and two viable genotypes are connected by
//! single-locus mutations exactly when they make the same choice on every
//! splitting pair. The cluster count is therefore the number of choice vectors
//! that some viable genotype realizes. That is `2^k` when the pairs do not
//! constrain each other. When choosing `C` forces the complement of a
//! component of another pair, some combinations are unrealizable and the
//! count is smaller.

use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::cmp::Reverse;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ImplicationDigraph;
use crate::model::{Formula, Genotype, Literal};
use crate::scc::SccDecomposition;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingPair {
    /// The side holding the smallest vertex index of the pair.
    pub comp: usize,
    pub comp_complement: usize,
    /// Loci covered by the pair, ascending.
    pub loci: Vec<usize>,
}

impl SplittingPair {
    /// Component of the pair selected by `side` (`false` is `comp`).
    pub fn side(&self, side: bool) -> usize {
        if side {
            self.comp_complement
        } else {
            self.comp
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterReport {
    pub satisfiable: bool,
    pub splitting_pairs: Vec<SplittingPair>,
    pub k: usize,
    /// Exact number of clusters; zero when unsatisfiable.
    pub cluster_count: BigUint,
    /// Pairs of splitting pairs with at least one jointly unrealizable choice.
    pub conflicting_pairs: usize,
}

impl ClusterReport {
    /// `log2` of the cluster count; `-inf` when unsatisfiable.
    pub fn log2_clusters(&self) -> f64 {
        log2_count(&self.cluster_count)
    }
}

/// `log2` of an arbitrary-precision count, `-inf` for zero.
pub fn log2_count(count: &BigUint) -> f64 {
    if count.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = count.bits();
    let shift = bits.saturating_sub(53);
    let top: BigUint = count >> shift;
    let v = top.iter_u64_digits().next().unwrap_or(0);
    (v as f64).log2() + shift as f64
}

/// Splitting pairs in order of smallest member vertex. Errors when the
/// decomposition has a contradictory component.
pub fn splitting_pairs(scc: &SccDecomposition) -> Result<Vec<SplittingPair>> {
    splitting_pairs_by(scc, |s, a, b| s.comparable(a, b))
}

/// [`splitting_pairs`] with a caller-supplied comparability test.
pub fn splitting_pairs_by<F>(scc: &SccDecomposition, comparable: F) -> Result<Vec<SplittingPair>>
where
    F: Fn(&SccDecomposition, usize, usize) -> bool,
{
    if !scc.is_satisfiable() {
        return Err(Error::Unsatisfiable);
    }
    let mut pairs: Vec<SplittingPair> = (0..scc.len())
        .filter(|&c| !scc.is_trivial(c))
        .filter_map(|c| {
            let other = scc.complement(c);
            let canonical = scc.members(c)[0] < scc.members(other)[0];
            (canonical && !comparable(scc, c, other)).then(|| SplittingPair {
                comp: c,
                comp_complement: other,
                loci: scc.members(c).iter().map(|&v| v >> 1).collect(),
            })
        })
        .collect();
    pairs.sort_by_key(|p| scc.members(p.comp)[0]);
    Ok(pairs)
}

/// Digraph, decomposition and splitting pairs of one formula, for repeated
/// queries.
#[derive(Debug, Clone)]
pub struct ClusterAnalysis {
    formula: Formula,
    graph: ImplicationDigraph,
    scc: SccDecomposition,
    pairs: Vec<SplittingPair>,
}

impl ClusterAnalysis {
    pub fn new(formula: &Formula) -> Self {
        Self::with_order(formula, |s, a, b| s.comparable(a, b))
    }

    /// Analysis using a caller-supplied comparability test for splitting pairs.
    pub fn with_order<F>(formula: &Formula, comparable: F) -> Self
    where
        F: Fn(&SccDecomposition, usize, usize) -> bool,
    {
        let graph = ImplicationDigraph::new(formula);
        let scc = SccDecomposition::new(&graph);
        let pairs = splitting_pairs_by(&scc, comparable).unwrap_or_default();
        Self {
            formula: formula.clone(),
            graph,
            scc,
            pairs,
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn graph(&self) -> &ImplicationDigraph {
        &self.graph
    }

    pub fn scc(&self) -> &SccDecomposition {
        &self.scc
    }

    pub fn is_satisfiable(&self) -> bool {
        self.scc.is_satisfiable()
    }

    pub fn splitting_pairs(&self) -> &[SplittingPair] {
        &self.pairs
    }

    pub fn report(&self) -> ClusterReport {
        if !self.is_satisfiable() {
            return ClusterReport {
                satisfiable: false,
                splitting_pairs: Vec::new(),
                k: 0,
                cluster_count: BigUint::zero(),
                conflicting_pairs: 0,
            };
        }
        let (cluster_count, conflicting_pairs) = count_realizable(&self.scc, &self.pairs);
        ClusterReport {
            satisfiable: true,
            splitting_pairs: self.pairs.clone(),
            k: self.pairs.len(),
            cluster_count,
            conflicting_pairs,
        }
    }

    fn check_viable(&self, g: &Genotype) -> Result<()> {
        self.formula.require_viable(g)
    }

    /// Connectivity by the splitting-pair criterion: `u` and `v` are joined by
    /// viable single-locus mutations iff no splitting pair has all its loci
    /// among the loci where they differ.
    pub fn same_cluster(&self, u: &Genotype, v: &Genotype) -> Result<bool> {
        self.check_viable(u)?;
        self.check_viable(v)?;
        let mut differs = vec![false; self.formula.n()];
        for i in u.differing_loci(v) {
            differs[i] = true;
        }
        Ok(!self
            .pairs
            .iter()
            .any(|p| p.loci.iter().all(|&i| differs[i])))
    }

    /// A viable mutational path from `u` to `v`, or `NotConnected`.
    ///
    /// Differing loci are fixed in ascending order. To install the target
    /// allele `x`, the alleles of `L+(x)` that the current genotype lacks are
    /// flipped first, always choosing the smallest-vertex leaf of what remains.
    /// Every flip moves toward `v`, so the path length equals the Hamming
    /// distance.
    pub fn find_path(&self, u: &Genotype, v: &Genotype) -> Result<PathOutcome> {
        if !self.same_cluster(u, v)? {
            return Ok(PathOutcome::NotConnected);
        }
        let mut current = u.clone();
        let mut flips = Vec::new();
        for locus in u.differing_loci(v) {
            if current.bit(locus) == v.bit(locus) {
                continue;
            }
            self.install(&mut current, v.allele(locus), &mut flips)?;
        }
        debug_assert_eq!(&current, v);
        Ok(PathOutcome::Connected(MutationalPath {
            start: u.clone(),
            flips,
        }))
    }

    fn install(&self, current: &mut Genotype, target: Literal, flips: &mut Vec<usize>) -> Result<()> {
        // Alleles implied by `target` that `current` lacks. Anything `current`
        // already carries has its whole out-set present too, so the search
        // stops there.
        let mut remaining: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([target.vertex()]);
        remaining.insert(target.vertex(), 0);
        while let Some(y) = queue.pop_front() {
            for &z in self.graph.successors(y) {
                if !current.has(Literal::from_vertex(z)) {
                    *remaining.get_mut(&y).expect("queued vertex") += 1;
                    if !remaining.contains_key(&z) {
                        remaining.insert(z, 0);
                        queue.push_back(z);
                    }
                }
            }
        }

        let mut leaves: BinaryHeap<Reverse<usize>> = remaining
            .iter()
            .filter(|&(_, &d)| d == 0)
            .map(|(&y, _)| Reverse(y))
            .collect();
        while let Some(Reverse(y)) = leaves.pop() {
            let lit = Literal::from_vertex(y);
            current.set(lit);
            flips.push(lit.locus());
            if y == target.vertex() {
                return Ok(());
            }
            for &p in self.graph.predecessors(y) {
                if let Some(d) = remaining.get_mut(&p) {
                    if *d > 0 {
                        *d -= 1;
                        if *d == 0 {
                            leaves.push(Reverse(p));
                        }
                    }
                }
            }
        }
        // only reachable when the splitting pairs are wrong for this formula
        Err(Error::PathStalled(format!(
            "alleles implied by {target} that are missing from {current} form a cycle"
        )))
    }

    /// A viable genotype carrying every allele of `side` of splitting pair
    /// `pair`: start from any viable genotype and overwrite it with the union
    /// of the out-sets of the chosen component.
    pub fn strategy_witness(&self, pair: usize, side: bool) -> Option<Genotype> {
        let comp = self.pairs.get(pair)?.side(side);
        let mut g = self.scc.solution()?;
        let mut seen = vec![false; self.graph.vertex_count()];
        let mut stack: Vec<usize> = self.scc.members(comp).to_vec();
        for &v in &stack {
            seen[v] = true;
        }
        while let Some(y) = stack.pop() {
            g.set(Literal::from_vertex(y));
            for &z in self.graph.successors(y) {
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
        Some(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathOutcome {
    Connected(MutationalPath),
    NotConnected,
}

/// Start genotype plus the locus flipped at each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationalPath {
    pub start: Genotype,
    pub flips: Vec<usize>,
}

impl MutationalPath {
    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    /// Every genotype on the path, endpoints included.
    pub fn genotypes(&self) -> Vec<Genotype> {
        let mut out = Vec::with_capacity(self.flips.len() + 1);
        let mut g = self.start.clone();
        out.push(g.clone());
        for &i in &self.flips {
            g.flip(i);
            out.push(g.clone());
        }
        out
    }

    pub fn end(&self) -> Genotype {
        let mut g = self.start.clone();
        for &i in &self.flips {
            g.flip(i);
        }
        g
    }
}

/// Counts choice vectors over the splitting pairs that no two chosen sides
/// contradict. Chosen components `X` and `Z` contradict when `X` reaches the
/// complement of `Z`. Also returns how many pairs of pairs have a conflict.
fn count_realizable(scc: &SccDecomposition, pairs: &[SplittingPair]) -> (BigUint, usize) {
    let k = pairs.len();
    let reach: Vec<[_; 2]> = pairs
        .iter()
        .map(|p| [scc.reachable_from(p.comp), scc.reachable_from(p.comp_complement)])
        .collect();
    // forbidden[i] lists (j, side_i, side_j) with j != i
    let mut forbidden: Vec<Vec<(usize, bool, bool)>> = vec![Vec::new(); k];
    let mut conflicting_pairs = 0;
    for i in 0..k {
        for j in i + 1..k {
            let mut any = false;
            for si in [false, true] {
                for sj in [false, true] {
                    let target = scc.complement(pairs[j].side(sj));
                    if reach[i][si as usize].contains(target) {
                        forbidden[i].push((j, si, sj));
                        forbidden[j].push((i, sj, si));
                        any = true;
                    }
                }
            }
            conflicting_pairs += any as usize;
        }
    }

    let mut total = BigUint::one();
    let mut grouped = vec![false; k];
    for root in 0..k {
        if grouped[root] {
            continue;
        }
        let mut group = vec![root];
        grouped[root] = true;
        let mut head = 0;
        while head < group.len() {
            let i = group[head];
            head += 1;
            for &(j, _, _) in &forbidden[i] {
                if !grouped[j] {
                    grouped[j] = true;
                    group.push(j);
                }
            }
        }
        total *= count_group(&group, &forbidden);
    }
    (total, conflicting_pairs)
}

/// Enumerates the choices of one connected group of constrained pairs.
fn count_group(group: &[usize], forbidden: &[Vec<(usize, bool, bool)>]) -> BigUint {
    if group.len() == 1 {
        return BigUint::from(2u8);
    }
    let pos: HashMap<usize, usize> = group.iter().enumerate().map(|(t, &i)| (i, t)).collect();
    let g = group.len();
    // choice[t]: 0 untried, 1 side false, 2 side true, 3 exhausted
    let mut choice = vec![0u8; g];
    let mut count = BigUint::zero();
    let mut t = 0usize;
    loop {
        choice[t] += 1;
        if choice[t] == 3 {
            choice[t] = 0;
            if t == 0 {
                break;
            }
            t -= 1;
            continue;
        }
        let side = choice[t] == 2;
        let consistent = forbidden[group[t]].iter().all(|&(j, si, sj)| {
            let tj = pos[&j];
            !(tj < t && si == side && (choice[tj] == 2) == sj)
        });
        if !consistent {
            continue;
        }
        if t + 1 == g {
            count += 1u8;
        } else {
            t += 1;
        }
    }
    count
}

/// Full pipeline from formula to cluster report.
pub fn cluster_report(formula: &Formula) -> ClusterReport {
    ClusterAnalysis::new(formula).report()
}

pub fn same_cluster(u: &Genotype, v: &Genotype, formula: &Formula) -> Result<bool> {
    ClusterAnalysis::new(formula).same_cluster(u, v)
}

pub fn find_path(u: &Genotype, v: &Genotype, formula: &Formula) -> Result<PathOutcome> {
    ClusterAnalysis::new(formula).find_path(u, v)
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

    fn f1() -> Formula {
        formula(4, &[("0_2", "1_3"), ("0_1", "1_2")])
    }

    fn f2() -> Formula {
        formula(4, &[("0_2", "1_3"), ("0_1", "1_2"), ("1_1", "0_2")])
    }

    fn f3() -> Formula {
        formula(4, &[("0_2", "1_3"), ("0_1", "1_2"), ("1_1", "0_2"), ("0_1", "0_2")])
    }

    fn g(s: &str) -> Genotype {
        s.parse().unwrap()
    }

    #[test]
    fn splitting_pairs_of_worked_example() {
        let a = ClusterAnalysis::new(&f1());
        assert!(a.splitting_pairs().is_empty());

        let a = ClusterAnalysis::new(&f2());
        let pairs = a.splitting_pairs();
        assert_eq!(pairs.len(), 1);
        let s = a.scc();
        assert_eq!(s.literals(pairs[0].comp).collect::<Vec<_>>(), vec![lit("0_1"), lit("0_2")]);
        assert_eq!(
            s.literals(pairs[0].comp_complement).collect::<Vec<_>>(),
            vec![lit("1_1"), lit("1_2")]
        );
        assert_eq!(pairs[0].loci, vec![0, 1]);

        assert!(ClusterAnalysis::new(&f3()).splitting_pairs().is_empty());
    }

    #[test]
    fn splitting_pairs_rejects_unsat() {
        let f = formula(2, &[("1_1", "1_2"), ("1_1", "0_2"), ("0_1", "1_2"), ("0_1", "0_2")]);
        let a = ClusterAnalysis::new(&f);
        assert_eq!(splitting_pairs(a.scc()), Err(Error::Unsatisfiable));
    }

    #[test]
    fn reports_of_worked_example() {
        let r = cluster_report(&f1());
        assert!(r.satisfiable);
        assert_eq!((r.k, r.cluster_count.clone()), (0, BigUint::one()));
        let r = cluster_report(&f2());
        assert_eq!((r.k, r.cluster_count.clone()), (1, BigUint::from(2u8)));
        assert_eq!(r.log2_clusters(), 1.0);
        let unsat = formula(2, &[("1_1", "1_2"), ("1_1", "0_2"), ("0_1", "1_2"), ("0_1", "0_2")]);
        let r = cluster_report(&unsat);
        assert!(!r.satisfiable);
        assert!(r.cluster_count.is_zero());
        assert!(r.splitting_pairs.is_empty());
        assert_eq!(r.log2_clusters(), f64::NEG_INFINITY);
    }

    #[test]
    fn constrained_pairs_lose_a_combination() {
        // two independent 2-cycle pairs tied by (1_1, 1_3): viable genotypes
        // are 0000, 0011 and 1100, three isolated clusters
        let f = formula(
            4,
            &[("0_1", "1_2"), ("1_1", "0_2"), ("0_3", "1_4"), ("1_3", "0_4"), ("1_1", "1_3")],
        );
        let r = cluster_report(&f);
        assert_eq!(r.k, 2);
        assert_eq!(r.conflicting_pairs, 1);
        assert_eq!(r.cluster_count, BigUint::from(3u8));
    }

    #[test]
    fn many_independent_pairs_overflow_u64() {
        let n = 140;
        let mut pairs = Vec::new();
        for i in (0..n).step_by(2) {
            pairs.push((Literal::zero(i), Literal::one(i + 1)));
            pairs.push((Literal::one(i), Literal::zero(i + 1)));
        }
        let r = cluster_report(&build_formula(n, &pairs).unwrap());
        assert_eq!(r.k, 70);
        assert_eq!(r.cluster_count, BigUint::one() << 70u32);
        assert_eq!(r.log2_clusters(), 70.0);
    }

    #[test]
    fn same_cluster_examples() {
        let a2 = ClusterAnalysis::new(&f2());
        // 1111 and 0000 sit in the two clusters and differ on every locus
        assert!(!a2.same_cluster(&g("1111"), &g("0000")).unwrap());
        assert!(a2.same_cluster(&g("1100"), &g("1111")).unwrap());
        assert!(a2.same_cluster(&g("1100"), &g("1100")).unwrap());
        let a1 = ClusterAnalysis::new(&f1());
        assert!(a1.same_cluster(&g("1111"), &g("1100")).unwrap());
        assert!(matches!(
            a1.same_cluster(&g("0111"), &g("1100")),
            Err(Error::Inviable(..))
        ));
    }

    #[test]
    fn path_examples() {
        let a1 = ClusterAnalysis::new(&f1());
        // 0_1 needs 0_2 and 0_3 first
        let u = g("1110");
        let v = g("0000");
        let PathOutcome::Connected(path) = a1.find_path(&u, &v).unwrap() else {
            panic!("expected a path");
        };
        assert_eq!(path.flips, vec![2, 1, 0]);
        let steps = path.genotypes();
        assert_eq!(steps.first(), Some(&u));
        assert_eq!(steps.last(), Some(&v));
        for w in steps.windows(2) {
            assert_eq!(w[0].hamming(&w[1]), 1);
        }
        for s in &steps {
            assert!(f1().violation(s).unwrap().is_none());
        }

        let PathOutcome::Connected(p) = a1.find_path(&u, &u).unwrap() else {
            panic!("expected a path");
        };
        assert_eq!(p.genotypes(), vec![u.clone()]);

        let a2 = ClusterAnalysis::new(&f2());
        assert_eq!(
            a2.find_path(&g("1100"), &g("0000")).unwrap(),
            PathOutcome::NotConnected
        );
    }

    #[test]
    fn path_picks_up_implied_alleles_first() {
        // 1_1 implies 1_2 implies 1_3, so installing 1_1 needs 1_3 then 1_2
        let f = formula(3, &[("1_1", "0_2"), ("1_2", "0_3")]);
        let a = ClusterAnalysis::new(&f);
        let PathOutcome::Connected(p) = a.find_path(&g("000"), &g("111")).unwrap() else {
            panic!("expected a path");
        };
        assert_eq!(p.flips, vec![2, 1, 0]);
    }

    #[test]
    fn witnesses_follow_each_strategy() {
        let a = ClusterAnalysis::new(&f2());
        for side in [false, true] {
            let w = a.strategy_witness(0, side).unwrap();
            assert!(f2().violation(&w).unwrap().is_none());
            let comp = a.splitting_pairs()[0].side(side);
            assert!(a.scc().literals(comp).all(|x| w.has(x)));
        }
    }
}
