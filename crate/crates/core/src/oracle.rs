//! Brute-force ground truth: enumerate the whole cube, keep the viable
//! genotypes and union neighbors that differ in one locus.

use crate::error::{Error, Result};
use crate::model::{Formula, Genotype};

pub const DEFAULT_CAP: usize = 20;

const NONE: u32 = u32::MAX;

/// Viable genotypes of a formula and the components of the Hamming-1 graph
/// they induce. Genotype codes put locus `i` at bit `i`.
#[derive(Debug, Clone)]
pub struct ViableSubgraph {
    n: usize,
    viable: Vec<u64>,
    component_id: Vec<u32>,
    component_count: usize,
}

impl ViableSubgraph {
    pub fn enumerate(formula: &Formula) -> Result<Self> {
        Self::enumerate_capped(formula, DEFAULT_CAP)
    }

    pub fn enumerate_capped(formula: &Formula, cap: usize) -> Result<Self> {
        let n = formula.n();
        if n > cap || n > 31 {
            return Err(Error::OverOracleCap { n, cap });
        }
        let size = 1usize << n;
        // a code is inviable when (code & mask) == pattern for some clause
        let masks: Vec<(u32, u32)> = formula
            .clauses()
            .iter()
            .map(|c| {
                let (a, b) = (c.first(), c.second());
                let mask = (1u32 << a.locus()) | (1u32 << b.locus());
                let pattern =
                    ((a.allele() as u32) << a.locus()) | ((b.allele() as u32) << b.locus());
                (mask, pattern)
            })
            .collect();

        let mut viable = vec![0u64; size.div_ceil(64)];
        for code in 0..size as u32 {
            if masks.iter().all(|&(m, p)| code & m != p) {
                viable[code as usize / 64] |= 1 << (code % 64);
            }
        }
        let is_viable = |code: usize| viable[code / 64] >> (code % 64) & 1 == 1;

        let mut uf = UnionFind::new(size);
        for code in 0..size {
            if !is_viable(code) {
                continue;
            }
            for i in 0..n {
                let other = code ^ (1 << i);
                if other > code && is_viable(other) {
                    uf.union(code, other);
                }
            }
        }

        let mut component_id = vec![NONE; size];
        let mut root_id = vec![NONE; size];
        let mut component_count = 0usize;
        for code in 0..size {
            if !is_viable(code) {
                continue;
            }
            let r = uf.find(code);
            if root_id[r] == NONE {
                root_id[r] = component_count as u32;
                component_count += 1;
            }
            component_id[code] = root_id[r];
        }

        Ok(Self {
            n,
            viable,
            component_id,
            component_count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_viable_code(&self, code: u64) -> bool {
        let code = code as usize;
        code < 1 << self.n && self.viable[code / 64] >> (code % 64) & 1 == 1
    }

    pub fn viable_count(&self) -> usize {
        self.viable.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Viable codes in increasing order.
    pub fn viable_codes(&self) -> impl Iterator<Item = u64> + '_ {
        (0..1u64 << self.n).filter(|&c| self.is_viable_code(c))
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn component_of(&self, g: &Genotype) -> Result<usize> {
        if g.len() != self.n {
            return Err(Error::DimensionMismatch {
                genotype: g.len(),
                formula: self.n,
            });
        }
        let code = g.code().expect("oracle genotypes fit in one word");
        match self.component_id[code as usize] {
            NONE => Err(Error::InvalidParameter(format!("genotype {g} is inviable"))),
            id => Ok(id as usize),
        }
    }

    /// Same-component test; errors when either genotype is inviable.
    pub fn connected(&self, u: &Genotype, v: &Genotype) -> Result<bool> {
        Ok(self.component_of(u)? == self.component_of(v)?)
    }
}

pub fn enumerate(formula: &Formula) -> Result<ViableSubgraph> {
    ViableSubgraph::enumerate(formula)
}

pub fn oracle_connected(v: &ViableSubgraph, a: &Genotype, b: &Genotype) -> Result<bool> {
    v.connected(a, b)
}

#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(size: usize) -> Self {
        Self {
            parent: (0..size as u32).collect(),
            rank: vec![0; size],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
    }
}
