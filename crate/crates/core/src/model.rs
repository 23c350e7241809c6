//! Loci, alleles, genotypes and incompatibility lists.
//!
//! Loci are 0-indexed everywhere inside the crate. Text forms (`Display`,
//! [`Literal::from_str`], [`Genotype::from_str`]) use 1-indexed loci, so the
//! allele written `0_2` is `Literal::new(1, false)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An allele at one locus, equivalently a boolean literal.
///
/// `allele == false` is the allele `0_i` (negative literal), `true` is `1_i`.
/// Ordering follows the vertex index `2 * locus + allele`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    locus: usize,
    allele: bool,
}

impl Literal {
    pub const fn new(locus: usize, allele: bool) -> Self {
        Self { locus, allele }
    }

    /// The allele `0_i`.
    pub const fn zero(locus: usize) -> Self {
        Self::new(locus, false)
    }

    /// The allele `1_i`.
    pub const fn one(locus: usize) -> Self {
        Self::new(locus, true)
    }

    /// Rebuilds a literal from its digraph vertex index.
    pub const fn from_vertex(vertex: usize) -> Self {
        Self::new(vertex >> 1, vertex & 1 == 1)
    }

    pub const fn locus(self) -> usize {
        self.locus
    }

    pub const fn allele(self) -> bool {
        self.allele
    }

    /// Vertex index in the implication digraph; complement is `vertex ^ 1`.
    pub const fn vertex(self) -> usize {
        2 * self.locus + self.allele as usize
    }

    pub const fn negate(self) -> Self {
        Self::new(self.locus, !self.allele)
    }

    /// Literals on different loci.
    pub const fn strictly_distinct(self, other: Literal) -> bool {
        self.locus != other.locus
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        self.negate()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.allele as u8, self.locus + 1)
    }
}

impl FromStr for Literal {
    type Err = String;

    /// Parses `<0|1>_<locus>` with a 1-indexed locus.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (allele, locus) = s
            .split_once('_')
            .ok_or_else(|| format!("expected <0|1>_<locus>, got {s:?}"))?;
        let allele = match allele {
            "0" => false,
            "1" => true,
            _ => return Err(format!("allele must be 0 or 1, got {allele:?}")),
        };
        let locus: usize = locus
            .parse()
            .map_err(|_| format!("bad locus in {s:?}"))?;
        if locus == 0 {
            return Err(format!("loci are numbered from 1, got {s:?}"));
        }
        Ok(Literal::new(locus - 1, allele))
    }
}

/// One allele per locus, packed 64 loci per word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genotype {
    n: usize,
    words: Vec<u64>,
}

impl Genotype {
    /// The all-`0` genotype.
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    /// Genotype whose allele at locus `i` is bit `i` of `code`.
    pub fn from_code(n: usize, code: u64) -> Self {
        assert!(n <= 64, "from_code supports at most 64 loci");
        let mut g = Self::zeros(n);
        if n > 0 {
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            g.words[0] = code & mask;
        }
        g
    }

    /// Inverse of [`Genotype::from_code`]; `None` past 64 loci.
    pub fn code(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Builds a genotype from the allele at each locus, in locus order.
    pub fn from_alleles<I: IntoIterator<Item = bool>>(alleles: I) -> Self {
        let mut g = Self::zeros(0);
        for (i, a) in alleles.into_iter().enumerate() {
            if i % 64 == 0 {
                g.words.push(0);
            }
            g.n += 1;
            if a {
                g.words[i / 64] |= 1 << (i % 64);
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bit(&self, locus: usize) -> bool {
        assert!(locus < self.n, "locus {locus} out of range");
        self.words[locus / 64] >> (locus % 64) & 1 == 1
    }

    /// The allele this genotype carries at `locus`.
    pub fn allele(&self, locus: usize) -> Literal {
        Literal::new(locus, self.bit(locus))
    }

    pub fn has(&self, x: Literal) -> bool {
        self.bit(x.locus()) == x.allele()
    }

    pub fn set(&mut self, x: Literal) {
        assert!(x.locus() < self.n, "locus {} out of range", x.locus());
        let (w, b) = (x.locus() / 64, x.locus() % 64);
        if x.allele() {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn flip(&mut self, locus: usize) {
        assert!(locus < self.n, "locus {locus} out of range");
        self.words[locus / 64] ^= 1 << (locus % 64);
    }

    pub fn alleles(&self) -> impl Iterator<Item = Literal> + '_ {
        (0..self.n).map(|i| self.allele(i))
    }

    /// Loci where `self` and `other` carry different alleles, ascending.
    pub fn differing_loci(&self, other: &Genotype) -> Vec<usize> {
        assert_eq!(self.n, other.n, "genotype lengths differ");
        let mut out = Vec::new();
        for (w, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let mut diff = a ^ b;
            while diff != 0 {
                out.push(w * 64 + diff.trailing_zeros() as usize);
                diff &= diff - 1;
            }
        }
        out
    }

    pub fn hamming(&self, other: &Genotype) -> usize {
        assert_eq!(self.n, other.n, "genotype lengths differ");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Genotype {
    type Err = String;

    /// Binary string, leftmost character is locus 1.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty genotype".into());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(format!("genotype must be a binary string, got {c:?}")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Genotype::from_alleles)
    }
}

/// An unordered pair of alleles on distinct loci that cannot co-occur.
///
/// Equivalent to the 2-clause `!first | !second`. Stored lower locus first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Incompatibility {
    first: Literal,
    second: Literal,
}

impl Incompatibility {
    pub fn new(a: Literal, b: Literal) -> Result<Self> {
        if a.locus() == b.locus() {
            return Err(Error::SameLocus(a, b));
        }
        let (first, second) = if a.locus() < b.locus() { (a, b) } else { (b, a) };
        Ok(Self { first, second })
    }

    pub fn first(&self) -> Literal {
        self.first
    }

    pub fn second(&self) -> Literal {
        self.second
    }

    pub fn literals(&self) -> [Literal; 2] {
        [self.first, self.second]
    }

    /// True when `g` carries both alleles.
    pub fn violated_by(&self, g: &Genotype) -> bool {
        g.has(self.first) && g.has(self.second)
    }
}

impl fmt::Display for Incompatibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.first, self.second)
    }
}

/// A duplicate-free, canonically ordered list of incompatibilities over `n` loci.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    n: usize,
    clauses: Vec<Incompatibility>,
}

impl Formula {
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// Canonicalizes and deduplicates `clauses`.
    pub fn new(n: usize, mut clauses: Vec<Incompatibility>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyLocusSet);
        }
        for c in &clauses {
            if c.second().locus() >= n {
                return Err(Error::LocusOutOfRange {
                    locus: c.second().locus(),
                    n,
                });
            }
        }
        clauses.sort_unstable();
        clauses.dedup();
        Ok(Self { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[Incompatibility] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// First incompatibility carried by `g`, if any.
    pub fn violation(&self, g: &Genotype) -> Result<Option<&Incompatibility>> {
        if g.len() != self.n {
            return Err(Error::DimensionMismatch {
                genotype: g.len(),
                formula: self.n,
            });
        }
        Ok(self.clauses.iter().find(|c| c.violated_by(g)))
    }

    /// Errors with the violated pair when `g` is inviable.
    pub fn require_viable(&self, g: &Genotype) -> Result<()> {
        match self.violation(g)? {
            Some(c) => Err(Error::Inviable(c.first(), c.second())),
            None => Ok(()),
        }
    }

    /// Adds incompatibilities, returning a new canonical formula.
    pub fn with<I: IntoIterator<Item = Incompatibility>>(&self, extra: I) -> Result<Self> {
        let mut clauses = self.clauses.clone();
        clauses.extend(extra);
        Self::new(self.n, clauses)
    }
}

/// Builds a formula from raw allele pairs.
pub fn build_formula(n: usize, pairs: &[(Literal, Literal)]) -> Result<Formula> {
    if n == 0 {
        return Err(Error::EmptyLocusSet);
    }
    let clauses = pairs
        .iter()
        .map(|&(a, b)| {
            for x in [a, b] {
                if x.locus() >= n {
                    return Err(Error::LocusOutOfRange { locus: x.locus(), n });
                }
            }
            Incompatibility::new(a, b)
        })
        .collect::<Result<Vec<_>>>()?;
    Formula::new(n, clauses)
}

/// True iff `g` carries no incompatible pair of `formula`.
pub fn is_viable(g: &Genotype, formula: &Formula) -> Result<bool> {
    Ok(formula.violation(g)?.is_none())
}
