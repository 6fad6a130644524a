//! Generators `t[i,j]`, words, ordered monomials and the weight filtration.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Generator id: row-major position `(i - 1) * n + (j - 1)`.
pub type Gen = u8;

/// Largest supported matrix size; generator ids must fit in a byte.
pub const MAX_N: usize = 15;

/// 1-based index `(i, j)` of the generator `t[i,j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenIndex {
    pub i: usize,
    pub j: usize,
}

impl GenIndex {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    pub fn checked(i: usize, j: usize, n: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Parameter(format!(
                "generator index t[{i},{j}] out of range for n={n}"
            )));
        }
        Ok(Self { i, j })
    }

    pub fn id(self, n: usize) -> Gen {
        ((self.i - 1) * n + (self.j - 1)) as Gen
    }

    pub fn from_id(g: Gen, n: usize) -> Self {
        let g = g as usize;
        Self {
            i: g / n + 1,
            j: g % n + 1,
        }
    }

    pub fn region(self, n: usize) -> Region {
        let anti = n + 1 - self.i;
        match self.j.cmp(&anti) {
            Ordering::Greater => Region::Minus,
            Ordering::Equal => Region::Anti,
            Ordering::Less => Region::Plus,
        }
    }

    pub fn is_diagonal(self) -> bool {
        self.i == self.j
    }
}

impl fmt::Display for GenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t[{},{}]", self.i, self.j)
    }
}

/// Position of an index relative to the antidiagonal `j = n + 1 - i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Region {
    /// `j > n + 1 - i`
    Minus,
    /// `j = n + 1 - i`
    Anti,
    /// `j < n + 1 - i`
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    StandardAny,
    /// Every `Minus` index precedes every `Anti` index, which precedes every `Plus` index.
    OppositeConstrained,
}

/// A total order on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenOrder {
    n: usize,
    rank: Vec<u8>,
    by_rank: Vec<Gen>,
    kind: OrderKind,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::Parameter(format!(
            "matrix size must be in 1..={MAX_N}, got {n}"
        )));
    }
    Ok(())
}

impl GenOrder {
    /// `(1,1) < (1,2) < ... < (n,n)`
    pub fn row_major(n: usize) -> Self {
        let by_rank: Vec<Gen> = (0..(n * n) as Gen).collect();
        Self {
            n,
            rank: by_rank.clone(),
            by_rank,
            kind: OrderKind::StandardAny,
        }
    }

    /// Builds an order from the list of indices, smallest first.
    pub fn from_sequence(n: usize, seq: &[GenIndex], kind: OrderKind) -> Result<Self> {
        check_n(n)?;
        if seq.len() != n * n {
            return Err(Error::Parameter(format!(
                "order must list all {} generators, got {}",
                n * n,
                seq.len()
            )));
        }
        let mut rank = vec![u8::MAX; n * n];
        let mut by_rank = Vec::with_capacity(n * n);
        for (r, idx) in seq.iter().enumerate() {
            let idx = GenIndex::checked(idx.i, idx.j, n)?;
            let g = idx.id(n);
            if rank[g as usize] != u8::MAX {
                return Err(Error::Parameter(format!("{idx} listed twice in order")));
            }
            rank[g as usize] = r as u8;
            by_rank.push(g);
        }
        let order = Self {
            n,
            rank,
            by_rank,
            kind,
        };
        if kind == OrderKind::OppositeConstrained {
            order.validate_opposite()?;
        }
        Ok(order)
    }

    /// Checks the block condition `Minus < Anti < Plus`.
    pub fn validate_opposite(&self) -> Result<()> {
        let n = self.n;
        let regions: Vec<Region> = self
            .by_rank
            .iter()
            .map(|&g| GenIndex::from_id(g, n).region(n))
            .collect();
        for (w, pair) in regions.windows(2).enumerate() {
            if pair[0] > pair[1] {
                let a = GenIndex::from_id(self.by_rank[w], n);
                let b = GenIndex::from_id(self.by_rank[w + 1], n);
                return Err(Error::OrderConstraint(format!(
                    "{a} ({:?}) is ranked before {b} ({:?})",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    #[inline]
    pub fn rank(&self, g: Gen) -> u8 {
        self.rank[g as usize]
    }

    /// Generators, smallest first.
    pub fn generators(&self) -> &[Gen] {
        &self.by_rank
    }

    pub fn is_sorted(&self, word: &[Gen]) -> bool {
        word.windows(2).all(|p| self.rank(p[0]) <= self.rank(p[1]))
    }

    /// Number of pairs `a < b` with `rank(word[a]) > rank(word[b])`.
    pub fn inversions(&self, word: &[Gen]) -> u32 {
        let mut count = 0;
        for a in 0..word.len() {
            for b in a + 1..word.len() {
                if self.rank(word[a]) > self.rank(word[b]) {
                    count += 1;
                }
            }
        }
        count
    }
}

/// Orders the generators as `Minus`, then `Anti`, then `Plus`, using
/// `within` inside each block. The result always satisfies the block condition.
pub fn make_opposite_order(n: usize, within: &GenOrder) -> Result<GenOrder> {
    check_n(n)?;
    if within.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: within.n(),
        });
    }
    let mut seq: Vec<GenIndex> = (0..(n * n) as Gen)
        .map(|g| GenIndex::from_id(g, n))
        .collect();
    seq.sort_by_key(|idx| (idx.region(n), within.rank(idx.id(n))));
    GenOrder::from_sequence(n, &seq, OrderKind::OppositeConstrained)
}

/// Lexicographic weight `(k, d[1,1], d[1,2], ..., d[n,n])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<u32>);

impl Weight {
    pub fn degree(&self) -> u32 {
        self.0[0]
    }

    pub fn counts(&self) -> &[u32] {
        &self.0[1..]
    }
}

pub fn weight(word: &[Gen], n: usize) -> Weight {
    let mut w = vec![0u32; n * n + 1];
    w[0] = word.len() as u32;
    for &g in word {
        w[g as usize + 1] += 1;
    }
    Weight(w)
}

pub fn lex_compare(a: &Weight, b: &Weight) -> Result<Ordering> {
    if a.0.len() != b.0.len() {
        return Err(Error::DimensionMismatch {
            expected: a.0.len(),
            found: b.0.len(),
        });
    }
    Ok(a.0.cmp(&b.0))
}

/// An ordered monomial `prod t[i,j]^N[i,j] * D^dpower`.
///
/// Exponents are indexed by generator id (row-major). Ordering is by weight
/// (degree, then row-major exponents), then by `dpower`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub dpower: i64,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Self {
            exps: vec![0; n * n],
            dpower: 0,
        }
    }

    pub fn from_word(word: &[Gen], n: usize) -> Self {
        let mut m = Self::one(n);
        for &g in word {
            m.exps[g as usize] += 1;
        }
        m
    }

    pub fn generator(idx: GenIndex, n: usize) -> Self {
        let mut m = Self::one(n);
        m.exps[idx.id(n) as usize] = 1;
        m
    }

    pub fn with_dpower(mut self, z: i64) -> Self {
        self.dpower = z;
        self
    }

    pub fn n(&self) -> usize {
        let len = self.exps.len();
        (0..=MAX_N)
            .find(|k| k * k == len)
            .expect("square exponent vector")
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn exp(&self, idx: GenIndex) -> u32 {
        self.exps[idx.id(self.n()) as usize]
    }

    pub fn weight(&self) -> Weight {
        let mut w = Vec::with_capacity(self.exps.len() + 1);
        w.push(self.degree());
        w.extend_from_slice(&self.exps);
        Weight(w)
    }

    pub fn is_one(&self) -> bool {
        self.dpower == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// Letters of the monomial listed in `order`.
    pub fn word(&self, order: &GenOrder) -> Vec<Gen> {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for &g in order.generators() {
            for _ in 0..self.exps[g as usize] {
                w.push(g);
            }
        }
        w
    }

    pub fn mul_commutative(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            dpower: self.dpower + other.dpower,
        }
    }

    /// Prints as `t[1,1]^2 t[1,2] D^-1`, factors in `order`; `1` for the unit.
    pub fn display<'a>(&'a self, order: &'a GenOrder) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, order }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
            .then_with(|| self.dpower.cmp(&other.dpower))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    order: &'a GenOrder,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order.n();
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            Ok(())
        };
        for &g in self.order.generators() {
            let e = self.m.exps[g as usize];
            if e == 0 {
                continue;
            }
            sep(f)?;
            write!(f, "{}", GenIndex::from_id(g, n))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if self.m.dpower != 0 {
            sep(f)?;
            write!(f, "D")?;
            if self.m.dpower != 1 {
                write!(f, "^{}", self.m.dpower)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}
