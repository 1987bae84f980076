//! Balanced bipartite graphs on the fixed vertex set of `K_{n,n}`.
//!
//! A graph is an `n²`-bit edge mask. Edge `(i, j)` (1-indexed, `i` a left
//! vertex, `j` a right vertex) lives at bit `(i-1)·n + (j-1)`, so bit 0 is
//! edge `(1,1)` and rows are contiguous `n`-bit fields.

use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};

/// Largest supported side size. Masks are `u64`, so `n² ≤ 64`.
pub const MAX_SIDE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BipartiteGraph {
    n: usize,
    edges: u64,
}

/// A matching, stored as the graph formed by its edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching(BipartiteGraph);

impl Matching {
    pub fn graph(&self) -> BipartiteGraph {
        self.0
    }

    pub fn mask(&self) -> u64 {
        self.0.edges
    }

    pub fn size(&self) -> usize {
        self.0.edge_count()
    }

    pub fn is_perfect(&self) -> bool {
        self.size() == self.0.n
    }
}

/// Mask with the low `n²` bits set.
pub fn full_mask(n: usize) -> u64 {
    let bits = n * n;
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Bit index of edge `(row, col)`, both 0-indexed.
pub fn edge_bit(n: usize, row: usize, col: usize) -> u32 {
    (row * n + col) as u32
}

fn row_field(n: usize) -> u64 {
    (1u64 << n) - 1
}

impl BipartiteGraph {
    pub fn new(n: usize, edges: u64) -> Result<Self> {
        if n == 0 || n > MAX_SIDE {
            return param(format!("side size n={n} outside 1..={MAX_SIDE}"));
        }
        if edges & !full_mask(n) != 0 {
            return param(format!("mask 0x{edges:x} has bits beyond n²={}", n * n));
        }
        Ok(Self { n, edges })
    }

    /// Caller guarantees `1 ≤ n ≤ MAX_SIDE` and `edges < 2^{n²}`.
    pub(crate) fn from_parts(n: usize, edges: u64) -> Self {
        debug_assert!(n >= 1 && n <= MAX_SIDE);
        debug_assert_eq!(edges & !full_mask(n), 0);
        Self { n, edges }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, full_mask(n))
    }

    /// Builds a graph from 1-indexed `(i, j)` pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut mask = 0u64;
        for &(i, j) in edges {
            if i == 0 || j == 0 || i > n || j > n {
                return param(format!("edge ({i},{j}) outside K_{{{n},{n}}}"));
            }
            mask |= 1 << edge_bit(n, i - 1, j - 1);
        }
        Self::new(n, mask)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.count_ones() as usize
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.edges == 0
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && i <= self.n && j <= self.n && self.edges >> edge_bit(self.n, i - 1, j - 1) & 1 == 1
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.n == other.n && self.edges & !other.edges == 0
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::from_parts(self.n, self.edges | other.edges)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::from_parts(self.n, self.edges & other.edges)
    }

    /// 1-indexed edge list in mask order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        let mut m = self.edges;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            out.push((b / self.n + 1, b % self.n + 1));
            m &= m - 1;
        }
        out
    }

    /// Neighbourhood of left vertex `row` (0-indexed) as an `n`-bit column set.
    pub(crate) fn row(&self, row: usize) -> u64 {
        (self.edges >> (row * self.n)) & row_field(self.n)
    }

    fn rows(&self) -> Vec<u64> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    /// Every perfect matching, in ascending mask order.
    pub fn perfect_matchings(&self) -> Vec<Matching> {
        let rows = self.rows();
        let mut out = Vec::new();
        self.pm_search(&rows, 0, 0, 0, &mut out);
        out.sort_unstable();
        out
    }

    fn pm_search(&self, rows: &[u64], row: usize, used: u64, acc: u64, out: &mut Vec<Matching>) {
        if row == self.n {
            out.push(Matching(Self::from_parts(self.n, acc)));
            return;
        }
        let mut free = rows[row] & !used;
        while free != 0 {
            let c = free.trailing_zeros() as usize;
            free &= free - 1;
            let bit = 1u64 << edge_bit(self.n, row, c);
            self.pm_search(rows, row + 1, used | (1 << c), acc | bit, out);
        }
    }

    /// Number of perfect matchings, by dynamic programming over column subsets.
    pub fn permanent(&self) -> u64 {
        let n = self.n;
        let rows = self.rows();
        let mut dp = vec![0u64; 1 << n];
        dp[0] = 1;
        for used in 0usize..(1 << n) {
            let ways = dp[used];
            if ways == 0 {
                continue;
            }
            let row = used.count_ones() as usize;
            if row == n {
                continue;
            }
            let mut free = rows[row] & !(used as u64);
            while free != 0 {
                let c = free.trailing_zeros() as usize;
                free &= free - 1;
                dp[used | (1 << c)] += ways;
            }
        }
        dp[(1 << n) - 1]
    }

    /// Connected components over all `2n` vertices, isolated ones included.
    pub fn components(&self) -> usize {
        let n = self.n;
        let mut parent: Vec<usize> = (0..2 * n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut count = 2 * n;
        for (i, j) in self.edges() {
            let a = find(&mut parent, i - 1);
            let b = find(&mut parent, n + j - 1);
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    /// Cyclomatic number `e − v + c` with `v = 2n`.
    pub fn cyclomatic(&self) -> usize {
        self.edge_count() + self.components() - self.vertex_count()
    }

    /// Union of all perfect matchings.
    pub fn mc_closure(&self) -> Self {
        let mask = self
            .perfect_matchings()
            .iter()
            .fold(0u64, |acc, m| acc | m.mask());
        Self::from_parts(self.n, mask)
    }

    /// Nonempty, and every edge lies in a perfect matching.
    pub fn is_matching_covered(&self) -> bool {
        !self.is_empty() && self.mc_closure() == *self
    }

    /// Determinant of the biadjacency matrix over GF(2).
    pub fn det_mod2(&self) -> u8 {
        let mut rows = self.rows();
        let n = self.n;
        for col in 0..n {
            let bit = 1u64 << col;
            let Some(p) = (col..n).find(|&r| rows[r] & bit != 0) else {
                return 0;
            };
            rows.swap(col, p);
            for r in col + 1..n {
                if rows[r] & bit != 0 {
                    rows[r] ^= rows[col];
                }
            }
        }
        1
    }

    pub fn has_unique_pm(&self) -> bool {
        self.permanent() == 1
    }

    /// Size of a maximum matching (augmenting paths).
    pub fn max_matching_size(&self) -> usize {
        let n = self.n;
        let rows = self.rows();
        let mut match_of_col: Vec<Option<usize>> = vec![None; n];
        fn augment(rows: &[u64], row: usize, seen: &mut u64, match_of_col: &mut [Option<usize>]) -> bool {
            let mut cand = rows[row] & !*seen;
            while cand != 0 {
                let c = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                *seen |= 1 << c;
                let free = match match_of_col[c] {
                    None => true,
                    Some(r) => augment(rows, r, seen, match_of_col),
                };
                if free {
                    match_of_col[c] = Some(row);
                    return true;
                }
            }
            false
        }
        (0..n)
            .filter(|&r| {
                let mut seen = 0u64;
                augment(&rows, r, &mut seen, &mut match_of_col)
            })
            .count()
    }

    /// Number of matchings with exactly `k` edges.
    pub fn count_matchings(&self, k: usize) -> u64 {
        fn go(rows: &[u64], row: usize, used: u64, left: usize) -> u64 {
            if left == 0 {
                return 1;
            }
            if rows.len() - row < left {
                return 0;
            }
            // skip this row, or match it to a free column
            let mut total = go(rows, row + 1, used, left);
            let mut free = rows[row] & !used;
            while free != 0 {
                let c = free.trailing_zeros();
                free &= free - 1;
                total += go(rows, row + 1, used | (1 << c), left - 1);
            }
            total
        }
        if k > self.n {
            return 0;
        }
        go(&self.rows(), 0, 0, k)
    }

    /// Every matching with exactly `k` edges, ascending mask order.
    pub fn matchings_of_size(&self, k: usize) -> Vec<Matching> {
        fn go(g: &BipartiteGraph, rows: &[u64], row: usize, used: u64, acc: u64, left: usize, out: &mut Vec<Matching>) {
            if left == 0 {
                out.push(Matching(BipartiteGraph::from_parts(g.n, acc)));
                return;
            }
            if rows.len() - row < left {
                return;
            }
            go(g, rows, row + 1, used, acc, left, out);
            let mut free = rows[row] & !used;
            while free != 0 {
                let c = free.trailing_zeros() as usize;
                free &= free - 1;
                let bit = 1u64 << edge_bit(g.n, row, c);
                go(g, rows, row + 1, used | (1 << c), acc | bit, left - 1, out);
            }
        }
        let mut out = Vec::new();
        if k <= self.n {
            go(self, &self.rows(), 0, 0, 0, k, &mut out);
        }
        out.sort_unstable();
        out
    }

    /// Multi-line rendering: the literal followed by the 1-indexed edge list.
    pub fn describe(&self) -> String {
        let edges: Vec<String> = self.edges().iter().map(|(i, j)| format!("({i},{j})")).collect();
        format!("{self} {{{}}}", edges.join(" "))
    }
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}:0x{:X}", self.n, self.edges)
    }
}

impl FromStr for BipartiteGraph {
    type Err = Error;

    /// Parses `n=<N>:0x<HEX>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("graph literal `{s}` is not of the form n=<N>:0x<HEX>"));
        let rest = s.trim().strip_prefix("n=").ok_or_else(bad)?;
        let (n, hex) = rest.split_once(':').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let hex = hex
            .strip_prefix("0x")
            .or_else(|| hex.strip_prefix("0X"))
            .ok_or_else(bad)?;
        let mask = u64::from_str_radix(hex, 16).map_err(|_| bad())?;
        Self::new(n, mask)
    }
}

/// Parses a bare hex mask (`0x..`) or decimal value.
pub fn parse_mask(s: &str) -> Result<u64> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| Error::Parameter(format!("bad mask `{s}`")))
}

/// All `n!` perfect matchings of `K_{n,n}`, ascending mask order.
pub fn all_perfect_matchings(n: usize) -> Result<Vec<Matching>> {
    Ok(BipartiteGraph::complete(n)?.perfect_matchings())
}
