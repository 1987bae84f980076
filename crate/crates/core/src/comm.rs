//! Two-party communication matrices under edge partitions, exact rank,
//! lifted-rank identities and fooling sets.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::functions::{compile_oracle, FunctionSpec, Lift, Oracle};
use crate::graph::{edge_bit, MAX_SIDE};
use crate::poly::SparseMultilinearPoly;

/// Default cap on `|alice| + |bob|` for matrix construction.
pub const DEFAULT_MAX_MATRIX_BITS: u32 = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    pub alice: u64,
    pub bob: u64,
}

impl PartitionSpec {
    /// Partition of `n_vars` input bits; the two masks must tile them.
    pub fn new(alice: u64, bob: u64, n_vars: usize) -> Result<Self> {
        let full = if n_vars >= 64 { u64::MAX } else { (1u64 << n_vars) - 1 };
        if alice & bob != 0 {
            return param(format!("alice 0x{alice:X} and bob 0x{bob:X} overlap"));
        }
        if alice | bob != full {
            return param(format!("alice 0x{alice:X} and bob 0x{bob:X} do not cover all {n_vars} bits"));
        }
        Ok(Self { alice, bob })
    }

    /// Alice holds `alice`, Bob holds the remaining bits.
    pub fn split(alice: u64, n_vars: usize) -> Result<Self> {
        let full = if n_vars >= 64 { u64::MAX } else { (1u64 << n_vars) - 1 };
        Self::new(alice, full & !alice, n_vars)
    }

    pub fn n_vars(&self) -> usize {
        64 - (self.alice | self.bob).leading_zeros() as usize
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alice=0x{:X},bob=0x{:X}", self.alice, self.bob)
    }
}

impl FromStr for PartitionSpec {
    type Err = Error;

    /// Parses `alice=0x<mask>,bob=0x<mask>` (without validating coverage).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("partition literal `{s}` is not alice=0x..,bob=0x.."));
        let (a, b) = s.trim().split_once(',').ok_or_else(bad)?;
        let a = a.trim().strip_prefix("alice=").ok_or_else(bad)?;
        let b = b.trim().strip_prefix("bob=").ok_or_else(bad)?;
        let alice = crate::graph::parse_mask(a)?;
        let bob = crate::graph::parse_mask(b)?;
        if alice & bob != 0 {
            return param(format!("alice 0x{alice:X} and bob 0x{bob:X} overlap"));
        }
        Ok(Self { alice, bob })
    }
}

/// Scatters the low bits of `index` into the set bits of `mask`, in order.
pub fn deposit(index: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut rest = mask;
    let mut i = 0;
    while rest != 0 {
        let b = rest & rest.wrapping_neg();
        if index >> i & 1 == 1 {
            out |= b;
        }
        rest ^= b;
        i += 1;
    }
    out
}

/// Exact 0/1 matrix. Row `r` is Alice's input `deposit(r, alice)`, column
/// `c` is Bob's `deposit(c, bob)`; both run in ascending mask order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl CommMatrix {
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return param("ragged matrix rows");
        }
        let n_rows = rows.len();
        Ok(Self { rows: n_rows, cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_oracle(oracle: &Oracle, part: &PartitionSpec) -> Result<Self> {
        Self::from_oracle_limited(oracle, part, DEFAULT_MAX_MATRIX_BITS)
    }

    pub fn from_oracle_limited(oracle: &Oracle, part: &PartitionSpec, max_bits: u32) -> Result<Self> {
        if part.n_vars() > oracle.n_vars() {
            return param(format!("partition {part} uses bits beyond the function's {} inputs", oracle.n_vars()));
        }
        let full = if oracle.n_vars() >= 64 { u64::MAX } else { (1u64 << oracle.n_vars()) - 1 };
        if part.alice | part.bob != full {
            return param(format!("partition {part} does not cover all {} inputs", oracle.n_vars()));
        }
        let (ra, cb) = (part.alice.count_ones(), part.bob.count_ones());
        if ra + cb > max_bits {
            return Err(Error::Resource(format!(
                "matrix 2^{ra} × 2^{cb} exceeds the {max_bits}-bit limit"
            )));
        }
        let (rows, cols) = (1usize << ra, 1usize << cb);
        let col_masks: Vec<u64> = (0..cols as u64).map(|c| deposit(c, part.bob)).collect();
        let entries: Vec<u8> = (0..rows as u64)
            .into_par_iter()
            .flat_map_iter(|r| {
                let x = deposit(r, part.alice);
                col_masks.iter().map(move |&y| oracle.eval(x | y) as u8).collect::<Vec<_>>()
            })
            .collect();
        Ok(Self { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn identity(size: usize) -> Self {
        let mut entries = vec![0u8; size * size];
        for i in 0..size {
            entries[i * size + i] = 1;
        }
        Self { rows: size, cols: size, entries }
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![1; rows * cols] }
    }

    /// Rank over the rationals by fraction-free elimination.
    pub fn rank_exact(&self) -> usize {
        // Duplicate and zero rows/columns do not change the rank.
        let mut rows: Vec<&[u8]> = (0..self.rows).map(|r| self.row(r)).filter(|r| r.iter().any(|&v| v != 0)).collect();
        rows.sort_unstable();
        rows.dedup();
        if rows.is_empty() {
            return 0;
        }
        let mut cols: Vec<Vec<u8>> = (0..self.cols).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
        cols.retain(|c| c.iter().any(|&v| v != 0));
        cols.sort_unstable();
        cols.dedup();
        let matrix: Vec<Vec<BigInt>> = (0..rows.len())
            .map(|r| cols.iter().map(|c| BigInt::from(c[r])).collect())
            .collect();
        bareiss_rank(matrix)
    }
}

/// Rank of an integer matrix by Bareiss elimination. The pivot at each step
/// is the first nonzero entry of the remaining block in row-major order.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let n_rows = a.len();
    if n_rows == 0 {
        return 0;
    }
    let n_cols = a[0].len();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    while rank < n_rows && rank < n_cols {
        let k = rank;
        let pivot = (k..n_rows).find_map(|r| (k..n_cols).find(|&c| !a[r][c].is_zero()).map(|c| (r, c)));
        let Some((pr, pc)) = pivot else { break };
        a.swap(k, pr);
        if pc != k {
            for row in a.iter_mut() {
                row.swap(k, pc);
            }
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pkk = &pivot_row[k];
        tail.par_iter_mut().for_each(|row| {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n_cols {
                let v = &row[j] * pkk - &lead * &pivot_row[j];
                row[j] = v.div_floor(&prev);
            }
        });
        prev = pkk.clone();
        rank += 1;
        // Rows that vanished stay and are skipped by the pivot search.
    }
    rank
}

pub fn comm_matrix(spec: &FunctionSpec, part: &PartitionSpec) -> Result<CommMatrix> {
    CommMatrix::from_oracle(&compile_oracle(spec)?, part)
}

pub fn rank_exact(m: &CommMatrix) -> usize {
    m.rank_exact()
}

fn interpolate_spec(spec: &FunctionSpec) -> Result<SparseMultilinearPoly> {
    let oracle = compile_oracle(spec)?;
    SparseMultilinearPoly::interpolate(oracle.as_fn(), oracle.n_vars())
}

/// `min(|mon(f)|, |mon(f*)| + 1)`.
pub fn rank_upper_bound(spec: &FunctionSpec) -> Result<usize> {
    let p = interpolate_spec(spec)?;
    Ok(p.sparsity().min(p.dualize().sparsity() + 1))
}

/// Exact rank of the lifted matrix next to the sparsity that predicts it:
/// `{0,1}`-sparsity for the AND-lift, Fourier sparsity for the XOR-lift.
pub fn lift_rank_check(spec: &FunctionSpec, lift: Lift) -> Result<(usize, usize)> {
    if spec.lift != Lift::None {
        return param("lift_rank_check takes an unlifted function");
    }
    let base_vars = spec.base_vars();
    if base_vars > 9 {
        return Err(Error::Resource(format!("lifted matrix over {base_vars} base variables (limit 9)")));
    }
    let p = interpolate_spec(spec)?;
    let predicted = match lift {
        Lift::And => p.sparsity(),
        Lift::Xor => p.to_fourier().sparsity(),
        Lift::None => return param("lift must be and or xor"),
    };
    let lifted = compile_oracle(&spec.clone().lifted(lift))?;
    let low = (1u64 << base_vars) - 1;
    let part = PartitionSpec::new(low, low << base_vars, 2 * base_vars)?;
    let m = CommMatrix::from_oracle(&lifted, &part)?;
    Ok((m.rank_exact(), predicted))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoolingSet {
    pub pairs: Vec<(u64, u64)>,
    pub partition: PartitionSpec,
}

impl FoolingSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

/// Fooling set for unique perfect matching on `K_{2m,2m}`.
///
/// Left vertices are `A = 1..m`, `B = m+1..2m`; right vertices `C = 1..m`,
/// `D = m+1..2m`. Alice holds every edge at `A`, Bob every edge at `B`.
/// For each `π ∈ S_m` the pair is
/// `(id(A,C) ∪ π(A,D), id(B,D) ∪ {b_{π(i)} c_j : i < j})`.
pub fn fooling_set_construct(m: usize) -> Result<FoolingSet> {
    let n = 2 * m;
    if m == 0 || n > MAX_SIDE {
        return param(format!("fooling-set construction needs 1 ≤ m ≤ {}, got {m}", MAX_SIDE / 2));
    }
    let bit = |row: usize, col: usize| 1u64 << edge_bit(n, row, col);
    let rows_mask = |lo: usize, hi: usize| (lo..hi).flat_map(|r| (0..n).map(move |c| (r, c))).fold(0u64, |acc, (r, c)| acc | bit(r, c));
    let partition = PartitionSpec::new(rows_mask(0, m), rows_mask(m, n), n * n)?;
    let pairs = permutations(m)
        .into_iter()
        .map(|pi| {
            let mut alice = 0u64;
            let mut bob = 0u64;
            for i in 0..m {
                alice |= bit(i, i) | bit(i, m + pi[i]);
                bob |= bit(m + i, m + i);
                for j in i + 1..m {
                    bob |= bit(m + pi[i], j);
                }
            }
            (alice, bob)
        })
        .collect();
    Ok(FoolingSet { pairs, partition })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoolingViolation {
    /// Pair `index` is not a 1-input.
    Rejected { index: usize },
    /// Both cross inputs of pairs `i` and `j` are 1-inputs.
    Crossing { i: usize, j: usize },
}

impl fmt::Display for FoolingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rejected { index } => write!(f, "pair #{index} evaluates to 0"),
            Self::Crossing { i, j } => write!(f, "pairs #{i} and #{j} cross without hitting a 0"),
        }
    }
}

/// First violation of the fooling-set conditions, if any.
pub fn find_fooling_violation(oracle: &Oracle, part: &PartitionSpec, set: &FoolingSet) -> Result<Option<FoolingViolation>> {
    for (idx, &(x, y)) in set.pairs.iter().enumerate() {
        if x & !part.alice != 0 || y & !part.bob != 0 {
            return param(format!("pair #{idx} (0x{x:X}, 0x{y:X}) does not respect {part}"));
        }
    }
    let pairs = &set.pairs;
    if let Some(index) = (0..pairs.len()).find(|&i| !oracle.eval(pairs[i].0 | pairs[i].1)) {
        return Ok(Some(FoolingViolation::Rejected { index }));
    }
    let k = pairs.len();
    let crossing = (0..k * k).into_par_iter().find_first(|&ij| {
        let (i, j) = (ij / k, ij % k);
        i < j && oracle.eval(pairs[i].0 | pairs[j].1) && oracle.eval(pairs[j].0 | pairs[i].1)
    });
    Ok(crossing.map(|ij| FoolingViolation::Crossing { i: ij / k, j: ij % k }))
}

pub fn fooling_set_verify(spec: &FunctionSpec, part: &PartitionSpec, set: &FoolingSet) -> Result<bool> {
    let oracle = compile_oracle(spec)?;
    Ok(find_fooling_violation(&oracle, part, set)?.is_none())
}

/// `log₂|S| ≤ 2(log₂ r + 1)`, checked exactly as `|S| ≤ 4r²`.
pub fn dhs_check(set_size: usize, rank: usize) -> bool {
    (set_size as u128) <= 4 * (rank as u128) * (rank as u128)
}

/// Rank lower bound `2^{½ log₂|S| − 1} = √|S| / 2` implied by a fooling set.
pub fn rank_lower_bound(set_size: usize) -> f64 {
    (set_size as f64).sqrt() / 2.0
}
