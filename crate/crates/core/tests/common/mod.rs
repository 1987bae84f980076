//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's own algorithms.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 20240607;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

pub fn bit(n: usize, i: usize, j: usize) -> u64 {
    1u64 << (i * n + j)
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                go(cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn pm_masks(n: usize) -> Vec<u64> {
    permutations(n)
        .iter()
        .map(|p| p.iter().enumerate().map(|(i, &j)| bit(n, i, j)).fold(0, |a, b| a | b))
        .collect()
}

pub fn pm_count(pms: &[u64], g: u64) -> usize {
    pms.iter().filter(|&&m| m & !g == 0).count()
}

pub fn is_mc(pms: &[u64], g: u64) -> bool {
    g != 0 && pms.iter().filter(|&&m| m & !g == 0).fold(0, |a, &m| a | m) == g
}

/// e − v + c on the fixed 2n vertices.
pub fn cyclomatic(n: usize, g: u64) -> usize {
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut comps = 2 * n;
    for i in 0..n {
        for j in 0..n {
            if g & bit(n, i, j) != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, n + j));
                if a != b {
                    parent[a] = b;
                    comps -= 1;
                }
            }
        }
    }
    g.count_ones() as usize + comps - 2 * n
}

pub fn mc_set(n: usize) -> Vec<u64> {
    let pms = pm_masks(n);
    (1..1u64 << (n * n)).filter(|&g| is_mc(&pms, g)).collect()
}

/// Möbius inversion straight from the definition, `O(3^N)`.
pub fn interpolate(table: &[i64]) -> Vec<i64> {
    (0..table.len())
        .map(|s| {
            let mut c = 0i64;
            let mut t = s;
            loop {
                let sign = if (s ^ t).count_ones() % 2 == 0 { 1 } else { -1 };
                c += sign * table[t];
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
            c
        })
        .collect()
}

/// `2^N · f̂(T)` with `f̂(T) = 2^{−N} Σ_x f(x) (−1)^{|x ∩ T|}`.
pub fn walsh_numerators(table: &[i64]) -> Vec<i64> {
    (0..table.len())
        .map(|t| {
            table
                .iter()
                .enumerate()
                .map(|(x, &v)| if (x & t).count_ones() % 2 == 0 { v } else { -v })
                .sum()
        })
        .collect()
}

pub fn dual_table(table: &[i64]) -> Vec<i64> {
    let full = table.len() - 1;
    (0..table.len()).map(|x| 1 - table[full ^ x]).collect()
}

pub fn ubpm_table(n: usize) -> Vec<i64> {
    let pms = pm_masks(n);
    (0..1u64 << (n * n)).map(|g| (pm_count(&pms, g) == 1) as i64).collect()
}
