//! The matching-covered lattice `L_n = (MC_n ∪ {0̂}, ⊆)`.
//!
//! Elements are stored as ascending edge masks with the bottom `0̂` (the
//! empty graph) first. Ascending numeric order is a linear extension of
//! inclusion, which the Möbius recursion and chain search rely on.

use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::graph::{full_mask, BipartiteGraph};

/// Largest side size accepted without the explicit opt-in.
pub const DEFAULT_MAX_SIDE: usize = 4;

/// Every matching-covered subgraph of `K_{n,n}`, ascending mask order.
///
/// `n = 5` scans `2^25` masks and must be requested with `allow_n5`.
pub fn enumerate_mc(n: usize, allow_n5: bool) -> Result<Vec<BipartiteGraph>> {
    let cap = if allow_n5 { 5 } else { DEFAULT_MAX_SIDE };
    if n == 0 || n > cap {
        return param(format!("enumerate_mc needs 1 ≤ n ≤ {cap}, got {n}"));
    }
    let masks: Vec<u64> = (1..=full_mask(n))
        .into_par_iter()
        .filter(|&m| BipartiteGraph::from_parts(n, m).is_matching_covered())
        .collect();
    Ok(masks.into_iter().map(|m| BipartiteGraph::from_parts(n, m)).collect())
}

#[derive(Debug, Clone)]
pub struct MCLattice {
    n: usize,
    elements: Vec<u64>,
}

impl MCLattice {
    pub fn new(n: usize) -> Result<Self> {
        Self::build(n, false)
    }

    pub fn build(n: usize, allow_n5: bool) -> Result<Self> {
        let mut elements = vec![0u64];
        elements.extend(enumerate_mc(n, allow_n5)?.iter().map(|g| g.mask()));
        Ok(Self { n, elements })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bottom(&self) -> BipartiteGraph {
        BipartiteGraph::from_parts(self.n, 0)
    }

    /// Number of elements, `0̂` included.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> impl Iterator<Item = BipartiteGraph> + '_ {
        self.elements.iter().map(move |&m| BipartiteGraph::from_parts(self.n, m))
    }

    /// Matching-covered elements only (the bottom is skipped).
    pub fn mc_elements(&self) -> impl Iterator<Item = BipartiteGraph> + '_ {
        self.elements().skip(1)
    }

    pub fn masks(&self) -> &[u64] {
        &self.elements
    }

    pub fn contains(&self, g: &BipartiteGraph) -> bool {
        g.n() == self.n && self.elements.binary_search(&g.mask()).is_ok()
    }

    /// Position of `g` in ascending mask order.
    pub fn index_of(&self, g: &BipartiteGraph) -> Result<usize> {
        if g.n() != self.n {
            return Err(Error::Membership(g.to_string()));
        }
        self.elements
            .binary_search(&g.mask())
            .map_err(|_| Error::Membership(g.to_string()))
    }

    fn check_pair(&self, h: &BipartiteGraph, g: &BipartiteGraph) -> Result<()> {
        self.index_of(h)?;
        self.index_of(g)?;
        if !h.is_subgraph_of(g) {
            return Err(Error::Order(format!("{h} ⊄ {g}")));
        }
        Ok(())
    }

    /// `0` for the bottom, `χ(g) + 1` otherwise.
    pub fn rank_of(&self, g: &BipartiteGraph) -> Result<usize> {
        self.index_of(g)?;
        Ok(if g.is_empty() { 0 } else { g.cyclomatic() + 1 })
    }

    /// Lattice elements `z` with `h ⊆ z ⊆ g`, ascending.
    pub fn interval(&self, h: &BipartiteGraph, g: &BipartiteGraph) -> Result<Vec<BipartiteGraph>> {
        self.check_pair(h, g)?;
        Ok(self.interval_masks(h.mask(), g.mask())
            .into_iter()
            .map(|m| BipartiteGraph::from_parts(self.n, m))
            .collect())
    }

    fn interval_masks(&self, lo: u64, hi: u64) -> Vec<u64> {
        let start = self.elements.partition_point(|&m| m < lo);
        let end = self.elements.partition_point(|&m| m <= hi);
        self.elements[start..end]
            .iter()
            .copied()
            .filter(|&z| z & lo == lo && z & !hi == 0)
            .collect()
    }

    /// Möbius function from its defining recursion, memoized over `[h, g]`.
    pub fn mobius_recursive(&self, h: &BipartiteGraph, g: &BipartiteGraph) -> Result<i64> {
        self.check_pair(h, g)?;
        let zs = self.interval_masks(h.mask(), g.mask());
        let mut mu = vec![0i64; zs.len()];
        for (i, &z) in zs.iter().enumerate() {
            mu[i] = if i == 0 {
                1
            } else {
                -zs[..i]
                    .iter()
                    .zip(&mu)
                    .filter(|(&w, _)| w & !z == 0)
                    .map(|(_, &m)| m)
                    .sum::<i64>()
            };
        }
        Ok(*mu.last().expect("interval contains h"))
    }

    /// Eulerian closed form `(−1)^{rank g − rank h}`.
    pub fn mobius_closed_form(&self, h: &BipartiteGraph, g: &BipartiteGraph) -> Result<i64> {
        self.check_pair(h, g)?;
        let diff = self.rank_of(g)? - self.rank_of(h)?;
        Ok(if diff % 2 == 0 { 1 } else { -1 })
    }

    pub fn join(&self, g: &BipartiteGraph, h: &BipartiteGraph) -> Result<BipartiteGraph> {
        self.index_of(g)?;
        self.index_of(h)?;
        Ok(g.union(h))
    }

    pub fn meet(&self, g: &BipartiteGraph, h: &BipartiteGraph) -> Result<BipartiteGraph> {
        self.index_of(g)?;
        self.index_of(h)?;
        Ok(g.intersection(h).mc_closure())
    }

    /// Elements of `[0̂, g]` that `g` covers.
    pub fn lower_covers(&self, g: &BipartiteGraph) -> Result<Vec<BipartiteGraph>> {
        let below: Vec<u64> = self
            .interval_masks(0, g.mask())
            .into_iter()
            .filter(|&z| z != g.mask())
            .collect();
        self.index_of(g)?;
        Ok(below
            .iter()
            .copied()
            .filter(|&z| !below.iter().any(|&w| w != z && w & z == z))
            .map(|m| BipartiteGraph::from_parts(self.n, m))
            .collect())
    }

    /// Length of the longest chain from `0̂` to each element, in element
    /// order. Independent of the cyclomatic number.
    pub fn longest_chain_lengths(&self) -> Vec<usize> {
        let els = &self.elements;
        let mut len = vec![0usize; els.len()];
        for i in 1..els.len() {
            let z = els[i];
            len[i] = (0..i)
                .filter(|&j| els[j] & !z == 0)
                .map(|j| len[j] + 1)
                .max()
                .unwrap_or(0);
        }
        len
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, m: u64) -> BipartiteGraph {
        BipartiteGraph::new(n, m).unwrap()
    }

    #[test]
    fn enumerate_small() {
        let one: Vec<u64> = enumerate_mc(1, false).unwrap().iter().map(|x| x.mask()).collect();
        assert_eq!(one, vec![0x1]);
        let two: Vec<u64> = enumerate_mc(2, false).unwrap().iter().map(|x| x.mask()).collect();
        assert_eq!(two, vec![0x6, 0x9, 0xF]);
        assert_eq!(enumerate_mc(3, false).unwrap().len(), 49);
        assert!(enumerate_mc(0, false).is_err());
        assert!(enumerate_mc(5, false).is_err());
        for x in enumerate_mc(3, false).unwrap() {
            assert_eq!(x.mc_closure(), x);
        }
    }

    #[test]
    fn ranks_and_intervals() {
        let l = MCLattice::new(2).unwrap();
        assert_eq!(l.rank_of(&g(2, 0)).unwrap(), 0);
        assert_eq!(l.rank_of(&g(2, 0x9)).unwrap(), 1);
        assert_eq!(l.rank_of(&g(2, 0xF)).unwrap(), 2);
        assert!(matches!(l.rank_of(&g(2, 0x3)), Err(Error::Membership(_))));

        let full: Vec<u64> = l.interval(&g(2, 0), &g(2, 0xF)).unwrap().iter().map(|x| x.mask()).collect();
        assert_eq!(full, vec![0, 0x6, 0x9, 0xF]);
        assert_eq!(l.interval(&g(2, 0x9), &g(2, 0x9)).unwrap(), vec![g(2, 0x9)]);
        let upper: Vec<u64> = l.interval(&g(2, 0x9), &g(2, 0xF)).unwrap().iter().map(|x| x.mask()).collect();
        assert_eq!(upper, vec![0x9, 0xF]);
        assert!(matches!(l.interval(&g(2, 0x9), &g(2, 0x6)), Err(Error::Order(_))));
    }

    #[test]
    fn mobius_values() {
        let l = MCLattice::new(2).unwrap();
        let (bot, m, k) = (g(2, 0), g(2, 0x9), g(2, 0xF));
        assert_eq!(l.mobius_recursive(&k, &k).unwrap(), 1);
        assert_eq!(l.mobius_recursive(&bot, &m).unwrap(), -1);
        assert_eq!(l.mobius_recursive(&bot, &k).unwrap(), 1);
        assert_eq!(l.mobius_closed_form(&m, &k).unwrap(), -1);
        assert_eq!(l.mobius_closed_form(&bot, &k).unwrap(), 1);
        assert!(l.mobius_recursive(&k, &m).is_err());
    }

    #[test]
    fn join_meet_small() {
        let l = MCLattice::new(2).unwrap();
        assert_eq!(l.join(&g(2, 0x9), &g(2, 0x6)).unwrap(), g(2, 0xF));
        assert_eq!(l.meet(&g(2, 0x9), &g(2, 0x6)).unwrap(), g(2, 0));
        assert_eq!(l.meet(&g(2, 0xF), &g(2, 0x9)).unwrap(), g(2, 0x9));
    }

    #[test]
    fn covers_and_chains() {
        let l = MCLattice::new(2).unwrap();
        let covers: Vec<u64> = l.lower_covers(&g(2, 0xF)).unwrap().iter().map(|x| x.mask()).collect();
        assert_eq!(covers, vec![0x6, 0x9]);
        assert_eq!(l.longest_chain_lengths(), vec![0, 1, 1, 2]);
    }
}
