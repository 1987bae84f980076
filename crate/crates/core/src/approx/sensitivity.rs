//! The sensitivity subgraph between (k−1)- and k-matchings of `K_{n,n}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Error, Result};
use crate::functions::Oracle;
use crate::graph::BipartiteGraph;

/// Largest side accepted by [`sensitivity_subgraph`].
pub const MAX_SENSITIVITY_SIDE: usize = 4;

const POWER_SEED: u64 = 0x5eed_5eed;
const POWER_TOLERANCE: f64 = 1e-12;
const POWER_MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitivitySubgraph {
    pub n: usize,
    pub k: usize,
    /// (k−1)-matchings, ascending.
    pub left: Vec<u64>,
    /// k-matchings, ascending.
    pub right: Vec<u64>,
    /// `(left index, right index)` pairs, grouped by right vertex.
    pub adjacency: Vec<(usize, usize)>,
}

impl SensitivitySubgraph {
    pub fn left_degree(&self) -> usize {
        (self.n - self.k + 1).pow(2)
    }

    pub fn right_degree(&self) -> usize {
        self.k
    }

    /// `√(d_L · d_R)`.
    pub fn expected_radius(&self) -> f64 {
        ((self.left_degree() * self.right_degree()) as f64).sqrt()
    }

    /// True when `f` differs across every edge.
    pub fn is_sensitive_for(&self, f: &Oracle) -> bool {
        self.adjacency
            .iter()
            .all(|&(l, r)| f.eval(self.left[l]) != f.eval(self.right[r]))
    }
}

fn matchings(n: usize, k: usize) -> Result<Vec<u64>> {
    Ok(BipartiteGraph::complete(n)?
        .matchings_of_size(k)
        .into_iter()
        .map(|m| m.mask())
        .collect())
}

pub fn sensitivity_subgraph(n: usize, k: usize) -> Result<SensitivitySubgraph> {
    if !(1..=MAX_SENSITIVITY_SIDE).contains(&n) || !(1..=n).contains(&k) {
        return param(format!("need 1 ≤ k ≤ n ≤ {MAX_SENSITIVITY_SIDE}, got n={n}, k={k}"));
    }
    let left = matchings(n, k - 1)?;
    let right = matchings(n, k)?;
    let mut adjacency = Vec::with_capacity(right.len() * k);
    for (ri, &r) in right.iter().enumerate() {
        let mut rest = r;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            let li = left
                .binary_search(&(r ^ bit))
                .map_err(|_| Error::Internal(format!("{:#x} has no sub-matching", r ^ bit)))?;
            adjacency.push((li, ri));
        }
    }
    let g = SensitivitySubgraph { n, k, left, right, adjacency };
    let mut deg_l = vec![0usize; g.left.len()];
    let mut deg_r = vec![0usize; g.right.len()];
    for &(l, r) in &g.adjacency {
        deg_l[l] += 1;
        deg_r[r] += 1;
    }
    if deg_l.iter().any(|&d| d != g.left_degree()) || deg_r.iter().any(|&d| d != g.right_degree()) {
        return Err(Error::Internal(format!("sensitivity subgraph n={n}, k={k} is not biregular")));
    }
    Ok(g)
}

/// Largest adjacency eigenvalue, by power iteration on `BᵀB`.
pub fn spectral_radius(g: &SensitivitySubgraph) -> Result<f64> {
    if g.adjacency.is_empty() {
        return param("empty sensitivity subgraph");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v: Vec<f64> = (0..g.right.len()).map(|_| rng.gen_range(0.5..1.5)).collect();
    normalize(&mut v);
    let mut prev = f64::NAN;
    for _ in 0..POWER_MAX_ITERATIONS {
        let mut u = vec![0.0; g.left.len()];
        for &(l, r) in &g.adjacency {
            u[l] += v[r];
        }
        let mut w = vec![0.0; g.right.len()];
        for &(l, r) in &g.adjacency {
            w[r] += u[l];
        }
        // Rayleigh quotient of BᵀB at the unit vector v.
        let rho: f64 = u.iter().map(|x| x * x).sum();
        if (rho - prev).abs() <= POWER_TOLERANCE * rho {
            return Ok(rho.sqrt());
        }
        prev = rho;
        if normalize(&mut w) == 0.0 {
            return Err(Error::Numerical("power iteration collapsed to zero".into()));
        }
        v = w;
    }
    Err(Error::Numerical(format!(
        "power iteration did not converge in {POWER_MAX_ITERATIONS} steps"
    )))
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_for_n2_k1() {
        let g = sensitivity_subgraph(2, 1).unwrap();
        assert_eq!(g.left, vec![0]);
        assert_eq!(g.right.len(), 4);
        assert_eq!((g.left_degree(), g.right_degree()), (4, 1));
        assert!((spectral_radius(&g).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn n3_k2_counts() {
        let g = sensitivity_subgraph(3, 2).unwrap();
        assert_eq!((g.left.len(), g.right.len()), (9, 18));
        let r = spectral_radius(&g).unwrap();
        assert!((r - 8f64.sqrt()).abs() <= 1e-9 * r);
    }

    #[test]
    fn out_of_range() {
        assert!(sensitivity_subgraph(5, 1).is_err());
        assert!(sensitivity_subgraph(3, 0).is_err());
        assert!(sensitivity_subgraph(2, 3).is_err());
    }
}
