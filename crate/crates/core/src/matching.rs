//! Closed-form polynomials of matching functions, built on the
//! matching-covered lattice, plus the `k`-matching reductions.
//!
//! Every constructor here refuses `n > 4`; the lattice scan and dense
//! coefficient tables are `2^{n²}` sized.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{param, Result};
use crate::functions::{compile_oracle, FunctionSpec};
use crate::graph::{all_perfect_matchings, edge_bit, full_mask, BipartiteGraph, MAX_SIDE};
use crate::lattice::MCLattice;
use crate::poly::{subsets, SparseMultilinearPoly};

pub const MAX_CLOSED_FORM_SIDE: usize = 4;

fn sign(parity: usize) -> i64 {
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_side(n: usize) -> Result<()> {
    if n == 0 || n > MAX_CLOSED_FORM_SIDE {
        return param(format!("closed forms need 1 ≤ n ≤ {MAX_CLOSED_FORM_SIDE}, got {n}"));
    }
    Ok(())
}

/// Lattice-derived data shared by the closed-form constructors for one `n`.
#[derive(Debug, Clone)]
pub struct MatchingPolys {
    lattice: MCLattice,
    /// Matching-covered elements with `(mask, χ, Per)`.
    mc: Vec<(u64, usize, u64)>,
    perfect_matchings: Vec<u64>,
}

impl MatchingPolys {
    pub fn new(n: usize) -> Result<Self> {
        check_side(n)?;
        let lattice = MCLattice::new(n)?;
        let mc = lattice
            .mc_elements()
            .map(|g| (g.mask(), g.cyclomatic(), g.permanent()))
            .collect();
        let perfect_matchings = all_perfect_matchings(n)?.iter().map(|m| m.mask()).collect();
        Ok(Self { lattice, mc, perfect_matchings })
    }

    pub fn n(&self) -> usize {
        self.lattice.n()
    }

    pub fn lattice(&self) -> &MCLattice {
        &self.lattice
    }

    fn n_vars(&self) -> usize {
        self.n() * self.n()
    }

    /// `Σ_{G ∈ MC_n} (−1)^{χ(G)} Per(G) x^G`.
    pub fn ubpm(&self) -> SparseMultilinearPoly {
        let terms = self
            .mc
            .iter()
            .map(|&(m, chi, per)| (m, BigInt::from(sign(chi)) * per));
        SparseMultilinearPoly::from_terms(self.n_vars(), terms).expect("masks within K_{n,n}")
    }

    /// Polynomial of `I_S(G) = 1{mc_closure(G) ∈ S}`:
    /// `c_G = Σ_{H ∈ [0̂,G] ∩ S} (−1)^{χ(G) − χ(H)}` for `G ∈ MC_n`.
    pub fn indicator(&self, set: &[BipartiteGraph]) -> Result<SparseMultilinearPoly> {
        let mut members: Vec<(u64, usize)> = Vec::with_capacity(set.len());
        for g in set {
            if g.n() != self.n() {
                return param(format!("{g} is not a graph on n={}", self.n()));
            }
            if g.is_empty() {
                return param("indicator set contains the bottom element 0̂");
            }
            if !self.lattice.contains(g) {
                return param(format!("{g} is not matching-covered"));
            }
            members.push((g.mask(), g.cyclomatic()));
        }
        members.sort_unstable();
        members.dedup();
        let terms: Vec<(u64, BigInt)> = self
            .mc
            .par_iter()
            .map(|&(g, chi_g, _)| {
                let c: i64 = members
                    .iter()
                    .filter(|&&(h, _)| h & !g == 0)
                    .map(|&(_, chi_h)| sign(chi_g + chi_h))
                    .sum();
                (g, BigInt::from(c))
            })
            .collect();
        SparseMultilinearPoly::from_terms(self.n_vars(), terms)
    }

    /// Perfect-matching polynomial, as the indicator of all of `MC_n`.
    pub fn bpm(&self) -> SparseMultilinearPoly {
        let all: Vec<BipartiteGraph> = self.lattice.mc_elements().collect();
        self.indicator(&all).expect("MC_n is a valid indicator set")
    }

    /// Coefficient of `G` in the dual of perfect matching, summed directly:
    /// `a*_G = (−1)^{e(G)+1} Σ_{G ⊆ H ∈ MC_n} (−1)^{χ(H)}` for nonempty `G`.
    /// The constant term comes from the `1 −` of the duality transform:
    /// `a*_∅ = 1 − Σ_{H ∈ MC_n} (−1)^{χ(H)}`.
    pub fn bpm_dual_coefficient(&self, g: &BipartiteGraph) -> Result<BigInt> {
        if g.n() != self.n() {
            return param(format!("{g} is not a graph on n={}", self.n()));
        }
        Ok(BigInt::from(self.a_star(g.mask())))
    }

    fn a_star(&self, g: u64) -> i64 {
        let upward: i64 = self
            .mc
            .iter()
            .filter(|&&(h, _, _)| g & !h == 0)
            .map(|&(_, chi, _)| sign(chi))
            .sum();
        if g == 0 {
            1 - upward
        } else {
            sign(g.count_ones() as usize + 1) * upward
        }
    }

    /// Dense table of `a*_G` over every `G ⊆ K_{n,n}`.
    pub fn bpm_dual_table(&self) -> Vec<i64> {
        (0..=full_mask(self.n()))
            .into_par_iter()
            .map(|g| self.a_star(g))
            .collect()
    }

    pub fn bpm_dual(&self) -> SparseMultilinearPoly {
        let table = self.bpm_dual_table();
        SparseMultilinearPoly::from_terms(
            self.n_vars(),
            table.iter().enumerate().map(|(g, &a)| (g as u64, BigInt::from(a))),
        )
        .expect("masks within K_{n,n}")
    }

    /// Dual of unique perfect matching:
    /// `c*_G = Per(G)·a*_G + Σ_{M ⊄ G} (−1)^{|M ∖ G|} a*_{G ∪ M}` for nonempty `G`,
    /// and `c*_∅ = 1 − Σ_{H ∈ MC_n} (−1)^{χ(H)} Per(H)`.
    pub fn ubpm_dual(&self) -> SparseMultilinearPoly {
        let table = self.bpm_dual_table();
        let n = self.n();
        let mut coeffs: Vec<i64> = (1..=full_mask(n))
            .into_par_iter()
            .map(|g| {
                let graph = BipartiteGraph::from_parts(n, g);
                let mut c = graph.permanent() as i64 * table[g as usize];
                for &m in &self.perfect_matchings {
                    if m & !g != 0 {
                        c += sign((m & !g).count_ones() as usize) * table[(g | m) as usize];
                    }
                }
                c
            })
            .collect();
        let constant: i64 = 1 - self.mc.iter().map(|&(_, chi, per)| sign(chi) * per as i64).sum::<i64>();
        coeffs.insert(0, constant);
        SparseMultilinearPoly::from_terms(
            self.n_vars(),
            coeffs.iter().enumerate().map(|(g, &c)| (g as u64, BigInt::from(c))),
        )
        .expect("masks within K_{n,n}")
    }

    /// `{H : ∃ M ∈ PM(K_{n,n}), H ∪ M = G}`, ascending.
    pub fn ball(&self, g: &BipartiteGraph) -> Vec<BipartiteGraph> {
        let mut out = BTreeSet::new();
        for &m in &self.perfect_matchings {
            if m & !g.mask() != 0 {
                continue;
            }
            let rest = g.mask() & !m;
            out.extend(subsets(m).map(|t| rest | t));
        }
        out.into_iter().map(|h| BipartiteGraph::from_parts(self.n(), h)).collect()
    }
}

pub fn ubpm_closed_form(n: usize) -> Result<SparseMultilinearPoly> {
    Ok(MatchingPolys::new(n)?.ubpm())
}

pub fn indicator_closed_form(n: usize, set: &[BipartiteGraph]) -> Result<SparseMultilinearPoly> {
    MatchingPolys::new(n)?.indicator(set)
}

pub fn bpm_dual_coefficient(g: &BipartiteGraph) -> Result<BigInt> {
    MatchingPolys::new(g.n())?.bpm_dual_coefficient(g)
}

pub fn ubpm_dual_closed_form(n: usize) -> Result<SparseMultilinearPoly> {
    Ok(MatchingPolys::new(n)?.ubpm_dual())
}

pub fn ball(g: &BipartiteGraph) -> Result<Vec<BipartiteGraph>> {
    Ok(MatchingPolys::new(g.n())?.ball(g))
}

/// Encoding of `k`-matching on `K_{n,n}` as perfect matching on
/// `K_{2n−k,2n−k}`. Host left vertices are `A = 1..n` then `V`, host right
/// vertices `B = 1..n` then `U`; input edges sit on `A × B`, the bicliques
/// `A × U` and `V × B` are fixed present and `V × U` fixed absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmEmbedding {
    pub n: usize,
    pub k: usize,
    pub host_n: usize,
    /// Host bit of each input edge, indexed by input bit.
    pub image: Vec<u32>,
    /// Host edges fixed to 1.
    pub fixed_ones: u64,
    /// Host edges fixed to 0.
    pub fixed_zeros: u64,
}

impl BmEmbedding {
    pub fn embed(&self, g: u64) -> u64 {
        let mut out = self.fixed_ones;
        let mut rest = g;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << self.image[b];
        }
        out
    }

    pub fn image_mask(&self) -> u64 {
        self.image.iter().fold(0, |acc, &b| acc | 1 << b)
    }

    /// Function on the host graph whose restriction is `BM_{n,k}`.
    pub fn host_spec(&self) -> FunctionSpec {
        FunctionSpec::bpm(self.host_n)
    }

    /// Restricts a host polynomial to the input edges. With `dual` the
    /// fixings are swapped, which restricts `BPM*` to `BM*`.
    pub fn restrict(&self, host: &SparseMultilinearPoly, dual: bool) -> Result<SparseMultilinearPoly> {
        let (ones, zeros) = if dual {
            (self.fixed_zeros, self.fixed_ones)
        } else {
            (self.fixed_ones, self.fixed_zeros)
        };
        let image = self.image_mask();
        let mut back = vec![0u64; 64];
        for (input_bit, &host_bit) in self.image.iter().enumerate() {
            back[host_bit as usize] = 1 << input_bit;
        }
        let terms = host.terms().iter().filter(|(&t, _)| t & zeros == 0).map(|(&t, c)| {
            debug_assert_eq!(t & !(image | ones), 0);
            let mut s = 0u64;
            let mut rest = t & image;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                s |= back[b];
            }
            (s, c.clone())
        });
        SparseMultilinearPoly::from_terms(self.n * self.n, terms)
    }
}

pub fn bm_restriction_embed(n: usize, k: usize) -> Result<BmEmbedding> {
    if k == 0 || k > n {
        return param(format!("k-matching reduction needs 1 ≤ k ≤ n, got n={n}, k={k}"));
    }
    let host_n = 2 * n - k;
    if host_n > MAX_SIDE {
        return param(format!("host side {host_n} exceeds {MAX_SIDE}"));
    }
    let image = (0..n)
        .flat_map(|i| (0..n).map(move |j| edge_bit(host_n, i, j)))
        .collect();
    let mut fixed_ones = 0u64;
    let mut fixed_zeros = 0u64;
    for i in 0..host_n {
        for j in 0..host_n {
            let bit = 1u64 << edge_bit(host_n, i, j);
            match (i < n, j < n) {
                (true, true) => {}
                (true, false) | (false, true) => fixed_ones |= bit,
                (false, false) => fixed_zeros |= bit,
            }
        }
    }
    Ok(BmEmbedding { n, k, host_n, image, fixed_ones, fixed_zeros })
}

fn bm_poly(n: usize, k: usize) -> Result<SparseMultilinearPoly> {
    let vars = n * n;
    if k == 0 {
        return Ok(SparseMultilinearPoly::constant(vars, 1));
    }
    if k > n {
        return Ok(SparseMultilinearPoly::zero(vars));
    }
    let oracle = compile_oracle(&FunctionSpec::bm(n, k))?;
    SparseMultilinearPoly::interpolate(oracle.as_fn(), vars)
}

/// `MaxMatch_{n,k} = BM_{n,k} ∧ ¬BM_{n,k+1}` as a product of polynomials.
pub fn maxmatch_compose(n: usize, k: usize) -> Result<SparseMultilinearPoly> {
    check_side(n)?;
    if k > n {
        return param(format!("k={k} exceeds n={n}"));
    }
    bm_poly(n, k)?.multiply(&bm_poly(n, k + 1)?.complement())
}
