//! Approximate degree: exact LP search, Chebyshev compression of low-ℓ1
//! polynomials, and the biregular sensitivity subgraph.

mod chebyshev;
pub mod lp;
mod sensitivity;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::functions::{compile_oracle, FunctionSpec, Oracle};
use crate::poly::{zeta_transform, MAX_DENSE_VARS};

pub use chebyshev::{chebyshev_compress, Compression};
pub use lp::{solve, LpOutcome};
pub use sensitivity::{sensitivity_subgraph, spectral_radius, SensitivitySubgraph};

/// Largest variable count accepted by the LP search.
pub const MAX_LP_VARS: usize = 9;

/// Multilinear polynomial in the `{0,1}` basis with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    n_vars: usize,
    terms: BTreeMap<u64, BigRational>,
}

impl RationalPoly {
    pub fn from_terms<I>(n_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, BigRational)>,
    {
        let mut map: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        RationalPoly { n_vars, terms: map }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, mask: u64) -> BigRational {
        self.terms.get(&mask).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.count_ones() as usize).max()
    }

    pub fn l1_norm(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c.abs())
    }

    pub fn evaluate(&self, x: u64) -> BigRational {
        self.terms
            .iter()
            .filter(|(&m, _)| m & x == m)
            .fold(BigRational::zero(), |acc, (_, c)| acc + c)
    }

    /// Values at every point of the cube, indexed by point mask.
    pub fn truth_table(&self) -> Result<Vec<BigRational>> {
        if self.n_vars > MAX_DENSE_VARS {
            return Err(Error::Resource(format!(
                "{} variables exceeds the dense limit of {MAX_DENSE_VARS}",
                self.n_vars
            )));
        }
        let mut dense = vec![BigRational::zero(); 1 << self.n_vars];
        for (&m, c) in &self.terms {
            dense[m as usize] = c.clone();
        }
        zeta_transform(&mut dense);
        Ok(dense)
    }

    /// `max_x |p(x) − target(x)|` over the whole cube.
    pub fn max_error<F>(&self, target: F) -> Result<BigRational>
    where
        F: Fn(u64) -> BigRational + Sync,
    {
        let table = self.truth_table()?;
        Ok(table
            .par_iter()
            .enumerate()
            .map(|(x, v)| (v - target(x as u64)).abs())
            .reduce(BigRational::zero, |a, b| a.max(b)))
    }
}

/// One approximate-degree question: `deg_eps(spec)`, searched up to `degree_cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxInstance {
    pub spec: FunctionSpec,
    pub eps: BigRational,
    pub degree_cap: usize,
}

impl ApproxInstance {
    /// Instance with the cap set to the number of variables.
    pub fn new(spec: FunctionSpec, eps: BigRational) -> Result<Self> {
        let cap = spec.n_vars();
        Self::with_cap(spec, eps, cap)
    }

    pub fn with_cap(spec: FunctionSpec, eps: BigRational, degree_cap: usize) -> Result<Self> {
        let inst = ApproxInstance { spec, eps, degree_cap };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        check_eps(&self.eps)?;
        if self.degree_cap > self.spec.n_vars() {
            return param(format!(
                "degree cap {} exceeds {} variables",
                self.degree_cap,
                self.spec.n_vars()
            ));
        }
        Ok(())
    }
}

fn check_eps(eps: &BigRational) -> Result<()> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if !eps.is_positive() || *eps >= half {
        return param(format!("eps must lie in (0, 1/2), got {eps}"));
    }
    Ok(())
}

/// Least feasible degree with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxDegree {
    pub degree: usize,
    pub witness: RationalPoly,
    /// Exact `max_x |witness(x) − f(x)|`, the optimum of the LP at `degree`.
    pub max_error: BigRational,
}

fn oracle_value(oracle: &Oracle, x: u64) -> BigRational {
    if oracle.eval(x) {
        BigRational::one()
    } else {
        BigRational::zero()
    }
}

/// Best uniform approximation of `oracle` by polynomials of degree at most `d`.
///
/// Minimises `t` subject to `|p(x) − f(x)| ≤ t` at every point, with
/// `p = Σ (c⁺_S − c⁻_S) x^S`. Returns the optimal `t` and a minimiser.
pub fn best_error_at_degree(oracle: &Oracle, d: usize) -> Result<(BigRational, RationalPoly)> {
    let n = oracle.n_vars();
    if n > MAX_LP_VARS {
        return Err(Error::Resource(format!("{n} variables exceeds the LP limit of {MAX_LP_VARS}")));
    }
    let monomials: Vec<u64> = (0..1u64 << n).filter(|m| m.count_ones() as usize <= d).collect();
    let cols = 2 * monomials.len() + 1;
    let one = BigRational::one();
    let mut a = Vec::with_capacity(2 << n);
    let mut b = Vec::with_capacity(2 << n);
    for x in 0..1u64 << n {
        let fx = oracle_value(oracle, x);
        let mut up = vec![BigRational::zero(); cols];
        let mut down = vec![BigRational::zero(); cols];
        for (i, &m) in monomials.iter().enumerate() {
            if m & x == m {
                up[2 * i] = one.clone();
                up[2 * i + 1] = -one.clone();
                down[2 * i] = -one.clone();
                down[2 * i + 1] = one.clone();
            }
        }
        up[cols - 1] = -one.clone();
        down[cols - 1] = -one.clone();
        a.push(up);
        b.push(fx.clone());
        a.push(down);
        b.push(-fx);
    }
    let mut c = vec![BigRational::zero(); cols];
    c[cols - 1] = -one;
    match solve(&a, &b, &c) {
        LpOutcome::Optimal { x, value } => {
            let witness = RationalPoly::from_terms(
                n,
                monomials.iter().enumerate().map(|(i, &m)| (m, &x[2 * i] - &x[2 * i + 1])),
            );
            Ok((-value, witness))
        }
        other => Err(Error::Internal(format!("min-error LP ended as {other:?}"))),
    }
}

/// `deg_eps(f)`: the least `d ≤ cap` with a degree-`d` polynomial within `eps` of `f` everywhere.
pub fn approx_degree(inst: &ApproxInstance) -> Result<ApproxDegree> {
    inst.validate()?;
    let oracle = compile_oracle(&inst.spec)?;
    approx_degree_of(&oracle, &inst.eps, inst.degree_cap)
}

/// As [`approx_degree`], for an arbitrary oracle.
pub fn approx_degree_of(oracle: &Oracle, eps: &BigRational, degree_cap: usize) -> Result<ApproxDegree> {
    check_eps(eps)?;
    let n = oracle.n_vars();
    if degree_cap > n {
        return param(format!("degree cap {degree_cap} exceeds {n} variables"));
    }
    for d in 0..=degree_cap {
        let (err, witness) = best_error_at_degree(oracle, d)?;
        if err <= *eps {
            let measured = witness.max_error(|x| oracle_value(oracle, x))?;
            if measured != err {
                return Err(Error::Internal(format!(
                    "LP optimum {err} disagrees with measured error {measured}"
                )));
            }
            return Ok(ApproxDegree { degree: d, witness, max_error: measured });
        }
    }
    if degree_cap == n {
        Err(Error::Internal("exact representation reported infeasible".into()))
    } else {
        Err(Error::Resource(format!("approximate degree exceeds the cap {degree_cap}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn constant_has_degree_zero() {
        for value in [false, true] {
            let inst = ApproxInstance::new(FunctionSpec::constant(3, value), q(1, 3)).unwrap();
            let r = approx_degree(&inst).unwrap();
            assert_eq!(r.degree, 0);
            assert!(r.max_error.is_zero());
        }
    }

    #[test]
    fn or2_at_one_third() {
        let inst = ApproxInstance::new(FunctionSpec::or(2), q(1, 3)).unwrap();
        let r = approx_degree(&inst).unwrap();
        assert_eq!(r.degree, 1);
        // The LP returns the minimax witness 1/4 + (x₁ + x₂)/2.
        assert_eq!(r.max_error, q(1, 4));
        let oracle = compile_oracle(&FunctionSpec::or(2)).unwrap();
        let textbook = RationalPoly::from_terms(2, [(0b01, q(2, 3)), (0b10, q(2, 3))]);
        let err = textbook
            .max_error(|x| if oracle.eval(x) { q(1, 1) } else { q(0, 1) })
            .unwrap();
        assert_eq!(err, q(1, 3));
        let (e0, _) = best_error_at_degree(&oracle, 0).unwrap();
        assert_eq!(e0, q(1, 2));
    }

    #[test]
    fn eps_and_cap_checked() {
        assert!(ApproxInstance::new(FunctionSpec::or(2), q(1, 2)).is_err());
        assert!(ApproxInstance::new(FunctionSpec::or(2), q(0, 1)).is_err());
        assert!(ApproxInstance::with_cap(FunctionSpec::or(2), q(1, 3), 3).is_err());
        let inst = ApproxInstance::with_cap(FunctionSpec::xor(3), q(1, 3), 2).unwrap();
        assert!(matches!(approx_degree(&inst), Err(Error::Resource(_))));
    }

    #[test]
    fn rational_poly_table() {
        let p = RationalPoly::from_terms(2, [(0b01, q(1, 2)), (0b11, q(-1, 4)), (0b01, q(1, 2))]);
        assert_eq!(p.sparsity(), 2);
        let t = p.truth_table().unwrap();
        assert_eq!(t, vec![q(0, 1), q(1, 1), q(0, 1), q(3, 4)]);
        assert_eq!(p.evaluate(0b11), q(3, 4));
    }
}
