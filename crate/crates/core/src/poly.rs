//! Sparse multilinear polynomials over `{0,1}^N` with exact coefficients.
//!
//! Monomials are variable-subset masks. `SparseMultilinearPoly` is the
//! `{0,1}`-basis representation with integer coefficients; `FourierPoly` is
//! the `{±1}`-basis representation (bit 0 ↦ +1, bit 1 ↦ −1) with dyadic
//! rational coefficients.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{param, Error, Result};

/// Upper bound on `n_vars` for any polynomial.
pub const MAX_VARS: usize = 25;
/// Upper bound on `n_vars` for dense transforms (interpolation included).
pub const MAX_DENSE_VARS: usize = 20;

fn var_mask(n_vars: usize) -> u64 {
    if n_vars >= 64 {
        u64::MAX
    } else {
        (1u64 << n_vars) - 1
    }
}

fn check_vars(n_vars: usize) -> Result<()> {
    if n_vars > MAX_VARS {
        return Err(Error::Resource(format!("{n_vars} variables exceeds the limit of {MAX_VARS}")));
    }
    Ok(())
}

/// In-place subset-lattice Möbius transform: `a[S] ← Σ_{T⊆S} (−1)^{|S∖T|} a[T]`.
pub fn mobius_transform<T>(a: &mut [T])
where
    T: Clone + for<'x> std::ops::SubAssign<&'x T>,
{
    let len = a.len();
    debug_assert!(len.is_power_of_two());
    let mut step = 1;
    while step < len {
        for block in a.chunks_exact_mut(2 * step) {
            let (lo, hi) = block.split_at_mut(step);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                *h -= l;
            }
        }
        step <<= 1;
    }
}

/// In-place zeta transform over subsets: `a[S] ← Σ_{T⊆S} a[T]`.
pub fn zeta_transform<T>(a: &mut [T])
where
    T: Clone + for<'x> std::ops::AddAssign<&'x T>,
{
    let len = a.len();
    debug_assert!(len.is_power_of_two());
    let mut step = 1;
    while step < len {
        for block in a.chunks_exact_mut(2 * step) {
            let (lo, hi) = block.split_at_mut(step);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                *h += l;
            }
        }
        step <<= 1;
    }
}

/// In-place zeta transform over supersets: `a[S] ← Σ_{T⊇S} a[T]`.
pub fn superset_zeta_transform<T>(a: &mut [T])
where
    T: Clone + for<'x> std::ops::AddAssign<&'x T>,
{
    let len = a.len();
    debug_assert!(len.is_power_of_two());
    let mut step = 1;
    while step < len {
        for block in a.chunks_exact_mut(2 * step) {
            let (lo, hi) = block.split_at_mut(step);
            for (l, h) in lo.iter_mut().zip(hi.iter()) {
                *l += h;
            }
        }
        step <<= 1;
    }
}

/// Iterates every subset of `mask`, including `0` and `mask` itself.
pub fn subsets(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMultilinearPoly {
    n_vars: usize,
    terms: BTreeMap<u64, BigInt>,
}

impl SparseMultilinearPoly {
    pub fn zero(n_vars: usize) -> Self {
        Self { n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: impl Into<BigInt>) -> Self {
        Self::from_terms(n_vars, [(0u64, c.into())]).expect("constant term is always in range")
    }

    /// Builds from `(mask, coefficient)` pairs; repeated masks are summed and
    /// zero coefficients dropped.
    pub fn from_terms<I>(n_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, BigInt)>,
    {
        check_vars(n_vars)?;
        let allowed = var_mask(n_vars);
        let mut map: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (mask, c) in terms {
            if mask & !allowed != 0 {
                return param(format!("monomial 0x{mask:X} uses variables beyond {n_vars}"));
            }
            *map.entry(mask).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { n_vars, terms: map })
    }

    /// The unique multilinear polynomial agreeing with `oracle` on `{0,1}^n_vars`.
    pub fn interpolate<F>(oracle: F, n_vars: usize) -> Result<Self>
    where
        F: Fn(u64) -> bool + Sync,
    {
        if n_vars > MAX_DENSE_VARS {
            return Err(Error::Resource(format!(
                "interpolation over {n_vars} variables needs 2^{n_vars} evaluations (limit {MAX_DENSE_VARS})"
            )));
        }
        let mut table: Vec<i64> = (0..1u64 << n_vars)
            .into_par_iter()
            .map(|x| oracle(x) as i64)
            .collect();
        mobius_transform(&mut table);
        Ok(Self {
            n_vars,
            terms: table
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(s, &c)| (s as u64, BigInt::from(c)))
                .collect(),
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<u64, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, mask: u64) -> BigInt {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, x: u64) -> BigInt {
        self.terms
            .iter()
            .filter(|(&s, _)| s & !x == 0)
            .map(|(_, c)| c)
            .sum()
    }

    /// Values at every point of the cube, by a zeta transform.
    pub fn truth_table(&self) -> Result<Vec<BigInt>> {
        if self.n_vars > MAX_DENSE_VARS {
            return Err(Error::Resource(format!("dense table over {} variables", self.n_vars)));
        }
        let mut dense = self.to_dense();
        zeta_transform(&mut dense);
        Ok(dense)
    }

    fn to_dense(&self) -> Vec<BigInt> {
        let mut dense = vec![BigInt::zero(); 1 << self.n_vars];
        for (&s, c) in &self.terms {
            dense[s as usize] = c.clone();
        }
        dense
    }

    /// Polynomial of the Boolean dual, `1 − p(1 − x)`.
    pub fn dualize(&self) -> Self {
        // coefficient of G: [G = ∅] − (−1)^{|G|} Σ_{H ⊇ G} c_H
        let upward: BTreeMap<u64, BigInt> = if self.n_vars <= MAX_DENSE_VARS {
            let mut dense = self.to_dense();
            superset_zeta_transform(&mut dense);
            dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(g, c)| (g as u64, c))
                .collect()
        } else {
            let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
            for (&h, c) in &self.terms {
                for g in subsets(h) {
                    *acc.entry(g).or_default() += c;
                }
            }
            acc
        };
        let terms = upward.into_iter().map(|(g, s)| {
            let signed = if g.count_ones() % 2 == 0 { -s } else { s };
            (g, signed)
        });
        let mut out = Self::from_terms(self.n_vars, terms).expect("same variable set");
        let c0 = out.coefficient(0) + BigInt::one();
        if c0.is_zero() {
            out.terms.remove(&0);
        } else {
            out.terms.insert(0, c0);
        }
        out
    }

    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    /// Largest monomial size; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|s| s.count_ones() as usize).max()
    }

    pub fn reduce_mod2(&self) -> F2Poly {
        let two = BigInt::from(2);
        F2Poly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !(*c % &two).is_zero())
                .map(|(&s, _)| s)
                .collect(),
        }
    }

    pub fn deg2(&self) -> Option<usize> {
        self.reduce_mod2().degree()
    }

    /// Pointwise product on the cube (`x_i² = x_i`).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n_vars != other.n_vars {
            return param(format!("cannot multiply polynomials over {} and {} variables", self.n_vars, other.n_vars));
        }
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (&s, a) in &self.terms {
            for (&t, b) in &other.terms {
                *acc.entry(s | t).or_default() += a * b;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self { n_vars: self.n_vars, terms: acc })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n_vars != other.n_vars {
            return param("cannot add polynomials over different variable counts");
        }
        Self::from_terms(
            self.n_vars,
            self.terms.iter().chain(other.terms.iter()).map(|(&s, c)| (s, c.clone())),
        )
    }

    pub fn negate(&self) -> Self {
        Self {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(&s, c)| (s, -c)).collect(),
        }
    }

    /// `1 − p`.
    pub fn complement(&self) -> Self {
        self.negate()
            .add(&Self::constant(self.n_vars, 1))
            .expect("same variable count")
    }

    /// `{±1}`-basis spectrum under `x_i = (1 − z_i)/2`.
    pub fn to_fourier(&self) -> FourierPoly {
        // f̂(T) = (−1)^{|T|} Σ_{S ⊇ T} a_S 2^{−|S|}; work with numerators over 2^{max deg}.
        let top = self.degree().unwrap_or(0);
        let scaled = |s: u64, c: &BigInt| -> BigInt { c << (top - s.count_ones() as usize) };
        let sums: BTreeMap<u64, BigInt> = if self.n_vars <= MAX_DENSE_VARS {
            let mut dense = vec![BigInt::zero(); 1 << self.n_vars];
            for (&s, c) in &self.terms {
                dense[s as usize] = scaled(s, c);
            }
            superset_zeta_transform(&mut dense);
            dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t, c)| (t as u64, c))
                .collect()
        } else {
            let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
            for (&s, c) in &self.terms {
                let v = scaled(s, c);
                for t in subsets(s) {
                    *acc.entry(t).or_default() += &v;
                }
            }
            acc.retain(|_, c| !c.is_zero());
            acc
        };
        let denom = BigInt::one() << top;
        FourierPoly {
            n_vars: self.n_vars,
            terms: sums
                .into_iter()
                .map(|(t, num)| {
                    let num = if t.count_ones() % 2 == 1 { -num } else { num };
                    (t, BigRational::new(num, denom.clone()))
                })
                .collect(),
        }
    }
}

/// `{±1}`-basis polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourierPoly {
    n_vars: usize,
    terms: BTreeMap<u64, BigRational>,
}

impl FourierPoly {
    pub fn from_terms<I>(n_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, BigRational)>,
    {
        let mut map: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (t, c) in terms {
            *map.entry(t).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { n_vars, terms: map }
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

    pub fn l1_norm(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|s| s.count_ones() as usize).max()
    }

    /// Value at the Boolean point `x`, i.e. at `z_i = 1 − 2x_i`.
    pub fn evaluate(&self, x: u64) -> BigRational {
        self.terms
            .iter()
            .map(|(&t, c)| if (t & x).count_ones() % 2 == 1 { -c.clone() } else { c.clone() })
            .sum()
    }
}

/// Polynomial over GF(2): the set of monomials with coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Poly {
    n_vars: usize,
    terms: BTreeSet<u64>,
}

impl F2Poly {
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeSet<u64> {
        &self.terms
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.iter().map(|s| s.count_ones() as usize).max()
    }

    pub fn evaluate(&self, x: u64) -> u8 {
        (self.terms.iter().filter(|&&s| s & !x == 0).count() % 2) as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn poly(n: usize, terms: &[(u64, i64)]) -> SparseMultilinearPoly {
        SparseMultilinearPoly::from_terms(n, terms.iter().map(|&(m, c)| (m, big(c)))).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(big(p), big(q))
    }

    fn ubpm2(x: u64) -> bool {
        (x & 0x9 == 0x9) ^ (x & 0x6 == 0x6)
    }

    #[test]
    fn interpolate_basic() {
        let and = SparseMultilinearPoly::interpolate(|x| x == 0b11, 2).unwrap();
        assert_eq!(and, poly(2, &[(0b11, 1)]));
        let or = SparseMultilinearPoly::interpolate(|x| x != 0, 2).unwrap();
        assert_eq!(or, poly(2, &[(0b01, 1), (0b10, 1), (0b11, -1)]));
        let u = SparseMultilinearPoly::interpolate(ubpm2, 4).unwrap();
        assert_eq!(u, poly(4, &[(0x9, 1), (0x6, 1), (0xF, -2)]));
        assert!(matches!(
            SparseMultilinearPoly::interpolate(|_| true, 21),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn evaluate_points() {
        let u = poly(4, &[(0x9, 1), (0x6, 1), (0xF, -2)]);
        assert_eq!(u.evaluate(0xF), big(0));
        assert_eq!(u.evaluate(0x9), big(1));
        assert_eq!(poly(3, &[(0, 7), (1, 2)]).evaluate(0), big(7));
    }

    #[test]
    fn dualize_examples() {
        let and = poly(2, &[(0b11, 1)]);
        let or = poly(2, &[(0b01, 1), (0b10, 1), (0b11, -1)]);
        assert_eq!(and.dualize(), or);
        assert_eq!(and.dualize().dualize(), and);

        let d = poly(4, &[(0x9, 1), (0x6, 1), (0xF, -2)]).dualize();
        let mut expected = vec![(0u64, 1i64), (0x9, 1), (0x6, 1), (0xF, 2)];
        for s in 1u64..16 {
            match s.count_ones() {
                1 => expected.push((s, -1)),
                2 if s != 0x9 && s != 0x6 => expected.push((s, 2)),
                3 => expected.push((s, -2)),
                _ => {}
            }
        }
        assert_eq!(d, poly(4, &expected));
        assert_eq!(d.l1_norm(), big(25));
        assert_eq!(d.sparsity(), 16);
    }

    #[test]
    fn norms_and_degree() {
        let u = poly(4, &[(0x9, 1), (0x6, 1), (0xF, -2)]);
        assert_eq!(u.l1_norm(), big(4));
        assert_eq!(u.sparsity(), 3);
        assert_eq!(u.degree(), Some(4));
        assert_eq!(SparseMultilinearPoly::zero(4).degree(), None);
        assert_eq!(poly(2, &[(0b11, 1)]).l1_norm(), big(1));
    }

    #[test]
    fn mod2_reduction() {
        let u = poly(4, &[(0x9, 1), (0x6, 1), (0xF, -2)]);
        let r = u.reduce_mod2();
        assert_eq!(r.terms().iter().copied().collect::<Vec<_>>(), vec![0x6, 0x9]);
        assert_eq!(u.deg2(), Some(2));
        assert_eq!(poly(2, &[(0b11, 1)]).deg2(), Some(2));
        for x in 0..16 {
            assert_eq!(r.evaluate(x), ubpm2(x) as u8);
        }
    }

    #[test]
    fn multiply_examples() {
        let x1 = poly(2, &[(0b01, 1)]);
        let x2 = poly(2, &[(0b10, 1)]);
        assert_eq!(x1.multiply(&x1).unwrap(), x1);
        assert_eq!(x1.multiply(&x2).unwrap(), poly(2, &[(0b11, 1)]));
        assert!(x1.multiply(&poly(3, &[(1, 1)])).is_err());
    }

    #[test]
    fn fourier_examples() {
        let and = poly(2, &[(0b11, 1)]).to_fourier();
        assert_eq!(and.coefficient(0), rat(1, 4));
        assert_eq!(and.coefficient(0b01), rat(-1, 4));
        assert_eq!(and.coefficient(0b10), rat(-1, 4));
        assert_eq!(and.coefficient(0b11), rat(1, 4));
        assert_eq!(and.l1_norm(), rat(1, 1));

        let xor = SparseMultilinearPoly::interpolate(|x| x.count_ones() % 2 == 1, 2).unwrap().to_fourier();
        assert_eq!(xor.sparsity(), 2);
        assert_eq!(xor.coefficient(0), rat(1, 2));
        assert_eq!(xor.coefficient(0b11), rat(-1, 2));

        let u = poly(4, &[(0x9, 1), (0x6, 1), (0xF, -2)]);
        let uf = u.to_fourier();
        assert!(uf.l1_norm() <= BigRational::from_integer(u.dualize().l1_norm()));
        for x in 0..16 {
            assert_eq!(uf.evaluate(x), BigRational::from_integer(big(ubpm2(x) as i64)));
        }
    }

    #[test]
    fn truth_table_matches_evaluate() {
        let u = poly(4, &[(0x9, 1), (0x6, 1), (0xF, -2)]).dualize();
        let table = u.truth_table().unwrap();
        for x in 0..16u64 {
            assert_eq!(table[x as usize], u.evaluate(x));
        }
    }

    #[test]
    fn subsets_enumerates_all() {
        let mut s: Vec<u64> = subsets(0b1010).collect();
        s.sort();
        assert_eq!(s, vec![0, 0b10, 0b1000, 0b1010]);
        assert_eq!(subsets(0).collect::<Vec<_>>(), vec![0]);
    }
}
