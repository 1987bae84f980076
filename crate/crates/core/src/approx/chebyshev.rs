//! Low-ℓ1 compression: every high-degree monomial is replaced by a
//! symmetric Chebyshev approximation of AND on its variables.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RationalPoly;
use crate::error::{param, Result};
use crate::poly::{subsets, SparseMultilinearPoly};

type Q = BigRational;

/// Result of [`chebyshev_compress`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compression {
    pub poly: RationalPoly,
    pub degree: usize,
    /// Degree guaranteed by the Chebyshev growth estimate, capped by the input degree.
    pub bound: usize,
    /// Exhaustively measured `max_x |poly(x) − p(x)|`.
    pub max_error: Q,
    /// Number of monomials that were replaced.
    pub replaced: usize,
}

fn chebyshev(r: usize, u: &Q) -> Q {
    let (mut prev, mut cur) = (Q::one(), u.clone());
    if r == 0 {
        return prev;
    }
    for _ in 1..r {
        let next = Q::from_integer(BigInt::from(2)) * u * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `q(w) = T_r(2w/(k−1) − 1) / T_r(1 + 2/(k−1))` at `w = 0..=k`.
fn and_approximation(k: usize, r: usize) -> Vec<Q> {
    let scale = Q::new(BigInt::from(2), BigInt::from(k - 1));
    let u = |w: usize| &scale * Q::from_integer(BigInt::from(w)) - Q::one();
    let top = chebyshev(r, &u(k));
    (0..=k).map(|w| chebyshev(r, &u(w)) / &top).collect()
}

fn and_error(q: &[Q]) -> Q {
    let k = q.len() - 1;
    q[..k].iter().map(|v| v.abs()).fold((&q[k] - Q::one()).abs(), |a, b| a.max(b))
}

/// Least `r < k` whose approximation of AND_k is within `delta`, if any.
fn least_degree(k: usize, start: usize, delta: &Q) -> Option<usize> {
    let ok = |r: usize| and_error(&and_approximation(k, r)) <= *delta;
    let mut r = start.clamp(1, k - 1);
    if ok(r) {
        while r > 1 && ok(r - 1) {
            r -= 1;
        }
        return Some(r);
    }
    while r + 1 < k {
        r += 1;
        if ok(r) {
            return Some(r);
        }
    }
    None
}

/// `β_t = Σ_i (−1)^{t−i} C(t,i) q(i)`: the coefficient of each size-`t` subset
/// in the multilinear form of the symmetric function `q(|x|)`.
fn finite_differences(q: &[Q]) -> Vec<Q> {
    (0..q.len())
        .map(|t| {
            (0..=t).fold(Q::zero(), |acc, i| {
                let term = Q::from_integer(binomial(BigInt::from(t), BigInt::from(i))) * &q[i];
                if (t - i) % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect()
}

fn as_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::MAX)
}

/// Compresses `p` to an `eps`-approximation of lower degree.
///
/// Monomials of degree `k ≥ 2` are replaced when some degree below `k`
/// approximates AND_k within `eps/‖p‖₁`; the rest stay exact. The returned
/// error is measured over the whole cube.
pub fn chebyshev_compress(p: &SparseMultilinearPoly, eps: &Q) -> Result<Compression> {
    let table = p.truth_table()?;
    if let Some(x) = table.iter().position(|v| !v.is_zero() && !v.is_one()) {
        return param(format!("polynomial is not Boolean at point {x:#x}"));
    }
    let l1 = p.l1_norm();
    if l1.is_zero() {
        let poly = RationalPoly::from_terms(p.n_vars(), []);
        return Ok(Compression { poly, degree: 0, bound: 0, max_error: Q::zero(), replaced: 0 });
    }
    let floor = Q::new(BigInt::one(), l1.clone().max(BigInt::from(3)));
    if !eps.is_positive() || *eps < floor {
        return param(format!("eps {eps} is below {floor}"));
    }
    let delta = eps / Q::from_integer(l1.clone());
    let log_term = (4.0 * as_f64(&l1) / eps.to_f64().unwrap_or(f64::MIN_POSITIVE)).ln();
    let growth_term = (2.0 * as_f64(&l1) / eps.to_f64().unwrap_or(f64::MIN_POSITIVE)).ln();

    let mut out: Vec<(u64, Q)> = Vec::new();
    let mut bound = 0usize;
    let mut replaced = 0usize;
    for (&s, a) in p.terms() {
        let k = s.count_ones() as usize;
        let a = Q::from_integer(a.clone());
        let chosen = if k >= 2 {
            let start = (k as f64 * log_term).sqrt().ceil() as usize;
            least_degree(k, start, &delta)
        } else {
            None
        };
        match chosen {
            Some(r) => {
                // 1/T_r(1 + 2/(k−1)) ≤ 2 e^{−r·acosh(1 + 2/(k−1))}.
                let growth = (1.0 + 2.0 / (k - 1) as f64).acosh();
                let guaranteed = ((growth_term / growth) - 1e-9).ceil().max(1.0) as usize;
                bound = bound.max(guaranteed.min(k));
                replaced += 1;
                let beta = finite_differences(&and_approximation(k, r));
                for t in subsets(s) {
                    let size = t.count_ones() as usize;
                    if size <= r && !beta[size].is_zero() {
                        out.push((t, &a * &beta[size]));
                    }
                }
            }
            None => {
                bound = bound.max(k);
                out.push((s, a));
            }
        }
    }
    let poly = RationalPoly::from_terms(p.n_vars(), out);
    let max_error = poly.max_error(|x| Q::from_integer(table[x as usize].clone()))?;
    Ok(Compression { degree: poly.degree().unwrap_or(0), poly, bound, max_error, replaced })
}
