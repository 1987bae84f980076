//! Exact rational simplex for `max c·x` subject to `A x ≤ b`, `x ≥ 0`.
//!
//! Dictionary form with Bland's rule on both the entering and leaving
//! variable. Infeasible starts go through the usual auxiliary problem with a
//! single artificial variable `x₀`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Q>, value: Q },
}

/// `x_{basic[i]} = rhs[i] − Σ_j coef[i][j] · x_{nonbasic[j]}`,
/// `z = value + Σ_j cost[j] · x_{nonbasic[j]}`.
struct Dictionary {
    nonbasic: Vec<usize>,
    basic: Vec<usize>,
    coef: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    cost: Vec<Q>,
    value: Q,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Dictionary {
    fn pivot(&mut self, leave: usize, enter: usize) {
        let m = self.basic.len();
        let n = self.nonbasic.len();
        let p = self.coef[leave][enter].clone();
        debug_assert!(!p.is_zero());
        // Row `leave` now expresses the entering variable.
        let inv = p.recip();
        for j in 0..n {
            if j != enter {
                self.coef[leave][j] = &self.coef[leave][j] * &inv;
            }
        }
        self.rhs[leave] = &self.rhs[leave] * &inv;
        self.coef[leave][enter] = inv;
        let pivot_row = self.coef[leave].clone();
        let pivot_rhs = self.rhs[leave].clone();
        for i in 0..m {
            if i == leave || self.coef[i][enter].is_zero() {
                continue;
            }
            let factor = std::mem::take(&mut self.coef[i][enter]);
            for j in 0..n {
                if j == enter {
                    self.coef[i][j] = -(&factor * &pivot_row[j]);
                } else if !pivot_row[j].is_zero() {
                    self.coef[i][j] = &self.coef[i][j] - &factor * &pivot_row[j];
                }
            }
            self.rhs[i] = &self.rhs[i] - &factor * &pivot_rhs;
        }
        if !self.cost[enter].is_zero() {
            let factor = std::mem::take(&mut self.cost[enter]);
            for j in 0..n {
                if j == enter {
                    self.cost[j] = -(&factor * &pivot_row[j]);
                } else if !pivot_row[j].is_zero() {
                    self.cost[j] = &self.cost[j] - &factor * &pivot_row[j];
                }
            }
            self.value = &self.value + &factor * &pivot_rhs;
        }
        std::mem::swap(&mut self.basic[leave], &mut self.nonbasic[enter]);
    }

    fn run(&mut self) -> Step {
        loop {
            // Bland: smallest-index nonbasic variable with positive reduced cost.
            let enter = (0..self.nonbasic.len())
                .filter(|&j| self.cost[j].is_positive())
                .min_by_key(|&j| self.nonbasic[j]);
            let Some(enter) = enter else { return Step::Optimal };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.basic.len() {
                let a = &self.coef[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basic[i] < self.basic[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((leave, _)) = best else { return Step::Unbounded };
            self.pivot(leave, enter);
        }
    }

    fn value_of(&self, var: usize) -> Q {
        self.basic
            .iter()
            .position(|&b| b == var)
            .map_or_else(Q::zero, |i| self.rhs[i].clone())
    }
}

/// Solves `max c·x` s.t. `A x ≤ b`, `x ≥ 0` exactly.
pub fn solve(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    let min_row = (0..m).min_by(|&i, &j| b[i].cmp(&b[j]).then(i.cmp(&j)));
    let needs_phase_one = min_row.is_some_and(|i| b[i].is_negative());

    let mut dict = if needs_phase_one {
        // Auxiliary: max −x₀ with x₀ (index n + m) subtracted from every row.
        let x0 = n + m;
        let mut nonbasic: Vec<usize> = (0..n).collect();
        nonbasic.push(x0);
        let coef: Vec<Vec<Q>> = a
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.push(-Q::one());
                r
            })
            .collect();
        let mut cost = vec![Q::zero(); n + 1];
        cost[n] = -Q::one();
        let mut d = Dictionary {
            nonbasic,
            basic: (n..n + m).collect(),
            coef,
            rhs: b.to_vec(),
            cost,
            value: Q::zero(),
        };
        d.pivot(min_row.expect("m > 0"), n);
        if let Step::Unbounded = d.run() {
            unreachable!("auxiliary objective is bounded by 0");
        }
        if !d.value.is_zero() {
            return LpOutcome::Infeasible;
        }
        if let Some(i) = d.basic.iter().position(|&v| v == x0) {
            // x₀ is basic at level 0: swap it out on any nonzero entry.
            let j = (0..d.nonbasic.len())
                .find(|&j| !d.coef[i][j].is_zero())
                .expect("a degenerate basic x0 row has a nonzero entry");
            d.pivot(i, j);
        }
        let col = d.nonbasic.iter().position(|&v| v == x0).expect("x0 is nonbasic");
        d.nonbasic.remove(col);
        for row in d.coef.iter_mut() {
            row.remove(col);
        }
        // Re-express the original objective over the current nonbasics.
        let mut cost = vec![Q::zero(); d.nonbasic.len()];
        let mut value = Q::zero();
        for (var, cv) in c.iter().enumerate() {
            if cv.is_zero() {
                continue;
            }
            if let Some(j) = d.nonbasic.iter().position(|&v| v == var) {
                cost[j] = &cost[j] + cv;
            } else if let Some(i) = d.basic.iter().position(|&v| v == var) {
                value = &value + cv * &d.rhs[i];
                for j in 0..cost.len() {
                    cost[j] = &cost[j] - cv * &d.coef[i][j];
                }
            }
        }
        d.cost = cost;
        d.value = value;
        d
    } else {
        Dictionary {
            nonbasic: (0..n).collect(),
            basic: (n..n + m).collect(),
            coef: a.to_vec(),
            rhs: b.to_vec(),
            cost: c.to_vec(),
            value: Q::zero(),
        }
    };

    match dict.run() {
        Step::Unbounded => LpOutcome::Unbounded,
        Step::Optimal => LpOutcome::Optimal {
            x: (0..n).map(|v| dict.value_of(v)).collect(),
            value: dict.value.clone(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(p: i64, d: i64) -> Q {
        Q::new(BigInt::from(p), BigInt::from(d))
    }

    fn qi(v: i64) -> Q {
        q(v, 1)
    }

    fn rows(r: &[&[i64]]) -> Vec<Vec<Q>> {
        r.iter().map(|row| row.iter().map(|&v| qi(v)).collect()).collect()
    }

    #[test]
    fn textbook_optimum() {
        // max 3x + y + 2z; x + y + 3z ≤ 30, 2x + 2y + 5z ≤ 24, 4x + y + 2z ≤ 36
        let a = rows(&[&[1, 1, 3], &[2, 2, 5], &[4, 1, 2]]);
        let b = vec![qi(30), qi(24), qi(36)];
        let c = vec![qi(3), qi(1), qi(2)];
        match solve(&a, &b, &c) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, qi(28));
                assert_eq!(x, vec![qi(8), qi(4), qi(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn phase_one_feasible() {
        // max 2x − y; 2x − y ≤ 2, x − 5y ≤ −4
        let a = rows(&[&[2, -1], &[1, -5]]);
        let b = vec![qi(2), qi(-4)];
        let c = vec![qi(2), qi(-1)];
        match solve(&a, &b, &c) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, qi(2));
                assert!(&x[0] * qi(2) - &x[1] <= qi(2));
                assert!(&x[0] - &x[1] * qi(5) <= qi(-4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x ≤ 1 and −x ≤ −2
        let a = rows(&[&[1], &[-1]]);
        assert_eq!(solve(&a, &[qi(1), qi(-2)], &[qi(1)]), LpOutcome::Infeasible);
        // max x with −x ≤ 0
        let a = rows(&[&[-1]]);
        assert_eq!(solve(&a, &[qi(0)], &[qi(1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn fractional_optimum() {
        // max x + y; 3x + y ≤ 2, x + 3y ≤ 2 → x = y = 1/2
        let a = rows(&[&[3, 1], &[1, 3]]);
        match solve(&a, &[qi(2), qi(2)], &[qi(1), qi(1)]) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, qi(1));
                assert_eq!(x, vec![q(1, 2), q(1, 2)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
