//! Symbolic descriptors of Boolean functions and their truth oracles.
//!
//! Graph functions read their input as an `n²`-bit edge mask. Modifiers
//! compose as `lift ∘ dual ∘ base`; a lifted function takes `2N` bits with
//! Alice's half in the low `N` bits.

use std::fmt;
use std::sync::Arc;

use crate::error::{param, Result};
use crate::graph::{BipartiteGraph, MAX_SIDE};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseFunction {
    /// Graph has exactly one perfect matching.
    Ubpm { n: usize },
    /// Graph has a perfect matching.
    Bpm { n: usize },
    /// Graph has a matching of size `k`.
    Bm { n: usize, k: usize },
    /// Graph has exactly one matching of size `k`.
    Ubm { n: usize, k: usize },
    /// Maximum matching has size exactly `k`.
    MaxMatch { n: usize, k: usize },
    /// `mc_closure(G) ∈ set`, the set given as ascending edge masks.
    Indicator { n: usize, set: Vec<u64> },
    And { vars: usize },
    Or { vars: usize },
    Xor { vars: usize },
    Constant { vars: usize, value: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Lift {
    #[default]
    None,
    And,
    Xor,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionSpec {
    pub base: BaseFunction,
    pub dual: bool,
    pub lift: Lift,
}

impl From<BaseFunction> for FunctionSpec {
    fn from(base: BaseFunction) -> Self {
        Self { base, dual: false, lift: Lift::None }
    }
}

impl FunctionSpec {
    pub fn ubpm(n: usize) -> Self {
        BaseFunction::Ubpm { n }.into()
    }

    pub fn bpm(n: usize) -> Self {
        BaseFunction::Bpm { n }.into()
    }

    pub fn bm(n: usize, k: usize) -> Self {
        BaseFunction::Bm { n, k }.into()
    }

    pub fn ubm(n: usize, k: usize) -> Self {
        BaseFunction::Ubm { n, k }.into()
    }

    pub fn max_match(n: usize, k: usize) -> Self {
        BaseFunction::MaxMatch { n, k }.into()
    }

    pub fn indicator(n: usize, set: &[BipartiteGraph]) -> Self {
        let mut masks: Vec<u64> = set.iter().map(|g| g.mask()).collect();
        masks.sort_unstable();
        masks.dedup();
        BaseFunction::Indicator { n, set: masks }.into()
    }

    pub fn and(vars: usize) -> Self {
        BaseFunction::And { vars }.into()
    }

    pub fn or(vars: usize) -> Self {
        BaseFunction::Or { vars }.into()
    }

    pub fn xor(vars: usize) -> Self {
        BaseFunction::Xor { vars }.into()
    }

    pub fn constant(vars: usize, value: bool) -> Self {
        BaseFunction::Constant { vars, value }.into()
    }

    pub fn dualized(mut self) -> Self {
        self.dual = !self.dual;
        self
    }

    pub fn lifted(mut self, lift: Lift) -> Self {
        self.lift = lift;
        self
    }

    /// Side size for graph functions.
    pub fn side(&self) -> Option<usize> {
        match self.base {
            BaseFunction::Ubpm { n }
            | BaseFunction::Bpm { n }
            | BaseFunction::Bm { n, .. }
            | BaseFunction::Ubm { n, .. }
            | BaseFunction::MaxMatch { n, .. }
            | BaseFunction::Indicator { n, .. } => Some(n),
            _ => None,
        }
    }

    pub fn base_vars(&self) -> usize {
        match self.base {
            BaseFunction::And { vars }
            | BaseFunction::Or { vars }
            | BaseFunction::Xor { vars }
            | BaseFunction::Constant { vars, .. } => vars,
            _ => {
                let n = self.side().expect("graph function");
                n * n
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        match self.lift {
            Lift::None => self.base_vars(),
            Lift::And | Lift::Xor => 2 * self.base_vars(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.side() {
            if n == 0 || n > MAX_SIDE {
                return param(format!("side size n={n} outside 1..={MAX_SIDE}"));
            }
        }
        match &self.base {
            BaseFunction::Bm { n, k } | BaseFunction::Ubm { n, k } | BaseFunction::MaxMatch { n, k } => {
                if k > n {
                    return param(format!("matching size k={k} exceeds n={n}"));
                }
            }
            BaseFunction::Indicator { n, set } => {
                for &m in set {
                    let g = BipartiteGraph::new(*n, m)?;
                    if g.is_empty() {
                        return param("indicator set contains the bottom element 0̂");
                    }
                    if !g.is_matching_covered() {
                        return param(format!("indicator set element {g} is not matching-covered"));
                    }
                }
            }
            _ => {}
        }
        if self.n_vars() > 64 {
            return param(format!("{} input bits do not fit a 64-bit point", self.n_vars()));
        }
        Ok(())
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match &self.base {
            BaseFunction::Ubpm { n } => format!("ubpm[n={n}]"),
            BaseFunction::Bpm { n } => format!("bpm[n={n}]"),
            BaseFunction::Bm { n, k } => format!("bm[n={n},k={k}]"),
            BaseFunction::Ubm { n, k } => format!("ubm[n={n},k={k}]"),
            BaseFunction::MaxMatch { n, k } => format!("maxmatch[n={n},k={k}]"),
            BaseFunction::Indicator { n, set } => {
                let masks: Vec<String> = set.iter().map(|m| format!("0x{m:X}")).collect();
                format!("indicator[n={n},set={}]", masks.join("+"))
            }
            BaseFunction::And { vars } => format!("and[{vars}]"),
            BaseFunction::Or { vars } => format!("or[{vars}]"),
            BaseFunction::Xor { vars } => format!("xor[{vars}]"),
            BaseFunction::Constant { vars, value } => format!("const{}[{vars}]", *value as u8),
        };
        let dualled = if self.dual { format!("dual({base})") } else { base };
        match self.lift {
            Lift::None => write!(f, "{dualled}"),
            Lift::And => write!(f, "and-lift({dualled})"),
            Lift::Xor => write!(f, "xor-lift({dualled})"),
        }
    }
}

type TruthFn = dyn Fn(u64) -> bool + Send + Sync;

/// A compiled truth function over `n_vars` input bits.
#[derive(Clone)]
pub struct Oracle {
    n_vars: usize,
    f: Arc<TruthFn>,
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle").field("n_vars", &self.n_vars).finish_non_exhaustive()
    }
}

impl Oracle {
    pub fn new(n_vars: usize, f: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        Self { n_vars, f: Arc::new(f) }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn eval(&self, x: u64) -> bool {
        (self.f)(x)
    }

    /// Boolean dual `x ↦ 1 − f(¬x)`.
    pub fn dual(&self) -> Self {
        let inner = self.f.clone();
        let full = low_bits(self.n_vars);
        Self::new(self.n_vars, move |x| !inner(!x & full))
    }

    pub fn lift(&self, lift: Lift) -> Self {
        let inner = self.f.clone();
        let n = self.n_vars;
        let half = low_bits(n);
        match lift {
            Lift::None => self.clone(),
            Lift::And => Self::new(2 * n, move |xy| inner((xy & half) & ((xy >> n) & half))),
            Lift::Xor => Self::new(2 * n, move |xy| inner((xy & half) ^ ((xy >> n) & half))),
        }
    }

    pub fn as_fn(&self) -> impl Fn(u64) -> bool + Sync + '_ {
        move |x| self.eval(x)
    }
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Compiles a spec to its truth oracle.
pub fn compile_oracle(spec: &FunctionSpec) -> Result<Oracle> {
    spec.validate()?;
    let vars = spec.base_vars();
    let graph = |n: usize, x: u64| BipartiteGraph::from_parts(n, x);
    let base = match spec.base.clone() {
        BaseFunction::Ubpm { n } => Oracle::new(vars, move |x| graph(n, x).has_unique_pm()),
        BaseFunction::Bpm { n } => Oracle::new(vars, move |x| graph(n, x).permanent() > 0),
        BaseFunction::Bm { n, k } => Oracle::new(vars, move |x| graph(n, x).max_matching_size() >= k),
        BaseFunction::Ubm { n, k } => Oracle::new(vars, move |x| graph(n, x).count_matchings(k) == 1),
        BaseFunction::MaxMatch { n, k } => Oracle::new(vars, move |x| graph(n, x).max_matching_size() == k),
        BaseFunction::Indicator { n, set } => Oracle::new(vars, move |x| {
            let c = graph(n, x).mc_closure().mask();
            set.binary_search(&c).is_ok()
        }),
        BaseFunction::And { vars } => {
            let full = low_bits(vars);
            Oracle::new(vars, move |x| x & full == full)
        }
        BaseFunction::Or { vars } => Oracle::new(vars, move |x| x != 0),
        BaseFunction::Xor { vars } => Oracle::new(vars, move |x| x.count_ones() % 2 == 1),
        BaseFunction::Constant { vars, value } => Oracle::new(vars, move |_| value),
    };
    let dualled = if spec.dual { base.dual() } else { base };
    Ok(dualled.lift(spec.lift))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compile_examples() {
        let u = compile_oracle(&FunctionSpec::ubpm(2)).unwrap();
        assert_eq!(u.n_vars(), 4);
        assert!(u.eval(0x9));
        assert!(!u.eval(0xF));
        let bm = compile_oracle(&FunctionSpec::bm(2, 1)).unwrap();
        assert!(bm.eval(0x1));
        assert!(!bm.eval(0x0));
        let mm = compile_oracle(&FunctionSpec::max_match(2, 1)).unwrap();
        assert!(mm.eval(0x3));
        assert!(!mm.eval(0x9));
    }

    #[test]
    fn ubm_counts_k_matchings() {
        let ubm = compile_oracle(&FunctionSpec::ubm(2, 1)).unwrap();
        assert!(ubm.eval(0x1));
        assert!(!ubm.eval(0x3));
        let ubm0 = compile_oracle(&FunctionSpec::ubm(2, 0)).unwrap();
        assert!((0..16).all(|x| ubm0.eval(x)));
    }

    #[test]
    fn dual_and_lifts() {
        let and = compile_oracle(&FunctionSpec::and(2)).unwrap();
        let or_from_dual = compile_oracle(&FunctionSpec::and(2).dualized()).unwrap();
        let or = compile_oracle(&FunctionSpec::or(2)).unwrap();
        for x in 0..4 {
            assert_eq!(or_from_dual.eval(x), or.eval(x));
            assert_eq!(and.dual().dual().eval(x), and.eval(x));
        }
        let id_and = compile_oracle(&FunctionSpec::and(1).lifted(Lift::And)).unwrap();
        assert_eq!(id_and.n_vars(), 2);
        assert_eq!((0..4).filter(|&x| id_and.eval(x)).collect::<Vec<_>>(), vec![3]);
        let xor_lift = compile_oracle(&FunctionSpec::and(1).lifted(Lift::Xor)).unwrap();
        assert_eq!((0..4).filter(|&x| xor_lift.eval(x)).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn validation_errors() {
        assert!(compile_oracle(&FunctionSpec::bm(2, 3)).is_err());
        assert!(compile_oracle(&FunctionSpec::ubpm(9)).is_err());
        let bottom = BipartiteGraph::new(2, 0).unwrap();
        assert!(compile_oracle(&FunctionSpec::indicator(2, &[bottom])).is_err());
        let not_mc = BipartiteGraph::new(2, 0x3).unwrap();
        assert!(compile_oracle(&FunctionSpec::indicator(2, &[not_mc])).is_err());
        assert!(compile_oracle(&FunctionSpec::ubpm(6).lifted(Lift::And)).is_err());
    }

    #[test]
    fn display_names() {
        assert_eq!(FunctionSpec::ubpm(3).to_string(), "ubpm[n=3]");
        assert_eq!(FunctionSpec::ubpm(2).dualized().lifted(Lift::And).to_string(), "and-lift(dual(ubpm[n=2]))");
    }
}
