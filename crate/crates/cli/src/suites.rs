//! Verification suites. Each check carries the acceptance criterion it
//! belongs to and, on failure, a concrete counterexample.

use std::fmt;
use std::str::FromStr;

use matchlattice_core::approx::{
    approx_degree, best_error_at_degree, chebyshev_compress, sensitivity_subgraph, spectral_radius, ApproxInstance,
};
use matchlattice_core::comm::{
    dhs_check, find_fooling_violation, fooling_set_construct, lift_rank_check, rank_lower_bound, rank_upper_bound,
    CommMatrix, PartitionSpec,
};
use matchlattice_core::graph::all_perfect_matchings;
use matchlattice_core::matching::{
    bm_restriction_embed, indicator_closed_form, maxmatch_compose, ubpm_closed_form, ubpm_dual_closed_form,
};
use matchlattice_core::{
    compile_oracle, BipartiteGraph, Error, FunctionSpec, Lift, MCLattice, MatchingPolys, Result,
    SparseMultilinearPoly,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::store::{Status, Store};

pub const DEFAULT_SEED: u64 = 20240607;

/// Absolute tolerance for the spectral radius, the only floating-point check.
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Thm1,
    Thm2,
    Indicator,
    Mobius,
    Norms,
    Rank,
    Fooling,
    Lifts,
    AppendixA,
    AppendixB,
    All,
}

pub const SUITES: [Suite; 10] = [
    Suite::Thm1,
    Suite::Thm2,
    Suite::Indicator,
    Suite::Mobius,
    Suite::Norms,
    Suite::Rank,
    Suite::Lifts,
    Suite::Fooling,
    Suite::AppendixA,
    Suite::AppendixB,
];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Indicator => "indicator",
            Suite::Mobius => "mobius",
            Suite::Norms => "norms",
            Suite::Rank => "rank",
            Suite::Fooling => "fooling",
            Suite::Lifts => "lifts",
            Suite::AppendixA => "appendixA",
            Suite::AppendixB => "appendixB",
            Suite::All => "all",
        }
    }

    fn takes_n(self) -> bool {
        matches!(self, Suite::Thm1 | Suite::Thm2 | Suite::Indicator | Suite::Mobius | Suite::Norms | Suite::All)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SUITES
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| {
                let names: Vec<&str> = SUITES.iter().map(|x| x.name()).collect();
                Error::Parameter(format!("unknown suite `{s}` (expected one of {}, all)", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub criterion: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub long: bool,
    pub n: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: DEFAULT_SEED, long: false, n: None }
    }
}

struct Run<'a> {
    opts: Options,
    store: &'a mut Store,
    suite: &'static str,
    checks: Vec<Check>,
}

impl Run<'_> {
    fn check(&mut self, criterion: u8, name: impl Into<String>, pass: bool, detail: impl Into<String>, cex: Option<String>) {
        self.checks.push(Check {
            suite: self.suite,
            criterion,
            name: name.into(),
            pass,
            detail: detail.into(),
            counterexample: if pass { None } else { cex },
        });
    }

    fn frozen(&mut self, criterion: u8, key: &str, value: impl fmt::Display) {
        let value = value.to_string();
        let status = self.store.check(key, &value);
        let detail = match &status {
            Status::Match => format!("{key} = {value}"),
            Status::Frozen => format!("{key} = {value} (frozen)"),
            Status::Mismatch { stored } => format!("{key}: stored {stored}, computed {value}"),
            Status::Missing => format!(
                "{key} missing from {}; computed {value}; run once with --freeze",
                self.store.path().display()
            ),
        };
        self.check(criterion, format!("regression value {key}"), status.ok(), detail, Some(key.to_string()));
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.opts.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    /// Side sizes to test: `--n` if given, else the defaults plus the long tier.
    fn sides(&self, default: &[usize], long: &[usize], max: usize) -> Result<Vec<usize>> {
        match self.opts.n {
            Some(n) if n == 0 || n > max => Err(Error::Parameter(format!(
                "suite {} supports n in 1..={max}, got {n}",
                self.suite
            ))),
            Some(n) => Ok(vec![n]),
            None => {
                let mut out = default.to_vec();
                if self.opts.long {
                    out.extend_from_slice(long);
                }
                Ok(out)
            }
        }
    }
}

fn interpolate(spec: &FunctionSpec) -> Result<SparseMultilinearPoly> {
    let oracle = compile_oracle(spec)?;
    SparseMultilinearPoly::interpolate(oracle.as_fn(), oracle.n_vars())
}

fn first_diff(a: &SparseMultilinearPoly, b: &SparseMultilinearPoly) -> Option<u64> {
    a.terms()
        .keys()
        .chain(b.terms().keys())
        .copied()
        .filter(|&m| a.coefficient(m) != b.coefficient(m))
        .min()
}

fn literal(n: usize, mask: u64) -> String {
    BipartiteGraph::new(n, mask).map_or_else(|_| format!("0x{mask:X}"), |g| g.to_string())
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Runs one suite (or every suite for `All`).
pub fn run_suite(suite: Suite, opts: &Options, store: &mut Store) -> Result<Vec<Check>> {
    if suite == Suite::All {
        let mut all = Vec::new();
        for s in SUITES {
            let sub = Options { n: if s.takes_n() { opts.n } else { None }, ..*opts };
            all.extend(run_suite(s, &sub, store)?);
        }
        return Ok(all);
    }
    if opts.n.is_some() && !suite.takes_n() {
        return Err(Error::Parameter(format!("suite {suite} does not take --n")));
    }
    let mut run = Run { opts: *opts, store, suite: suite.name(), checks: Vec::new() };
    match suite {
        Suite::Thm1 => thm1(&mut run)?,
        Suite::Thm2 => thm2(&mut run)?,
        Suite::Indicator => indicator(&mut run)?,
        Suite::Mobius => mobius(&mut run)?,
        Suite::Norms => norms(&mut run)?,
        Suite::Rank => rank(&mut run)?,
        Suite::Lifts => lifts(&mut run)?,
        Suite::Fooling => fooling(&mut run)?,
        Suite::AppendixA => appendix_a(&mut run)?,
        Suite::AppendixB => appendix_b(&mut run)?,
        Suite::All => unreachable!(),
    }
    Ok(run.checks)
}

fn thm1(run: &mut Run) -> Result<()> {
    for n in run.sides(&[2, 3], &[4], 4)? {
        let closed = ubpm_closed_form(n)?;
        let interp = interpolate(&FunctionSpec::ubpm(n))?;
        let diff = first_diff(&closed, &interp);
        run.check(
            1,
            format!("ubpm closed form equals interpolation, n={n}"),
            diff.is_none(),
            format!("{} monomials compared over {} points", closed.sparsity().max(interp.sparsity()), 1u64 << (n * n)),
            diff.map(|m| literal(n, m)),
        );
    }
    Ok(())
}

fn coefficient_listing(p: &SparseMultilinearPoly) -> String {
    let parts: Vec<String> = p.terms().iter().map(|(m, c)| format!("0x{m:X}:{c}")).collect();
    parts.join(",")
}

fn thm2(run: &mut Run) -> Result<()> {
    for n in run.sides(&[2, 3], &[4], 4)? {
        let closed = ubpm_dual_closed_form(n)?;
        let dual = interpolate(&FunctionSpec::ubpm(n))?.dualize();
        let diff = first_diff(&closed, &dual);
        run.check(
            2,
            format!("ubpm dual closed form equals dualized interpolation, n={n}"),
            diff.is_none(),
            format!("{} monomials", closed.sparsity()),
            diff.map(|m| literal(n, m)),
        );
        let oracle_dual = interpolate(&FunctionSpec::ubpm(n).dualized())?;
        let diff = first_diff(&dual, &oracle_dual);
        run.check(
            2,
            format!("dualize agrees with interpolating the dual oracle, n={n}"),
            diff.is_none(),
            "",
            diff.map(|m| literal(n, m)),
        );
        if n >= 2 {
            let c0 = closed.coefficient(0);
            run.check(2, format!("dual constant term is 1, n={n}"), c0 == BigInt::from(1), format!("constant {c0}"), Some(literal(n, 0)));
        }
        if n == 2 {
            let pms: Vec<u64> = all_perfect_matchings(2)?.iter().map(|m| m.mask()).collect();
            let bad = (0u64..16).find(|&g| {
                let expect = match g.count_ones() {
                    0 => 1,
                    1 => -1,
                    2 if pms.contains(&g) => 1,
                    2 => 2,
                    3 => -2,
                    _ => 2,
                };
                closed.coefficient(g) != BigInt::from(expect)
            });
            run.check(
                2,
                "n=2 dual coefficients: empty 1, singles -1, matchings 1, other pairs 2, triples -2, full 2",
                bad.is_none(),
                "",
                bad.map(|m| literal(2, m)),
            );
            run.frozen(2, "ubpm_dual.n2.coefficients", coefficient_listing(&closed));
        }
    }
    Ok(())
}

fn indicator(run: &mut Run) -> Result<()> {
    for n in run.sides(&[2, 3], &[4], 4)? {
        let lattice = MCLattice::new(n)?;
        let mc: Vec<BipartiteGraph> = lattice.mc_elements().collect();
        let pms: Vec<BipartiteGraph> = all_perfect_matchings(n)?.iter().map(|m| m.graph()).collect();
        let mut rng = run.rng(n as u64);
        let mut sets: Vec<(String, Vec<BipartiteGraph>)> =
            vec![("perfect matchings".into(), pms), ("all of MC".into(), mc.clone())];
        for i in 0..20 {
            let set: Vec<BipartiteGraph> = mc.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            sets.push((format!("seeded random set #{i}"), set));
        }
        let mut random_failure: Option<String> = None;
        for (label, set) in &sets {
            let closed = indicator_closed_form(n, set)?;
            let interp = interpolate(&FunctionSpec::indicator(n, set))?;
            let diff = first_diff(&closed, &interp);
            if label.starts_with("seeded") {
                if let (Some(m), None) = (diff, &random_failure) {
                    random_failure = Some(format!("{label}: {}", literal(n, m)));
                }
            } else {
                run.check(
                    3,
                    format!("indicator of {label} matches interpolation, n={n}"),
                    diff.is_none(),
                    format!("|S| = {}", set.len()),
                    diff.map(|m| literal(n, m)),
                );
            }
        }
        run.check(
            3,
            format!("indicator of 20 seeded random sets matches interpolation, n={n}"),
            random_failure.is_none(),
            format!("seed {}", run.opts.seed),
            random_failure,
        );
    }
    Ok(())
}

fn mobius(run: &mut Run) -> Result<()> {
    for n in run.sides(&[2, 3, 4], &[], 4)? {
        let lattice = MCLattice::new(n)?;
        let els: Vec<BipartiteGraph> = lattice.elements().collect();
        if n <= 3 {
            let mut pairs = 0usize;
            let mut bad = None;
            'outer: for h in &els {
                for g in els.iter().filter(|g| h.is_subgraph_of(g)) {
                    pairs += 1;
                    if lattice.mobius_recursive(h, g)? != lattice.mobius_closed_form(h, g)? {
                        bad = Some(format!("{h} <= {g}"));
                        break 'outer;
                    }
                }
            }
            run.check(4, format!("recursive Möbius equals (-1)^rank difference on all pairs, n={n}"), bad.is_none(), format!("{pairs} comparable pairs"), bad);

            let chains = lattice.longest_chain_lengths();
            let mut bad = None;
            for (g, &len) in els.iter().zip(&chains) {
                let r = lattice.rank_of(g)?;
                let expect = if g.is_empty() { 0 } else { g.cyclomatic() + 1 };
                if r != expect || len != r {
                    bad = Some(g.to_string());
                    break;
                }
            }
            run.check(4, format!("rank equals cyclomatic number + 1 and longest chain, n={n}"), bad.is_none(), format!("{} elements", els.len()), bad);

            let bad = lattice_law_violation(&lattice, &els)?;
            run.check(4, format!("join/meet lattice laws, n={n}"), bad.is_none(), "idempotent, commutative, associative, absorptive, least/greatest bounds", bad);
        } else {
            let masks = lattice.masks();
            let mut rng = run.rng(0x4d);
            let mut checked = 0;
            let mut bad = None;
            while checked < 1000 {
                let g = BipartiteGraph::new(n, masks[rng.gen_range(0..masks.len())])?;
                let h = BipartiteGraph::new(n, g.mask() & rng.gen::<u64>())?.mc_closure();
                if !lattice.contains(&h) || !h.is_subgraph_of(&g) {
                    continue;
                }
                checked += 1;
                if lattice.mobius_recursive(&h, &g)? != lattice.mobius_closed_form(&h, &g)? {
                    bad = Some(format!("{h} <= {g}"));
                    break;
                }
            }
            run.check(4, format!("recursive Möbius equals closed form on 1000 seeded pairs, n={n}"), bad.is_none(), format!("seed {}", run.opts.seed), bad);
        }
    }
    Ok(())
}

fn lattice_law_violation(lattice: &MCLattice, els: &[BipartiteGraph]) -> Result<Option<String>> {
    for a in els {
        if lattice.join(a, a)? != *a || lattice.meet(a, a)? != *a {
            return Ok(Some(format!("idempotence at {a}")));
        }
        for b in els {
            let j = lattice.join(a, b)?;
            let m = lattice.meet(a, b)?;
            if !lattice.contains(&j) || !lattice.contains(&m) {
                return Ok(Some(format!("closure at {a}, {b}")));
            }
            if j != lattice.join(b, a)? || m != lattice.meet(b, a)? {
                return Ok(Some(format!("commutativity at {a}, {b}")));
            }
            if lattice.join(a, &m)? != *a || lattice.meet(a, &j)? != *a {
                return Ok(Some(format!("absorption at {a}, {b}")));
            }
            let upper_ok = els
                .iter()
                .filter(|z| a.is_subgraph_of(z) && b.is_subgraph_of(z))
                .all(|z| j.is_subgraph_of(z));
            let lower_ok = m.is_subgraph_of(a)
                && m.is_subgraph_of(b)
                && els
                    .iter()
                    .filter(|z| z.is_subgraph_of(a) && z.is_subgraph_of(b))
                    .all(|z| z.is_subgraph_of(&m));
            if !upper_ok || !lower_ok {
                return Ok(Some(format!("bounds at {a}, {b}")));
            }
            for c in els {
                if lattice.join(&j, c)? != lattice.join(a, &lattice.join(b, c)?)?
                    || lattice.meet(&m, c)? != lattice.meet(a, &lattice.meet(b, c)?)?
                {
                    return Ok(Some(format!("associativity at {a}, {b}, {c}")));
                }
            }
        }
    }
    Ok(None)
}

fn norms(run: &mut Run) -> Result<()> {
    let sides = run.sides(&[2, 3], &[4], 4)?;
    for &n in &sides {
        let polys = MatchingPolys::new(n)?;
        let ubpm = polys.ubpm();
        let dual = polys.ubpm_dual();
        let bpm_dual = polys.bpm_dual();
        run.frozen(5, &format!("mc.count.n{n}"), polys.lattice().len() - 1);
        run.frozen(5, &format!("l1.ubpm.n{n}"), ubpm.l1_norm());
        run.frozen(5, &format!("sparsity.ubpm.n{n}"), ubpm.sparsity());
        run.frozen(5, &format!("l1.ubpm_dual.n{n}"), dual.l1_norm());
        run.frozen(5, &format!("sparsity.ubpm_dual.n{n}"), dual.sparsity());
        run.frozen(5, &format!("l1.bpm_dual.n{n}"), bpm_dual.l1_norm());
        run.frozen(5, &format!("sparsity.bpm_dual.n{n}"), bpm_dual.sparsity());
        if n == 2 {
            let got = (ubpm.l1_norm(), ubpm.sparsity(), dual.l1_norm(), dual.sparsity());
            let want = (BigInt::from(4), 3, BigInt::from(25), 16);
            run.check(5, "n=2 norms: l1 4 and 25, sparsity 3 and 16", got == want, format!("{got:?}"), None);
        }

        let bound = BigInt::from(1u64) << (2 * n);
        let over = bpm_dual.terms().iter().find(|(_, c)| c.abs() > bound).map(|(&m, _)| literal(n, m));
        run.check(5, format!("|a*_G| <= 2^(2n) for all G, n={n}"), over.is_none(), format!("bound {bound}"), over);

        let ball_cap = 1 + (1usize << n) * factorial(n) as usize;
        let lhs = dual.sparsity();
        let rhs = bpm_dual.sparsity() * ball_cap;
        run.check(5, format!("|mon(UBPM*)| <= |mon(BPM*)|(1 + 2^n n!), n={n}"), lhs <= rhs, format!("{lhs} <= {rhs}"), None);

        let mut covered = std::collections::BTreeSet::new();
        let mut big_ball = None;
        for &g in bpm_dual.terms().keys() {
            let ball = polys.ball(&BipartiteGraph::new(n, g)?);
            if ball.len() > ball_cap && big_ball.is_none() {
                big_ball = Some(literal(n, g));
            }
            covered.extend(ball.iter().map(|h| h.mask()));
        }
        let uncovered = dual.terms().keys().find(|&&g| g != 0 && !covered.contains(&g)).map(|&g| literal(n, g));
        run.check(5, format!("every ball has at most 1 + 2^n n! elements, n={n}"), big_ball.is_none(), "", big_ball);
        run.check(5, format!("nonempty monomials of UBPM* lie in balls around mon(BPM*), n={n}"), uncovered.is_none(), "", uncovered);

        let deg2 = ubpm.deg2().unwrap_or(0);
        run.frozen(6, &format!("deg2.ubpm.n{n}"), deg2);
        if n >= 2 {
            run.check(6, format!("deg2(UBPM) < n^2, n={n}"), deg2 < n * n, format!("deg2 {deg2}"), None);
        }
        if n == 2 {
            run.check(6, "deg2(UBPM_2) = 2", deg2 == 2, format!("deg2 {deg2}"), None);
        }
        let odd: Vec<u64> = polys.lattice().mc_elements().filter(|g| g.det_mod2() == 1).map(|g| g.mask()).collect();
        let support: Vec<u64> = ubpm.reduce_mod2().terms().iter().copied().collect();
        let diff = odd
            .iter()
            .chain(&support)
            .copied()
            .find(|m| odd.contains(m) != support.contains(m));
        run.check(6, format!("F2 support equals matching-covered graphs with odd determinant, n={n}"), diff.is_none(), format!("{} terms", support.len()), diff.map(|m| literal(n, m)));
    }
    let tops = match run.opts.n {
        Some(n) => vec![n],
        None => vec![2, 3, 4],
    };
    for n in tops {
        let ubpm = MatchingPolys::new(n)?.ubpm();
        let full = (1u64 << (n * n)) - 1;
        let chi = n * n - 2 * n + 1;
        let sign: i64 = if chi % 2 == 0 { 1 } else { -1 };
        let want = BigInt::from(sign) * BigInt::from(factorial(n));
        let got = ubpm.coefficient(full);
        run.check(
            6,
            format!("coefficient of K_(n,n) is (-1)^chi n!, degree n^2, n={n}"),
            got == want && ubpm.degree() == Some(n * n),
            format!("coefficient {got}"),
            Some(literal(n, full)),
        );
    }
    Ok(())
}

fn rank(run: &mut Run) -> Result<()> {
    let spec = FunctionSpec::ubpm(2);
    let oracle = compile_oracle(&spec)?;
    let dual = oracle.dual();
    let bound = rank_upper_bound(&spec)?;
    run.check(7, "UBPM_2 rank bound min(sparsity, dual sparsity + 1) = min(3, 17)", bound == 3, format!("bound {bound}"), None);
    let mut bad = None;
    let mut ranks = Vec::new();
    for alice in 0u64..16 {
        let part = PartitionSpec::split(alice, 4)?;
        let r = CommMatrix::from_oracle(&oracle, &part)?.rank_exact();
        let rd = CommMatrix::from_oracle(&dual, &part)?.rank_exact();
        ranks.push(r);
        if (r > bound || r.abs_diff(rd) > 1) && bad.is_none() {
            bad = Some(format!("{part} (rank {r}, dual rank {rd})"));
        }
    }
    run.check(7, "all 16 UBPM_2 partitions: rank <= 3 and |rank f - rank f*| <= 1", bad.is_none(), format!("ranks {ranks:?}"), bad);
    let a_side = PartitionSpec::split(0b0011, 4)?;
    let r = CommMatrix::from_oracle(&oracle, &a_side)?.rank_exact();
    run.check(7, "UBPM_2 A-side partition attains rank 3", r == 3, format!("rank {r}"), Some(a_side.to_string()));
    run.frozen(7, "rank.ubpm2.a_side", r);

    let spec3 = FunctionSpec::ubpm(3);
    let oracle3 = compile_oracle(&spec3)?;
    let dual3 = oracle3.dual();
    let bound3 = rank_upper_bound(&spec3)?;
    let mut rng = run.rng(0x7);
    let mut bad = None;
    for _ in 0..10 {
        let part = PartitionSpec::split(rng.gen_range(0u64..512), 9)?;
        let r = CommMatrix::from_oracle(&oracle3, &part)?.rank_exact();
        let rd = CommMatrix::from_oracle(&dual3, &part)?.rank_exact();
        if r > bound3 || r.abs_diff(rd) > 1 {
            bad = Some(format!("{part} (rank {r}, dual rank {rd})"));
            break;
        }
    }
    run.check(7, "10 seeded UBPM_3 partitions: rank <= bound and |rank f - rank f*| <= 1", bad.is_none(), format!("bound {bound3}, seed {}", run.opts.seed), bad);
    Ok(())
}

fn lifts(run: &mut Run) -> Result<()> {
    let mut cases = vec![
        (FunctionSpec::ubpm(2), Lift::And),
        (FunctionSpec::ubpm(2), Lift::Xor),
        (FunctionSpec::or(2), Lift::And),
        (FunctionSpec::or(2), Lift::Xor),
        (FunctionSpec::xor(2), Lift::And),
        (FunctionSpec::xor(2), Lift::Xor),
        (FunctionSpec::bm(2, 1), Lift::And),
        (FunctionSpec::bm(2, 1), Lift::Xor),
        (FunctionSpec::ubpm(3), Lift::And),
    ];
    if run.opts.long {
        cases.push((FunctionSpec::ubpm(3), Lift::Xor));
    }
    for (spec, lift) in cases {
        let (r, predicted) = lift_rank_check(&spec, lift)?;
        let what = if lift == Lift::And { "{0,1}-sparsity" } else { "Fourier sparsity" };
        run.check(
            7,
            format!("{}-lift rank of {spec} equals {what}", if lift == Lift::And { "AND" } else { "XOR" }),
            r == predicted,
            format!("rank {r}, predicted {predicted}"),
            Some(spec.clone().lifted(lift).to_string()),
        );
    }
    Ok(())
}

fn fooling(run: &mut Run) -> Result<()> {
    for m in 1..=4usize {
        let set = fooling_set_construct(m)?;
        let oracle = compile_oracle(&FunctionSpec::ubpm(2 * m))?;
        let violation = find_fooling_violation(&oracle, &set.partition, &set)?;
        let size_ok = set.len() as u64 == factorial(m);
        run.check(
            8,
            format!("fooling set for UBPM_{} verifies with |S| = {m}!", 2 * m),
            violation.is_none() && size_ok,
            format!("|S| = {}", set.len()),
            violation.map(|v| v.to_string()),
        );
    }
    let set = fooling_set_construct(2)?;
    let oracle = compile_oracle(&FunctionSpec::ubpm(4))?;
    let r = CommMatrix::from_oracle(&oracle, &set.partition)?.rank_exact();
    run.frozen(8, "rank.ubpm4.fooling_m2", r);
    run.check(8, "DHS: log2 |S| <= 2(log2 rank + 1) for UBPM_4, m=2", dhs_check(set.len(), r), format!("|S| = {}, rank {r}", set.len()), Some(set.partition.to_string()));
    let lb = rank_lower_bound(set.len());
    run.check(8, "1/2 log2 |S| - 1 <= log2 rank for UBPM_4, m=2", r as f64 >= lb, format!("rank {r} >= {lb:.4}"), Some(set.partition.to_string()));
    Ok(())
}

fn approx_corpus() -> Vec<FunctionSpec> {
    vec![
        FunctionSpec::ubpm(2),
        FunctionSpec::bpm(2),
        FunctionSpec::bm(2, 1),
        FunctionSpec::ubm(2, 1),
        FunctionSpec::max_match(2, 1),
        FunctionSpec::or(2),
        FunctionSpec::and(3),
        FunctionSpec::xor(2),
    ]
}

fn degree(spec: &FunctionSpec, eps: &BigRational) -> Result<usize> {
    Ok(approx_degree(&ApproxInstance::new(spec.clone(), eps.clone())?)?.degree)
}

fn appendix_a(run: &mut Run) -> Result<()> {
    let third = q(1, 3);
    let or2 = degree(&FunctionSpec::or(2), &third)?;
    let (e0, _) = best_error_at_degree(&compile_oracle(&FunctionSpec::or(2))?, 0)?;
    run.check(9, "deg_1/3(OR_2) = 1 by exact LP", or2 == 1 && e0 > third, format!("degree {or2}, best degree-0 error {e0}"), Some("or[2]".into()));

    let d = degree(&FunctionSpec::ubpm(2), &third)?;
    let dd = degree(&FunctionSpec::ubpm(2).dualized(), &third)?;
    run.check(9, "deg_1/3(UBPM_2) = deg_1/3(UBPM*_2)", d == dd, format!("{d} vs {dd}"), Some("ubpm[n=2]".into()));
    run.frozen(9, "approx.deg.eps_1_3.ubpm.n2", d);

    for n in [2usize, 3] {
        let p = ubpm_closed_form(n)?;
        let c = chebyshev_compress(&p, &third)?;
        let ok = c.max_error <= third && c.degree <= p.degree().unwrap_or(0) && c.degree <= c.bound;
        run.check(
            9,
            format!("chebyshev_compress on UBPM_{n} meets eps = 1/3 exhaustively"),
            ok,
            format!("error {}, degree {} (bound {}, input {})", c.max_error, c.degree, c.bound, p.degree().unwrap_or(0)),
            Some(format!("ubpm[n={n}]")),
        );
    }

    let grid = [q(1, 10), q(1, 5), q(1, 3)];
    let mut bad_mono = None;
    let mut bad_dual = None;
    for spec in approx_corpus() {
        let degs = grid.iter().map(|e| degree(&spec, e)).collect::<Result<Vec<_>>>()?;
        if degs.windows(2).any(|w| w[0] < w[1]) && bad_mono.is_none() {
            bad_mono = Some(format!("{spec}: {degs:?}"));
        }
        for (i, eps) in grid.iter().enumerate().filter(|(i, _)| *i != 1) {
            let dd = degree(&spec.clone().dualized(), eps)?;
            if dd != degs[i] && bad_dual.is_none() {
                bad_dual = Some(format!("{spec} at eps {eps}: {} vs {dd}", degs[i]));
            }
        }
    }
    run.check(9, "deg_eps nonincreasing in eps on the corpus (eps = 1/10, 1/5, 1/3)", bad_mono.is_none(), "", bad_mono);
    run.check(9, "deg_eps(f) = deg_eps(f*) on the corpus (eps = 1/10, 1/3)", bad_dual.is_none(), "", bad_dual);
    Ok(())
}

fn appendix_b(run: &mut Run) -> Result<()> {
    for (n, k) in [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)] {
        let e = bm_restriction_embed(n, k)?;
        let host = compile_oracle(&e.host_spec())?;
        let host_dual = host.dual();
        let bm = compile_oracle(&FunctionSpec::bm(n, k))?;
        let bm_dual = bm.dual();
        let bad = (0..1u64 << (n * n)).find(|&g| {
            let mut swapped = e.fixed_zeros;
            for (b, &hb) in e.image.iter().enumerate() {
                if g >> b & 1 == 1 {
                    swapped |= 1 << hb;
                }
            }
            host.eval(e.embed(g)) != bm.eval(g) || host_dual.eval(swapped) != bm_dual.eval(g)
        });
        run.check(
            10,
            format!("BM_({n},{k}) is BPM_{} restricted to fixed bicliques, and likewise for duals", e.host_n),
            bad.is_none(),
            format!("{} inputs", 1u64 << (n * n)),
            bad.map(|g| literal(n, g)),
        );
        if e.host_n <= 4 {
            let host_polys = MatchingPolys::new(e.host_n)?;
            let bm_poly = interpolate(&FunctionSpec::bm(n, k))?;
            let diff = first_diff(&e.restrict(&host_polys.bpm(), false)?, &bm_poly)
                .or(first_diff(&e.restrict(&host_polys.bpm_dual(), true)?, &bm_poly.dualize()));
            run.check(10, format!("polynomial restriction gives BM_({n},{k}) and its dual"), diff.is_none(), "", diff.map(|m| literal(n, m)));
        }
    }

    for n in [2usize, 3] {
        let mut bad = None;
        for k in 0..=n {
            if first_diff(&maxmatch_compose(n, k)?, &interpolate(&FunctionSpec::max_match(n, k))?).is_some() {
                bad = Some(format!("maxmatch[n={n},k={k}]"));
                break;
            }
        }
        run.check(10, format!("MaxMatch composition equals the oracle polynomial for all k, n={n}"), bad.is_none(), "", bad);
    }

    for n in 1..=4usize {
        for k in 1..=n {
            let g = sensitivity_subgraph(n, k)?;
            let (dl, dr) = ((n - k + 1) * (n - k + 1), k);
            let shape_ok = g.left_degree() == dl
                && g.right_degree() == dr
                && g.adjacency.len() == g.left.len() * dl
                && g.adjacency.len() == g.right.len() * dr;
            let radius = spectral_radius(&g)?;
            let expect = g.expected_radius();
            let close = (radius - expect).abs() <= SPECTRAL_TOLERANCE;
            let sensitive = g.is_sensitive_for(&compile_oracle(&FunctionSpec::bm(n, k))?)
                && g.is_sensitive_for(&compile_oracle(&FunctionSpec::ubm(n, k))?);
            run.check(
                10,
                format!("sensitivity subgraph n={n} k={k}: biregular ({dl},{dr}), radius sqrt({})", dl * dr),
                shape_ok && close && sensitive,
                format!("radius {radius:.12}, expected {expect:.12}, tolerance {SPECTRAL_TOLERANCE:e}"),
                Some(format!("n={n},k={k}")),
            );
        }
    }

    let mut rng = run.rng(0x11);
    let mut bad = None;
    for i in 0..100 {
        let nv = rng.gen_range(1..=6usize);
        let ta: Vec<bool> = (0..1 << nv).map(|_| rng.gen()).collect();
        let tb: Vec<bool> = (0..1 << nv).map(|_| rng.gen()).collect();
        let a = SparseMultilinearPoly::interpolate(|x| ta[x as usize], nv)?;
        let b = SparseMultilinearPoly::interpolate(|x| tb[x as usize], nv)?;
        let p = a.multiply(&b)?;
        let pointwise = SparseMultilinearPoly::interpolate(|x| ta[x as usize] && tb[x as usize], nv)?;
        if p.l1_norm() > a.l1_norm() * b.l1_norm() || p != pointwise {
            bad = Some(format!("pair index {i}"));
            break;
        }
    }
    run.check(10, "l1 submultiplicative under multiply on 100 seeded pairs", bad.is_none(), format!("seed {}", run.opts.seed), bad);
    Ok(())
}

/// `true` when every check passed.
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

/// Checks grouped by criterion, `1..=10`.
pub fn by_criterion(checks: &[Check]) -> Vec<(u8, Vec<&Check>)> {
    (1..=10u8)
        .map(|c| (c, checks.iter().filter(|x| x.criterion == c).collect()))
        .collect()
}
