//! Argument parsing and command dispatch.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matchlattice_core::approx::{
    approx_degree, chebyshev_compress, sensitivity_subgraph, spectral_radius, ApproxInstance,
};
use matchlattice_core::comm::{
    fooling_set_construct, find_fooling_violation, lift_rank_check, rank_lower_bound, rank_upper_bound, CommMatrix, PartitionSpec,
    DEFAULT_MAX_MATRIX_BITS,
};
use matchlattice_core::graph::all_perfect_matchings;
use matchlattice_core::lattice::MCLattice;
use matchlattice_core::matching::{indicator_closed_form, ubpm_closed_form, ubpm_dual_closed_form};
use matchlattice_core::{
    compile_oracle, BaseFunction, BipartiteGraph, Error, FunctionSpec, Lift, Result, SparseMultilinearPoly,
};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::emit::{fourier_json, mc_records, poly_json, rational_json, to_csv, to_json, PolyJson};
use crate::store::{default_path, Store};
use crate::suites::{all_passed, run_suite, Check, Options, Suite, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "matchlattice", version, about = "Exact computations on the matching-covered lattice")]
pub struct Cli {
    /// Emit JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit CSV where the output is tabular.
    #[arg(long, global = true, conflicts_with = "json")]
    pub csv: bool,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Include the slow tier of checks.
    #[arg(long, global = true)]
    pub long: bool,
    /// Record regression values instead of comparing them.
    #[arg(long, global = true)]
    pub freeze: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the matching-covered subgraphs of K_{n,n}.
    EnumerateMc {
        #[arg(long)]
        n: usize,
        /// Permit n = 5 (scans 2^25 masks).
        #[arg(long)]
        allow_n5: bool,
    },
    /// Print the multilinear polynomial of a function.
    Poly {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, value_enum, default_value_t = Basis::Zero1)]
        basis: Basis,
        #[arg(long, value_enum, default_value_t = Method::Interpolate)]
        method: Method,
    },
    /// Norms, sparsity and degrees of a function's polynomial.
    Stats {
        #[command(flatten)]
        function: FunctionArgs,
    },
    /// Exact rank of the communication matrix.
    Rank {
        #[command(flatten)]
        function: FunctionArgs,
        /// Partition literal `alice=0x..,bob=0x..`.
        #[arg(long, conflicts_with = "alice")]
        partition: Option<String>,
        /// Alice's variable mask; Bob gets the rest.
        #[arg(long)]
        alice: Option<String>,
    },
    /// Compare the rank of a lifted function with its predicted sparsity.
    LiftRank {
        #[command(flatten)]
        function: FunctionArgs,
    },
    /// Build and verify the fooling set for UBPM_{2m}.
    FoolingSet {
        #[arg(long)]
        m: usize,
        /// Check every pair and cross pair against the oracle.
        #[arg(long)]
        verify: bool,
        /// Also compute the rank of the communication matrix.
        #[arg(long)]
        rank: bool,
    },
    /// Least degree of an eps-approximation, by exact LP.
    ApproxDegree {
        #[command(flatten)]
        function: FunctionArgs,
        /// Error bound as a fraction, e.g. 1/3.
        #[arg(long)]
        eps: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Chebyshev compression of a function's polynomial.
    Compress {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long)]
        eps: String,
    },
    /// Spectral radius of the (k−1, k) matching sensitivity subgraph.
    Spectral {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    #[value(name = "01")]
    Zero1,
    #[value(name = "pm1")]
    Pm1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Lattice closed form (ubpm, ubpm-dual, indicator).
    ClosedForm,
    /// Möbius interpolation of the oracle.
    Interpolate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionKind {
    Ubpm,
    UbpmDual,
    Bpm,
    BpmDual,
    Bm,
    Ubm,
    Maxmatch,
    Indicator,
    And,
    Or,
    Xor,
    Const,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LiftArg {
    None,
    And,
    Xor,
}

#[derive(Debug, Clone, Args)]
pub struct FunctionArgs {
    #[arg(long = "function", value_enum)]
    pub kind: FunctionKind,
    /// Side size for graph functions.
    #[arg(long)]
    pub n: Option<usize>,
    /// Matching size for bm, ubm and maxmatch.
    #[arg(long)]
    pub k: Option<usize>,
    /// Variable count for and, or, xor and const.
    #[arg(long)]
    pub vars: Option<usize>,
    /// Value of const (0 or 1).
    #[arg(long)]
    pub value: Option<u8>,
    /// Indicator set: masks or graph literals, or `pm` / `mc`.
    #[arg(long, value_delimiter = ',')]
    pub set: Vec<String>,
    /// Use the dual function.
    #[arg(long)]
    pub dual: bool,
    #[arg(long, value_enum, default_value_t = LiftArg::None)]
    pub lift: LiftArg,
}

fn required(v: Option<usize>, flag: &str, kind: FunctionKind) -> Result<usize> {
    v.ok_or_else(|| Error::Parameter(format!("--{flag} is required for {kind:?}").to_lowercase()))
}

fn indicator_set(n: usize, items: &[String]) -> Result<Vec<BipartiteGraph>> {
    let mut out = Vec::new();
    for item in items {
        match item.trim() {
            "pm" => out.extend(all_perfect_matchings(n)?.iter().map(|m| m.graph())),
            "mc" => out.extend(MCLattice::new(n)?.mc_elements()),
            lit => {
                let g: BipartiteGraph = if lit.starts_with("n=") {
                    lit.parse()?
                } else {
                    BipartiteGraph::new(n, parse_mask(lit)?)?
                };
                if g.n() != n {
                    return Err(Error::Parameter(format!("set element {g} does not have side {n}")));
                }
                out.push(g);
            }
        }
    }
    out.sort_by_key(|g| g.mask());
    out.dedup();
    Ok(out)
}

impl FunctionArgs {
    /// The function without its lift.
    pub fn base_spec(&self) -> Result<FunctionSpec> {
        let kind = self.kind;
        let spec = match kind {
            FunctionKind::Ubpm => FunctionSpec::ubpm(required(self.n, "n", kind)?),
            FunctionKind::UbpmDual => FunctionSpec::ubpm(required(self.n, "n", kind)?).dualized(),
            FunctionKind::Bpm => FunctionSpec::bpm(required(self.n, "n", kind)?),
            FunctionKind::BpmDual => FunctionSpec::bpm(required(self.n, "n", kind)?).dualized(),
            FunctionKind::Bm => FunctionSpec::bm(required(self.n, "n", kind)?, required(self.k, "k", kind)?),
            FunctionKind::Ubm => FunctionSpec::ubm(required(self.n, "n", kind)?, required(self.k, "k", kind)?),
            FunctionKind::Maxmatch => {
                FunctionSpec::max_match(required(self.n, "n", kind)?, required(self.k, "k", kind)?)
            }
            FunctionKind::Indicator => {
                let n = required(self.n, "n", kind)?;
                FunctionSpec::indicator(n, &indicator_set(n, &self.set)?)
            }
            FunctionKind::And => FunctionSpec::and(required(self.vars, "vars", kind)?),
            FunctionKind::Or => FunctionSpec::or(required(self.vars, "vars", kind)?),
            FunctionKind::Xor => FunctionSpec::xor(required(self.vars, "vars", kind)?),
            FunctionKind::Const => {
                let value = match self.value {
                    Some(0) => false,
                    Some(1) => true,
                    _ => return Err(Error::Parameter("--value must be 0 or 1 for const".into())),
                };
                FunctionSpec::constant(required(self.vars, "vars", kind)?, value)
            }
        };
        let spec = if self.dual { spec.dualized() } else { spec };
        spec.validate()?;
        Ok(spec)
    }

    pub fn lift(&self) -> Lift {
        match self.lift {
            LiftArg::None => Lift::None,
            LiftArg::And => Lift::And,
            LiftArg::Xor => Lift::Xor,
        }
    }

    pub fn spec(&self) -> Result<FunctionSpec> {
        let spec = self.base_spec()?.lifted(self.lift());
        spec.validate()?;
        Ok(spec)
    }
}

fn interpolate(spec: &FunctionSpec) -> Result<SparseMultilinearPoly> {
    let oracle = compile_oracle(spec)?;
    SparseMultilinearPoly::interpolate(oracle.as_fn(), oracle.n_vars())
}

fn closed_form(spec: &FunctionSpec) -> Result<SparseMultilinearPoly> {
    if spec.lift != Lift::None {
        return Err(Error::Parameter("closed forms exist only for unlifted functions".into()));
    }
    match (&spec.base, spec.dual) {
        (BaseFunction::Ubpm { n }, false) => ubpm_closed_form(*n),
        (BaseFunction::Ubpm { n }, true) => ubpm_dual_closed_form(*n),
        (BaseFunction::Indicator { n, set }, false) => {
            let set = set.iter().map(|&m| BipartiteGraph::new(*n, m)).collect::<Result<Vec<_>>>()?;
            indicator_closed_form(*n, &set)
        }
        _ => Err(Error::Parameter(format!("no closed form for {spec}"))),
    }
}

fn parse_eps(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| Error::Parameter(format!("eps `{s}` is not a fraction P/Q")))
}

fn parse_mask(s: &str) -> Result<u64> {
    matchlattice_core::graph::parse_mask(s)
}

/// Alice's default share: the edges at left vertex 1 for graph functions,
/// the low half of the variables otherwise.
fn default_partition(spec: &FunctionSpec) -> Result<PartitionSpec> {
    let n_vars = spec.n_vars();
    let alice = match (spec.side(), spec.lift) {
        (Some(n), Lift::None) => (1u64 << n) - 1,
        _ => (1u64 << (n_vars / 2)) - 1,
    };
    PartitionSpec::split(alice, n_vars)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// A verification failed; carries the first counterexample.
    Failed(String),
}

pub struct Output {
    /// Rendered JSON; object keys follow the struct or macro order.
    pub json: String,
    pub text: String,
    pub csv: Option<String>,
    pub outcome: Outcome,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json: to_json(&json), text, csv: None, outcome: Outcome::Ok }
    }
}

#[derive(Serialize)]
struct CheckRow<'a> {
    suite: &'a str,
    criterion: u8,
    name: &'a str,
    pass: bool,
    detail: &'a str,
    counterexample: &'a str,
}

fn verify(cli: &Cli, suite: &str, n: Option<usize>) -> Result<Output> {
    let suite: Suite = suite.parse()?;
    let path = default_path();
    let mut store = Store::load(&path, cli.freeze)
        .map_err(|e| Error::Parameter(format!("cannot read store {}: {e}", path.display())))?;
    let opts = Options { seed: cli.seed, long: cli.long, n };
    let checks: Vec<Check> = run_suite(suite, &opts, &mut store)?;
    if cli.freeze {
        store
            .save()
            .map_err(|e| Error::Resource(format!("cannot write store {}: {e}", path.display())))?;
    }
    let passed = all_passed(&checks);
    let mut text = format!("seed: {}\nsuite: {suite}{}\n", cli.seed, if cli.long { " (long)" } else { "" });
    for c in &checks {
        text.push_str(&format!(
            "{} [criterion {}] {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.criterion,
            c.suite,
            c.name
        ));
        if !c.detail.is_empty() {
            text.push_str(&format!(" ({})", c.detail));
        }
        if let Some(x) = &c.counterexample {
            text.push_str(&format!(" counterexample: {x}"));
        }
        text.push('\n');
    }
    let failures = checks.iter().filter(|c| !c.pass).count();
    text.push_str(&format!("{} checks, {failures} failed\n", checks.len()));
    let rows: Vec<CheckRow> = checks
        .iter()
        .map(|c| CheckRow {
            suite: c.suite,
            criterion: c.criterion,
            name: &c.name,
            pass: c.pass,
            detail: &c.detail,
            counterexample: c.counterexample.as_deref().unwrap_or(""),
        })
        .collect();
    let outcome = match checks.iter().find(|c| !c.pass) {
        None => Outcome::Ok,
        Some(c) => Outcome::Failed(format!(
            "{}: {}: counterexample {}",
            c.suite,
            c.name,
            c.counterexample.as_deref().unwrap_or("(none)")
        )),
    };
    Ok(Output {
        json: to_json(&json!({
            "seed": cli.seed,
            "suite": suite.name(),
            "long": cli.long,
            "passed": passed,
            "checks": checks,
        })),
        text,
        csv: Some(to_csv(&rows)),
        outcome,
    })
}

/// Executes a parsed command.
pub fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::EnumerateMc { n, allow_n5 } => {
            let lattice = MCLattice::build(*n, *allow_n5)?;
            let records = mc_records(&lattice)?;
            let mut text = format!("n={n} count={}\n", records.len());
            for (r, g) in records.iter().zip(lattice.mc_elements()) {
                text.push_str(&format!("{g} chi={} rank={} permanent={}\n", r.chi, r.rank, r.permanent));
            }
            Ok(Output {
                json: to_json(&records),
                text,
                csv: Some(to_csv(&records)),
                outcome: Outcome::Ok,
            })
        }
        Command::Poly { function, basis, method } => {
            let spec = function.spec()?;
            let p = match method {
                Method::ClosedForm => closed_form(&spec)?,
                Method::Interpolate => interpolate(&spec)?,
            };
            let p: PolyJson = match basis {
                Basis::Zero1 => poly_json(&p),
                Basis::Pm1 => fourier_json(&p.to_fourier()),
            };
            Ok(Output { json: to_json(&p), text: p.to_text(), csv: Some(p.to_csv()), outcome: Outcome::Ok })
        }
        Command::Stats { function } => {
            let spec = function.spec()?;
            let p = interpolate(&spec)?;
            let fourier = p.to_fourier();
            let deg = p.degree().unwrap_or(0);
            let deg2 = p.deg2().unwrap_or(0);
            let log3 = (p.sparsity().max(1) as f64).log(3.0);
            let json = json!({
                "function": spec.to_string(),
                "n_vars": p.n_vars(),
                "sparsity": p.sparsity(),
                "l1": p.l1_norm().to_string(),
                "degree": deg,
                "deg2": deg2,
                "fourier_sparsity": fourier.sparsity(),
                "fourier_l1": fourier.l1_norm().to_string(),
                "log3_sparsity": log3,
            });
            let text = format!(
                "function: {spec}\nn_vars: {}\nsparsity: {}\nl1: {}\ndegree: {deg}\ndeg2: {deg2}\nfourier_sparsity: {}\nfourier_l1: {}\nlog3_sparsity: {log3:.6}\n",
                p.n_vars(),
                p.sparsity(),
                p.l1_norm(),
                fourier.sparsity(),
                fourier.l1_norm()
            );
            Ok(Output::ok(json, text))
        }
        Command::Rank { function, partition, alice } => {
            let spec = function.spec()?;
            let n_vars = spec.n_vars();
            let part = match (partition, alice) {
                (Some(lit), _) => {
                    let p: PartitionSpec = lit.parse()?;
                    PartitionSpec::new(p.alice, p.bob, n_vars)?
                }
                (None, Some(mask)) => PartitionSpec::split(parse_mask(mask)?, n_vars)?,
                (None, None) => default_partition(&spec)?,
            };
            let oracle = compile_oracle(&spec)?;
            let rank = CommMatrix::from_oracle_limited(&oracle, &part, DEFAULT_MAX_MATRIX_BITS)?.rank_exact();
            let dual_rank = CommMatrix::from_oracle_limited(&oracle.dual(), &part, DEFAULT_MAX_MATRIX_BITS)?.rank_exact();
            let bound = if spec.lift == Lift::None { Some(rank_upper_bound(&spec)?) } else { None };
            let json = json!({
                "function": spec.to_string(),
                "partition": part.to_string(),
                "rank": rank,
                "dual_rank": dual_rank,
                "bound": bound,
            });
            let mut text = format!("function: {spec}\npartition: {part}\nrank: {rank}\ndual rank: {dual_rank}\n");
            if let Some(b) = bound {
                text.push_str(&format!("upper bound: {b}\n"));
            }
            Ok(Output::ok(json, text))
        }
        Command::LiftRank { function } => {
            let lift = function.lift();
            if lift == Lift::None {
                return Err(Error::Parameter("lift-rank needs --lift and or --lift xor".into()));
            }
            let spec = function.base_spec()?;
            let (rank, predicted) = lift_rank_check(&spec, lift)?;
            let lifted = spec.clone().lifted(lift);
            let json = json!({ "function": lifted.to_string(), "rank": rank, "predicted": predicted, "equal": rank == predicted });
            let text = format!("function: {lifted}\nrank: {rank}\npredicted: {predicted}\n");
            let mut out = Output::ok(json, text);
            if rank != predicted {
                out.outcome = Outcome::Failed(format!("{lifted}: rank {rank} differs from predicted {predicted}"));
            }
            Ok(out)
        }
        Command::FoolingSet { m, verify, rank } => {
            let set = fooling_set_construct(*m)?;
            let oracle = compile_oracle(&FunctionSpec::ubpm(2 * m))?;
            let violation = if *verify { find_fooling_violation(&oracle, &set.partition, &set)? } else { None };
            let r = if *rank {
                Some(CommMatrix::from_oracle_limited(&oracle, &set.partition, DEFAULT_MAX_MATRIX_BITS)?.rank_exact())
            } else {
                None
            };
            let pairs: Vec<Value> = set
                .pairs
                .iter()
                .map(|&(x, y)| json!({ "alice": format!("0x{x:X}"), "bob": format!("0x{y:X}") }))
                .collect();
            let json = json!({
                "m": m,
                "partition": set.partition.to_string(),
                "size": set.len(),
                "verified": *verify,
                "valid": verify.then_some(violation.is_none()),
                "rank": r,
                "bound": rank_lower_bound(set.len()),
                "pairs": pairs,
            });
            let mut text = format!("partition: {}\nsize: {}\n", set.partition, set.len());
            if *verify {
                text.push_str(&format!("valid: {}\n", violation.is_none()));
            }
            if let Some(r) = r {
                text.push_str(&format!("rank: {r}\n"));
            }
            let mut out = Output::ok(json, text);
            if let Some(v) = violation {
                out.outcome = Outcome::Failed(v.to_string());
            }
            Ok(out)
        }
        Command::ApproxDegree { function, eps, cap } => {
            let spec = function.spec()?;
            let eps = parse_eps(eps)?;
            let inst = match cap {
                Some(c) => ApproxInstance::with_cap(spec.clone(), eps.clone(), *c)?,
                None => ApproxInstance::new(spec.clone(), eps.clone())?,
            };
            let r = approx_degree(&inst)?;
            let json = json!({
                "function": spec.to_string(),
                "eps": eps.to_string(),
                "degree": r.degree,
                "max_error": r.max_error.to_string(),
                "witness_terms": rational_json(&r.witness).terms,
            });
            let text = format!(
                "function: {spec}\neps: {eps}\ndegree: {}\nmax_error: {}\nwitness:\n{}",
                r.degree,
                r.max_error,
                rational_json(&r.witness).to_text()
            );
            Ok(Output::ok(json, text))
        }
        Command::Compress { function, eps } => {
            let spec = function.spec()?;
            let eps = parse_eps(eps)?;
            let p = interpolate(&spec)?;
            let c = chebyshev_compress(&p, &eps)?;
            let poly = rational_json(&c.poly);
            let json = json!({
                "function": spec.to_string(),
                "eps": eps.to_string(),
                "input_degree": p.degree().unwrap_or(0),
                "degree": c.degree,
                "bound": c.bound,
                "max_error": c.max_error.to_string(),
                "replaced": c.replaced,
                "polynomial": poly,
            });
            let text = format!(
                "function: {spec}\neps: {eps}\ninput degree: {}\ndegree: {}\nbound: {}\nmax_error: {}\nreplaced: {}\n",
                p.degree().unwrap_or(0),
                c.degree,
                c.bound,
                c.max_error,
                c.replaced
            );
            let csv = poly.to_csv();
            Ok(Output { json: to_json(&json), text, csv: Some(csv), outcome: Outcome::Ok })
        }
        Command::Spectral { n, k } => {
            let g = sensitivity_subgraph(*n, *k)?;
            let radius = spectral_radius(&g)?;
            let json = json!({
                "n": n,
                "k": k,
                "left": g.left.len(),
                "right": g.right.len(),
                "left_degree": g.left_degree(),
                "right_degree": g.right_degree(),
                "radius": radius,
                "expected": g.expected_radius(),
            });
            let text = format!(
                "left: {} vertices, degree {}\nright: {} vertices, degree {}\nradius: {radius:.12}\nexpected: {:.12}\n",
                g.left.len(),
                g.left_degree(),
                g.right.len(),
                g.right_degree(),
                g.expected_radius()
            );
            Ok(Output::ok(json, text))
        }
        Command::Verify { suite, n } => verify(cli, suite, *n),
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::Membership(_) | Error::Order(_) => 2,
        Error::Resource(_) => 3,
        Error::Numerical(_) | Error::Internal(_) => 1,
    }
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match execute(&cli) {
        Ok(output) => {
            let body = if cli.json {
                format!("{}\n", output.json)
            } else if cli.csv {
                match &output.csv {
                    Some(c) => c.clone(),
                    None => {
                        let _ = writeln!(err, "error: this command has no CSV form");
                        return 2;
                    }
                }
            } else {
                output.text.clone()
            };
            let _ = out.write_all(body.as_bytes());
            match output.outcome {
                Outcome::Ok => 0,
                Outcome::Failed(cex) => {
                    let _ = writeln!(err, "verification failed: {cex}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
