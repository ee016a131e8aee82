//! Command-line front end: analyze, loop-derive, decompose, bound, solve,
//! id-check, reduce, hardness-demo and batch over the library modules.
//!
//! Exit codes: 0 positive verdict, 1 negative verdict, 2 indeterminate
//! (budget or bound prevented a definite answer), 3 operational error,
//! 64 usage error. Machine-readable mode (`--format json`) emits one
//! self-describing record per line with sorted keys; timing lives in its
//! own `elapsed_ms` field so the remaining record is stable across runs.

use std::fs;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use polyeq::algebra::{Element, FiniteAlgebra, DEFAULT_TABLE_BUDGET};
use polyeq::clone_closure::CloneConfig;
use polyeq::commutator::{nilpotency_degree, supernilpotency_degree_absorbing};
use polyeq::decomposition::{decompose, verify_decomposition};
use polyeq::error::Error;
use polyeq::hardness::{
    build_ap, coloring_from_witness, p_colorable, reduce_graph, GraphInstance,
};
use polyeq::malcev::{derive_loop, find_malcev, verify_malcev, LoopStructure, MalcevCheck};
use polyeq::ramsey::Bound;
use polyeq::solver::{
    brute_force_solve, check_identity, empirical_support_degree, loop_extended, normalize, solve,
    support_bound, DegreeStatus, Provenance, SolveReport, SupportDegreeConfig, Verdict,
};
use polyeq::term::{parse_term, Term};

#[derive(Parser)]
#[command(
    name = "polyeq",
    about = "Equation solvability and identity checking over finite algebras with a Mal'cev term",
    version
)]
struct Cli {
    /// Output format: human-readable text or one JSON record per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Seed for any sampled verification; recorded in all outputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Cap on distinct tables in clone closures.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    closure_cap: usize,

    /// Highest clone/template arity scanned by structure analyses.
    #[arg(long, global = true, default_value_t = 4)]
    max_arity: usize,

    /// Budget for exhaustive enumerations (tuples / table entries).
    #[arg(long, global = true, default_value_t = 1 << 24)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMode {
    /// Full-support search: the verdict is unconditional.
    Exact,
    /// Bounded-support search with -d or the certified empirical degree.
    Bounded,
}

#[derive(Args)]
struct AlgebraArg {
    /// Path to an algebra file.
    #[arg(long)]
    algebra: String,

    /// Mal'cev term to use (default: search for one).
    #[arg(long)]
    malcev: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Structure report: Mal'cev term, loop exponent, nilpotency and
    /// supernilpotency degrees.
    Analyze(AlgebraArg),
    /// Derive the loop x*y = m(x,0,y) and print its tables and exponent.
    LoopDerive(AlgebraArg),
    /// Canonical decomposition of a polynomial into 0-absorbing factors.
    Decompose {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// The polynomial f to decompose.
        #[arg(long)]
        term: String,
        /// Base tuple (comma separated, one value per variable; default 0s).
        #[arg(long)]
        base: Option<String>,
        /// Enumeration of the domain (comma separated permutation).
        #[arg(long)]
        enumeration: Option<String>,
        /// Truncation depth override.
        #[arg(long)]
        depth: Option<usize>,
        /// Verification is exhaustive up to this many tuples, sampled beyond.
        #[arg(long, default_value_t = 1 << 16)]
        verify_limit: usize,
    },
    /// The support-bound quantities e, nu, l, k, d and the practical bound.
    Bound(AlgebraArg),
    /// Decide solvability of lhs = rhs.
    Solve {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, value_enum, default_value_t = SolveMode::Exact)]
        mode: SolveMode,
        /// Support-size bound for bounded mode.
        #[arg(short, long)]
        d: Option<usize>,
    },
    /// Decide whether a term is identically 0.
    IdCheck {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        term: String,
        #[arg(long, value_enum, default_value_t = SolveMode::Exact)]
        mode: SolveMode,
        #[arg(short, long)]
        d: Option<usize>,
    },
    /// Emit the coloring-reduction term t_G for a graph.
    Reduce {
        /// Path to a graph file (`vertices N`, then `edge u v` lines).
        #[arg(long)]
        graph: String,
        #[arg(long)]
        p: usize,
        /// Also write the term to this file.
        #[arg(long)]
        emit_term: Option<String>,
    },
    /// End-to-end demo: solve t_G = p, extract the coloring, compare with
    /// the brute-force colorability oracle.
    HardnessDemo {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        p: usize,
    },
    /// Run a manifest of cases (one JSON object per line) and compare each
    /// record against its expectation.
    Batch {
        #[arg(long)]
        manifest: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Context {
        format: cli.format,
        seed: cli.seed,
        clone_config: CloneConfig {
            cap: cli.closure_cap,
            template_max_arity: cli.max_arity,
            ..CloneConfig::default()
        },
        max_arity: cli.max_arity,
        budget: cli.budget,
    };
    match run_command(&cli.command, &ctx) {
        Ok((code, record)) => {
            ctx.emit(&record);
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit(&e))
        }
    }
}

struct Context {
    format: Format,
    seed: u64,
    clone_config: CloneConfig,
    max_arity: usize,
    budget: u64,
}

impl Context {
    fn emit(&self, record: &Value) {
        match self.format {
            Format::Json => println!("{record}"),
            Format::Human => print_human(record),
        }
    }
}

/// Indeterminate outcomes (budgets, caps) exit 2; everything else
/// operational is 3.
fn error_exit(e: &Error) -> u8 {
    match e {
        Error::ClosureCapReached { .. }
        | Error::MalcevIndeterminate
        | Error::IndeterminateDegree(_)
        | Error::NilpotencyCapExceeded(_)
        | Error::NoExponent(_)
        | Error::TableOverBudget { .. }
        | Error::PowerOverBudget { .. } => 2,
        _ => 3,
    }
}

fn print_human(record: &Value) {
    fn line(key: &str, value: &Value) {
        match value {
            Value::String(s) => println!("{key}: {s}"),
            other => println!("{key}: {other}"),
        }
    }
    if let Value::Object(map) = record {
        for (key, value) in map {
            match value {
                Value::Object(inner) => {
                    println!("{key}:");
                    for (k, v) in inner {
                        print!("  ");
                        line(k, v);
                    }
                }
                Value::Array(items)
                    if items.iter().any(|v| v.is_object() || v.is_array()) =>
                {
                    println!("{key}:");
                    for item in items {
                        println!("  {item}");
                    }
                }
                other => line(key, other),
            }
        }
    } else {
        println!("{record}");
    }
}

fn load_algebra(path: &str) -> Result<FiniteAlgebra, Error> {
    let src = fs::read_to_string(path)?;
    FiniteAlgebra::parse(&src, DEFAULT_TABLE_BUDGET)
}

fn load_graph(path: &str) -> Result<GraphInstance, Error> {
    let src = fs::read_to_string(path)?;
    GraphInstance::parse(&src)
}

/// Finds or verifies a Mal'cev term and derives the loop structure.
fn setup_loop(
    algebra: &FiniteAlgebra,
    malcev: &Option<String>,
    config: &CloneConfig,
) -> Result<(Term, LoopStructure), Error> {
    let zero = algebra.zero()?;
    let term = match malcev {
        Some(src) => {
            let t = parse_term(src, algebra)?;
            match verify_malcev(algebra, &t)? {
                MalcevCheck::Holds => t,
                MalcevCheck::Fails { x, y, got } => {
                    return Err(Error::BadInput(format!(
                        "term is not Mal'cev: m({y},{x},{x}) or m({x},{x},{y}) gives {got}"
                    )));
                }
            }
        }
        None => find_malcev(algebra, config)?.ok_or_else(|| {
            Error::BadInput("the algebra has no Mal'cev term (saturated search)".into())
        })?,
    };
    let lp = derive_loop(algebra, &term, zero)?;
    Ok((term, lp))
}

fn parse_tuple(src: &str, n: usize) -> Result<Vec<Element>, Error> {
    src.split(',')
        .map(|t| {
            let v: usize = t
                .trim()
                .parse()
                .map_err(|_| Error::BadInput(format!("bad tuple entry `{t}`")))?;
            if v >= n {
                return Err(Error::ElementOutOfRange {
                    value: v,
                    domain: n,
                });
            }
            Ok(v)
        })
        .collect()
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Solvable(_) => "solvable",
        Verdict::Unsolvable => "unsolvable",
        Verdict::IdentityHolds => "identity-holds",
        Verdict::IdentityFails { .. } => "identity-fails",
    }
}

fn report_record(report: &SolveReport) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("verdict".into(), json!(verdict_name(&report.verdict)));
    match &report.verdict {
        Verdict::Solvable(w) => {
            map.insert("witness".into(), json!(w));
        }
        Verdict::IdentityFails { witness, value } => {
            map.insert("witness".into(), json!(witness));
            map.insert("value".into(), json!(value));
        }
        _ => {}
    }
    map.insert(
        "mode".into(),
        json!(match report.mode {
            polyeq::solver::Mode::Bounded => "bounded",
            polyeq::solver::Mode::BruteForce => "brute-force",
        }),
    );
    map.insert("support_size".into(), json!(report.support_size));
    map.insert("exact".into(), json!(report.exact));
    map.insert("evaluations".into(), json!(report.evaluations));
    map.insert(
        "elapsed_ms".into(),
        json!(report.elapsed.as_secs_f64() * 1000.0),
    );
    map
}

/// Exit code for a solve/id-check verdict: negatives under a non-exhaustive
/// bound are indeterminate, not disproofs.
fn verdict_exit(report: &SolveReport) -> u8 {
    match (&report.verdict, report.exact) {
        (Verdict::Solvable(_) | Verdict::IdentityHolds, true) => 0,
        (Verdict::Solvable(_), false) => 0,
        (Verdict::IdentityHolds, false) => 2,
        (Verdict::Unsolvable | Verdict::IdentityFails { .. }, true) => 1,
        (Verdict::IdentityFails { .. }, false) => 1,
        (Verdict::Unsolvable, false) => 2,
    }
}

fn run_command(command: &Command, ctx: &Context) -> Result<(u8, Value), Error> {
    match command {
        Command::Analyze(arg) => run_analyze(arg, ctx),
        Command::LoopDerive(arg) => run_loop_derive(arg, ctx),
        Command::Decompose {
            algebra,
            term,
            base,
            enumeration,
            depth,
            verify_limit,
        } => run_decompose(algebra, term, base, enumeration, *depth, *verify_limit, ctx),
        Command::Bound(arg) => run_bound(arg, ctx),
        Command::Solve {
            algebra,
            lhs,
            rhs,
            mode,
            d,
        } => run_solve(algebra, lhs, rhs, *mode, *d, ctx),
        Command::IdCheck {
            algebra,
            term,
            mode,
            d,
        } => run_id_check(algebra, term, *mode, *d, ctx),
        Command::Reduce {
            graph,
            p,
            emit_term,
        } => run_reduce(graph, *p, emit_term, ctx),
        Command::HardnessDemo { graph, p } => run_hardness_demo(graph, *p, ctx),
        Command::Batch { manifest } => run_batch(manifest, ctx),
    }
}

fn run_analyze(arg: &AlgebraArg, ctx: &Context) -> Result<(u8, Value), Error> {
    let algebra = load_algebra(&arg.algebra)?;
    let (malcev, lp) = setup_loop(&algebra, &arg.malcev, &ctx.clone_config)?;
    let nilpotency = nilpotency_degree(&algebra, ctx.max_arity.max(8), &ctx.clone_config)?;
    let sn = supernilpotency_degree_absorbing(&algebra, ctx.max_arity, &ctx.clone_config)?;
    let per_arity: Vec<Value> = sn
        .per_arity
        .iter()
        .map(|a| {
            json!({
                "arity": a.arity,
                "only_zero_absorbing": a.only_zero,
                "saturated": a.saturated,
            })
        })
        .collect();
    let record = json!({
        "command": "analyze",
        "algebra": arg.algebra,
        "malcev": malcev.to_string(),
        "e": lp.exponent,
        "nilpotency": nilpotency,
        "nu": sn.degree,
        "nu_indeterminate": sn.indeterminate,
        "per_arity": per_arity,
        "seed": ctx.seed,
    });
    let code = if sn.degree.is_some() { 0 } else { 2 };
    Ok((code, record))
}

fn run_loop_derive(arg: &AlgebraArg, ctx: &Context) -> Result<(u8, Value), Error> {
    let algebra = load_algebra(&arg.algebra)?;
    let (malcev, lp) = setup_loop(&algebra, &arg.malcev, &ctx.clone_config)?;
    let n = lp.n;
    let table_rows = |t: &[Element]| -> Vec<Vec<Element>> {
        t.chunks(n).map(|row| row.to_vec()).collect()
    };
    let record = json!({
        "command": "loop-derive",
        "algebra": arg.algebra,
        "malcev": malcev.to_string(),
        "zero": lp.zero,
        "e": lp.exponent,
        "mul": table_rows(&lp.mul),
        "ldiv": table_rows(&lp.ldiv),
        "rdiv": table_rows(&lp.rdiv),
        "seed": ctx.seed,
    });
    Ok((0, record))
}

fn run_decompose(
    arg: &AlgebraArg,
    term: &str,
    base: &Option<String>,
    enumeration: &Option<String>,
    depth: Option<usize>,
    verify_limit: usize,
    ctx: &Context,
) -> Result<(u8, Value), Error> {
    let algebra = load_algebra(&arg.algebra)?;
    let (_, lp) = setup_loop(&algebra, &arg.malcev, &ctx.clone_config)?;
    let f = parse_term(term, &algebra)?;
    let m = f.max_var();
    let n = algebra.domain_size;
    let base = match base {
        Some(src) => parse_tuple(src, n)?,
        None => vec![lp.zero; m],
    };
    let enumeration = match enumeration {
        Some(src) => parse_tuple(src, n)?,
        None => (0..n).collect(),
    };
    let sn = supernilpotency_degree_absorbing(&algebra, ctx.max_arity, &ctx.clone_config)?;
    let d = decompose(&algebra, &lp, &f, &enumeration, &base, depth, sn.degree)?;
    let report = verify_decomposition(&d, &lp, verify_limit, ctx.seed)?;
    let factors: Vec<Value> = d
        .factors
        .iter()
        .enumerate()
        .map(|(i, r)| json!({ "r": i, "term": r.term.to_string() }))
        .collect();
    let absorbing: Vec<Value> = d
        .absorbing
        .iter()
        .map(|a| json!({ "subset": a.subset, "term": a.term.to_string() }))
        .collect();
    let record = json!({
        "command": "decompose",
        "algebra": arg.algebra,
        "term": term,
        "m": m,
        "base": d.base,
        "enumeration": d.enumeration,
        "depth": d.depth,
        "nu": d.nu,
        "truncated_unverified": d.truncated_unverified,
        "factors": factors,
        "absorbing": absorbing,
        "verified": report.pass,
        "verify_exhaustive": report.exhaustive,
        "checked_tuples": report.checked_tuples,
        "seed": report.seed,
    });
    let code = if report.pass {
        0
    } else if d.truncated_unverified
        && report.absorbing_failures.is_empty()
        && report.product_failures.is_empty()
        && report.vanishing_failures.is_empty()
    {
        2
    } else {
        1
    };
    Ok((code, record))
}

fn run_bound(arg: &AlgebraArg, ctx: &Context) -> Result<(u8, Value), Error> {
    let algebra = load_algebra(&arg.algebra)?;
    let (_, lp) = setup_loop(&algebra, &arg.malcev, &ctx.clone_config)?;
    let sn = supernilpotency_degree_absorbing(&algebra, ctx.max_arity, &ctx.clone_config)?;
    let Some(nu) = sn.degree else {
        return Err(Error::IndeterminateDegree(
            "supernilpotency degree not certified within the arity budget".into(),
        ));
    };
    let mut sb = support_bound(&algebra, &lp, nu);
    if sb.d_practical.is_none() {
        let degree_config = SupportDegreeConfig {
            max_arity: ctx.max_arity,
            seed: ctx.seed,
            clone_config: ctx.clone_config.clone(),
            ..SupportDegreeConfig::default()
        };
        let empirical = empirical_support_degree(&algebra, &degree_config)?;
        if let DegreeStatus::CertifiedUpToArity(_) = empirical.status {
            sb.set_practical(empirical.d, Provenance::Empirical);
        }
    }
    let d_practical = sb.d_practical.map(|(d, prov)| {
        json!({
            "value": d,
            "provenance": match prov {
                Provenance::TheoreticalIfSmall => "theoretical-if-small",
                Provenance::Empirical => "empirical",
                Provenance::UserSupplied => "user-supplied",
            },
        })
    });
    let record = json!({
        "command": "bound",
        "algebra": arg.algebra,
        "e": sb.e,
        "nu": sb.nu,
        "l": sb.l.to_string(),
        "k": sb.k.to_string(),
        "d": match &sb.d {
            Bound::Finite(v) => json!({ "kind": "finite", "value": v.to_string() }),
            Bound::Symbolic(s) => json!({ "kind": "symbolic", "value": s }),
        },
        "d_practical": d_practical,
        "seed": ctx.seed,
    });
    Ok((0, record))
}

/// Support bound for bounded mode: an explicit -d wins, else the certified
/// empirical degree; heuristic degrees are refused.
fn bounded_d(
    algebra: &FiniteAlgebra,
    d: Option<usize>,
    ctx: &Context,
) -> Result<(usize, &'static str), Error> {
    if let Some(d) = d {
        return Ok((d, "user-supplied"));
    }
    let degree_config = SupportDegreeConfig {
        max_arity: ctx.max_arity,
        seed: ctx.seed,
        clone_config: ctx.clone_config.clone(),
        ..SupportDegreeConfig::default()
    };
    let empirical = empirical_support_degree(algebra, &degree_config)?;
    match empirical.status {
        DegreeStatus::CertifiedUpToArity(_) => Ok((empirical.d, "empirical")),
        DegreeStatus::Heuristic => Err(Error::IndeterminateDegree(
            "no certified support degree; pass -d explicitly".into(),
        )),
    }
}

fn run_solve(
    arg: &AlgebraArg,
    lhs: &str,
    rhs: &str,
    mode: SolveMode,
    d: Option<usize>,
    ctx: &Context,
) -> Result<(u8, Value), Error> {
    let algebra = load_algebra(&arg.algebra)?;
    let (_, lp) = setup_loop(&algebra, &arg.malcev, &ctx.clone_config)?;
    let ext = loop_extended(&algebra, &lp)?;
    let f = parse_term(lhs, &ext)?;
    let g = parse_term(rhs, &ext)?;
    let h = normalize(&f, &g);
    let m = h.max_var();
    let (d_use, d_provenance) = match mode {
        SolveMode::Exact => (m, "full-support"),
        SolveMode::Bounded => bounded_d(&algebra, d, ctx)?,
    };
    let report = solve(&ext, &lp, &h, d_use)?;
    let mut map = report_record(&report);
    map.insert("command".into(), json!("solve"));
    map.insert("algebra".into(), json!(arg.algebra));
    map.insert("lhs".into(), json!(lhs));
    map.insert("rhs".into(), json!(rhs));
    map.insert("m".into(), json!(m));
    map.insert("d_use".into(), json!(d_use));
    map.insert("d_provenance".into(), json!(d_provenance));
    map.insert("seed".into(), json!(ctx.seed));
    Ok((verdict_exit(&report), Value::Object(map)))
}

fn run_id_check(
    arg: &AlgebraArg,
    term: &str,
    mode: SolveMode,
    d: Option<usize>,
    ctx: &Context,
) -> Result<(u8, Value), Error> {
    let algebra = load_algebra(&arg.algebra)?;
    let (_, lp) = setup_loop(&algebra, &arg.malcev, &ctx.clone_config)?;
    let ext = loop_extended(&algebra, &lp)?;
    let h = parse_term(term, &ext)?;
    let m = h.max_var();
    let (d_use, d_provenance) = match mode {
        SolveMode::Exact => (m, "full-support"),
        SolveMode::Bounded => bounded_d(&algebra, d, ctx)?,
    };
    let report = check_identity(&ext, &lp, &h, d_use)?;
    let mut map = report_record(&report);
    map.insert("command".into(), json!("id-check"));
    map.insert("algebra".into(), json!(arg.algebra));
    map.insert("term".into(), json!(term));
    map.insert("m".into(), json!(m));
    map.insert("d_use".into(), json!(d_use));
    map.insert("d_provenance".into(), json!(d_provenance));
    map.insert("seed".into(), json!(ctx.seed));
    Ok((verdict_exit(&report), Value::Object(map)))
}

fn run_reduce(
    graph: &str,
    p: usize,
    emit_term: &Option<String>,
    ctx: &Context,
) -> Result<(u8, Value), Error> {
    let g = load_graph(graph)?;
    let t = reduce_graph(&g, p)?;
    let printed = t.to_string();
    if let Some(path) = emit_term {
        fs::write(path, format!("{printed}\n"))?;
    }
    let record = json!({
        "command": "reduce",
        "graph": graph,
        "p": p,
        "vertices": g.vertices,
        "edges": g.edges.len(),
        "term": printed,
        "term_length": t.length(),
        "seed": ctx.seed,
    });
    Ok((0, record))
}

fn run_hardness_demo(graph: &str, p: usize, ctx: &Context) -> Result<(u8, Value), Error> {
    let g = load_graph(graph)?;
    let ap = build_ap(p)?;
    let t = reduce_graph(&g, p)?;
    // the additive loop of Z_{p^2} via its Mal'cev term x - y + z
    let malcev = parse_term("plus(x1,plus(neg(x2),x3))", &ap.algebra)?;
    let lp = derive_loop(&ap.algebra, &malcev, 0)?;
    let h = normalize(&t, &Term::Const(p));
    let report = brute_force_solve(&ap.algebra, &lp, &h, ctx.budget)?;
    let oracle = p_colorable(&g, p, ctx.budget)?;
    let solver_positive = matches!(report.verdict, Verdict::Solvable(_));
    let coloring = match &report.verdict {
        Verdict::Solvable(witness) => {
            let mut w = witness.clone();
            w.resize(g.vertices, 0);
            Some(coloring_from_witness(&g, &w, p))
        }
        _ => None,
    };
    let agreement = solver_positive == oracle
        && coloring.as_ref().map_or(true, |c| c.proper);
    let mut map = report_record(&report);
    map.insert("command".into(), json!("hardness-demo"));
    map.insert("graph".into(), json!(graph));
    map.insert("p".into(), json!(p));
    map.insert("term_length".into(), json!(t.length()));
    map.insert(
        "coloring".into(),
        coloring
            .as_ref()
            .map(|c| json!({ "colors": c.colors, "proper": c.proper }))
            .unwrap_or(Value::Null),
    );
    map.insert("oracle_colorable".into(), json!(oracle));
    map.insert("agreement".into(), json!(agreement));
    map.insert("seed".into(), json!(ctx.seed));
    let code = if !agreement {
        3
    } else if solver_positive {
        0
    } else {
        1
    };
    Ok((code, Value::Object(map)))
}

/// Subset match: every field of `expected` must equal the record's field,
/// recursively for nested objects.
fn matches_expected(expected: &Value, record: &Value) -> bool {
    match (expected, record) {
        (Value::Object(exp), Value::Object(rec)) => exp
            .iter()
            .all(|(k, v)| rec.get(k).is_some_and(|r| matches_expected(v, r))),
        (e, r) => e == r,
    }
}

fn command_from_manifest(entry: &Map<String, Value>) -> Result<Command, Error> {
    let bad = |msg: &str| Error::BadInput(format!("manifest entry: {msg}"));
    let get_str = |key: &str| -> Result<String, Error> {
        entry
            .get(key)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| bad(&format!("missing string field `{key}`")))
    };
    let opt_str = |key: &str| entry.get(key).and_then(Value::as_str).map(str::to_string);
    let opt_usize = |key: &str| entry.get(key).and_then(Value::as_u64).map(|v| v as usize);
    let algebra_arg = || -> Result<AlgebraArg, Error> {
        Ok(AlgebraArg {
            algebra: get_str("algebra")?,
            malcev: opt_str("malcev"),
        })
    };
    let mode = || match entry.get("mode").and_then(Value::as_str) {
        None | Some("exact") => Ok(SolveMode::Exact),
        Some("bounded") => Ok(SolveMode::Bounded),
        Some(other) => Err(bad(&format!("unknown mode `{other}`"))),
    };
    match entry.get("command").and_then(Value::as_str) {
        Some("analyze") => Ok(Command::Analyze(algebra_arg()?)),
        Some("loop-derive") => Ok(Command::LoopDerive(algebra_arg()?)),
        Some("decompose") => Ok(Command::Decompose {
            algebra: algebra_arg()?,
            term: get_str("term")?,
            base: opt_str("base"),
            enumeration: opt_str("enumeration"),
            depth: opt_usize("depth"),
            verify_limit: opt_usize("verify_limit").unwrap_or(1 << 16),
        }),
        Some("bound") => Ok(Command::Bound(algebra_arg()?)),
        Some("solve") => Ok(Command::Solve {
            algebra: algebra_arg()?,
            lhs: get_str("lhs")?,
            rhs: get_str("rhs")?,
            mode: mode()?,
            d: opt_usize("d"),
        }),
        Some("id-check") => Ok(Command::IdCheck {
            algebra: algebra_arg()?,
            term: get_str("term")?,
            mode: mode()?,
            d: opt_usize("d"),
        }),
        Some("reduce") => Ok(Command::Reduce {
            graph: get_str("graph")?,
            p: opt_usize("p").ok_or_else(|| bad("missing `p`"))?,
            emit_term: opt_str("emit_term"),
        }),
        Some("hardness-demo") => Ok(Command::HardnessDemo {
            graph: get_str("graph")?,
            p: opt_usize("p").ok_or_else(|| bad("missing `p`"))?,
        }),
        Some(other) => Err(bad(&format!("unknown command `{other}`"))),
        None => Err(bad("missing `command`")),
    }
}

fn run_batch(manifest: &str, ctx: &Context) -> Result<(u8, Value), Error> {
    let src = fs::read_to_string(manifest)?;
    let mut cases = Vec::new();
    let mut failures = 0usize;
    for (lineno, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let entry: Value = serde_json::from_str(line)
            .map_err(|e| Error::BadInput(format!("manifest line {}: {e}", lineno + 1)))?;
        let Value::Object(entry) = entry else {
            return Err(Error::BadInput(format!(
                "manifest line {}: expected a JSON object",
                lineno + 1
            )));
        };
        let expected = entry.get("expected").cloned().unwrap_or(Value::Null);
        let expected_exit = entry.get("expected_exit").and_then(Value::as_u64);
        let command = command_from_manifest(&entry)?;
        let (code, record) = match run_command(&command, ctx) {
            Ok(v) => v,
            Err(e) => (error_exit(&e), json!({ "error": e.to_string() })),
        };
        let mut ok = true;
        if let Some(exp) = expected_exit {
            ok &= exp == code as u64;
        }
        if !expected.is_null() {
            ok &= matches_expected(&expected, &record);
        }
        if !ok {
            failures += 1;
        }
        cases.push(json!({
            "line": lineno + 1,
            "ok": ok,
            "exit": code,
            "expected": expected,
            "record": record,
        }));
    }
    if cases.is_empty() {
        eprintln!("warning: empty manifest, nothing checked");
    }
    let record = json!({
        "command": "batch",
        "manifest": manifest,
        "cases": cases.len(),
        "failures": failures,
        "results": cases,
        "seed": ctx.seed,
    });
    Ok((if failures == 0 { 0 } else { 1 }, record))
}
