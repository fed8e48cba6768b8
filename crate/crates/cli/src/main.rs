//! `cliquenorm`: clique bounds under degree-norm constraints from the command line.
//!
//! Exit status: 0 on success, 1 when a verification finds violations, 2 on
//! usage or input errors, 3 when a bound's hypothesis does not hold.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cliquenorm::bounds::{self, BoundResult, Regime};
use cliquenorm::entropy::{self, SetFamily, CHAIN_TOL};
use cliquenorm::graph::{self, count_cliques, Graph};
use cliquenorm::harness::{self, Construction, VerificationReport};
use cliquenorm::hypergraph::construct_complete_hyper;
use cliquenorm::realmath::{binom_int, CliqueParams};
use cliquenorm::{io as files, Error};

const THREADS_VAR: &str = "CLIQUENORM_THREADS";

#[derive(Parser)]
#[command(name = "cliquenorm", version, about = "Clique counts versus degree-sequence norms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Upper bound on the number of t-cliques given a degree-norm bound C.
    Bound(BoundArgs),
    /// Count t-cliques (or t-hypercliques) in a file.
    Count {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t: usize,
        /// Read a hypergraph file instead of a graph file.
        #[arg(long)]
        hyper: bool,
    },
    /// Write an extremal construction in the text file format.
    Construct(ConstructArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Entropy chain of the t-clique family and the inequality diagnostics.
    Entropy(EntropyArgs),
    /// Tabulate the bound as a function of p, as CSV.
    Sweep(SweepArgs),
}

#[derive(clap::Args)]
struct BoundArgs {
    /// Norm exponent; `inf` selects the maximum-degree bound (needs --n and --delta).
    #[arg(long)]
    p: f64,
    #[arg(long)]
    t: u32,
    #[arg(long = "C")]
    c: Option<f64>,
    /// Uniformity, for the hypergraph bound.
    #[arg(long)]
    r: Option<u32>,
    /// Subset size of the hypergraph norm.
    #[arg(long, default_value_t = 1)]
    j: u32,
    /// Vertex count, for the fixed-n bound or together with --delta.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    Clique,
    Disjoint,
    Gls,
    HyperComplete,
}

#[derive(clap::Args)]
struct ConstructArgs {
    #[arg(long = "type", value_enum)]
    kind: ConstructKind,
    /// Clique or hypergraph size.
    #[arg(long)]
    u: Option<usize>,
    /// Comma-separated clique sizes for `disjoint`.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    GraphsExhaustive,
    GraphsRandom,
    HyperExhaustive,
    FixedN,
    Tightness,
    Prop9,
}

#[derive(Clone, Copy, ValueEnum)]
enum TightKind {
    Clique,
    Disjoint,
    FixedN,
    HyperComplete,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    t: u32,
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    p: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    j: u32,
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 0.5)]
    edge_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lift the default size guard of exhaustive suites.
    #[arg(long)]
    allow_large: bool,
    #[arg(long, value_enum)]
    construction: Option<TightKind>,
    #[arg(long)]
    u: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 200)]
    grid: usize,
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct EntropyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    t: usize,
    /// Exponent for the claim diagnostics.
    #[arg(long)]
    p: Option<f64>,
    /// Comparison parameter for the claim diagnostics.
    #[arg(long)]
    u: Option<f64>,
    /// Read a hypergraph file and run the hypergraph diagnostic (needs --p, --u).
    #[arg(long)]
    hyper: bool,
    #[arg(long, default_value_t = 1)]
    j: usize,
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    t: u32,
    #[arg(long = "C")]
    c: f64,
    #[arg(long)]
    p_from: f64,
    #[arg(long)]
    p_to: f64,
    /// Number of intervals; the sweep has steps + 1 rows.
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append the ratio achieved by the best known construction of norm at most C.
    #[arg(long)]
    with_construction: bool,
}

enum Failure {
    Usage(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(msg) => Failure::Precondition(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let outcome = match cli.command {
        Command::Bound(args) => cmd_bound(&args),
        Command::Count { input, t, hyper } => cmd_count(&input, t, hyper),
        Command::Construct(args) => cmd_construct(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Entropy(args) => cmd_entropy(&args),
        Command::Sweep(args) => cmd_sweep(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("hypothesis not satisfied: {msg}");
            ExitCode::from(3)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn cmd_bound(args: &BoundArgs) -> CmdResult {
    if args.p.is_infinite() && args.p > 0.0 {
        let (Some(n), Some(delta)) = (args.n, args.delta) else {
            return Err(usage("--p inf needs --n and --delta"));
        };
        if n == 0 {
            return Err(usage("--n must be positive"));
        }
        let bound = bounds::chase_gls_bound(n as u64, delta, u64::from(args.t));
        if args.json {
            print_json(&json!({ "n": n, "delta": delta, "t": args.t, "bound": bound as f64 }))?;
        } else {
            println!("maximum degree {delta}, n = {n}");
            println!("bound: {bound}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let c = args.c.ok_or_else(|| usage("--C is required for finite p"))?;
    let result = match (args.r, args.n) {
        (Some(_), Some(_)) => return Err(usage("--r and --n cannot be combined")),
        (Some(r), None) => bounds::hyperclique_bound(args.p, args.t, r, args.j, c)?,
        (None, Some(n)) => bounds::fixed_n_bound(n, args.p, args.t, c)?,
        (None, None) => bounds::clique_bound(args.p, args.t, c)?,
    };
    if args.json {
        print_json(&result)?;
    } else {
        print_bound(&result);
    }
    Ok(ExitCode::SUCCESS)
}

fn print_bound(b: &BoundResult) {
    println!("regime: {}", b.regime);
    println!("u: {}", b.u);
    if b.regime == Regime::Supercritical {
        let show = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        println!("s_real: {}", show(b.s_real.map(|s| s.to_string())));
        println!("s_int: {}", show(b.s_int.map(|s| s.to_string())));
    }
    println!("bound: {}", b.bound);
}

fn cmd_count(input: &Path, t: usize, hyper: bool) -> CmdResult {
    let count = if hyper {
        files::read_hypergraph(input)?.count_hypercliques(t)?
    } else {
        count_cliques(&files::read_graph(input)?, t)
    };
    println!("{count}");
    Ok(ExitCode::SUCCESS)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_construct(args: &ConstructArgs) -> CmdResult {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("--type needs --{flag}")));
    let text = match args.kind {
        ConstructKind::Clique => files::format_graph(&Graph::complete(need(args.u, "u")?)),
        ConstructKind::Disjoint => {
            if args.sizes.is_empty() {
                return Err(usage("--type disjoint needs --sizes"));
            }
            files::format_graph(&graph::construct_disjoint_cliques(&args.sizes))
        }
        ConstructKind::Gls => files::format_graph(&graph::construct_gls(need(args.n, "n")?, need(args.delta, "delta")?)),
        ConstructKind::HyperComplete => {
            files::format_hypergraph(&construct_complete_hyper(need(args.u, "u")?, need(args.r, "r")?)?)
        }
    };
    write_output(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn single_p(args: &VerifyArgs) -> Result<f64, Failure> {
    match args.p.as_slice() {
        [p] => Ok(*p),
        _ => Err(usage("this suite takes exactly one --p")),
    }
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let need_n = || args.n.ok_or_else(|| usage("this suite needs --n"));
    let report = match args.suite {
        Suite::GraphsExhaustive => harness::verify_exhaustive_graphs(need_n()?, args.t, &args.p, args.allow_large)?,
        Suite::GraphsRandom => {
            harness::verify_random_graphs(need_n()?, args.samples, args.edge_prob, args.t, &args.p, args.seed)?
        }
        Suite::HyperExhaustive => {
            harness::verify_exhaustive_hypergraphs(need_n()?, args.r, args.j, args.t, &args.p, args.allow_large)?
        }
        Suite::FixedN => harness::verify_fixed_n(need_n()?, args.t, single_p(args)?, args.samples, args.seed)?,
        Suite::Tightness => return verify_tightness(args),
        Suite::Prop9 => return verify_prop9(args),
    };
    if args.json {
        print_json(&report)?;
    } else {
        print_report(&report);
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn print_report(r: &VerificationReport) {
    println!("suite: {}", r.suite);
    println!("instances: {}", r.instances_checked);
    println!("violations: {}", r.violations.len());
    for v in r.violations.iter().take(20) {
        println!("  instance {} at p = {}: k_t = {} > bound {} (norm {})", v.instance, v.p, v.k_t, v.bound, v.norm);
    }
    match &r.witness {
        Some(w) => println!("max ratio: {} (instance {}, p = {})", r.max_ratio, w.instance, w.p),
        None => println!("max ratio: - (no instance with a positive bound)"),
    }
    for s in &r.per_p {
        println!(
            "  p = {}: checked {}, violations {}, zero-bound skipped {}, max ratio {}",
            s.p, s.checked, s.violations, s.skipped_zero, s.max_ratio
        );
    }
    if let (Some(met), Some(failed)) = (r.precondition_met, r.precondition_failed) {
        println!("hypothesis met: {met}, not met: {failed}");
    }
    println!("elapsed: {:.3} s", r.elapsed_seconds);
}

fn verify_tightness(args: &VerifyArgs) -> CmdResult {
    let p = single_p(args)?;
    let kind = args.construction.ok_or_else(|| usage("tightness needs --construction"))?;
    let u = args.u.ok_or_else(|| usage("tightness needs --u"))?;
    let construction = match kind {
        TightKind::Clique => Construction::Clique { u },
        TightKind::Disjoint => Construction::DisjointCliques {
            m: args.m.ok_or_else(|| usage("--construction disjoint needs --m"))?,
            u,
        },
        TightKind::FixedN => Construction::FixedN {
            n: args.n.ok_or_else(|| usage("--construction fixed-n needs --n"))?,
            u,
        },
        TightKind::HyperComplete => Construction::CompleteHyper {
            u,
            r: args.r as usize,
            j: args.j as usize,
        },
    };
    let report = harness::verify_tightness(construction, args.t, p)?;
    if args.json {
        print_json(&report)?;
    } else {
        println!("construction: {:?}", report.construction);
        println!("k_t: {}", report.k_t);
        println!("norm: {}", report.norm);
        println!("bound: {}", report.bound.bound);
        println!("ratio: {}", report.ratio);
    }
    Ok(if report.is_tight() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify_prop9(args: &VerifyArgs) -> CmdResult {
    let report = harness::check_proposition9(single_p(args)?, args.t, args.grid)?;
    if args.json {
        print_json(&report)?;
    } else {
        println!("s_real: {}", report.s_real);
        println!("s_int: {}", report.s_int);
        println!("root residual: {}", report.root_residual);
        println!("unimodal: {}", report.unimodal_ok);
        println!("derivative sign monotone: {}", report.monotone_ok);
        println!("relative slope at s_real: {}", report.relative_slope);
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_entropy(args: &EntropyArgs) -> CmdResult {
    let mut out = serde_json::Map::new();
    let mut lines = Vec::new();
    let family = if args.hyper {
        SetFamily::from_hypercliques(&files::read_hypergraph(&args.input)?, args.t)?
    } else {
        SetFamily::from_cliques(&files::read_graph(&args.input)?, args.t)?
    };
    let chain = entropy::entropy_chain(&family);
    let lemma = entropy::lemma8_check(&chain, CHAIN_TOL);
    lines.push(format!("family size: {}", chain.family_size));
    for (k, (h, x)) in chain.prefix_entropy.iter().zip(&chain.x).enumerate() {
        lines.push(format!("k = {}: H = {h:.12} bits, x = {x:.12}", k + 1));
    }
    lines.push(format!("product of x: {}", chain.product));
    let margins: Vec<String> = lemma.margins.iter().map(|m| format!("{m:.12}")).collect();
    lines.push(format!("chain margins x_k - x_(k+1) - 1: [{}]", margins.join(", ")));
    lines.push(format!("chain holds: {}", lemma.holds));
    out.insert("chain".into(), serde_json::to_value(&chain)?);
    out.insert("lemma8".into(), serde_json::to_value(&lemma)?);

    if args.hyper {
        let (Some(p), Some(u)) = (args.p, args.u) else {
            return Err(usage("--hyper needs --p and --u"));
        };
        let h = files::read_hypergraph(&args.input)?;
        let d = entropy::hyper_entropy_diagnostic(&h, args.t, h.r(), args.j, p, u)?;
        lines.push(format!("norm inequality: {} <= {} ({})", d.lhs5, d.rhs5, d.eq5_ok));
        lines.push(format!("A B^p = {} vs target {}: {}", d.abp, d.abp_target, fmt_holds(d.abp_ok)));
        out.insert("hyper".into(), serde_json::to_value(&d)?);
    } else if let Some(p) = args.p {
        let g = files::read_graph(&args.input)?;
        let gap = entropy::claim6_gap(&g, args.t, p)?;
        lines.push(format!("degree inequality: {} <= {} (gap {})", gap.lhs, gap.rhs, gap.gap));
        out.insert("claim6".into(), serde_json::to_value(&gap)?);
        if let Some(u) = args.u {
            if p <= args.t as f64 - 1.0 {
                let c = entropy::claim_small_p(&g, args.t, p, u)?;
                lines.push(format!("x1 x2^p = {} vs u (u-1)^p = {}: {}", c.lhs, c.rhs, fmt_holds(c.holds)));
                out.insert("small_p".into(), serde_json::to_value(&c)?);
            } else {
                let c = entropy::claim7(&g, args.t, p, u)?;
                lines.push(format!("x1 x2^p = {} vs n (u-1)^p = {}: {}", c.lhs, c.rhs, fmt_holds(c.holds)));
                lines.push(format!("x1 <= n: {}", c.chain_n_ok));
                out.insert("claim7".into(), serde_json::to_value(&c)?);
            }
        }
    } else if args.u.is_some() {
        return Err(usage("--u needs --p"));
    }

    if args.json {
        print_json(&out)?;
    } else {
        for line in lines {
            println!("{line}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn fmt_holds(flag: Option<bool>) -> &'static str {
    match flag {
        Some(true) => "holds",
        Some(false) => "FAILS",
        None => "hypothesis not met",
    }
}

/// Fixed 12-significant-digit decimal rendering.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32 + 1;
    let decimals = (12 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `k_t / bound` for the best known construction with norm at most `C`.
fn construction_ratio(b: &BoundResult, t: u32, p: f64, c: f64) -> Option<f64> {
    if b.bound <= 0.0 {
        return None;
    }
    let count = match b.regime {
        Regime::Subcritical => binom_int(b.u.floor() as u64, u64::from(t)) as f64,
        Regime::Supercritical => {
            let s = b.s_int? as f64;
            let copies = ((c.ln() * p - s.ln() - p * (s - 1.0).ln()).exp() + 1e-9).floor();
            copies * binom_int(s as u64, u64::from(t)) as f64
        }
    };
    Some(count / b.bound)
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    if !(args.p_from > 0.0) || !(args.p_to > args.p_from) || !args.p_to.is_finite() || args.steps == 0 {
        return Err(usage("need 0 < p-from < p-to < inf and steps >= 1"));
    }
    CliqueParams::new(args.t, args.p_from)?;
    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout()),
    };
    let mut csv = csv::Writer::from_writer(sink);
    let mut header = vec!["p", "regime", "u", "bound"];
    if args.with_construction {
        header.push("construction_ratio");
    }
    csv.write_record(&header)?;
    let threshold = f64::from(args.t - 1);
    let mut previous: Option<(f64, Regime)> = None;
    for i in 0..=args.steps {
        let p = args.p_from + (args.p_to - args.p_from) * i as f64 / args.steps as f64;
        let b = bounds::clique_bound(p, args.t, args.c)?;
        if let Some((q, regime)) = previous {
            if regime != b.regime {
                eprintln!("regime changes from {regime} to {} between p = {q} and p = {p} (threshold {threshold})", b.regime);
            }
        }
        previous = Some((p, b.regime));
        let mut row = vec![sig12(p), b.regime.short_name().to_string(), sig12(b.u), sig12(b.bound)];
        if args.with_construction {
            row.push(construction_ratio(&b, args.t, p, args.c).map(sig12).unwrap_or_default());
        }
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(ExitCode::SUCCESS)
}
