//! `logpair`: command-line front end for exact log-pair computations.

mod manifest;
mod render;

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use logpair_core::catalog::{run_conic_example, run_family_example, run_hirzebruch_example};
use logpair_core::invariants::{bmy_check, euler_bound_check, log_chern, noether_check, noether_check_open};
use logpair_core::peeling::bark;
use logpair_core::pencil::analyze_adjoint_system;
use logpair_core::rational::{fmt_q, parse_q, q};
use logpair_core::search::{example4_search, Example4Instance, SearchReport};
use logpair_core::selftest::{run_selftest, DEFAULT_SEED};
use logpair_core::zariski::{verify_decomposition, zariski_decompose};
use logpair_core::{
    BarkResult, DivisorClass, DualGraph, Error, ExtractionPolicy, PencilReport, SearchSpec, SurfaceModel,
    ZariskiDecomposition,
};

use manifest::RunManifest;
use render::{canonical_json, key_values, Table};

#[derive(Parser, Debug)]
#[command(name = "logpair", version, about = "Exact computations on log smooth surface pairs")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write a run manifest with input and output sha256 digests.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bark and D# coefficients of a dual graph.
    Peel { graph: PathBuf },
    /// Zariski decomposition of a class over a candidate set of curves.
    Zariski {
        model: PathBuf,
        #[arg(long, value_name = "VEC")]
        class: String,
        #[arg(long, value_name = "FILE")]
        candidates: PathBuf,
    },
    /// Log Chern numbers and the identities relating them.
    Invariants {
        model: PathBuf,
        graph: PathBuf,
        /// Class of D; defaults to the sum of the graph's component classes.
        #[arg(long, value_name = "VEC")]
        class: Option<String>,
    },
    /// Fixed parts and residual pencil of the adjoint system |K + D|.
    Pencil {
        model: PathBuf,
        #[arg(long, value_name = "VEC")]
        divisor: String,
        #[arg(long, value_name = "FILE")]
        candidates: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Policy::NegativePairing)]
        policy: Policy,
    },
    /// Built-in worked examples.
    Example {
        #[command(subcommand)]
        action: ExampleAction,
    },
    /// Parameter sweeps.
    Search {
        #[command(subcommand)]
        target: SearchTarget,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Policy {
    NegativePairing,
    Asserted,
}

impl From<Policy> for ExtractionPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::NegativePairing => ExtractionPolicy::NegativePairing,
            Policy::Asserted => ExtractionPolicy::Asserted,
        }
    }
}

#[derive(Subcommand, Debug)]
enum ExampleAction {
    Run(ExampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExampleName {
    Ex2,
    Ex3,
    Ex4,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    name: ExampleName,
    /// Family parameter for ex3.
    #[arg(long, default_value_t = 2)]
    a: i64,
    #[arg(long, default_value_t = 10)]
    g: i64,
    #[arg(long, default_value_t = 3)]
    e: i64,
    #[arg(long, default_value_t = 8)]
    x: i64,
    #[arg(long, default_value_t = 1)]
    y: i64,
}

#[derive(Subcommand, Debug)]
enum SearchTarget {
    /// Grid over the Hirzebruch family; ranges are `lo:hi` or a single value.
    Ex4 {
        #[arg(long, value_parser = parse_range)]
        g: RangeInclusive<i64>,
        #[arg(long, value_parser = parse_range)]
        x: RangeInclusive<i64>,
        #[arg(long, value_parser = parse_range)]
        y: RangeInclusive<i64>,
        /// Defaults to 0..=g for each g.
        #[arg(long, value_parser = parse_range)]
        e: Option<RangeInclusive<i64>>,
        /// Emit every evaluated row, not only the feasible ones.
        #[arg(long)]
        all: bool,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once(':') {
        Some((lo, hi)) => Ok(parse(lo)?..=parse(hi)?),
        None => {
            let v = parse(s)?;
            Ok(v..=v)
        }
    }
}

/// A class given inline as a JSON array or as comma-separated rationals.
fn parse_class(s: &str) -> Result<DivisorClass, Error> {
    let t = s.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| Error::Parse(format!("class {t:?}: {e}")));
    }
    t.split(',').map(parse_q).collect::<Result<Vec<_>, _>>().map(DivisorClass)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Error carrying the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_internal() { 2 } else { 1 }, message: e.to_string() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure { code: 2, message: format!("{e:#}") }
    }
}

struct Output {
    text: String,
    inputs: Vec<PathBuf>,
    /// Exit code for a run that completed but whose checks failed.
    code: u8,
}

fn emit<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => canonical_json(value)?,
        Format::Table => table(),
    })
}

fn bark_table(b: &BarkResult) -> String {
    let mut t = Table::new(["component", "bark", "D# coefficient"]);
    for (id, s) in &b.sharp_coeffs {
        t.row([id.clone(), b.coefficients.get(id).map(fmt_q).unwrap_or_else(|| "0".into()), fmt_q(s)]);
    }
    let mut out = t.render();
    out.push('\n');
    out.push_str(&key_values(&[
        ("Bk^2", fmt_q(&b.bark_square)),
        ("tips", b.tips_count.to_string()),
        ("Bk^2 >= -tips", b.bound_ok.to_string()),
    ]));
    out
}

fn zariski_table(z: &ZariskiDecomposition, all_ok: bool) -> String {
    let mut t = Table::new(["candidate", "N coefficient"]);
    for (i, a) in z.support.iter().zip(&z.n_coeffs) {
        t.row([i.to_string(), fmt_q(a)]);
    }
    let mut out = key_values(&[
        ("X", z.input.to_string()),
        ("P", z.p.to_string()),
        ("N", z.n.to_string()),
        ("checks", all_ok.to_string()),
    ]);
    out.push('\n');
    out.push_str(&t.render());
    out
}

fn pencil_table(p: &PencilReport) -> String {
    let mut t = Table::new(["candidate", "class", "pairing"]);
    for f in &p.fixed_parts {
        t.row([f.candidate.to_string(), f.class.to_string(), fmt_q(&f.pairing)]);
    }
    let mut out = key_values(&[
        ("K + D", p.adjoint_class.to_string()),
        ("(K + D)^2", fmt_q(&p.big.square)),
        ("dim bound", p.big.dim_lower_bound.as_ref().map(fmt_q).unwrap_or_else(|| "-".into())),
        ("residual", p.residual.to_string()),
        ("F", p.pencil_class.to_string()),
        ("n", p.multiplicity.to_string()),
        ("g", fmt_q(&p.fiber_genus)),
        ("b", p.base_genus.to_string()),
        ("k", fmt_q(&p.k)),
    ]);
    out.push('\n');
    out.push_str(&t.render());
    for n in &p.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

fn search_table(r: &SearchReport) -> String {
    let mut t = Table::new(["g", "e", "x", "y", "(D)", "big", "eff", "fixed", "fixed(lattice)", "k", "feasible"]);
    for row in &r.rows {
        t.row([
            row.g.to_string(),
            row.e.to_string(),
            row.x.to_string(),
            row.y.to_string(),
            fmt_q(&row.d_value),
            fmt_q(&row.big_value),
            fmt_q(&row.effective_value),
            fmt_q(&row.fixed_part_value),
            fmt_q(&row.fixed_part_lattice_value),
            fmt_q(&row.k),
            row.feasible.to_string(),
        ]);
    }
    let list = |v: &[i64]| if v.is_empty() { "-".to_string() } else { v.iter().map(i64::to_string).collect::<Vec<_>>().join(",") };
    let mut iv = Table::new(["g", "printed interval", "exact interval", "printed system", "lattice system"]);
    for i in &r.intervals {
        iv.row([
            i.g.to_string(),
            list(&i.printed_interval),
            list(&i.exact_interval),
            list(&i.printed_system),
            list(&i.lattice_system),
        ]);
    }
    let mut out = format!("{} evaluated, {} feasible\n\n", r.evaluated, r.feasible);
    out.push_str(&t.render());
    out.push('\n');
    out.push_str(&iv.render());
    for c in &r.claims {
        out.push_str(&format!("claim: {} -> {}\n", c.claim, if c.holds { "holds" } else { "fails" }));
    }
    for n in &r.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let fmt = cli.format;
    let mut inputs = Vec::new();
    let mut code = 0;
    let text = match &cli.command {
        Command::Peel { graph } => {
            inputs.push(graph.clone());
            let g: DualGraph = read_json(graph)?;
            let b = bark(&g)?;
            emit(fmt, &b, || bark_table(&b))?
        }
        Command::Zariski { model, class, candidates } => {
            inputs.extend([model.clone(), candidates.clone()]);
            let m: SurfaceModel = read_json(model)?;
            let cands: Vec<DivisorClass> = read_json(candidates)?;
            let x = parse_class(class)?;
            let z = zariski_decompose(&m, &x, &cands)?;
            let check = verify_decomposition(&m, &z, &cands);
            if !check.all_ok {
                code = 2;
            }
            let mut doc = serde_json::to_value(&z).context("serialize decomposition")?;
            doc["checks"] = serde_json::to_value(&check).context("serialize checks")?;
            emit(fmt, &doc, || zariski_table(&z, check.all_ok))?
        }
        Command::Invariants { model, graph, class } => {
            inputs.extend([model.clone(), graph.clone()]);
            let m: SurfaceModel = read_json(model)?;
            let g: DualGraph = read_json(graph)?;
            let d = match class {
                Some(s) => parse_class(s)?,
                None => g.total_class(&m).ok_or_else(|| Failure::input("graph has no component classes; pass --class"))?,
            };
            let inv = log_chern(&m, &d, &g)?;
            let bk = bark(&g)?;
            let p_sq = &inv.c1bar_sq - &bk.bark_square;
            let doc = json!({
                "invariants": inv,
                "noether_ok": noether_check(&inv, &inv.d_sq),
                "noether_open_ok": noether_check_open(&inv, &inv.d_sq),
                "euler_bound": euler_bound_check(&inv, &m.hodge()),
                "bark_square": fmt_q(&bk.bark_square),
                "P_sq": fmt_q(&p_sq),
                "bmy_ok": bmy_check(&p_sq, &bk.bark_square, &q(inv.c2bar)),
                "bmy_open_ok": bmy_check(&p_sq, &bk.bark_square, &q(inv.e_open)),
            });
            emit(fmt, &doc, || {
                key_values(&[
                    ("(K + D)^2", fmt_q(&inv.c1bar_sq)),
                    ("c2bar", inv.c2bar.to_string()),
                    ("e(S - D)", inv.e_open.to_string()),
                    ("p_a(D)", inv.pa_d.to_string()),
                    ("r", inv.r.to_string()),
                    ("l", inv.l.to_string()),
                    ("m", inv.m.to_string()),
                    ("chi_bar", fmt_q(&inv.chi_bar)),
                    ("D^2", fmt_q(&inv.d_sq)),
                    ("K.D", fmt_q(&inv.k_dot_d)),
                    ("Bk^2", fmt_q(&bk.bark_square)),
                    ("log Noether", doc["noether_ok"].to_string()),
                    ("BMY", doc["bmy_ok"].to_string()),
                ])
            })?
        }
        Command::Pencil { model, divisor, candidates, policy } => {
            inputs.push(model.clone());
            let m: SurfaceModel = read_json(model)?;
            let cands: Vec<DivisorClass> = match candidates {
                Some(p) => {
                    inputs.push(p.clone());
                    read_json(p)?
                }
                None => Vec::new(),
            };
            let d = parse_class(divisor)?;
            let r = analyze_adjoint_system(&m, &d, &cands, (*policy).into())?;
            emit(fmt, &r, || pencil_table(&r))?
        }
        Command::Example { action: ExampleAction::Run(args) } => match args.name {
            ExampleName::Ex2 => {
                let r = run_conic_example()?;
                emit(fmt, &r, || pencil_table(&r.pencil))?
            }
            ExampleName::Ex3 => {
                let r = run_family_example(args.a)?;
                emit(fmt, &r, || pencil_table(&r.pencil))?
            }
            ExampleName::Ex4 => {
                let r = run_hirzebruch_example(Example4Instance::new(args.g, args.e, args.x, args.y)?)?;
                emit(fmt, &r, || pencil_table(&r.pencil))?
            }
        },
        Command::Search { target: SearchTarget::Ex4 { g, x, y, e, all } } => {
            let spec = SearchSpec { g: g.clone(), x: x.clone(), y: y.clone(), e: e.clone(), all_rows: *all };
            let r = example4_search(&spec)?;
            emit(fmt, &r, || search_table(&r))?
        }
        Command::Selftest { seed } => {
            let r = run_selftest(*seed);
            if r.unexpected_failures > 0 {
                code = 2;
            }
            emit(fmt, &r, || {
                let mut s: String = r.criteria.iter().map(|c| c.summary_line() + "\n").collect();
                s.push_str(&format!(
                    "{} passed, {} failed, {} unexpected\n",
                    r.passed, r.failed, r.unexpected_failures
                ));
                s
            })?
        }
    };
    Ok(Output { text, inputs, code })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if let Some(path) = &cli.manifest {
                let argv: Vec<String> = std::env::args().collect();
                if let Err(e) = RunManifest::new(argv, &out.inputs, &out.text).and_then(|m| m.write(path)) {
                    eprintln!("error: manifest: {e:#}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
