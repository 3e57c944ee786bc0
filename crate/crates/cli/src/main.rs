//! `ekr`: derangement-graph spectra and EKR verdicts from the command line.
//!
//! Exit codes: 0 certified or all checks passed, 2 inconclusive, partial or
//! failed checks, 1 on error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ekr_core::analysis::{analyze, brute, AnalysisReport, BruteReport, GroupSelector, RunConfig, WeightSpec};
use ekr_core::exec::Exec;
use ekr_core::groups::MatrixGroupSpec;
use ekr_core::rational::parse_rational;
use ekr_core::search::{DEFAULT_BUDGET, DEFAULT_MAX_ORDER};
use ekr_core::table::DEFAULT_CAP;
use ekr_core::verify::{verify, Scope, VerifyReport};

#[derive(Parser)]
#[command(name = "ekr", version, about = "Exact derangement-graph spectra and EKR bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum, bounds and verdict for one group.
    Analyze(AnalyzeArgs),
    /// Reproduce the desk-scale checks of one scope.
    VerifyPaper(VerifyArgs),
    /// Exact maximum intersecting set, clique search and rank of V.
    Brute(BruteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Psl,
    Pgl,
    Psu3,
    Sp,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct GroupArgs {
    /// Classical family, with --n and --q (--form for sp).
    #[arg(long, value_enum, group = "selector")]
    family: Option<FamilyArg>,
    #[arg(long, requires = "family")]
    n: Option<u32>,
    #[arg(long, requires = "family")]
    q: Option<u64>,
    /// Quadratic-form type of the Sp(2n,2) action.
    #[arg(long, value_enum, default_value = "plus")]
    form: FormArg,
    /// Generator file.
    #[arg(long, group = "selector")]
    file: Option<PathBuf>,
    /// Character table file.
    #[arg(long, group = "selector")]
    chartab: Option<PathBuf>,
    /// Element cap for enumeration.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Node budget of the exact searches.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Largest group order for the exact intersecting-set search.
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    search_max_order: usize,
    /// Run every loop on the calling thread.
    #[arg(long)]
    sequential: bool,
    /// Write the JSON report here (`-` for stdout instead of the summary).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// `unit`, `search`, class labels (`11A,11B`) or one rational per
    /// derangement class (`5/432,1/54,...`).
    #[arg(long, default_value = "unit")]
    weights: String,
    /// Also run the clique and intersecting-set searches.
    #[arg(long)]
    search: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// small-sporadics, suzuki, ree, psu3, psl, symplectic or all-desk.
    #[arg(long)]
    scope: String,
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct BruteArgs {
    #[command(flatten)]
    group: GroupArgs,
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn selector(g: &GroupArgs) -> Result<GroupSelector> {
    if let Some(f) = g.family {
        let need = |x: Option<u64>, name: &str| x.with_context(|| format!("--family needs --{name}"));
        let spec = match f {
            FamilyArg::Psl => MatrixGroupSpec::psl(need(g.n.map(u64::from), "n")? as u32, need(g.q, "q")?),
            FamilyArg::Pgl => MatrixGroupSpec::pgl(need(g.n.map(u64::from), "n")? as u32, need(g.q, "q")?),
            FamilyArg::Psu3 => MatrixGroupSpec::psu3(need(g.q, "q")?),
            FamilyArg::Sp => {
                MatrixGroupSpec::sp(need(g.n.map(u64::from), "n")? as u32, matches!(g.form, FormArg::Plus))
            }
        };
        spec.validate()?;
        return Ok(GroupSelector::Family { spec });
    }
    if let Some(p) = &g.file {
        return Ok(GroupSelector::File { path: p.clone() });
    }
    if let Some(p) = &g.chartab {
        return Ok(GroupSelector::Chartab { path: p.clone() });
    }
    bail!("choose a group with --family, --file or --chartab")
}

fn parse_weights(s: &str) -> Result<WeightSpec> {
    Ok(match s {
        "unit" => WeightSpec::Unit,
        "search" => WeightSpec::Search,
        _ => {
            let items: Vec<&str> = s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
            if items.is_empty() {
                bail!("empty weight list");
            }
            let rationals: Option<Vec<_>> = items.iter().map(|x| parse_rational(x)).collect();
            match rationals {
                Some(v) => WeightSpec::Explicit(v),
                None => WeightSpec::Classes(items.iter().map(|x| x.to_string()).collect()),
            }
        }
    })
}

fn config(g: &GroupArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(selector(g)?);
    cfg.cap = g.cap;
    cfg.budget = g.budget;
    cfg.search_max_order = g.search_max_order;
    cfg.exec = exec(g.sequential);
    Ok(cfg)
}

/// Writes the JSON report; returns whether it went to stdout.
fn emit<T: serde::Serialize>(report: &T, path: Option<&PathBuf>) -> Result<bool> {
    let json = serde_json::to_string_pretty(report)? + "\n";
    match path {
        Some(p) if p.as_os_str() == "-" => {
            std::io::stdout().write_all(json.as_bytes())?;
            Ok(true)
        }
        Some(p) => {
            std::fs::write(p, json).with_context(|| format!("writing {}", p.display()))?;
            Ok(false)
        }
        None => Ok(false),
    }
}

fn print_analysis(r: &AnalysisReport) {
    println!("group      {} (degree {}, order {})", r.group.name, r.group.degree, r.group.order);
    println!(
        "derangements {} in classes {}",
        r.stats.derangement_count,
        r.stats.derangement_classes.join(" ")
    );
    if let Some(s) = &r.weight_search {
        println!("weights    search chose {{{}}} after {} subsets", s.units.join("; "), s.subsets_examined);
    }
    println!("spectrum");
    for e in &r.spectrum {
        println!("  {:>24}  x{}", e.value.to_string(), e.multiplicity);
    }
    for b in &r.bounds.bounds {
        let v = b.value.as_ref().map_or("-".to_string(), |v| v.to_string());
        let tight = if b.tight { "  = |G|/|Omega|" } else { "" };
        println!("bound      {:<18} {v}{tight}", format!("{:?}", b.name));
    }
    if let Some(c) = &r.clique {
        match &c.elements {
            Some(el) => println!("clique     size {} ({})", el.len(), c.method),
            None => println!("clique     none found (complete: {})", c.complete),
        }
    }
    if let Some(c) = &r.coclique {
        println!(
            "coclique   size {} {:?} (complete: {})",
            c.witness.size, c.witness.classification, c.complete
        );
    }
    for c in &r.checks {
        println!("{}  {}  {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if let Some(t) = r.trace_identity {
        println!("trace identity {}", if t { "holds" } else { "FAILS" });
    }
    println!("target     {}", r.bounds.target);
    println!("verdict    {:?}", r.bounds.verdict);
}

fn print_brute(r: &BruteReport) {
    println!("group      {} (degree {}, order {})", r.group.name, r.group.degree, r.group.order);
    let w = &r.coclique.witness;
    println!(
        "coclique   size {} {:?}{} (complete: {}, nodes {}, upper bound {})",
        w.size,
        w.classification,
        w.coset.map_or(String::new(), |(a, b)| format!(" alpha={a} beta={b}")),
        r.coclique.complete,
        r.coclique.nodes,
        r.coclique.upper_bound
    );
    match &r.clique.elements {
        Some(el) => println!("clique     size {} ({})", el.len(), r.clique.method),
        None => println!("clique     none found (complete: {})", r.clique.complete),
    }
    if let Some(k) = r.module_v_rank {
        println!("rank V     {k} (expected {})", r.expected_module_v_rank);
    }
    for c in &r.checks {
        println!("{}  {}  {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("target     {}", r.target);
}

fn print_verify(r: &VerifyReport) {
    for s in &r.sections {
        println!("== {}", s.name);
        for c in &s.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() || c.passed {
                println!("{status}  {}", c.name);
            } else {
                println!("{status}  {}  [{}]", c.name, c.detail);
            }
        }
    }
    println!("{} passed, {} failed", r.passed, r.failed);
}

fn code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze(a) => {
            let mut cfg = config(&a.group)?;
            cfg.weights = parse_weights(&a.weights)?;
            cfg.search = a.search;
            let r = analyze(&cfg)?;
            if !emit(&r, a.group.report.as_ref())? {
                print_analysis(&r);
            }
            Ok(code(r.certified()))
        }
        Command::VerifyPaper(v) => {
            let scope: Scope = v.scope.parse()?;
            let r = verify(scope, exec(v.sequential))?;
            if !emit(&r, v.report.as_ref())? {
                print_verify(&r);
            }
            Ok(code(r.all_passed()))
        }
        Command::Brute(b) => {
            let cfg = config(&b.group)?;
            let r = brute(&cfg)?;
            if !emit(&r, b.group.report.as_ref())? {
                print_brute(&r);
            }
            Ok(code(r.complete() && r.checks.iter().all(|c| c.passed)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors are errors, not inconclusive results
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
