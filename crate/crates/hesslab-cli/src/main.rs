use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use hesslab::ci_cohomology::{primitive_middle_betti, CIProfile};
use hesslab::finitefield::{
    brute_fiber_count, count_quadric_intersection, nilpotent_representative, FormChoice, PrimeField, RegularTuple,
    DEFAULT_COUNT_BUDGET, DEFAULT_FIBER_BUDGET,
};
use hesslab::hessenberg::{fiber_poincare, fiber_reduce, FiberQuery, Flavor};
use hesslab::monodromy::{decompose_x, decompose_xtilde_minus};
use hesslab::orbits::{describe, local_systems, partitions_of};
use hesslab::springer::consistency_suite;
use hesslab::verify::{run_suite, Outcome, Scale, Suite, DEFAULT_SEED};
use hesslab::{Error, Partition};

#[derive(Parser)]
#[command(name = "hesslab", version, about = "Nilpotent orbits, Hessenberg fibers and quadric intersections for (SL(2n+1), SO(2n+1))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Shorthand for --format json.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, env = "HESSLAB_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    E,
    O,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Dims,
    Pavings,
    Counts,
    Springer,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Orbits in N_1^3 for N = 2n+1 with dimension, parity, gaps and local systems.
    Orbits {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Decomposition of the primitive cohomology of X_m (or of the σ = -1 part for the double cover).
    Decompose {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        tilde: bool,
    },
    /// Fiber polynomial over a nilpotent of the given shape, optionally checked by enumeration.
    Fiber {
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Parts separated by commas or '+', e.g. 3,2,1,1.
        #[arg(long)]
        partition: String,
        #[arg(long)]
        q: Option<u64>,
        /// Count the fiber over F_q by enumeration (needs --q).
        #[arg(long, requires = "q")]
        brute: bool,
        #[arg(long, default_value_t = DEFAULT_FIBER_BUDGET)]
        budget: u128,
    },
    /// Point counts of X_m (or the double cover) for seeded random regular tuples over F_q.
    Count {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        tilde: bool,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_COUNT_BUDGET)]
        budget: u128,
    },
    /// Consistency suite for the matching map at N = 2n+1.
    Springer {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Run acceptance suites.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        n_max: Option<u32>,
        /// Field sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<u64>>,
        #[arg(long)]
        trials: Option<u32>,
        /// Work budget for fiber enumeration.
        #[arg(long)]
        budget: Option<u128>,
        /// Budget in projective points for point counts.
        #[arg(long)]
        count_budget: Option<u128>,
    },
}

/// A command's result in all three renderings.
struct Output {
    command: &'static str,
    config: Value,
    results: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    text: String,
    ok: bool,
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).context("serializing results")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let format = if cli.json { Format::Json } else { cli.format };
    match run(&cli).and_then(|out| emit(&out, format).map(|()| out.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Orbits { n } => orbits(*n),
        Command::Decompose { n, m, tilde } => decompose(*n, *m, *tilde),
        Command::Fiber { flavor, n, m, partition, q, brute, budget } => {
            fiber(*flavor, *n, *m, partition, *q, *brute, *budget)
        }
        Command::Count { n, m, q, tilde, trials, budget } => count(*n, *m, *q, *tilde, *trials, *budget, cli.seed),
        Command::Springer { n } => springer(*n),
        Command::Verify { suite, n_max, q, trials, budget, count_budget } => {
            let scale = Scale {
                n_max: *n_max,
                q: q.clone(),
                trials: *trials,
                seed: cli.seed,
                fiber_budget: budget.unwrap_or(DEFAULT_FIBER_BUDGET),
                count_budget: count_budget.unwrap_or(DEFAULT_COUNT_BUDGET),
            };
            verify(*suite, scale)
        }
    }
}

fn emit(out: &Output, format: Format) -> Result<()> {
    let result = match format {
        Format::Json => {
            let doc = json!({"command": out.command, "config": out.config, "results": out.results});
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            std::io::stdout().lock().write_all(s.as_bytes())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            let mut r = w.write_record(&out.header);
            for row in &out.rows {
                r = r.and_then(|()| w.write_record(row));
            }
            r.map_err(std::io::Error::from).and_then(|()| w.flush())
        }
        Format::Text => std::io::stdout().lock().write_all(out.text.as_bytes()),
    };
    match result {
        // a closed pipe (e.g. `| head`) is not an error
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn orbits(n: u32) -> Result<Output> {
    let nn = 2 * n + 1;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut text = format!("orbits in N_1^3 for N = {nn}\n");
    for p in partitions_of(nn, Some(3)) {
        let d = describe(&p)?;
        let systems: Vec<String> = local_systems(&p)?.iter().map(|l| l.kind.to_string()).collect();
        results.push(json!({
            "partition": p,
            "dim": d.dim,
            "parity": d.parity,
            "gaps": d.gaps,
            "local_systems": systems,
        }));
        let parity = to_value(&d.parity)?.as_str().unwrap_or_default().to_string();
        writeln!(text, "{:<20} dim {:>4}  {:<4}  gaps {:<5}  {}", p.to_string(), d.dim, parity, d.gaps, systems.join(" "))?;
        rows.push(vec![p.to_string(), d.dim.to_string(), parity, d.gaps.to_string(), systems.join(";")]);
    }
    Ok(Output {
        command: "orbits",
        config: json!({"n": n}),
        results: Value::Array(results),
        header: vec!["partition", "dim", "parity", "gaps", "local_systems"],
        rows,
        text,
        ok: true,
    })
}

fn betti(ambient: u32, m: u32) -> Result<num_bigint::BigUint> {
    Ok(primitive_middle_betti(&CIProfile::quadrics(ambient, m)?)?)
}

fn decompose(n: u32, m: u32, tilde: bool) -> Result<Output> {
    let nn = 2 * n + 1;
    let table = if tilde { decompose_xtilde_minus(nn, m)? } else { decompose_x(nn, m)? };
    // the σ = -1 part is what the double cover adds to X
    let oracle = if tilde { betti(nn, m + 1)? - betti(nn - 1, m)? } else { betti(nn - 1, m)? };
    let matched = table.total == oracle;
    let mut text = format!("{} for N = {nn}\n", table.source);
    let mut rows = Vec::new();
    for s in &table.summands {
        let name = if s.family == hesslab::monodromy::Family::E { "E" } else { "Etilde" };
        writeln!(text, "  {name}_{{{},{}}}  dim {}", s.i, s.j, s.dim)?;
        rows.push(vec![name.to_string(), s.i.to_string(), s.j.to_string(), s.dim.to_string()]);
    }
    writeln!(text, "total {}  oracle {}  {}", table.total, oracle, if matched { "match" } else { "MISMATCH" })?;
    let oracle_json = match u64::try_from(&oracle) {
        Ok(v) => json!(v),
        Err(_) => json!(oracle.to_string()),
    };
    Ok(Output {
        command: "decompose",
        config: json!({"n": n, "m": m, "tilde": tilde}),
        results: json!({"table": to_value(&table)?, "oracle": oracle_json, "match": matched}),
        header: vec!["family", "i", "j", "dim"],
        rows,
        text,
        ok: matched,
    })
}

fn parse_partition(s: &str) -> Result<Partition> {
    let parts = s
        .split([',', '+'])
        .map(|t| t.trim().parse::<u32>().with_context(|| format!("bad part {t:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition::from_unsorted(parts)?)
}

fn fiber(flavor: FlavorArg, n: u32, m: u32, partition: &str, q: Option<u64>, brute: bool, budget: u128) -> Result<Output> {
    let nn = 2 * n + 1;
    let flavor = match flavor {
        FlavorArg::E => Flavor::E,
        FlavorArg::O => Flavor::O,
    };
    let p = parse_partition(partition)?;
    let query = FiberQuery::new(flavor, m, nn, p.clone())?;
    let in_image = query.in_image()?;
    let (poly, empty) = match fiber_reduce(&query) {
        Ok(_) => (fiber_poincare(flavor, m, nn, &p)?, false),
        Err(Error::EmptyFiber(_)) => (hesslab::PoincarePolynomial::zero(), true),
        Err(e) => return Err(e.into()),
    };
    let value = q.map(|q| poly.eval(q));
    let mut brute_count: Option<Result<u64, String>> = None;
    if brute {
        let q = q.expect("clap requires --q");
        let rep = nilpotent_representative(&p, q, FormChoice::Split)?;
        brute_count = Some(match brute_fiber_count(flavor, m, &rep, budget) {
            Ok(c) => Ok(c),
            Err(Error::OracleTooLarge { estimate, budget }) => Err(format!("skipped: estimate {estimate} > budget {budget}")),
            Err(e) => return Err(e.into()),
        });
    }
    let matched = match (&brute_count, &value) {
        (Some(Ok(c)), Some(v)) => Some(u64::try_from(v).ok() == Some(*c)),
        _ => None,
    };
    let mut text = format!("{flavor} fiber, m = {m}, N = {nn}, x = {p}\n");
    writeln!(text, "in image closure: {in_image}")?;
    writeln!(text, "polynomial: {poly}{}", if empty { " (empty fiber)" } else { "" })?;
    if let (Some(q), Some(v)) = (q, &value) {
        writeln!(text, "at q = {q}: {v}")?;
    }
    match &brute_count {
        Some(Ok(c)) => writeln!(text, "enumeration: {c} ({})", if matched == Some(true) { "match" } else { "MISMATCH" })?,
        Some(Err(s)) => writeln!(text, "enumeration {s}")?,
        None => {}
    }
    let brute_json = match &brute_count {
        Some(Ok(c)) => json!(c),
        Some(Err(s)) => json!(s),
        None => Value::Null,
    };
    let value_str = value.as_ref().map(ToString::to_string).unwrap_or_default();
    Ok(Output {
        command: "fiber",
        config: json!({"flavor": flavor, "n": n, "m": m, "partition": p, "q": q, "brute": brute}),
        results: json!({
            "in_image": in_image,
            "empty": empty,
            "polynomial": poly,
            "value": value.as_ref().map(ToString::to_string),
            "brute_force": brute_json,
            "match": matched,
        }),
        header: vec!["partition", "polynomial", "q", "value", "brute_force"],
        rows: vec![vec![
            p.to_string(),
            poly.to_string(),
            q.map(|q| q.to_string()).unwrap_or_default(),
            value_str,
            brute_json.to_string().trim_matches('"').replace("null", ""),
        ]],
        text,
        ok: matched != Some(false),
    })
}

fn count(n: u32, m: u32, q: u64, tilde: bool, trials: u32, budget: u128, seed: u64) -> Result<Output> {
    let nn = 2 * n + 1;
    let f = PrimeField::new(q)?;
    if nn as u64 > q {
        bail!("no {nn} distinct elements in F_{q}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let space = if tilde { "double cover" } else { "X" };
    let mut text = format!("{space} for N = {nn}, m = {m} over F_{q}, seed {seed}\n");
    for k in 0..trials {
        let t = RegularTuple::<PrimeField>::random(f.clone(), nn as usize, &mut rng)?;
        let c = match count_quadric_intersection(nn, m, &t, tilde, budget) {
            Ok(c) => json!(c),
            Err(Error::OracleTooLarge { estimate, budget }) => json!(format!("skipped: estimate {estimate} > budget {budget}")),
            Err(e) => return Err(e.into()),
        };
        let a: Vec<String> = t.a.iter().map(ToString::to_string).collect();
        let shown = c.to_string().trim_matches('"').to_string();
        writeln!(text, "  #{k} a = ({})  points {shown}", a.join(", "))?;
        rows.push(vec![k.to_string(), a.join(" "), shown]);
        results.push(json!({"trial": k, "a": t.a, "points": c}));
    }
    Ok(Output {
        command: "count",
        config: json!({"n": n, "m": m, "q": q, "tilde": tilde, "trials": trials, "seed": seed}),
        results: Value::Array(results),
        header: vec!["trial", "a", "points"],
        rows,
        text,
        ok: true,
    })
}

fn springer(n: u32) -> Result<Output> {
    let report = consistency_suite(n)?;
    let mut text = format!("matching map for N = {}\n", 2 * n + 1);
    for c in &report.checks {
        writeln!(text, "  {:<4} {:<28} {} = {}", if c.passed() { "pass" } else { "FAIL" }, c.name, c.lhs, c.rhs)?;
        if let Some(d) = &c.detail {
            writeln!(text, "       {d}")?;
        }
    }
    let mut rows = Vec::new();
    for img in &report.map {
        let orbit = img.orbit.as_ref().map(ToString::to_string).unwrap_or_else(|| "?".into());
        let system = img.system.as_ref().map(ToString::to_string).unwrap_or_else(|| "?".into());
        let status = to_value(&img.status)?.as_str().unwrap_or_default().to_string();
        let fam = img.source.family.to_string();
        writeln!(text, "  {fam}_{{{},{}}} -> ({orbit}, {system})  {status}", img.source.i, img.source.j)?;
        rows.push(vec![fam, img.source.i.to_string(), img.source.j.to_string(), orbit, system, status]);
    }
    Ok(Output {
        command: "springer",
        config: json!({"n": n}),
        results: to_value(&report)?,
        header: vec!["family", "i", "j", "orbit", "system", "status"],
        rows,
        text,
        ok: report.all_passed(),
    })
}

fn verify(suite: SuiteArg, scale: Scale) -> Result<Output> {
    let suite = match suite {
        SuiteArg::Dims => Suite::Dims,
        SuiteArg::Pavings => Suite::Pavings,
        SuiteArg::Counts => Suite::Counts,
        SuiteArg::Springer => Suite::Springer,
        SuiteArg::All => Suite::All,
    };
    let reports = run_suite(suite, &scale);
    let mut text = String::new();
    let mut rows = Vec::new();
    for r in &reports {
        let status = match r.status {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "SKIPPED",
        };
        writeln!(text, "{status} criterion {}: {} ({} checked, {} skipped)", r.id, r.name, r.checked, r.skipped)?;
        for f in &r.failures {
            writeln!(text, "    {f}")?;
        }
        rows.push(vec![
            r.id.to_string(),
            r.name.to_string(),
            status.to_lowercase(),
            r.checked.to_string(),
            r.skipped.to_string(),
            r.failures.join("; "),
        ]);
    }
    let ok = reports.iter().all(|r| r.passed());
    Ok(Output {
        command: "verify",
        config: json!({"suite": suite, "scale": to_value(&scale)?}),
        results: to_value(&reports)?,
        header: vec!["id", "name", "status", "checked", "skipped", "failures"],
        rows,
        text,
        ok,
    })
}
