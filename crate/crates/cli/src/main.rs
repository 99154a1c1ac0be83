use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gramsey::bounds::{bounds_report, ratio_decimal};
use gramsey::exact::{min_colors, ExactProblem};
use gramsey::io::{load_coloring, save_coloring};
use gramsey::pack::Sampling;
use gramsey::pipeline::{construct, ConstructConfig, Construction};
use gramsey::verify::{check, CheckSpec};
use gramsey::{count_copies, CopyKind, Error, HostMode, HostSpec};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

const VERIFY_HEADER: &str = "kind,param,q,copies_checked,violations,first_witness";

#[derive(Parser, Debug)]
#[command(name = "gramsey", version, about = "Generalized Ramsey edge colorings: build, verify, bound")]
struct Cli {
    /// Replay the arguments recorded in a run manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Where to write this run's manifest.
    #[arg(long, global = true)]
    manifest_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a coloring and write it as a grc file.
    Construct(ConstructArgs),
    /// Check a grc coloring against one pattern kind.
    Verify(VerifyArgs),
    /// Print every closed-form bound as CSV.
    Bounds(BoundsArgs),
    /// Exact minimum palette on a tiny host.
    Exact(ExactArgs),
    /// Print copy counts as CSV.
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// cycles, bipartite-cycles, hyper-cliques, p6, p7 or p8proper.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long, default_value_t = 0.15)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// anchored or uniform.
    #[arg(long, default_value = "anchored")]
    sampling: String,
    /// Fresh palette for finishing; derived from the stage-1 state when absent.
    #[arg(long)]
    c2: Option<u32>,
    #[arg(long, default_value_t = 1_000_000)]
    max_resamples: u64,
    #[arg(long, default_value_t = 6)]
    max_attempts: u32,
    #[arg(long)]
    stage1_only: bool,
    /// Skip the search for a perfect clique decomposition.
    #[arg(long)]
    no_decomposition: bool,
    #[arg(long)]
    out: PathBuf,
    /// Summary CSV; defaults to `<out>.csv`.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    file: PathBuf,
    /// cycle, path, clique or tight-cycle.
    #[arg(long)]
    kind: String,
    /// Pattern size (vertices).
    #[arg(long, visible_aliases = ["m", "t", "p", "len"])]
    param: u32,
    #[arg(long)]
    q: u32,
    /// Check every copy (the default unless --sample is given).
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Check this many uniformly drawn copies.
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also require a proper coloring.
    #[arg(long)]
    proper: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also write the CSV here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// complete, bipartite or uniform.
    #[arg(long)]
    mode: String,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    mode: String,
    #[arg(long)]
    n: u32,
    /// Pattern kind.
    #[arg(long)]
    family: String,
    /// Pattern size (vertices).
    #[arg(long)]
    k: u32,
    #[arg(long)]
    q: u32,
    /// Edge size for uniform hosts.
    #[arg(long, default_value_t = 3)]
    uniformity: u32,
    #[arg(long)]
    proper: bool,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Witness grc file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[arg(long)]
    mode: String,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 3)]
    uniformity: u32,
    /// Restrict to one kind; all kinds otherwise.
    #[arg(long)]
    kind: Option<String>,
    /// Restrict to these sizes; 3 up to the vertex count otherwise.
    #[arg(long)]
    param: Vec<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize, Deserialize, Debug)]
struct RunManifest {
    subcommand: String,
    args: Vec<String>,
    seed: Option<u64>,
    version: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
    wall_clock_ms: u128,
    exit_code: u8,
    summary: Value,
}

/// What a subcommand reports back for the manifest.
struct Outcome {
    code: u8,
    seed: Option<u64>,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    summary: Value,
}

impl Outcome {
    fn new(code: u8, summary: Value) -> Self {
        Outcome { code, seed: None, inputs: Vec::new(), outputs: Vec::new(), summary }
    }
}

type Res<T> = Result<T, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn host_of(mode: &str, n: u32, uniformity: u32) -> Res<HostSpec> {
    match HostMode::parse(mode) {
        Some(HostMode::Complete) => Ok(HostSpec::complete(n)),
        Some(HostMode::Bipartite) => Ok(HostSpec::bipartite(n)),
        Some(HostMode::UniformComplete) => HostSpec::uniform(n, uniformity).map_err(err),
        None => Err(format!("unknown mode {mode}")),
    }
}

fn kind_of(name: &str, param: u32) -> Res<CopyKind> {
    CopyKind::from_name(name, param).ok_or_else(|| format!("unknown kind {name}"))
}

fn run_construct(a: &ConstructArgs) -> Res<Outcome> {
    let what = Construction::parse(&a.family, a.k, a.ell).map_err(err)?;
    let mut cfg = ConstructConfig::new(a.seed);
    cfg.delta = a.delta;
    cfg.sampling = Sampling::parse(&a.sampling).ok_or_else(|| format!("unknown sampling {}", a.sampling))?;
    cfg.c2 = a.c2;
    cfg.max_resamples = a.max_resamples;
    cfg.max_attempts = a.max_attempts;
    cfg.stage1_only = a.stage1_only;
    cfg.exact_when_possible = !a.no_decomposition;
    let r = construct(what, a.n, &cfg).map_err(err)?;
    save_coloring(&r.coloring, &a.out).map_err(err)?;

    let mut rows: Vec<(&str, String)> = vec![
        ("family", what.name().to_string()),
        ("n", a.n.to_string()),
        ("seed", a.seed.to_string()),
        ("palette", r.coloring.palette_size().to_string()),
        ("colored_edges", r.coloring.colored_count().to_string()),
        ("total_edges", r.coloring.host().edge_count().to_string()),
    ];
    if let Some(s) = &r.stage1 {
        let (c, m) = s.coverage();
        rows.push(("stage1_palette", s.palette.to_string()));
        rows.push(("stage1_tiles", s.tiles.len().to_string()));
        rows.push(("coverage", format!("{c}/{m}")));
        rows.push(("coverage_decimal", ratio_decimal(c, m)));
    }
    if let Some(l) = &r.leftover {
        rows.push(("max_uncolored_degree", l.max_uncolored_degree.to_string()));
        rows.push(("max_uncolored_codegree", l.max_uncolored_codegree.to_string()));
        rows.push(("max_dangerous_pairs", l.max_dangerous_pairs.to_string()));
    }
    if !r.attempts.is_empty() {
        let last = r.attempts.last().expect("nonempty");
        rows.push(("attempts", r.attempts.len().to_string()));
        rows.push(("retries", (r.attempts.len() - 1).to_string()));
        rows.push(("c2", last.c2.to_string()));
        rows.push(("resamples", last.resamples.to_string()));
        rows.push(("total_resamples", r.attempts.iter().map(|x| x.resamples).sum::<u64>().to_string()));
    }
    if let Some(p) = &r.packing {
        rows.push(("blocks", p.blocks.len().to_string()));
        rows.push(("leftover_edges", p.leftover.len().to_string()));
        rows.push(("decomposition", p.is_decomposition().to_string()));
        rows.push(("fell_back", p.fell_back.to_string()));
    }
    let mut csv = String::from("key,value\n");
    for (k, v) in &rows {
        let _ = writeln!(csv, "{k},{v}");
    }
    let report = a.report.clone().unwrap_or_else(|| with_suffix(&a.out, ".csv"));
    write_file(&report, &csv)?;
    let mut outputs = vec![a.out.clone(), report];
    if !r.attempts.is_empty() {
        let mut att = String::from("attempt,seed,c2,resamples,finished\n");
        for (i, x) in r.attempts.iter().enumerate() {
            let _ = writeln!(att, "{i},{},{},{},{}", x.seed, x.c2, x.resamples, x.finished);
        }
        let path = with_suffix(&a.out, ".attempts.csv");
        write_file(&path, &att)?;
        outputs.push(path);
    }
    print!("{csv}");
    let summary: serde_json::Map<String, Value> = rows.into_iter().map(|(k, v)| (k.to_string(), Value::String(v))).collect();
    Ok(Outcome { code: 0, seed: Some(a.seed), inputs: Vec::new(), outputs, summary: Value::Object(summary) })
}

fn run_verify(a: &VerifyArgs) -> Res<Outcome> {
    let coloring = load_coloring(&a.file).map_err(err)?;
    let kind = kind_of(&a.kind, a.param)?;
    let kinds = vec![(kind, a.q)];
    let mut spec = match a.sample {
        Some(count) if !a.exhaustive => CheckSpec::sampled(kinds, count, a.seed),
        _ => CheckSpec::exhaustive(kinds),
    };
    if a.proper {
        spec = spec.proper();
    }
    spec = spec.with_threads(a.threads);
    let rep = check(&coloring, &spec).map_err(err)?;
    let mut csv = format!("{VERIFY_HEADER}\n");
    for k in &rep.kinds {
        let witness = k
            .first_witness
            .as_ref()
            .map(|w| w.copy.vertices().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        let _ = writeln!(csv, "{},{},{},{},{},{}", k.kind.name(), k.kind.param(), k.q, k.copies_checked, k.violations, witness);
    }
    print!("{csv}");
    let mut outputs = Vec::new();
    if let Some(path) = &a.report {
        write_file(path, &csv)?;
        outputs.push(path.clone());
    }
    if let Some(w) = rep.first_violation() {
        eprintln!(
            "witness: {} {} vertices [{}] colors [{}] distinct {}",
            w.kind.name(),
            w.kind.param(),
            w.copy.vertices().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
            w.colors_seen.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
            w.distinct_colors
        );
    }
    if let Some((e, f)) = rep.improper_pair {
        eprintln!("improper: edges {} and {} share a vertex and a color", e.0, f.0);
    }
    let violations: u128 = rep.kinds.iter().map(|k| k.violations).sum();
    let summary = json!({
        "ok": rep.ok,
        "copies_checked": rep.kinds.iter().map(|k| k.copies_checked).sum::<u128>().to_string(),
        "violations": violations.to_string(),
        "proper_checked": a.proper,
    });
    let mut out = Outcome::new(if rep.ok { 0 } else { 1 }, summary);
    out.seed = a.sample.map(|_| a.seed);
    out.inputs.push(a.file.clone());
    out.outputs = outputs;
    Ok(out)
}

fn run_bounds(a: &BoundsArgs) -> Res<Outcome> {
    let mode = HostMode::parse(&a.mode).ok_or_else(|| format!("unknown mode {}", a.mode))?;
    let rep = bounds_report(mode, a.n, a.k, a.ell).map_err(err)?;
    let csv = rep.to_csv();
    print!("{csv}");
    let mut out = Outcome::new(0, json!({ "entries": rep.entries.len() }));
    if let Some(path) = &a.out {
        write_file(path, &csv)?;
        out.outputs.push(path.clone());
    }
    Ok(out)
}

fn run_exact(a: &ExactArgs) -> Res<Outcome> {
    let host = host_of(&a.mode, a.n, a.uniformity)?;
    let mut problem = ExactProblem::new(host, vec![(kind_of(&a.family, a.k)?, a.q)]);
    if a.proper {
        problem = problem.proper();
    }
    match min_colors(&problem, a.budget) {
        Ok(s) => {
            println!("value,{}", s.value);
            println!("nodes,{}", s.nodes);
            let mut out = Outcome::new(0, json!({ "value": s.value, "nodes": s.nodes }));
            if let Some(path) = &a.out {
                save_coloring(&s.witness, path).map_err(err)?;
                out.outputs.push(path.clone());
            }
            Ok(out)
        }
        Err(Error::BudgetExceeded { budget, lower, upper }) => {
            let upper = upper.map(|u| u.to_string()).unwrap_or_else(|| "none".into());
            eprintln!("budget of {budget} nodes exhausted; value lies in {lower}..={upper}");
            Ok(Outcome::new(2, json!({ "budget_exceeded": budget, "lower": lower, "upper": upper })))
        }
        Err(e) => Err(err(e)),
    }
}

fn run_stats(a: &StatsArgs) -> Res<Outcome> {
    let host = host_of(&a.mode, a.n, a.uniformity)?;
    let names: Vec<String> = match &a.kind {
        Some(k) => vec![k.clone()],
        None => ["cycle", "path", "clique", "tight-cycle"].iter().map(|s| s.to_string()).collect(),
    };
    let params: Vec<u32> = if a.param.is_empty() { (3..=host.num_vertices()).collect() } else { a.param.clone() };
    let mut csv = String::from("kind,param,count\n");
    let mut rows = 0;
    for name in &names {
        for &p in &params {
            let kind = kind_of(name, p)?;
            if kind.validate(&host).is_err() {
                if a.kind.is_some() && !a.param.is_empty() {
                    kind.validate(&host).map_err(err)?;
                }
                continue;
            }
            let _ = writeln!(csv, "{name},{p},{}", count_copies(&host, kind).map_err(err)?);
            rows += 1;
        }
    }
    print!("{csv}");
    let mut out = Outcome::new(0, json!({ "rows": rows }));
    if let Some(path) = &a.out {
        write_file(path, &csv)?;
        out.outputs.push(path.clone());
    }
    Ok(out)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let mut cli = Cli::parse_from(&argv);
    let mut args: Vec<String> = argv[1..].to_vec();
    if let Some(path) = &cli.manifest {
        if cli.command.is_some() {
            eprintln!("error: --manifest replays a recorded run and takes no subcommand");
            return ExitCode::from(2);
        }
        let replay = fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|s| serde_json::from_str::<RunManifest>(&s).map_err(|e| e.to_string()));
        let m = match replay {
            Ok(m) => m,
            Err(e) => {
                eprintln!("error: cannot read manifest {}: {e}", path.display());
                return ExitCode::from(2);
            }
        };
        let manifest_out = cli.manifest_out.take();
        cli = Cli::parse_from(std::iter::once(argv[0].clone()).chain(m.args.iter().cloned()));
        cli.manifest_out = manifest_out.or(cli.manifest_out);
        args = m.args;
    }
    let Some(command) = &cli.command else {
        eprintln!("error: a subcommand or --manifest is required\n\nUsage: gramsey <construct|verify|bounds|exact|stats> [OPTIONS]");
        return ExitCode::from(2);
    };
    let start = Instant::now();
    let (name, result) = match command {
        Command::Construct(a) => ("construct", run_construct(a)),
        Command::Verify(a) => ("verify", run_verify(a)),
        Command::Bounds(a) => ("bounds", run_bounds(a)),
        Command::Exact(a) => ("exact", run_exact(a)),
        Command::Stats(a) => ("stats", run_stats(a)),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            Outcome::new(2, json!({ "error": e }))
        }
    };
    let manifest = RunManifest {
        subcommand: name.to_string(),
        args,
        seed: outcome.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        inputs: outcome.inputs.iter().map(|p| p.display().to_string()).collect(),
        outputs: outcome.outputs.iter().map(|p| p.display().to_string()).collect(),
        wall_clock_ms: start.elapsed().as_millis(),
        exit_code: outcome.code,
        summary: outcome.summary,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    let target = cli.manifest_out.clone().or_else(|| outcome.outputs.first().map(|p| with_suffix(p, ".manifest.json")));
    match target {
        Some(path) => {
            if let Err(e) = write_file(&path, &format!("{text}\n")) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        None => eprintln!("{}", serde_json::to_string(&manifest).expect("manifest serializes")),
    }
    ExitCode::from(outcome.code)
}
