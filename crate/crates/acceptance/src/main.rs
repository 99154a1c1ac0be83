//! Runs every acceptance criterion and prints one PASS/FAIL line each.
//!
//! Usage: `acceptance [--full] [--out-dir DIR]`. `--full` replaces the sampled
//! `P_8` check of criterion 10 by an exhaustive one.

mod naive;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use gramsey::bounds::{ceil_rational, cycle_lower, hyper_clique_lower, p8_lower};
use gramsey::exact::{min_colors, ExactProblem};
use gramsey::io::write_coloring;
use gramsey::pack::{check_class_structure, check_repeat_isolation, max_tile_overlap};
use gramsey::pipeline::{construct, ConstructConfig, ConstructReport, Construction};
use gramsey::verify::{check, xcounts, CheckSpec};
use gramsey::{Coloring, CopyKind, HostSpec, UNCOLORED};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

const SEEDS: u64 = 10;

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line { pass, detail: detail.into() }
}

#[derive(Clone, Copy)]
struct Config {
    label: &'static str,
    what: Construction,
    n: u32,
}

const CONFIGS: [Config; 7] = [
    Config { label: "cycles k=4 ell=4 n=40", what: Construction::Cycles { k: 4, ell: 4 }, n: 40 },
    Config { label: "cycles k=4 ell=4 n=60", what: Construction::Cycles { k: 4, ell: 4 }, n: 60 },
    Config { label: "cycles k=4 ell=4 n=80", what: Construction::Cycles { k: 4, ell: 4 }, n: 80 },
    Config { label: "cycles k=4 ell=6 n=60", what: Construction::Cycles { k: 4, ell: 6 }, n: 60 },
    Config { label: "bipartite k=3 n=24", what: Construction::BipartiteCycles { k: 3 }, n: 24 },
    Config { label: "hyper k=3 n=15", what: Construction::HyperCliques { k: 3 }, n: 15 },
    Config { label: "hyper k=3 n=20", what: Construction::HyperCliques { k: 3 }, n: 20 },
];

struct Run {
    report: ConstructReport,
    secs: f64,
}

/// Pipeline runs keyed by (config index, seed).
type Runs = BTreeMap<(usize, u64), Result<Run, String>>;

fn run_all() -> Runs {
    let mut runs = Runs::new();
    for (i, cfg) in CONFIGS.iter().enumerate() {
        for seed in 1..=SEEDS {
            let t = Instant::now();
            let r = construct(cfg.what, cfg.n, &ConstructConfig::new(seed)).map_err(|e| e.to_string());
            runs.insert((i, seed), r.map(|report| Run { report, secs: t.elapsed().as_secs_f64() }));
        }
    }
    runs
}

fn exhaustive(c: &Coloring, kinds: Vec<(CopyKind, u32)>) -> (bool, u128, u128) {
    let r = check(c, &CheckSpec::exhaustive(kinds)).expect("total coloring");
    let copies = r.kinds.iter().map(|k| k.copies_checked).sum();
    let bad = r.kinds.iter().map(|k| k.violations).sum();
    (r.ok, copies, bad)
}

fn slack(n: u32) -> f64 {
    3.0 * f64::from(n).powf(0.9)
}

fn c1_exact() -> Line {
    let t = Instant::now();
    let cases = [(4, CopyKind::Path(4), 3, 6), (5, CopyKind::Path(4), 3, 10), (5, CopyKind::Path(5), 4, 10)];
    let mut got = Vec::new();
    let mut ok = true;
    for (n, kind, q, want) in cases {
        let v = min_colors(&ExactProblem::new(HostSpec::complete(n), vec![(kind, q)]), 100_000_000).map(|s| s.value);
        ok &= v.as_ref().ok() == Some(&want);
        got.push(format!("K{n} {}{} q{q} = {:?}", kind.name(), kind.param(), v.map_err(|e| e.to_string())));
    }
    let secs = t.elapsed().as_secs_f64();
    line(ok && secs < 60.0, format!("{} ({secs:.1} s)", got.join(", ")))
}

fn random_case(rng: &mut ChaCha8Rng, i: usize) -> (Coloring, CopyKind, u32) {
    loop {
        let host = match rng.gen_range(0..3u32) {
            0 => HostSpec::complete(rng.gen_range(4..=8)),
            1 => HostSpec::bipartite(rng.gen_range(2..=4)),
            _ => {
                let n = rng.gen_range(5..=8);
                HostSpec::uniform(n, rng.gen_range(3..=4.min(n - 1))).expect("uniform host")
            }
        };
        let param = rng.gen_range(2..=host.num_vertices());
        let kind = [CopyKind::Cycle(param), CopyKind::Path(param), CopyKind::CliqueSet(param), CopyKind::TightCycle(param)][i % 4];
        if kind.validate(&host).is_err() {
            continue;
        }
        let palette = rng.gen_range(1..=5u32);
        let holes = rng.gen_bool(0.25);
        let colors = (0..host.edge_count())
            .map(|_| if holes && rng.gen_bool(0.1) { UNCOLORED } else { rng.gen_range(0..palette) })
            .collect();
        let q = rng.gen_range(1..=kind.size(&host).min(5) as u32);
        return (Coloring::from_colors(host, colors), kind, q);
    }
}

fn c2_oracle() -> Line {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut agree = 0;
    let mut first_mismatch = None;
    for i in 0..200 {
        let (c, kind, q) = random_case(&mut rng, i);
        let fast = check(&c, &CheckSpec::exhaustive(vec![(kind, q)])).expect("checker runs");
        let slow = naive::check(&c, kind, q);
        let k = &fast.kinds[0];
        let witness_ok = match &k.first_witness {
            Some(w) => slow.violating.contains(&w.copy.0),
            None => slow.violations == 0,
        };
        if k.copies_checked == slow.copies && k.violations == slow.violations && fast.ok == (slow.violations == 0) && witness_ok {
            agree += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some(format!("case {i}: {} {kind:?} q{q}", c.host()));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let mut detail = format!("{agree}/200 colorings agree ({secs:.1} s)");
    if let Some(m) = first_mismatch {
        detail.push_str(&format!("; first mismatch {m}"));
    }
    line(agree == 200 && secs < 120.0, detail)
}

fn first_run(runs: &Runs, i: usize) -> Result<&Run, String> {
    runs[&(i, 1)].as_ref().map_err(Clone::clone)
}

/// Criteria 3 and 4 together: validity and economy for each n.
fn c3_c4_cycles(runs: &Runs) -> (Line, Line) {
    let mut valid = (true, Vec::new());
    let mut econ = (true, Vec::new());
    for i in 0..3 {
        let n = CONFIGS[i].n;
        let run = match first_run(runs, i) {
            Ok(r) => r,
            Err(e) => {
                valid.0 = false;
                econ.0 = false;
                valid.1.push(format!("n={n}: {e}"));
                continue;
            }
        };
        let t = Instant::now();
        let (ok, copies, bad) = exhaustive(&run.report.coloring, vec![(CopyKind::Cycle(4), 3)]);
        let secs = run.secs + t.elapsed().as_secs_f64();
        let palette = run.report.coloring.palette_size();
        let lower = cycle_lower(u64::from(n), 4).to_u64().expect("small");
        valid.0 &= ok && u64::from(palette) >= lower && secs < 300.0;
        valid.1.push(format!("n={n}: {bad} violations in {copies} C4, palette {palette} >= {lower} ({secs:.1} s)"));
        let cap = 0.5 * f64::from(n) + slack(n);
        econ.0 &= f64::from(palette) <= cap;
        econ.1.push(format!("n={n}: {palette} <= {cap:.1}"));
    }
    (line(valid.0, valid.1.join("; ")), line(econ.0, econ.1.join("; ")))
}

fn c5_ell6(runs: &Runs) -> Line {
    let run = match first_run(runs, 3) {
        Ok(r) => r,
        Err(e) => return line(false, e),
    };
    let t = Instant::now();
    let kinds = (4..=6).map(|m| (CopyKind::Cycle(m), 3)).collect();
    let r = check(&run.report.coloring, &CheckSpec::exhaustive(kinds)).expect("total");
    let secs = run.secs + t.elapsed().as_secs_f64();
    let parts: Vec<String> = r.kinds.iter().map(|k| format!("C{}: {}/{}", k.kind.param(), k.violations, k.copies_checked)).collect();
    line(r.ok && secs < 600.0, format!("n=60 violations/copies {} ({secs:.1} s)", parts.join(", ")))
}

fn c6_bipartite(runs: &Runs) -> Line {
    let run = match first_run(runs, 4) {
        Ok(r) => r,
        Err(e) => return line(false, e),
    };
    let t = Instant::now();
    let (ok, copies, bad) = exhaustive(&run.report.coloring, vec![(CopyKind::Cycle(6), 3)]);
    let secs = run.secs + t.elapsed().as_secs_f64();
    let overlap = max_tile_overlap(&run.report.stage1.as_ref().expect("stage 1").tiles);
    let palette = run.report.coloring.palette_size();
    let cap = 3.0 / 8.0 * 24.0 + slack(24);
    let pass = ok && overlap <= 1 && f64::from(palette) <= cap && secs < 300.0;
    line(
        pass,
        format!("{bad} violations in {copies} C6, max tile overlap {overlap}, palette {palette} <= {cap:.1}: {} ({secs:.1} s)", f64::from(palette) <= cap),
    )
}

/// Criteria 7 and 8 on the hypergraph runs.
fn c7_c8_hyper(runs: &Runs) -> (Line, Line) {
    let mut c7 = (true, Vec::new());
    let mut c8 = (true, Vec::new());
    for i in [5, 6] {
        let n = CONFIGS[i].n;
        let run = match first_run(runs, i) {
            Ok(r) => r,
            Err(e) => {
                c7 = (false, vec![e.clone()]);
                c8 = (false, vec![e]);
                continue;
            }
        };
        let c = &run.report.coloring;
        let t = Instant::now();
        let (ok, copies, bad) = exhaustive(c, vec![(CopyKind::CliqueSet(5), 9)]);
        let secs = run.secs + t.elapsed().as_secs_f64();
        let stage1 = &run.report.stage1.as_ref().expect("stage 1").coloring;
        let p1 = check_class_structure(stage1);
        let p2 = check_repeat_isolation(stage1);
        let palette = c.palette_size();
        let lower = ceil_rational(&hyper_clique_lower(u64::from(n), 3)).to_u64().expect("small");
        let cap = 11.0 / 12.0 * f64::from(n) + slack(n);
        c7.0 &= ok && p1.is_ok() && p2.is_ok() && u64::from(palette) >= lower && f64::from(palette) <= cap && secs < 300.0;
        c7.1.push(format!(
            "n={n}: {bad} violations in {copies} K5^3, property 1 {}, property 2 {}, {lower} <= palette {palette} <= {cap:.1}: {} ({secs:.1} s)",
            if p1.is_ok() { "ok" } else { "FAILS" },
            if p2.is_ok() { "ok" } else { "FAILS" },
            f64::from(palette) <= cap
        ));
        let x = xcounts(c).expect("total");
        let m = u64::from(n);
        let id1 = x.x1 + 2 * x.x2 == m * (m - 1) * (m - 2) / 6;
        let id2 = x.x0 + 3 * x.x1 + 5 * x.x2 == m * (m - 1) / 2 * u64::from(palette);
        let id3 = x.x1 >= 2 * x.x2;
        c8.0 &= ok && id1 && id2 && id3;
        c8.1.push(format!("n={n}: x0={} x1={} x2={} identities {id1}/{id2}/{id3}", x.x0, x.x1, x.x2));
    }
    (line(c7.0, c7.1.join("; ")), line(c8.0, c8.1.join("; ")))
}

fn c9_p6() -> (Line, ConstructReport) {
    let t = Instant::now();
    let r = construct(Construction::P6, 13, &ConstructConfig::new(1)).expect("p6 builds");
    let (ok, copies, bad) = exhaustive(&r.coloring, vec![(CopyKind::Path(6), 4)]);
    let secs = t.elapsed().as_secs_f64();
    let decomposed = r.packing.as_ref().is_some_and(|p| p.is_decomposition());
    let palette = r.coloring.palette_size();
    let pass = ok && palette == 39 && decomposed && copies == 617_760 && secs < 60.0;
    (line(pass, format!("palette {palette}, decomposition {decomposed}, {bad} violations in {copies} P6 ({secs:.1} s)")), r)
}

fn c10_p8(full: bool) -> (Line, ConstructReport) {
    let t = Instant::now();
    let r = construct(Construction::P8Proper, 16, &ConstructConfig::new(1)).expect("p8 builds");
    let proper = check(&r.coloring, &CheckSpec::exhaustive(Vec::new()).proper()).expect("total").ok;
    let kinds = vec![(CopyKind::Path(8), 5)];
    let spec = if full { CheckSpec::exhaustive(kinds) } else { CheckSpec::sampled(kinds, 10_000_000, 10) };
    let rep = check(&r.coloring, &spec).expect("total");
    let secs = t.elapsed().as_secs_f64();
    let palette = r.coloring.palette_size();
    let lower = p8_lower(16).to_u32().expect("small");
    let decomposed = r.packing.as_ref().is_some_and(|p| p.is_decomposition());
    let limit = if full { 3600.0 } else { 300.0 };
    let pass = palette == lower && proper && rep.ok && secs < limit;
    let mode = if full { "exhaustive" } else { "sampled" };
    (
        line(
            pass,
            format!(
                "palette {palette} (target {lower}), K6 decomposition {decomposed}, proper {proper}, {} {mode} P8 violations in {} ({secs:.1} s)",
                rep.kinds[0].violations, rep.kinds[0].copies_checked
            ),
        ),
        r,
    )
}

fn c11_resampling(runs: &Runs, out: &mut String) -> Line {
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, cfg) in CONFIGS.iter().enumerate() {
        let mut first_ok = 0;
        let mut all_ok = true;
        let mut counts = Vec::new();
        for seed in 1..=SEEDS {
            match &runs[&(i, seed)] {
                Ok(run) => {
                    let a = &run.report.attempts;
                    if a[0].finished {
                        first_ok += 1;
                    }
                    for (j, x) in a.iter().enumerate() {
                        let _ = writeln!(out, "{},{seed},{j},{},{},{}", cfg.label, x.c2, x.resamples, x.finished);
                    }
                    counts.push(a.last().expect("attempt").resamples);
                }
                Err(_) => all_ok = false,
            }
        }
        counts.sort_unstable();
        pass &= first_ok >= 9 && all_ok;
        let median = counts.get(counts.len() / 2).copied().unwrap_or(0);
        parts.push(format!("{}: {first_ok}/{SEEDS} first try, median {median} resamples", cfg.label));
    }
    line(pass, parts.join("; "))
}

fn fingerprint(r: &ConstructReport) -> Vec<u8> {
    let mut bytes = Vec::new();
    write_coloring(&r.coloring, &mut bytes).expect("in-memory write");
    bytes.extend(format!("{:?}{:?}{:?}", r.attempts, r.leftover, r.coverage()).into_bytes());
    Sha256::digest(&bytes).to_vec()
}

fn c12_determinism(runs: &Runs, p6: &ConstructReport, p8: &ConstructReport) -> Line {
    let mut same = 0;
    let mut total = 0;
    for (i, cfg) in CONFIGS.iter().enumerate() {
        if let Ok(run) = first_run(runs, i) {
            total += 1;
            let again = construct(cfg.what, cfg.n, &ConstructConfig::new(1)).expect("reran before");
            if fingerprint(&again) == fingerprint(&run.report) {
                same += 1;
            }
        }
    }
    for (what, n, r) in [(Construction::P6, 13, p6), (Construction::P8Proper, 16, p8)] {
        total += 1;
        let again = construct(what, n, &ConstructConfig::new(1)).expect("reran before");
        if fingerprint(&again) == fingerprint(r) {
            same += 1;
        }
    }
    let spec = CheckSpec::sampled(vec![(CopyKind::Path(8), 5)], 100_000, 3);
    let v1 = check(&p8.coloring, &spec).expect("total");
    let v2 = check(&p8.coloring, &spec.clone().with_threads(4)).expect("total");
    total += 1;
    if format!("{v1:?}") == format!("{v2:?}") {
        same += 1;
    }
    line(same == total, format!("{same}/{total} reruns hash-identical"))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let full = args.iter().any(|a| a == "--full");
    let out_dir = args
        .iter()
        .position(|a| a == "--out-dir")
        .and_then(|i| args.get(i + 1))
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("acceptance-out"));

    let mut lines: Vec<(u32, &str, Line)> = Vec::new();
    lines.push((1, "exact small values", c1_exact()));
    lines.push((2, "oracle equivalence", c2_oracle()));
    let runs = run_all();
    let (l3, l4) = c3_c4_cycles(&runs);
    lines.push((3, "cycle pipeline validity", l3));
    lines.push((4, "cycle pipeline economy", l4));
    lines.push((5, "consecutive lengths", c5_ell6(&runs)));
    lines.push((6, "bipartite pipeline", c6_bipartite(&runs)));
    let (l7, l8) = c7_c8_hyper(&runs);
    lines.push((7, "hypergraph pipeline", l7));
    lines.push((8, "x-identities", l8));
    let (l9, p6) = c9_p6();
    lines.push((9, "P6 construction", l9));
    let (l10, p8) = c10_p8(full);
    lines.push((10, "P8 construction", l10));
    let mut resamples = String::from("config,seed,attempt,c2,resamples,finished\n");
    lines.push((11, "resampling contract", c11_resampling(&runs, &mut resamples)));
    lines.push((12, "determinism", c12_determinism(&runs, &p6, &p8)));

    if fs::create_dir_all(&out_dir).and_then(|_| fs::write(out_dir.join("resamples.csv"), &resamples)).is_err() {
        eprintln!("warning: could not write {}", out_dir.join("resamples.csv").display());
    }
    let mut failed = 0;
    for (id, name, l) in &lines {
        println!("{} {id:>2} {name}: {}", if l.pass { "PASS" } else { "FAIL" }, l.detail);
        if !l.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", lines.len() - failed, lines.len());
    if let Ok(run) = first_run(&runs, 2) {
        let l = run.report.leftover.expect("stage 1 ran");
        let cap = u64::from(CONFIGS[2].n) / 4;
        let within = l.max_uncolored_degree <= cap && l.max_uncolored_codegree <= cap && l.max_dangerous_pairs <= cap;
        println!(
            "NOTE leftover after stage 1 (n=80, k=4): degree {}, codegree {}, dangerous pairs {}; n/4 = {cap}: {}",
            l.max_uncolored_degree,
            l.max_uncolored_codegree,
            l.max_dangerous_pairs,
            if within { "within" } else { "exceeded" }
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
