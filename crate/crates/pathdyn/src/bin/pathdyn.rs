//! Trace replay, bundle generation and verification, desk-scale benchmarks,
//! and brute-force oracles, all seeded and file-driven.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or I/O trouble.
//! Every command prints a human-readable report and ends with one JSON
//! summary line on stdout.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;

use pathdyn::bundle::{check_result, ReductionBundle, VerifyReport};
use pathdyn::clique::{
    oracle_detect_4clique, oracle_min_weight_4clique, oracle_triple_product, FourPartiteInstance,
    TripleProductInstance,
};
use pathdyn::engine::{engines_for, new_engine, run_trace, ENGINE_NAMES};
use pathdyn::graph::{Mode, Weight};
use pathdyn::matrix::{min_witness, min_witness3, BoolMatrix};
use pathdyn::reduce_bp::{gen_4c_to_stbp, gen_mw_to_ssbp, gen_omv3_to_stbp};
use pathdyn::reduce_ea::{gen_4c_to_stea, gen_omv3_to_stea};
use pathdyn::reduce_nw::{gen_4c_to_nwstsp, gen_mw3p_to_nwsssp, gen_omv3_to_nwstsp};
use pathdyn::reduce_sp::gen_mw4c_to_stsp;
use pathdyn::trace::{random_trace, Problem, UpdateTrace};

#[derive(Parser)]
#[command(
    name = "pathdyn",
    version,
    about = "Partially dynamic path algorithms: replay, reductions, benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay a trace through an engine and write one answer per query.
    Run {
        /// Trace file (JSONL header plus ops).
        #[arg(long)]
        trace: PathBuf,
        /// Engine name; defaults to the first engine fit for the trace.
        #[arg(long)]
        engine: Option<String>,
        /// Where to write the answers; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Engine parameter, repeatable: -p dyadic.t=0.5
        #[arg(long = "param", short = 'p', value_parser = parse_param)]
        params: Vec<(String, f64)>,
    },
    /// Build a reduction bundle (trace plus decoder manifest) into a directory.
    Gen {
        /// Which construction to run.
        reduction: Reduction,
        /// Output directory for trace.jsonl and expected.json.
        #[arg(long)]
        out: PathBuf,
        /// Part size / matrix dimension for random instances.
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Seed for random instances.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge or bit density for random instances.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Weight bound for random minimum-weight clique instances.
        #[arg(long, default_value_t = 20)]
        bound: Weight,
        /// JSON instance file instead of a random instance.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Update direction of the produced trace.
        #[arg(long, value_enum, default_value_t = Direction::Inc)]
        mode: Direction,
        /// Encode without edge directions (minimum-weight clique only).
        #[arg(long)]
        undirected: bool,
        /// Run the weight schedule twice, ten rungs apart (arrivals only).
        #[arg(long)]
        rerun: bool,
    },
    /// Replay a bundle's trace and check the decoded answer and audits.
    Verify {
        /// Bundle directory from `gen`.
        bundle: PathBuf,
        /// Engine name; defaults to the first engine fit for the trace.
        #[arg(long)]
        engine: Option<String>,
        #[arg(long = "param", short = 'p', value_parser = parse_param)]
        params: Vec<(String, f64)>,
    },
    /// Time every fitting engine on seeded traces; CSV rows.
    Bench {
        /// Suite: "engines" replays random traces, "reductions" replays bundles.
        suite: Suite,
        /// Vertex count for the engines suite.
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the brute-force answer for a source instance.
    Oracle {
        /// Which source problem to answer.
        problem: OracleProblem,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 20)]
        bound: Weight,
        /// JSON instance file instead of a random instance.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    Inc,
    Dec,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Engines,
    Reductions,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reduction {
    /// Minimum-weight 4-clique through s-t shortest paths.
    Mw4cStsp,
    /// 4-clique detection through node-weighted s-t shortest paths.
    FourCliqueNwstsp,
    /// 4-clique detection through s-t bottleneck paths.
    FourCliqueStbp,
    /// 4-clique detection through earliest arrivals.
    FourCliqueStea,
    /// Online triple product through node-weighted s-t shortest paths.
    Omv3Nwstsp,
    /// Online triple product through s-t bottleneck paths.
    Omv3Stbp,
    /// Online triple product through earliest arrivals.
    Omv3Stea,
    /// Min-witness 3-product through node-weighted single-source paths.
    Mw3pNwsssp,
    /// Min-witness product through single-source bottleneck paths.
    MwSsbp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleProblem {
    /// Minimum 4-clique weight after completion.
    Mw4c,
    /// 4-clique existence.
    FourClique,
    /// One Boolean answer per query triple.
    Omv3,
    /// Minimal 3-product witness per index triple.
    Mw3p,
    /// Minimal product witness per index pair.
    Mw,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    let v: f64 = v.parse().map_err(|e| format!("bad value in {s:?}: {e}"))?;
    Ok((k.to_string(), v))
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Run { trace, engine, out, params } => cmd_run(&trace, engine, out, &params),
        Cmd::Gen { reduction, out, n, seed, density, bound, instance, mode, undirected, rerun } => {
            cmd_gen(reduction, &out, n, seed, density, bound, instance, mode, undirected, rerun)
        }
        Cmd::Verify { bundle, engine, params } => cmd_verify(&bundle, engine, &params),
        Cmd::Bench { suite, n, seed, out } => cmd_bench(suite, n, seed, out),
        Cmd::Oracle { problem, n, seed, density, bound, instance } => {
            cmd_oracle(problem, n, seed, density, bound, instance)
        }
    }
}

fn pick_engine(trace: &UpdateTrace, requested: Option<String>) -> Result<String> {
    match requested {
        Some(name) => {
            if !ENGINE_NAMES.contains(&name.as_str()) {
                bail!("no engine named {name:?}; known: {}", ENGINE_NAMES.join(", "));
            }
            Ok(name)
        }
        None => engines_for(trace)
            .first()
            .map(|s| s.to_string())
            .ok_or_else(|| anyhow!("no engine fits this trace")),
    }
}

fn cmd_run(
    trace_path: &Path,
    engine: Option<String>,
    out: Option<PathBuf>,
    params: &[(String, f64)],
) -> Result<i32> {
    let trace = UpdateTrace::load_from(trace_path)
        .with_context(|| format!("loading trace {}", trace_path.display()))?;
    let name = pick_engine(&trace, engine)?;
    let params: BTreeMap<String, f64> = params.iter().cloned().collect();
    let mut engine = new_engine(&name, &trace, &params)?;
    let started = Instant::now();
    let result = run_trace(engine.as_mut(), &trace)?;
    let wall = started.elapsed();
    let text = result.save();
    match &out {
        Some(path) => std::fs::write(path, &text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    println!(
        "replayed {} ops ({} queries) with {} in {:.1} ms",
        trace.ops.len(),
        result.answers.len(),
        name,
        wall.as_secs_f64() * 1e3
    );
    for (key, value) in engine.counters() {
        println!("  {key} = {value}");
    }
    println!(
        "{}",
        json!({
            "command": "run",
            "engine": name,
            "ops": trace.ops.len(),
            "queries": result.answers.len(),
            "out": out.as_ref().map(|p| p.display().to_string()),
            "counters": engine.counters().into_iter().collect::<BTreeMap<_, _>>(),
        })
    );
    Ok(0)
}

#[derive(Deserialize)]
struct Mw3pInstanceFile {
    a: BoolMatrix,
    c: BoolMatrix,
    d: BoolMatrix,
}

#[derive(Deserialize)]
struct MwInstanceFile {
    a: BoolMatrix,
    b: BoolMatrix,
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn random_bool_matrix(n: usize, density: f64, rng: &mut ChaCha8Rng) -> BoolMatrix {
    BoolMatrix::from_fn(n, n, |_, _| rng.random_bool(density))
}

fn four_partite_instance(
    instance: &Option<PathBuf>,
    n: usize,
    bound: Weight,
    density: f64,
    seed: u64,
) -> Result<FourPartiteInstance> {
    match instance {
        Some(path) => load_json(path),
        None => Ok(FourPartiteInstance::random(n, bound, density, seed)),
    }
}

fn triple_product_instance(
    instance: &Option<PathBuf>,
    n: usize,
    density: f64,
    seed: u64,
) -> Result<TripleProductInstance> {
    match instance {
        Some(path) => load_json(path),
        None => Ok(TripleProductInstance::random(n, n, density, seed)),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    reduction: Reduction,
    out: &Path,
    n: usize,
    seed: u64,
    density: f64,
    bound: Weight,
    instance: Option<PathBuf>,
    mode: Direction,
    undirected: bool,
    rerun: bool,
) -> Result<i32> {
    if undirected && reduction != Reduction::Mw4cStsp {
        bail!("--undirected applies only to mw4c-stsp");
    }
    if rerun && reduction != Reduction::FourCliqueStea {
        bail!("--rerun applies only to four-clique-stea");
    }
    let dec = mode == Direction::Dec;
    let bundle = match reduction {
        Reduction::Mw4cStsp => {
            let inst = four_partite_instance(&instance, n, bound, density, seed)?
                .completed()
                .scaled(4);
            gen_mw4c_to_stsp(&inst, undirected)?
        }
        Reduction::FourCliqueNwstsp => {
            let inst = four_partite_instance(&instance, n, bound, density, seed)?;
            gen_4c_to_nwstsp(&inst)?
        }
        Reduction::FourCliqueStbp => {
            let inst = four_partite_instance(&instance, n, bound, density, seed)?;
            gen_4c_to_stbp(&inst)?
        }
        Reduction::FourCliqueStea => {
            let inst = four_partite_instance(&instance, n, bound, density, seed)?;
            gen_4c_to_stea(&inst, rerun)?
        }
        Reduction::Omv3Nwstsp => {
            let inst = triple_product_instance(&instance, n, density, seed)?;
            gen_omv3_to_nwstsp(&inst, dec)?
        }
        Reduction::Omv3Stbp => {
            let inst = triple_product_instance(&instance, n, density, seed)?;
            gen_omv3_to_stbp(&inst, dec)?
        }
        Reduction::Omv3Stea => {
            let inst = triple_product_instance(&instance, n, density, seed)?;
            gen_omv3_to_stea(&inst, dec)?
        }
        Reduction::Mw3pNwsssp => {
            let (a, c, d) = match &instance {
                Some(path) => {
                    let file: Mw3pInstanceFile = load_json(path)?;
                    (file.a, file.c, file.d)
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (
                        random_bool_matrix(n, density, &mut rng),
                        random_bool_matrix(n, density, &mut rng),
                        random_bool_matrix(n, density, &mut rng),
                    )
                }
            };
            gen_mw3p_to_nwsssp(&a, &c, &d)?
        }
        Reduction::MwSsbp => {
            let (a, b) = match &instance {
                Some(path) => {
                    let file: MwInstanceFile = load_json(path)?;
                    (file.a, file.b)
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (random_bool_matrix(n, density, &mut rng), random_bool_matrix(n, density, &mut rng))
                }
            };
            gen_mw_to_ssbp(&a, &b)?
        }
    };
    // The triple-product constructions carry their own decremental schedule;
    // everything else runs the incremental schedule backwards.
    let dec_is_builtin = matches!(
        reduction,
        Reduction::Omv3Nwstsp | Reduction::Omv3Stbp | Reduction::Omv3Stea
    );
    let bundle = if dec && !dec_is_builtin { bundle.reversed()? } else { bundle };
    bundle.save_dir(out)?;
    println!(
        "wrote bundle: {} ops, {} queries, mode {:?}",
        bundle.trace.ops.len(),
        bundle.trace.query_count(),
        bundle.trace.header.mode
    );
    println!(
        "{}",
        json!({
            "command": "gen",
            "out": out.display().to_string(),
            "ops": bundle.trace.ops.len(),
            "queries": bundle.trace.query_count(),
            "updates": bundle.trace.update_count(),
            "mode": format!("{:?}", bundle.trace.header.mode),
        })
    );
    Ok(0)
}

fn print_report(engine: &str, report: &VerifyReport) {
    println!("engine: {engine}");
    match &report.decoded {
        Ok(answer) => println!("decoded: {}", serde_json::to_string(answer).unwrap()),
        Err(err) => println!("decode failed: {err}"),
    }
    println!("matches expected: {}", report.matches_expected);
    if report.expect_mismatches > 0 {
        println!(
            "per-query mismatches: {} (first at query {})",
            report.expect_mismatches,
            report.first_bad_query.map_or_else(|| "?".into(), |q| q.to_string())
        );
    }
    for failure in &report.audit_failures {
        println!("audit: {failure}");
    }
    println!("{}", if report.passed() { "PASS" } else { "FAIL" });
}

fn cmd_verify(dir: &Path, engine: Option<String>, params: &[(String, f64)]) -> Result<i32> {
    let bundle = ReductionBundle::load_dir(dir)
        .with_context(|| format!("loading bundle {}", dir.display()))?;
    let name = pick_engine(&bundle.trace, engine)?;
    let params: BTreeMap<String, f64> = params.iter().cloned().collect();
    let mut eng = new_engine(&name, &bundle.trace, &params)?;
    let result = run_trace(eng.as_mut(), &bundle.trace)?;
    let report = check_result(&bundle, &name, &result);
    print_report(&name, &report);
    println!(
        "{}",
        json!({
            "command": "verify",
            "bundle": dir.display().to_string(),
            "engine": name,
            "passed": report.passed(),
            "expect_mismatches": report.expect_mismatches,
            "first_bad_query": report.first_bad_query,
            "audit_failures": report.audit_failures,
        })
    );
    Ok(if report.passed() { 0 } else { 1 })
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn bench_row(
    rows: &mut Vec<String>,
    case: &str,
    engine: &str,
    trace: &UpdateTrace,
    params: &BTreeMap<String, f64>,
) -> Result<()> {
    let m = trace
        .initial_graph()
        .map(|g| g.edge_count())
        .unwrap_or(0);
    let mut eng = new_engine(engine, trace, params)?;
    let started = Instant::now();
    run_trace(eng.as_mut(), trace)?;
    let wall = started.elapsed();
    let counters = eng
        .counters()
        .into_iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";");
    rows.push(format!(
        "{},{},{},{},{},{},{},{:.0},{}",
        csv_field(case),
        csv_field(engine),
        format!("{:?}", trace.header.problem).to_lowercase(),
        format!("{:?}", trace.header.mode).to_lowercase(),
        trace.header.n,
        m,
        trace.ops.len(),
        wall.as_secs_f64() * 1e6,
        csv_field(&counters),
    ));
    Ok(())
}

fn cmd_bench(suite: Suite, n: usize, seed: u64, out: Option<PathBuf>) -> Result<i32> {
    let mut rows =
        vec!["case,engine,problem,mode,n,m,ops,wall_us,counters".to_string()];
    let params = BTreeMap::new();
    match suite {
        Suite::Engines => {
            let problems = [
                Problem::Stsp,
                Problem::Sssp,
                Problem::Stbp,
                Problem::Ssbp,
                Problem::Ssea,
                Problem::Stea,
                Problem::NwSssp,
                Problem::NwStsp,
                Problem::StReach,
            ];
            for (pi, problem) in problems.into_iter().enumerate() {
                for mode in [Mode::Incremental, Mode::Decremental] {
                    let trace =
                        random_trace(problem, mode, n, 6 * n, seed.wrapping_add(pi as u64));
                    let case = format!("{problem:?}-{mode:?}").to_lowercase();
                    for engine in engines_for(&trace) {
                        bench_row(&mut rows, &case, engine, &trace, &params)?;
                    }
                }
            }
        }
        Suite::Reductions => {
            let four = FourPartiteInstance::random(n.min(6), 20, 0.5, seed);
            let triple = TripleProductInstance::random(n.min(6), n.min(6), 0.5, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dim = n.min(8);
            let (ba, bb, bc) = (
                random_bool_matrix(dim, 0.5, &mut rng),
                random_bool_matrix(dim, 0.5, &mut rng),
                random_bool_matrix(dim, 0.5, &mut rng),
            );
            let cases: Vec<(&str, ReductionBundle)> = vec![
                ("mw4c-stsp", gen_mw4c_to_stsp(&four.completed().scaled(4), false)?),
                ("four-clique-nwstsp", gen_4c_to_nwstsp(&four)?),
                ("four-clique-stbp", gen_4c_to_stbp(&four)?),
                ("four-clique-stea", gen_4c_to_stea(&four, false)?),
                ("omv3-nwstsp", gen_omv3_to_nwstsp(&triple, false)?),
                ("omv3-stbp", gen_omv3_to_stbp(&triple, false)?),
                ("omv3-stea", gen_omv3_to_stea(&triple, false)?),
                ("mw3p-nwsssp", gen_mw3p_to_nwsssp(&ba, &bb, &bc)?),
                ("mw-ssbp", gen_mw_to_ssbp(&ba, &bb)?),
            ];
            for (case, bundle) in &cases {
                for engine in engines_for(&bundle.trace) {
                    bench_row(&mut rows, case, engine, &bundle.trace, &params)?;
                }
            }
        }
    }
    let csv = rows.join("\n") + "\n";
    match &out {
        Some(path) => std::fs::write(path, &csv)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{csv}"),
    }
    println!(
        "{}",
        json!({
            "command": "bench",
            "suite": match suite { Suite::Engines => "engines", Suite::Reductions => "reductions" },
            "rows": rows.len() - 1,
            "out": out.as_ref().map(|p| p.display().to_string()),
        })
    );
    Ok(0)
}

fn cmd_oracle(
    problem: OracleProblem,
    n: usize,
    seed: u64,
    density: f64,
    bound: Weight,
    instance: Option<PathBuf>,
) -> Result<i32> {
    let answer = match problem {
        OracleProblem::Mw4c => {
            let inst =
                four_partite_instance(&instance, n, bound, density, seed)?.completed();
            json!(oracle_min_weight_4clique(&inst))
        }
        OracleProblem::FourClique => {
            let inst = four_partite_instance(&instance, n, bound, density, seed)?;
            json!(oracle_detect_4clique(&inst))
        }
        OracleProblem::Omv3 => {
            let inst = triple_product_instance(&instance, n, density, seed)?;
            json!(oracle_triple_product(&inst))
        }
        OracleProblem::Mw3p => {
            let (a, c, d) = match &instance {
                Some(path) => {
                    let file: Mw3pInstanceFile = load_json(path)?;
                    (file.a, file.c, file.d)
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (
                        random_bool_matrix(n, density, &mut rng),
                        random_bool_matrix(n, density, &mut rng),
                        random_bool_matrix(n, density, &mut rng),
                    )
                }
            };
            let wit = min_witness3(&a, &c, &d);
            let dim = a.rows;
            json!((0..dim)
                .map(|i| (0..dim)
                    .map(|j| (0..dim).map(|k| wit.get(i, j, k)).collect::<Vec<_>>())
                    .collect::<Vec<_>>())
                .collect::<Vec<_>>())
        }
        OracleProblem::Mw => {
            let (a, b) = match &instance {
                Some(path) => {
                    let file: MwInstanceFile = load_json(path)?;
                    (file.a, file.b)
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (random_bool_matrix(n, density, &mut rng), random_bool_matrix(n, density, &mut rng))
                }
            };
            let wit = min_witness(&a, &b);
            json!((0..a.rows)
                .map(|i| (0..b.cols).map(|j| wit.get(i, j)).collect::<Vec<_>>())
                .collect::<Vec<_>>())
        }
    };
    println!(
        "{}",
        json!({
            "command": "oracle",
            "answer": answer,
        })
    );
    Ok(0)
}

