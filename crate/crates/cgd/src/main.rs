//! `cgd`: command-line front end for cgdraw.
//!
//! Exit codes: 0 success or feasible, 1 a well-formed negative answer
//! (infeasible, invalid instance), 2 usage or I/O trouble. JSON goes to
//! stdout, a one-line human summary to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cgdraw::draw::{self, recount, Totals};
use cgdraw::embedding::RotationSystem;
use cgdraw::generators::{gen, Family, FamilySpec};
use cgdraw::model::{validate, ClusteredGraph};
use cgdraw::rr::{construct_00c, oracle_test_rr, test_rr_biconnected};
use cgdraw::spqr::build_spqr;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cgd", version, about = "Drawings of clustered graphs with one kind of crossing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report: planarity, c-connectivity, flatness, biconnectivity.
    Validate { file: PathBuf },
    /// Decide whether a drawing with region-region crossings only exists.
    TestRr {
        file: PathBuf,
        /// Use the brute-force embedding enumeration instead.
        #[arg(long)]
        oracle: bool,
        /// Largest vertex count the enumeration accepts.
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    /// Build a drawing with one kind of crossing.
    Draw {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Embedding to use (er and rr modes), as written by `test-rr`.
        #[arg(long)]
        embedding: Option<PathBuf>,
        /// Write the plan here; stdout then only gets the totals.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Recount the crossings of a plan and compare with its totals.
    Count { plan: PathBuf },
    /// Generate an instance family.
    Gen {
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SPQR-tree inspection.
    Spqr {
        #[command(subcommand)]
        action: SpqrAction,
    },
}

#[derive(Subcommand)]
enum SpqrAction {
    /// Print the tree rooted at a reference edge.
    Dump {
        file: PathBuf,
        /// Edge index, or two vertex ids separated by a comma.
        #[arg(long = "ref")]
        reference: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ee,
    Er,
    Rr,
}

/// Outcome of one command: what to print and how to exit.
struct Outcome {
    code: u8,
    json: Option<Value>,
    summary: String,
}

impl Outcome {
    fn ok(json: Value, summary: impl Into<String>) -> Outcome {
        Outcome { code: 0, json: Some(json), summary: summary.into() }
    }

    fn negative(json: Value, summary: impl Into<String>) -> Outcome {
        Outcome { code: 1, json: Some(json), summary: summary.into() }
    }

    fn usage(msg: impl Into<String>) -> Outcome {
        Outcome { code: 2, json: None, summary: msg.into() }
    }

    fn rejected(msg: impl std::fmt::Display) -> Outcome {
        let msg = msg.to_string();
        Outcome::negative(json!({ "error": msg }), msg)
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Outcome> {
    fs::write(path, text).map_err(|e| Outcome::usage(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ClusteredGraph, Outcome> {
    ClusteredGraph::parse(&read(path)?).map_err(Outcome::rejected)
}

fn load_json(path: &Path) -> Result<Value, Outcome> {
    serde_json::from_str(&read(path)?).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<Outcome, Outcome> {
    match cli.command {
        Command::Validate { file } => {
            let cg = load(&file)?;
            let report = validate(&cg);
            let json = serde_json::to_value(&report).expect("report serializes");
            let summary = format!(
                "planar={} c-connected={} flat={} biconnected={}",
                report.is_planar, report.is_c_connected, report.is_flat, report.is_biconnected
            );
            Ok(if report.violations.is_empty() { Outcome::ok(json, summary) } else { Outcome::negative(json, summary) })
        }
        Command::TestRr { file, oracle, cap } => {
            let cg = load(&file)?;
            let result = if oracle { oracle_test_rr(&cg, cap) } else { test_rr_biconnected(&cg) };
            let result = result.map_err(Outcome::rejected)?;
            let json = result.to_json(&cg);
            Ok(match &result.violation {
                None => Outcome::ok(json, "feasible"),
                Some(v) => Outcome::negative(json, format!("infeasible: cluster {} ({})", v.cluster, v.location)),
            })
        }
        Command::Draw { file, mode, embedding, out, svg } => {
            let cg = load(&file)?;
            let given = match &embedding {
                Some(p) => {
                    let raw = load_json(p)?;
                    // a whole `test-rr` result carries its witness inside
                    let value = raw.get("witness_embedding").filter(|w| !w.is_null()).unwrap_or(&raw);
                    Some(RotationSystem::from_json(value, &cg).map_err(Outcome::rejected)?)
                }
                None => None,
            };
            let (plan, picture) = match mode {
                Mode::Ee => {
                    if given.is_some() {
                        return Err(Outcome::usage("--embedding has no meaning for --mode ee"));
                    }
                    let (d, report) = draw::construct_a00(&cg);
                    let plan = json!({
                        "mode": "ee",
                        "drawing": d.to_json(),
                        "detail": report.detail,
                        "alpha": report.alpha,
                        "beta": report.beta,
                        "gamma": report.gamma,
                    });
                    (plan, draw::to_svg(&d))
                }
                Mode::Er => {
                    let built = match given {
                        Some(rs) => draw::construct_0b0_on(&cg, rs),
                        None => draw::construct_0b0(&cg),
                    };
                    let (plan, _) = built.map_err(Outcome::rejected)?;
                    (plan.to_json(&cg), draw::er_svg(&cg, &plan))
                }
                Mode::Rr => {
                    let rs = match given {
                        Some(rs) => rs,
                        None => {
                            let result = test_rr_biconnected(&cg).map_err(Outcome::rejected)?;
                            match result.witness_embedding {
                                Some(rs) => rs,
                                None => return Ok(Outcome::negative(result.to_json(&cg), "infeasible: no rr-drawing")),
                            }
                        }
                    };
                    let outer = rs.outer_dart().ok_or_else(|| Outcome::rejected("embedding has no outer face"))?;
                    let plan = construct_00c(&cg, &rs, outer).map_err(Outcome::rejected)?;
                    (plan.to_json(&cg), draw::rr_svg(&cg, &plan))
                }
            };
            let totals = Totals::claimed(&plan).map_err(Outcome::rejected)?;
            let summary = format!("alpha={} beta={} gamma={}", totals.alpha, totals.beta, totals.gamma);
            if let Some(p) = svg {
                write(&p, &picture)?;
            }
            let shown = match out {
                Some(p) => {
                    write(&p, &pretty(&plan))?;
                    serde_json::to_value(totals).expect("totals serialize")
                }
                None => plan,
            };
            Ok(Outcome::ok(shown, summary))
        }
        Command::Count { plan } => {
            let plan = load_json(&plan)?;
            let claimed = Totals::claimed(&plan).map_err(Outcome::rejected)?;
            let recounted = recount(&plan).map_err(Outcome::rejected)?;
            let consistent = claimed == recounted;
            let json = json!({ "claimed": claimed, "recounted": recounted, "consistent": consistent });
            let summary = format!("alpha={} beta={} gamma={}", recounted.alpha, recounted.beta, recounted.gamma);
            Ok(if consistent { Outcome::ok(json, summary) } else { Outcome::negative(json, format!("mismatch: {summary}")) })
        }
        Command::Gen { family, n, seed, out } => {
            let family: Family = family.parse().map_err(|e| Outcome::usage(format!("{e}")))?;
            let n = n.unwrap_or_else(|| family.smallest());
            let cg = gen(&FamilySpec::new(family, n).with_seed(seed)).map_err(|e| Outcome::usage(format!("{e}")))?;
            let text = cg.serialize();
            let summary = format!("{family}: {} vertices, {} edges", cg.vertex_count(), cg.edge_count());
            match out {
                Some(p) => {
                    write(&p, &text)?;
                    Ok(Outcome { code: 0, json: None, summary })
                }
                None => {
                    print!("{text}");
                    Ok(Outcome { code: 0, json: None, summary })
                }
            }
        }
        Command::Spqr { action: SpqrAction::Dump { file, reference } } => {
            let cg = load(&file)?;
            let e = edge_ref(&cg, &reference)?;
            let tree = build_spqr(cg.graph(), e).map_err(Outcome::rejected)?;
            let summary = format!("{} nodes", tree.nodes().len());
            Ok(Outcome::ok(tree.to_json(cg.vertex_names()), summary))
        }
    }
}

fn edge_ref(cg: &ClusteredGraph, s: &str) -> Result<usize, Outcome> {
    if let Ok(e) = s.parse::<usize>() {
        return if e < cg.edge_count() { Ok(e) } else { Err(Outcome::usage(format!("edge index {e} out of range"))) };
    }
    let (a, b) = s.split_once(',').ok_or_else(|| Outcome::usage(format!("bad edge `{s}`: use an index or `u,v`")))?;
    let va = cg.vertex_index(a.trim()).ok_or_else(|| Outcome::usage(format!("unknown vertex `{a}`")))?;
    let vb = cg.vertex_index(b.trim()).ok_or_else(|| Outcome::usage(format!("unknown vertex `{b}`")))?;
    cg.graph().find_edge(va, vb).ok_or_else(|| Outcome::usage(format!("no edge {a}-{b}")))
}

fn threads() {
    let Ok(raw) = std::env::var("CGD_THREADS") else { return };
    match raw.parse::<usize>() {
        Ok(k) if k > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
        _ => eprintln!("cgd: ignoring CGD_THREADS={raw}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    threads();
    let outcome = run(cli).unwrap_or_else(|o| o);
    if let Some(json) = &outcome.json {
        print!("{}", pretty(json));
    }
    if !outcome.summary.is_empty() {
        eprintln!("cgd: {}", outcome.summary);
    }
    ExitCode::from(outcome.code)
}
