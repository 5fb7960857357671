//! The `tww` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O or
//! parse error.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::complexity::{bound_check, distinct_x_neighbourhoods, shatter_function, ComplexityError};
use crate::contraction::{greedy_sequence, replay_and_verify, StepFault};
use crate::exact::exact_tww;
use crate::io::{parse_graph, parse_sequence, parse_x_file, parse_x_list, write_graph, write_sequence};
use crate::lb::{build_lb_graph, build_lb_sequence, report_for, LbParameters};
use crate::trigraph::{Trigraph, VertexId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tww", version, about = "Twin-width and neighbourhood complexity toolkit")]
struct Cli {
    /// Emit a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct XArgs {
    /// Comma-separated vertex ids.
    #[arg(long = "x", conflicts_with = "x_file")]
    x: Option<String>,
    /// File with one vertex id per line.
    #[arg(long)]
    x_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate the lower-bound construction and its contraction sequence.
    GenLb {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long = "A")]
        a: Option<usize>,
        #[arg(long = "B")]
        b: Option<usize>,
        #[arg(long = "C")]
        c: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        index: Option<PathBuf>,
    },
    /// Replay a contraction sequence and report its width.
    VerifySeq {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Compute the exact twin-width (small graphs only).
    ExactTww {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Count distinct X-neighbourhoods.
    Complexity {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        x: XArgs,
        /// Also print every trace.
        #[arg(long)]
        traces: bool,
    },
    /// Evaluate the shatter function of the neighbourhood hypergraph.
    Shatter {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Compare the X-neighbourhood count with (d+2)*2^(d+1)*|X|.
    BoundCheck {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        x: XArgs,
        #[arg(long)]
        d: u32,
    },
    /// Greedy contraction sequence and its width.
    Greedy {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure that maps to a non-zero exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure { code: EXIT_IO, message: message.into() }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Trigraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn load_x(args: &XArgs) -> Result<BTreeSet<VertexId>, Failure> {
    match (&args.x, &args.x_file) {
        (Some(list), None) => parse_x_list(list).map_err(|e| Failure::usage(e.to_string())),
        (None, Some(path)) => {
            let bytes = read(path)?;
            let text = String::from_utf8(bytes).map_err(|_| Failure::io(format!("{}: not UTF-8", path.display())))?;
            parse_x_file(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
        }
        _ => Err(Failure::usage("one of --x or --x-file is required")),
    }
}

fn complexity_failure(e: ComplexityError) -> Failure {
    Failure::usage(e.to_string())
}

fn ids(traces: &[VertexId]) -> String {
    traces.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(out: &mut dyn Write, json_mode: bool, value: serde_json::Value, text: String) -> Result<(), Failure> {
    let res = if json_mode { writeln!(out, "{value}") } else { write!(out, "{text}") };
    res.map_err(|e| Failure::io(e.to_string()))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let json_mode = cli.json;
    match &cli.command {
        Command::GenLb { d, k, a, b, c, out: graph_path, seq: seq_path, index } => {
            let params = match (a, b, c, d) {
                (None, None, None, Some(d)) => LbParameters::from_width(*d, *k),
                (Some(a), Some(b), Some(c), d) => LbParameters::explicit(*a, *b, *c, *k).map(|p| match d {
                    Some(d) => p.with_target(*d),
                    None => p,
                }),
                (None, None, None, None) => return Err(Failure::usage("--d is required without --A/--B/--C")),
                _ => return Err(Failure::usage("--A, --B and --C must be given together")),
            }
            .map_err(|e| Failure::usage(e.to_string()))?;
            let g = build_lb_graph(&params).map_err(|e| Failure::usage(e.to_string()))?;
            let seq = build_lb_sequence(&params, &g).map_err(|e| Failure::usage(e.to_string()))?;
            write(graph_path, &write_graph(&g.graph).expect("construction has no red edges"))?;
            write(seq_path, &write_sequence(&seq.sequence))?;
            if let Some(path) = index {
                write(path, &g.index_file())?;
            }
            let r = report_for(&g, &seq);
            let ok = r.sequence_valid && r.all_distinct && r.width <= r.m;
            let ratio = r.ratio.map(|q| format!("{}/{}", q.numer(), q.denom()));
            let value = json!({
                "A": r.params.a, "B": r.params.b, "C": r.params.c, "k": r.params.k, "d": r.params.d,
                "M": r.m, "triples": r.triples, "vertices": r.total_vertices, "non_x": r.non_x,
                "distinct_non_x": r.distinct_non_x, "all_distinct": r.all_distinct,
                "contractions": r.contractions, "width": r.width, "valid": r.sequence_valid,
                "ratio": ratio, "exceeds_target": r.exceeds_target,
            });
            let mut text = format!(
                "vertices={} non_x={} triples={} contractions={} width={} M={} distinct_non_x={} all_distinct={}\n",
                r.total_vertices, r.non_x, r.triples, r.contractions, r.width, r.m, r.distinct_non_x, r.all_distinct
            );
            if let Some(q) = &ratio {
                text.push_str(&format!("ratio={q}\n"));
            }
            if r.exceeds_target {
                text.push_str("warning: M exceeds the target width\n");
            }
            emit(out, json_mode, value, text)?;
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::VerifySeq { graph, seq, budget } => {
            let g = load_graph(graph)?;
            let s = parse_sequence(&read(seq)?).map_err(|e| Failure::io(format!("{}: {e}", seq.display())))?;
            let r = replay_and_verify(&g, &s, *budget);
            let mut text = format!("width={} valid={}\n", r.width, r.valid);
            if let Some(v) = r.first_violation {
                text.push_str(&format!("first_violation step={} red_degree={}\n", v.step, v.red_degree));
            }
            if let Some(e) = &r.error {
                let what = match &e.fault {
                    StepFault::DeadVertex(v) => format!("vertex {v} is not live"),
                    StepFault::SameVertex(v) => format!("vertex {v} contracted with itself"),
                    StepFault::TooManySteps => "steps remain after one vertex is left".to_string(),
                    StepFault::TooFewSteps { remaining } => format!("{remaining} vertices left at the end"),
                };
                text.push_str(&format!("error step={}: {what}\n", e.step));
            }
            let value = json!({
                "width": r.width, "valid": r.valid, "steps_applied": r.steps_applied,
                "budget": budget,
                "first_violation": r.first_violation.map(|v| json!({"step": v.step, "red_degree": v.red_degree})),
                "error_step": r.error.as_ref().map(|e| e.step),
            });
            emit(out, json_mode, value, text)?;
            Ok(if r.valid { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::ExactTww { graph, witness } => {
            let g = load_graph(graph)?;
            let r = exact_tww(&g, None);
            if let Some(path) = witness {
                write(path, &write_sequence(&r.witness))?;
            }
            emit(out, json_mode, json!({"width": r.width}), format!("width={}\n", r.width))?;
            Ok(EXIT_OK)
        }
        Command::Complexity { graph, x, traces } => {
            let g = load_graph(graph)?;
            let xs = load_x(x)?;
            let p = distinct_x_neighbourhoods(&g, &xs).map_err(complexity_failure)?;
            let mut text = format!("count={}\n", p.count);
            let mut value = json!({"count": p.count, "x_size": xs.len()});
            if *traces {
                for t in &p.traces {
                    text.push_str(&format!("trace={}\n", ids(t)));
                }
                value["traces"] = json!(p.traces);
            }
            emit(out, json_mode, value, text)?;
            Ok(EXIT_OK)
        }
        Command::Shatter { graph, n } => {
            let g = load_graph(graph)?;
            let v = shatter_function(&g, *n).map_err(complexity_failure)?;
            emit(out, json_mode, json!({"n": n, "pi": v}), format!("pi({n})={v}\n"))?;
            Ok(EXIT_OK)
        }
        Command::BoundCheck { graph, x, d } => {
            let g = load_graph(graph)?;
            let xs = load_x(x)?;
            let r = bound_check(&g, &xs, *d).map_err(complexity_failure)?;
            let verdict = if r.holds { "PASS" } else { "FAIL" };
            let value = json!({"count": r.count, "bound": r.bound, "pass": r.holds, "d": d, "x_size": xs.len()});
            emit(out, json_mode, value, format!("count={} bound={} {verdict}\n", r.count, r.bound))?;
            Ok(if r.holds { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Greedy { graph, out: seq_out } => {
            let g = load_graph(graph)?;
            let (seq, width) = greedy_sequence(&g);
            let body = write_sequence(&seq);
            if let Some(path) = seq_out {
                write(path, &body)?;
            }
            let pairs: Vec<[u32; 2]> = seq.steps.iter().map(|s| [s.survivor.0, s.merged.0]).collect();
            emit(out, json_mode, json!({"width": width, "sequence": pairs}), format!("width={width}\n{body}"))?;
            Ok(EXIT_OK)
        }
    }
}
