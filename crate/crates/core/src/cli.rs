//! Command-line front end. [`run`] parses arguments, dispatches, writes to
//! the given streams and returns the process exit code: 0 on success, 1 on
//! a domain error, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::character::{character, run_suite, verify_mutated_cluster};
use crate::io::{
    parse_char_input, parse_potential, parse_quiver, parse_ses, potential_to_value, quiver_to_value,
};
use crate::jacobian::{Finiteness, TruncatedJacobian};
use crate::potential::{Potential, PotentialError, DEFAULT_TRUNC_DEGREE, QP};
use crate::quiver::{Quiver, Vertex};
use crate::repgrass::DEFAULT_BUDGET;
use crate::seeds::{explore, Seed, DEFAULT_SEED_BUDGET};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "qpchar", version, about = "Quiver mutation, Jacobian algebras, cluster seeds and cluster characters")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mutate a quiver along a sequence of vertices.
    MutateQuiver {
        #[arg(short, long)]
        quiver: PathBuf,
        #[arg(long, value_delimiter = ',')]
        seq: Vec<Vertex>,
    },
    /// Mutate a quiver with potential (premutation followed by reduction).
    MutateQp {
        #[arg(short, long)]
        quiver: PathBuf,
        /// Potential file; the zero potential if omitted.
        #[arg(short = 'w', long)]
        potential: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        seq: Vec<Vertex>,
        #[arg(long, default_value_t = DEFAULT_TRUNC_DEGREE)]
        trunc_degree: usize,
        /// Also probe every mutation sequence up to this length.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Graded dimensions of the truncated Jacobian algebra.
    Jacobian {
        #[arg(short, long)]
        quiver: PathBuf,
        #[arg(short = 'w', long)]
        potential: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TRUNC_DEGREE)]
        trunc_degree: usize,
    },
    /// Mutate the initial seed along a sequence.
    SeedMutate {
        #[arg(short, long)]
        quiver: PathBuf,
        #[arg(long, value_delimiter = ',')]
        seq: Vec<Vertex>,
    },
    /// Breadth-first exploration of the exchange graph.
    Bfs {
        #[arg(short, long)]
        quiver: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        /// Maximum number of seeds.
        #[arg(long, default_value_t = DEFAULT_SEED_BUDGET as u128)]
        budget: u128,
    },
    /// Cluster character of a module with a g-vector.
    Char {
        #[arg(short, long)]
        quiver: PathBuf,
        #[arg(short = 'w', long)]
        potential: Option<PathBuf>,
        /// Character input bundle.
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TRUNC_DEGREE)]
        trunc_degree: usize,
    },
    /// Strata of a pair of exact sequences over small prime fields.
    Dichotomy {
        #[arg(short, long)]
        quiver: PathBuf,
        /// Exact-sequence bundle.
        #[arg(short, long)]
        ses: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 5])]
        primes: Vec<u64>,
        /// Maximum number of subspace tuples per enumeration.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Run a named verification suite, or match one mutated cluster.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(short, long)]
        quiver: Option<PathBuf>,
        #[arg(short = 'w', long)]
        potential: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        seq: Vec<Vertex>,
    },
}

/// Result of one command before formatting.
struct Output {
    text: String,
    json: Value,
    exact: bool,
    warnings: Vec<String>,
    failed: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, exact: true, warnings: Vec::new(), failed: false }
    }
}

type Failure = String;

fn read(path: &FsPath) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_quiver(path: &FsPath) -> Result<Quiver, Failure> {
    parse_quiver(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_qp(quiver: &FsPath, potential: Option<&PathBuf>, trunc: usize) -> Result<QP, Failure> {
    let q = Arc::new(load_quiver(quiver)?);
    let w = match potential {
        Some(p) => parse_potential(q.clone(), &read(p)?, trunc).map_err(|e| format!("{}: {e}", p.display()))?,
        None => Potential::zero(q.clone(), trunc),
    };
    QP::new(q, w).map_err(|e| e.to_string())
}

fn err<E: std::fmt::Display>(e: E) -> Failure {
    e.to_string()
}

fn line(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn mutate_qp_output(qp: &QP, seq: &[Vertex], depth: Option<usize>) -> Result<Output, Failure> {
    let mut cur = qp.clone();
    let mut trivial = Vec::new();
    let mut warnings = Vec::new();
    let mut exact = true;
    for &i in seq {
        let pre = cur.premutate(i).map_err(err)?;
        let red = match pre.reduce() {
            Ok(r) => r,
            Err(PotentialError::TruncationExhausted { trunc, partial }) => {
                warnings.push(format!("reduction at vertex {i} did not stabilize below degree {trunc}"));
                exact = false;
                *partial
            }
            Err(e) => return Err(e.to_string()),
        };
        trivial.push(json!({
            "vertex": i,
            "quiver": quiver_to_value(red.trivial.quiver()),
            "potential": potential_to_value(red.trivial.potential()),
        }));
        cur = red.reduced;
    }
    exact &= cur.potential().is_exact();
    let mut text = format!(
        "quiver: {}\npotential: {}\n",
        line(&quiver_to_value(cur.quiver())),
        line(&potential_to_value(cur.potential()))
    );
    for t in &trivial {
        text.push_str(&format!("trivial part at {}: {} {}\n", t["vertex"], line(&t["quiver"]), line(&t["potential"])));
    }
    let mut json = json!({
        "quiver": quiver_to_value(cur.quiver()),
        "potential": potential_to_value(cur.potential()),
        "trivial": trivial,
    });
    if let Some(d) = depth {
        let r = cur.probe_nondegeneracy(d);
        let obstructions: Vec<String> =
            r.obstructions.iter().map(|s| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")).collect();
        if r.no_obstruction() {
            text.push_str(&format!("no obstruction up to depth {}\n", r.depth_checked));
        } else {
            text.push_str(&format!("obstructed at depth {}: {}\n", r.depth_checked, obstructions.join("; ")));
        }
        if r.inexact {
            warnings.push("some reductions during the probe were truncated".into());
        }
        json["probe"] = json!({"depth": r.depth_checked, "obstructions": r.obstructions, "states": r.states_explored});
    }
    Ok(Output { text, json, exact, warnings, failed: false })
}

fn jacobian_output(qp: &QP, trunc: usize) -> Output {
    let j = TruncatedJacobian::new(qp, trunc);
    let dims: Vec<String> = j.dims().iter().map(ToString::to_string).collect();
    let fin = match j.finiteness() {
        Finiteness::Finite { dimension } => format!("finite (dimension {dimension})"),
        Finiteness::Unknown { truncation } => format!("unknown at truncation {truncation}"),
    };
    let text = format!("dims: {}\ntotal: {}\nstabilized: {}\nfiniteness: {fin}\n", dims.join(" "), j.total_dimension(),
        if j.is_stabilized() { "yes" } else { "no" });
    let json = json!({
        "dims": j.dims(),
        "total": j.total_dimension(),
        "stabilized": j.is_stabilized(),
        "finiteness": fin,
    });
    Output { exact: j.is_stabilized(), ..Output::ok(text, json) }
}

fn seed_output(q: Quiver, seq: &[Vertex]) -> Result<Output, Failure> {
    let s = Seed::initial(q).map_err(err)?.mutate_sequence(seq).map_err(err)?;
    let vars: Vec<String> = s.cluster().iter().map(ToString::to_string).collect();
    let mut text = String::new();
    for (k, v) in vars.iter().enumerate() {
        text.push_str(&format!("x'_{} = {v}\n", k + 1));
    }
    text.push_str(&format!("quiver: {}\n", line(&quiver_to_value(s.quiver()))));
    Ok(Output::ok(text, json!({"cluster": vars, "quiver": quiver_to_value(s.quiver())})))
}

fn bfs_output(q: &Quiver, depth: usize, budget: u128) -> Result<Output, Failure> {
    let g = explore(q, depth, usize::try_from(budget).unwrap_or(usize::MAX)).map_err(err)?;
    let vars: Vec<String> = g.laurent_variables().map_err(err)?.iter().map(ToString::to_string).collect();
    let closed = if g.closed { "yes" } else { "no" };
    let mut text = format!("variables: {}\n", vars.len());
    for v in &vars {
        text.push_str(&format!("  {v}\n"));
    }
    text.push_str(&format!("seeds: {}\nclosure: {closed}\nedges:\n", g.seeds.len()));
    for &(s, k, t) in &g.edges {
        text.push_str(&format!("  s{s} -{k}- s{t}\n"));
    }
    let seeds: Vec<Value> = g
        .canonical
        .iter()
        .enumerate()
        .map(|(k, c)| {
            json!({
                "id": format!("s{k}"),
                "cluster": c.cluster.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "b_matrix": c.b_matrix,
            })
        })
        .collect();
    let edges: Vec<Value> = g.edges.iter().map(|&(s, k, t)| json!([format!("s{s}"), k, format!("s{t}")])).collect();
    let json = json!({"variables": vars, "seeds": seeds, "edges": edges, "closed": g.closed});
    let mut out = Output::ok(text, json);
    if !g.closed {
        out.warnings.push(format!("exchange graph not closed within depth {depth}"));
    }
    Ok(out)
}

fn dichotomy_output(q: Quiver, ses_path: &FsPath, primes: &[u64], budget: u128) -> Result<Output, Failure> {
    let s = parse_ses(Arc::new(q), &read(ses_path)?).map_err(|e| format!("{}: {e}", ses_path.display()))?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut failed = false;
    for &p in primes {
        let t = s.strata_counts(p, budget).map_err(err)?;
        let bad = t.cells.values().filter(|c| (c.g > 0) == (c.g_prime > 0)).count();
        failed |= bad > 0 || t.identity_violations > 0;
        text.push_str(&format!(
            "q = {p}: {} pairs, dichotomy {}, dimension identity {}\n",
            t.cells.len(),
            if bad == 0 { "holds" } else { "fails" },
            if t.identity_violations == 0 { "holds" } else { "fails" }
        ));
        let cells: Vec<Value> = t
            .cells
            .values()
            .map(|c| json!({"u": c.u_dims, "v": c.v_dims, "g": c.g.to_string(), "g_prime": c.g_prime.to_string()}))
            .collect();
        rows.push(json!({"prime": p, "dichotomy": bad == 0, "dimension_identity": t.identity_violations == 0, "cells": cells}));
    }
    let euler = s.euler_identity_check(budget).map_err(err)?;
    failed |= !euler;
    text.push_str(&format!("euler identity: {}\n", if euler { "holds" } else { "fails" }));
    Ok(Output { failed, ..Output::ok(text, json!({"primes": rows, "euler_identity": euler})) })
}

fn dispatch(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::MutateQuiver { quiver, seq } => {
            let q = load_quiver(&quiver)?.mutate_sequence(&seq).map_err(err)?;
            let v = quiver_to_value(&q);
            Ok(Output::ok(format!("{}\n", line(&v)), v))
        }
        Command::MutateQp { quiver, potential, seq, trunc_degree, depth } => {
            let qp = load_qp(&quiver, potential.as_ref(), trunc_degree)?;
            mutate_qp_output(&qp, &seq, depth)
        }
        Command::Jacobian { quiver, potential, trunc_degree } => {
            Ok(jacobian_output(&load_qp(&quiver, potential.as_ref(), trunc_degree)?, trunc_degree))
        }
        Command::SeedMutate { quiver, seq } => seed_output(load_quiver(&quiver)?, &seq),
        Command::Bfs { quiver, depth, budget } => bfs_output(&load_quiver(&quiver)?, depth, budget),
        Command::Char { quiver, potential, input, trunc_degree } => {
            let qp = load_qp(&quiver, potential.as_ref(), trunc_degree)?;
            let c = parse_char_input(qp.quiver(), &read(&input)?).map_err(|e| format!("{}: {e}", input.display()))?;
            let x = character(&qp, &c).map_err(err)?;
            let terms: Vec<Value> = x.terms().map(|(e, c)| json!([e, c.to_string()])).collect();
            Ok(Output::ok(format!("{x}\n"), json!({"character": x.to_string(), "terms": terms})))
        }
        Command::Dichotomy { quiver, ses, primes, budget } => dichotomy_output(load_quiver(&quiver)?, &ses, &primes, budget),
        Command::Verify { suite, quiver, potential, seq } => match (suite, quiver) {
            (Some(name), None) => {
                let r = run_suite(&name).map_err(err)?;
                let checks: Vec<Value> =
                    r.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect();
                Ok(Output { failed: !r.passed(), ..Output::ok(format!("{r}\n"), json!({"suite": name, "checks": checks})) })
            }
            (None, Some(q)) => {
                let qp = load_qp(&q, potential.as_ref(), DEFAULT_TRUNC_DEGREE)?;
                let r = verify_mutated_cluster(&qp, &seq).map_err(err)?;
                let matches: Vec<Value> = r
                    .matches
                    .iter()
                    .map(|m| json!({"vertex": m.vertex, "variable": m.variable, "module_dims": m.module_dims,
                        "g": m.g.as_ref().map(|g| g.0.clone()), "matched": m.matched}))
                    .collect();
                Ok(Output { failed: !r.passed(), ..Output::ok(r.to_string(), json!({"matches": matches})) })
            }
            _ => Err("verify needs exactly one of --suite or --quiver".into()),
        },
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, errout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(errout, "{rendered}") };
            return code;
        }
    };
    let format = cli.format;
    match dispatch(cli) {
        Ok(o) => {
            let _ = match format {
                Format::Text => {
                    for w in &o.warnings {
                        let _ = writeln!(errout, "warning: {w}");
                    }
                    write!(out, "{}", o.text)
                }
                Format::Json => {
                    let v = json!({"result": o.json, "exact": o.exact, "warnings": o.warnings});
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))
                }
            };
            i32::from(o.failed)
        }
        Err(msg) => {
            let _ = writeln!(errout, "error: {msg}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("qpchar").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["mutate-quiver"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn missing_files_are_domain_errors() {
        let (code, _, err) = run_capture(&["mutate-quiver", "-q", "/nonexistent.json", "--seq", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("cannot read"));
    }

    #[test]
    fn suites_run() {
        let (code, out, _) = run_capture(&["verify", "--suite", "a2"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("all checks passed"));
        assert_eq!(run_capture(&["verify", "--suite", "e8"]).0, 1);
    }
}
