//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::apps::verify_cut;
use crate::extract::certify;
use crate::instance::{InstanceError, MultiflowInstance};
use crate::oracle::{dual_enum, OracleError};
use crate::pipeline::{solve_max_multiflow, MaxMultiflowSolution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_UNBOUNDED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_TOO_LARGE: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "halfflow", version, about = "Half-integral node-capacitated multiflows")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance and print the multiflow as JSON.
    Solve(SolveArgs),
    /// Print the exhaustive dual optimum of a small instance.
    Oracle(OracleArgs),
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Include the rounded multiway cut.
    #[arg(long)]
    emit_cut: bool,
    /// Include the optimal dual potential.
    #[arg(long)]
    emit_dual: bool,
    /// Include iteration statistics.
    #[arg(long)]
    stats: bool,
    /// Re-check the certificate and the cut before writing.
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, clap::Args)]
pub struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
}

fn instance_exit(err: &InstanceError) -> i32 {
    match err {
        InstanceError::Unbounded(..) => EXIT_UNBOUNDED,
        InstanceError::Syntax(_) | InstanceError::Validation(_) => EXIT_INVALID,
    }
}

fn load(path: &PathBuf, err: &mut dyn Write) -> Result<MultiflowInstance, i32> {
    let text = fs::read_to_string(path).map_err(|e| {
        let _ = writeln!(err, "cannot read {}: {e}", path.display());
        EXIT_IO
    })?;
    MultiflowInstance::parse(&text).map_err(|e| {
        let _ = writeln!(err, "{e}");
        instance_exit(&e)
    })
}

/// Which optional sections to include in the solve report.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub cut: bool,
    pub dual: bool,
    pub stats: bool,
}

impl ReportOptions {
    pub fn all() -> Self {
        ReportOptions { cut: true, dual: true, stats: true }
    }
}

/// The JSON report of a solution; keys and paths come out in a fixed order.
pub fn solution_json(instance: &MultiflowInstance, sol: &MaxMultiflowSolution, opts: ReportOptions) -> Value {
    let mut paths: Vec<(Vec<&str>, i64)> = sol
        .multiflow
        .paths
        .iter()
        .map(|p| (p.nodes.iter().map(|&v| instance.name(v)).collect(), p.lambda2))
        .collect();
    paths.sort();
    let mut out = Map::new();
    out.insert("value2".into(), json!(sol.value2()));
    out.insert(
        "paths".into(),
        paths.into_iter().map(|(nodes, lambda2)| json!({"nodes": nodes, "lambda2": lambda2})).collect(),
    );
    if opts.dual {
        let mut p = Map::new();
        let mut r4 = Map::new();
        for v in 0..instance.num_nodes() {
            let x = sol.potential.point(v);
            p.insert(instance.name(v).into(), sol.star.tree.point_json(x.p));
            r4.insert(instance.name(v).into(), json!(x.r4));
        }
        out.insert("dual".into(), json!({"p": p, "r4": r4}));
    }
    if opts.cut {
        let mut names: Vec<&str> = sol.cut.nodes.iter().map(|&v| instance.name(v)).collect();
        names.sort_unstable();
        out.insert("multiway_cut".into(), json!(names));
        out.insert("cut_capacity".into(), json!(sol.cut.capacity));
    }
    if opts.stats {
        out.insert(
            "stats".into(),
            json!({
                "iterations": sol.stats.iterations,
                "g_trace": sol.stats.g_trace,
                "augmentations": sol.stats.augmentations,
            }),
        );
    }
    Value::Object(out)
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let instance = match load(&args.input, err) {
        Ok(inst) => inst,
        Err(code) => return code,
    };
    let sol = match solve_max_multiflow(&instance) {
        Ok(sol) => sol,
        Err(e) => {
            let _ = writeln!(err, "solve failed: {e}");
            return EXIT_VERIFY;
        }
    };
    if args.verify {
        let original = instance.with_uniform_cost(0);
        let rep = certify(&original, &sol.star, &sol.potential, &sol.multiflow);
        if !rep.is_optimal() || !verify_cut(&instance, &sol.cut.nodes) || sol.cut.capacity > sol.value2() {
            let _ = writeln!(err, "verification failed: {rep:?}");
            return EXIT_VERIFY;
        }
    }
    let opts = ReportOptions { cut: args.emit_cut, dual: args.emit_dual, stats: args.stats };
    let text = serde_json::to_string_pretty(&solution_json(&instance, &sol, opts)).expect("json") + "\n";
    match &args.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                let _ = writeln!(err, "cannot write {}: {e}", path.display());
                return EXIT_IO;
            }
        }
        None => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_IO;
            }
        }
    }
    EXIT_OK
}

fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let instance = match load(&args.input, err) {
        Ok(inst) => inst,
        Err(code) => return code,
    };
    match dual_enum(&instance) {
        Ok((value, _)) => {
            let _ = writeln!(out, "{value}");
            EXIT_OK
        }
        Err(OracleError::TooLarge) => {
            let _ = writeln!(err, "instance too large for the oracle");
            EXIT_TOO_LARGE
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match &cli.command {
        Command::Solve(args) => cmd_solve(args, out, err),
        Command::Oracle(args) => cmd_oracle(args, out, err),
    }
}
