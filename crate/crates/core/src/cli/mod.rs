//! Command-line front end.
//!
//! ```text
//! cdnl solve prog.lp --heuristic lex --stats
//! cdnl solve graph.ng --mode nogoods --script "F p, T q" --trace
//! cdnl bench instances/ --shuffles 5 --seed 1 --no-times
//! ```
//!
//! Exit codes: 10 SAT, 20 UNSAT, 30 unknown (limit reached), 0 for info
//! commands, 1 for usage or input errors, 2 when `--oracle` disagrees.

pub mod nogood_file;

pub use nogood_file::parse_nogood_file;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analyze::{export_conflict_graph, ConflictGraph};
use crate::bench::{derive_seed, run_suite, shuffle_instance, shuffle_nogoods, BenchConfig};
use crate::error::Error;
use crate::heuristics::Heuristic;
use crate::instance::Instance;
use crate::oracle::{answer_sets, nogood_solutions, DEFAULT_BOUND};
use crate::program::parse_program;
use crate::solve::{ConflictEvent, DeletionPolicy, Observer, RestartPolicy, Solver, SolverConfig, Status};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_UNKNOWN: i32 = 30;
pub const EXIT_INFO: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cdnl", version, about = "Conflict-driven nogood learning for normal logic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Program,
    Nogoods,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Run every instance of a directory under each heuristic and print CSV.
    Bench(BenchArgs),
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, default_value = "first")]
    heuristic: Heuristic,
    #[arg(long, value_enum, default_value = "program")]
    mode: Mode,
    /// Decisions taken first, e.g. "F p, T q".
    #[arg(long)]
    script: Option<String>,
    /// Nonzero seeds shuffle the instance before solving.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    stats: bool,
    #[arg(long)]
    trace: bool,
    /// Cross-check the result with the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value = "off", value_parser = parse_restarts)]
    restarts: RestartPolicy,
    #[arg(long, default_value = "off", value_parser = parse_deletion)]
    deletion: DeletionPolicy,
    #[arg(long)]
    max_conflicts: Option<u64>,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Write the conflict graph of the first conflict to FILE.
    #[arg(long, value_name = "FILE")]
    dump_graph: Option<PathBuf>,
    /// Print the static nogoods and exit.
    #[arg(long)]
    dump_nogoods: bool,
}

#[derive(clap::Args, Debug)]
struct BenchArgs {
    dir: PathBuf,
    /// Comma-separated heuristic names; all by default.
    #[arg(long, value_delimiter = ',')]
    heuristics: Vec<Heuristic>,
    #[arg(long, default_value_t = 5)]
    shuffles: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    max_conflicts: Option<u64>,
    #[arg(long, default_value = "off", value_parser = parse_restarts)]
    restarts: RestartPolicy,
    #[arg(long)]
    threads: Option<usize>,
    /// Report run times as `-` for reproducible output.
    #[arg(long)]
    no_times: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_restarts(s: &str) -> Result<RestartPolicy, String> {
    if s == "off" {
        return Ok(RestartPolicy::Off);
    }
    let rest = s
        .strip_prefix("geom:")
        .ok_or_else(|| format!("expected `off` or `geom:BASE,FACTOR`, got `{}`", s))?;
    let (base, factor) = rest
        .split_once(',')
        .ok_or_else(|| format!("expected `geom:BASE,FACTOR`, got `{}`", s))?;
    let base: u64 = base.trim().parse().map_err(|_| format!("bad restart base `{}`", base))?;
    let factor: f64 = factor.trim().parse().map_err(|_| format!("bad restart factor `{}`", factor))?;
    if base == 0 || factor.is_nan() || factor < 1.0 {
        return Err("restart base must be positive and factor at least 1".into());
    }
    Ok(RestartPolicy::Geometric { base, factor })
}

fn parse_deletion(s: &str) -> Result<DeletionPolicy, String> {
    if s == "off" {
        return Ok(DeletionPolicy::Off);
    }
    let n = s
        .strip_prefix("cap:")
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| format!("expected `off` or `cap:N`, got `{}`", s))?;
    Ok(DeletionPolicy::ActivityCapped { max_recorded: n })
}

/// Collects trace lines and the first conflict graph.
#[derive(Default)]
struct CliObserver {
    trace: bool,
    want_graph: bool,
    lines: Vec<String>,
    graph: Option<ConflictGraph>,
    conflicts: usize,
    names: Vec<String>,
}

impl Observer for CliObserver {
    fn on_conflict(&mut self, c: &ConflictEvent<'_>) {
        self.conflicts += 1;
        if self.trace {
            let parts: Vec<String> = c
                .result
                .nogood
                .iter()
                .map(|l| format!("{} {}", if l.sign() { 'T' } else { 'F' }, self.names[l.var().index()]))
                .collect();
            self.lines.push(format!(
                "conflict {}: nogood={{{}}} k={} steps={}",
                self.conflicts,
                parts.join(", "),
                c.result.backjump_level,
                c.result.resolution_steps
            ));
        }
        if self.want_graph && self.graph.is_none() {
            self.graph = Some(export_conflict_graph(c.result, c.store, c.trail));
        }
    }
}

fn load_instance(args: &SolveArgs) -> Result<Instance, String> {
    let text = fs::read_to_string(&args.file).map_err(|e| format!("{}: {}", args.file.display(), e))?;
    let name = args.file.file_name().map(|n| n.to_string_lossy().to_string()).unwrap_or_default();
    let mut inst = match args.mode {
        Mode::Program => {
            let p = parse_program(&text).map_err(|e| format!("{}: {}", args.file.display(), e))?;
            let p = if args.seed != 0 { shuffle_instance(&p, derive_seed(args.seed, &name, 0)) } else { p };
            Instance::from_program(p)
        }
        Mode::Nogoods => {
            let i = parse_nogood_file(&text).map_err(|e| format!("{}: {}", args.file.display(), e))?;
            if args.seed != 0 {
                shuffle_nogoods(&i, derive_seed(args.seed, &name, 0))
            } else {
                i
            }
        }
    };
    if let Some(script) = &args.script {
        let mut lits = Vec::new();
        for part in script.split(',').filter(|s| !s.trim().is_empty()) {
            let l = inst
                .parse_lit(part)
                .ok_or_else(|| Error::UnknownScriptVariable(part.trim().to_string()).to_string())?;
            lits.push(l);
        }
        inst.set_script(lits);
    }
    Ok(inst)
}

/// `Ok(true)` when the outcome agrees with the oracle.
fn oracle_agrees(inst: &Instance, status: &Status) -> Result<bool, Error> {
    match inst.program() {
        Some(p) => {
            let mut sets: Vec<Vec<String>> = answer_sets(p)?
                .into_iter()
                .map(|s| {
                    let mut n: Vec<String> =
                        s.into_iter().filter(|&a| !p.atom(a).hidden).map(|a| p.atom(a).name.clone()).collect();
                    n.sort();
                    n
                })
                .collect();
            sets.sort();
            Ok(match status {
                Status::Sat(vars) => {
                    let mut m: Vec<String> = vars.iter().map(|&v| inst.name(v).to_string()).collect();
                    m.sort();
                    sets.contains(&m)
                }
                Status::Unsat => sets.is_empty(),
                Status::Unknown(_) => true,
            })
        }
        None => {
            let sols = nogood_solutions(inst.num_vars(), inst.nogoods(), DEFAULT_BOUND)?;
            Ok(match status {
                Status::Sat(vars) => {
                    let mut v = vec![false; inst.num_vars()];
                    for x in vars {
                        v[x.index()] = true;
                    }
                    sols.contains(&v)
                }
                Status::Unsat => sols.is_empty(),
                Status::Unknown(_) => true,
            })
        }
    }
}

fn run_solve(args: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let inst = match load_instance(&args) {
        Ok(i) => i,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            return EXIT_ERROR;
        }
    };
    if args.dump_nogoods {
        let _ = write!(out, "{}", inst.to_nogood_file());
        return EXIT_INFO;
    }
    let cfg = SolverConfig {
        heuristic: args.heuristic,
        seed: args.seed,
        restarts: args.restarts,
        deletion: args.deletion,
        max_conflicts: args.max_conflicts,
        time_limit: args.time_limit.map(Duration::from_secs_f64),
        ..Default::default()
    };
    let mut obs = CliObserver {
        trace: args.trace,
        want_graph: args.dump_graph.is_some(),
        names: inst.names().to_vec(),
        ..Default::default()
    };
    let outcome = {
        let mut solver = Solver::new(&inst, cfg);
        solver.set_observer(&mut obs);
        solver.solve()
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            return EXIT_ERROR;
        }
    };
    for line in &obs.lines {
        let _ = writeln!(out, "{}", line);
    }
    if let Some(path) = &args.dump_graph {
        let text = match &obs.graph {
            Some(g) => g.to_text(&inst),
            None => "% conflict graph\n% no conflict\n".to_string(),
        };
        if let Err(e) = fs::write(path, text) {
            let _ = writeln!(err, "error: {}: {}", path.display(), e);
            return EXIT_ERROR;
        }
    }
    let code = match &outcome.status {
        Status::Sat(_) => {
            let names = outcome.model_names(&inst).unwrap_or_default();
            let _ = writeln!(out, "ANSWER: {}", names.join(" "));
            EXIT_SAT
        }
        Status::Unsat => {
            let _ = writeln!(out, "UNSATISFIABLE");
            EXIT_UNSAT
        }
        Status::Unknown(_) => {
            let _ = writeln!(out, "UNKNOWN");
            EXIT_UNKNOWN
        }
    };
    if args.stats {
        let _ = write!(out, "{}", outcome.stats.render());
    }
    if args.oracle {
        match oracle_agrees(&inst, &outcome.status) {
            Ok(true) => {
                let _ = writeln!(out, "oracle: agree");
            }
            Ok(false) => {
                let _ = writeln!(out, "oracle: MISMATCH");
                return EXIT_MISMATCH;
            }
            Err(e) => {
                let _ = writeln!(err, "error: {}", e);
                return EXIT_ERROR;
            }
        }
    }
    code
}

fn run_bench(args: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = BenchConfig {
        heuristics: if args.heuristics.is_empty() { Heuristic::ALL.to_vec() } else { args.heuristics },
        shuffles: args.shuffles,
        seed: args.seed,
        time_limit: args.time_limit,
        max_conflicts: args.max_conflicts,
        restarts: args.restarts,
        record_times: !args.no_times,
        threads: args.threads,
        ..Default::default()
    };
    let csv = match run_suite(&args.dir, &cfg) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", args.dir.display(), e);
            return EXIT_ERROR;
        }
    };
    for line in csv.lines().filter(|l| l.contains(",ERROR,")) {
        let _ = writeln!(err, "warning: unreadable instance {}", line.split(',').next().unwrap_or(""));
    }
    match &args.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &csv) {
                let _ = writeln!(err, "error: {}: {}", path.display(), e);
                return EXIT_ERROR;
            }
        }
        None => {
            let _ = write!(out, "{}", csv);
        }
    }
    EXIT_INFO
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let info = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            if info {
                let _ = write!(out, "{}", e);
                return EXIT_INFO;
            }
            let _ = write!(err, "{}", e);
            return EXIT_ERROR;
        }
    };
    match cli.command {
        Command::Solve(a) => run_solve(a, out, err),
        Command::Bench(a) => run_bench(a, out, err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restart_flag() {
        assert_eq!(parse_restarts("off"), Ok(RestartPolicy::Off));
        assert_eq!(
            parse_restarts("geom:100,1.5"),
            Ok(RestartPolicy::Geometric { base: 100, factor: 1.5 })
        );
        assert!(parse_restarts("geom:0,1.5").is_err());
        assert!(parse_restarts("luby").is_err());
        assert!(parse_restarts("geom:10").is_err());
    }

    #[test]
    fn deletion_flag() {
        assert_eq!(parse_deletion("cap:50"), Ok(DeletionPolicy::ActivityCapped { max_recorded: 50 }));
        assert!(parse_deletion("cap:x").is_err());
    }

    #[test]
    fn bad_flags_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["cdnl", "solve", "x.lp", "--heuristic", "best"], &mut o, &mut e), EXIT_ERROR);
        assert_eq!(run(["cdnl", "frobnicate"], &mut o, &mut e), EXIT_ERROR);
        assert_eq!(run(["cdnl", "solve", "/nonexistent/x.lp"], &mut o, &mut e), EXIT_ERROR);
    }

    #[test]
    fn help_is_info() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["cdnl", "--help"], &mut o, &mut e), EXIT_INFO);
    }
}
