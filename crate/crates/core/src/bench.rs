//! Benchmark harness: every instance of a directory is shuffled several
//! times and solved under each heuristic; the runs are written as CSV
//! followed by summary rows.
//!
//! Shuffling permutes rule order and the literal order inside each rule
//! before re-parsing, which permutes atom, body and nogood indices and so
//! every index-based tie-break in the solver.

use std::collections::HashMap;
use std::fmt::Write;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cli::nogood_file::parse_nogood_file;
use crate::error::Result;
use crate::heuristics::Heuristic;
use crate::instance::Instance;
use crate::lit::{Lit, Var};
use crate::program::{parse_program, Program};
use crate::solve::{DeletionPolicy, RestartPolicy, Solver, SolverConfig, Status};
use crate::stats::{format_avg, summarize, ConflictStats, RowKind, RunRecord, RunStatus, SummaryRow};

pub const CSV_HEADER: &str =
    "instance,class,heuristic,shuffle,status,time_s,conflicts,avg_nogood_len,avg_backjump,avg_res_steps";

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub heuristics: Vec<Heuristic>,
    pub shuffles: usize,
    pub seed: u64,
    /// Wall-clock limit per run, in seconds.
    pub time_limit: Option<f64>,
    pub max_conflicts: Option<u64>,
    pub restarts: RestartPolicy,
    pub deletion: DeletionPolicy,
    /// When false, run times are reported as `-` so that output depends
    /// only on the inputs and the seed.
    pub record_times: bool,
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            heuristics: Heuristic::ALL.to_vec(),
            shuffles: 5,
            seed: 0,
            time_limit: None,
            max_conflicts: None,
            restarts: RestartPolicy::Off,
            deletion: DeletionPolicy::Off,
            record_times: true,
            threads: None,
        }
    }
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one (instance, shuffle) pair.
pub fn derive_seed(seed: u64, instance: &str, shuffle: usize) -> u64 {
    let mut h = mix(seed);
    for b in instance.bytes() {
        h = mix(h ^ b as u64);
    }
    mix(h ^ shuffle as u64)
}

/// Permutes rule order and body-literal order, then re-parses.
pub fn shuffle_instance(p: &Program, seed: u64) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rules = p.rules().to_vec();
    rules.shuffle(&mut rng);
    let mut text = String::new();
    for r in &rules {
        let mut order: Vec<usize> = (0..p.rule_text_len(r)).collect();
        order.shuffle(&mut rng);
        text.push_str(&p.rule_text(r, Some(&order)));
        text.push('\n');
    }
    parse_program(&text).expect("rendered program re-parses")
}

/// Permutes variable declarations, nogood order and literal order of a
/// nogood instance. Scripted decisions keep their order.
pub fn shuffle_nogoods(inst: &Instance, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = inst.num_vars();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(&mut rng);
    // perm[new] = old
    let mut new_of = vec![0u32; n];
    for (new, &old) in perm.iter().enumerate() {
        new_of[old as usize] = new as u32;
    }
    let map = |l: Lit| Lit::new(Var(new_of[l.var().index()]), l.sign());
    let names = perm.iter().map(|&old| inst.names()[old as usize].clone()).collect();
    let mut nogoods: Vec<Vec<Lit>> = inst
        .nogoods()
        .iter()
        .map(|ng| {
            let mut ng: Vec<Lit> = ng.iter().map(|&l| map(l)).collect();
            ng.shuffle(&mut rng);
            ng
        })
        .collect();
    nogoods.shuffle(&mut rng);
    let script = inst.script().iter().map(|&l| map(l)).collect();
    Instance::from_nogoods(names, nogoods, script)
}

/// Reads `class.map`: one `instance class` pair per line, `%` comments.
pub fn load_class_map(dir: &Path) -> Result<HashMap<String, String>> {
    let path = dir.join("class.map");
    let mut map = HashMap::new();
    if !path.exists() {
        return Ok(map);
    }
    for line in fs::read_to_string(path)?.lines() {
        let line = line.split('%').next().unwrap();
        let mut parts = line.split_whitespace();
        if let (Some(i), Some(c)) = (parts.next(), parts.next()) {
            map.insert(i.to_string(), c.to_string());
        }
    }
    Ok(map)
}

enum Loaded {
    Program(Program),
    Nogoods(Instance),
}

fn load(path: &Path) -> std::result::Result<Loaded, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("ng") => parse_nogood_file(&text).map(Loaded::Nogoods).map_err(|e| e.to_string()),
        _ => parse_program(&text).map(Loaded::Program).map_err(|e| e.to_string()),
    }
}

fn run_one(inst: &Instance, h: Heuristic, cfg: &BenchConfig) -> (RunStatus, f64, ConflictStats) {
    let solver_cfg = SolverConfig {
        heuristic: h,
        restarts: cfg.restarts,
        deletion: cfg.deletion,
        max_conflicts: cfg.max_conflicts,
        time_limit: cfg.time_limit.map(Duration::from_secs_f64),
        ..Default::default()
    };
    let start = Instant::now();
    let outcome = Solver::new(inst, solver_cfg).solve();
    let time = if cfg.record_times { start.elapsed().as_secs_f64() } else { 0.0 };
    match outcome {
        Ok(o) => {
            let status = match o.status {
                Status::Sat(_) => RunStatus::Sat,
                Status::Unsat => RunStatus::Unsat,
                Status::Unknown(_) => RunStatus::Unknown,
            };
            (status, time, o.stats)
        }
        Err(_) => (RunStatus::Error, time, ConflictStats::default()),
    }
}

/// Runs the suite and returns the run records in (instance, shuffle,
/// heuristic) order.
pub fn run_records(dir: &Path, cfg: &BenchConfig) -> Result<Vec<RunRecord>> {
    let classes = load_class_map(dir)?;
    let mut files: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("lp") | Some("ng")))
        .collect();
    files.sort();

    let mut jobs = Vec::new();
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let class = classes.get(&name).cloned().unwrap_or_else(|| "default".to_string());
        for s in 0..cfg.shuffles {
            jobs.push((path.clone(), name.clone(), class.clone(), s));
        }
    }

    let work = |(path, name, class, s): &(std::path::PathBuf, String, String, usize)| -> Vec<RunRecord> {
        let seed = derive_seed(cfg.seed, name, *s);
        let inst = match load(path) {
            Ok(Loaded::Program(p)) => Instance::from_program(shuffle_instance(&p, seed)),
            Ok(Loaded::Nogoods(i)) => shuffle_nogoods(&i, seed),
            Err(_) => {
                return cfg
                    .heuristics
                    .iter()
                    .map(|&h| RunRecord {
                        instance: name.clone(),
                        class: class.clone(),
                        heuristic: h,
                        shuffle: *s,
                        status: RunStatus::Error,
                        time: 0.0,
                        stats: ConflictStats::default(),
                    })
                    .collect()
            }
        };
        cfg.heuristics
            .iter()
            .map(|&h| {
                let (status, time, stats) = run_one(&inst, h, cfg);
                RunRecord {
                    instance: name.clone(),
                    class: class.clone(),
                    heuristic: h,
                    shuffle: *s,
                    status,
                    time,
                    stats,
                }
            })
            .collect()
    };

    let nested: Vec<Vec<RunRecord>> = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(|| jobs.par_iter().map(work).collect()),
        None => jobs.par_iter().map(work).collect(),
    };
    Ok(nested.into_iter().flatten().collect())
}

fn summary_line(row: &SummaryRow) -> String {
    let (tag, class) = match &row.kind {
        RowKind::Class(c) => ("#class", c.as_str()),
        RowKind::Overall => ("#overall", ""),
        RowKind::Penalized => ("#penalized", ""),
    };
    let opt = |v: Option<f64>| match v {
        Some(_) => format_avg(v),
        None if row.kind == RowKind::Penalized => String::new(),
        None => "NA".to_string(),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        tag,
        class,
        row.heuristic,
        row.runs,
        row.timeouts,
        format_avg(row.time),
        opt(row.conflicts),
        opt(row.nogood_len),
        opt(row.backjump),
        opt(row.res_steps)
    )
}

/// CSV text of the runs followed by the summary rows. In summary rows the
/// `shuffle` column holds the number of averaged runs and the `status`
/// column the number of timeouts.
pub fn render_csv(records: &[RunRecord], cfg: &BenchConfig) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let time = if cfg.record_times { format!("{:.3}", r.time) } else { "-".to_string() };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.instance,
            r.class,
            r.heuristic,
            r.shuffle,
            r.status.as_str(),
            time,
            r.stats.conflicts,
            format_avg(r.stats.avg_nogood_len()),
            format_avg(r.stats.avg_backjump_len()),
            format_avg(r.stats.avg_resolution_steps())
        );
    }
    for row in summarize(records, &cfg.heuristics, cfg.time_limit) {
        out.push_str(&summary_line(&row));
        out.push('\n');
    }
    out
}

pub fn run_suite(dir: &Path, cfg: &BenchConfig) -> Result<String> {
    let records = run_records(dir, cfg)?;
    Ok(render_csv(&records, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::answer_sets;

    fn named_sets(p: &Program) -> Vec<Vec<String>> {
        let mut v: Vec<Vec<String>> = answer_sets(p)
            .unwrap()
            .into_iter()
            .map(|s| {
                let mut n: Vec<String> = s
                    .into_iter()
                    .filter(|&a| !p.atom(a).hidden)
                    .map(|a| p.atom(a).name.clone())
                    .collect();
                n.sort();
                n
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn shuffle_is_deterministic() {
        let p = parse_program("a :- b, not c, d.\nb :- not e.\nc :- a.\nd.\n:- a, e.").unwrap();
        assert_eq!(shuffle_instance(&p, 0).to_text(), shuffle_instance(&p, 0).to_text());
        assert_eq!(shuffle_instance(&p, 7).to_text(), shuffle_instance(&p, 7).to_text());
    }

    #[test]
    fn shuffle_keeps_answer_sets() {
        let p = parse_program("a :- b, not c.\nb :- a.\nb :- not c.\nc :- not a.\n:- c, not b.").unwrap();
        for seed in 0..20 {
            assert_eq!(named_sets(&shuffle_instance(&p, seed)), named_sets(&p));
        }
    }

    #[test]
    fn single_rule_keeps_rule() {
        let p = parse_program("a :- b, c, not d.").unwrap();
        for seed in 0..10 {
            let q = shuffle_instance(&p, seed);
            assert_eq!(q.rules().len(), 1);
            let text = q.to_text();
            let mut lits: Vec<&str> = text.trim().trim_start_matches("a :- ").trim_end_matches('.').split(", ").collect();
            lits.sort();
            assert_eq!(lits, ["b", "c", "not d"]);
        }
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(0, "a.lp", 0), derive_seed(0, "a.lp", 1));
        assert_ne!(derive_seed(0, "a.lp", 0), derive_seed(0, "b.lp", 0));
        assert_eq!(derive_seed(3, "a.lp", 2), derive_seed(3, "a.lp", 2));
    }
}
