//! Per-conflict metrics and their aggregation over benchmark runs.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::analyze::ConflictResult;
use crate::heuristics::Heuristic;

/// Counters of one solver run. Averages are kept as integer sums so they
/// are exact until rendered.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConflictStats {
    pub conflicts: u64,
    pub sum_nogood_len: u64,
    pub sum_backjump_len: u64,
    pub sum_resolution_steps: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub loop_nogoods: u64,
    pub ufs_calls: u64,
    pub deleted: u64,
    pub elapsed: f64,
}

fn ratio(sum: u64, n: u64) -> Option<f64> {
    (n > 0).then(|| sum as f64 / n as f64)
}

/// Two decimals, or `NA` when undefined.
pub fn format_avg(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{:.2}", x),
        None => "NA".to_string(),
    }
}

impl ConflictStats {
    /// Adds one analyzed conflict that happened at `conflict_level`.
    pub fn record_conflict(&mut self, r: &ConflictResult, conflict_level: u32) {
        debug_assert!(conflict_level > r.backjump_level);
        self.conflicts += 1;
        self.sum_nogood_len += r.nogood.len() as u64;
        self.sum_backjump_len += (conflict_level - r.backjump_level) as u64;
        self.sum_resolution_steps += r.resolution_steps as u64;
    }

    pub fn avg_nogood_len(&self) -> Option<f64> {
        ratio(self.sum_nogood_len, self.conflicts)
    }

    pub fn avg_backjump_len(&self) -> Option<f64> {
        ratio(self.sum_backjump_len, self.conflicts)
    }

    pub fn avg_resolution_steps(&self) -> Option<f64> {
        ratio(self.sum_resolution_steps, self.conflicts)
    }

    /// The `stat name=value` block printed by the command-line solver.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "stat conflicts={}", self.conflicts);
        let _ = writeln!(s, "stat decisions={}", self.decisions);
        let _ = writeln!(s, "stat propagations={}", self.propagations);
        let _ = writeln!(s, "stat restarts={}", self.restarts);
        let _ = writeln!(s, "stat loop_nogoods={}", self.loop_nogoods);
        let _ = writeln!(s, "stat ufs_calls={}", self.ufs_calls);
        let _ = writeln!(s, "stat deleted={}", self.deleted);
        let _ = writeln!(s, "stat avg_nogood_len={}", format_avg(self.avg_nogood_len()));
        let _ = writeln!(s, "stat avg_backjump={}", format_avg(self.avg_backjump_len()));
        let _ = writeln!(s, "stat avg_res_steps={}", format_avg(self.avg_resolution_steps()));
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Sat,
    Unsat,
    Unknown,
    Error,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Sat => "SAT",
            RunStatus::Unsat => "UNSAT",
            RunStatus::Unknown => "UNKNOWN",
            RunStatus::Error => "ERROR",
        }
    }

    pub fn completed(self) -> bool {
        matches!(self, RunStatus::Sat | RunStatus::Unsat)
    }
}

/// One (instance, shuffle, heuristic) run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub instance: String,
    pub class: String,
    pub heuristic: Heuristic,
    pub shuffle: usize,
    pub status: RunStatus,
    pub time: f64,
    pub stats: ConflictStats,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowKind {
    Class(String),
    Overall,
    Penalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub kind: RowKind,
    pub heuristic: Heuristic,
    /// Runs that entered the averages.
    pub runs: usize,
    pub timeouts: usize,
    pub time: Option<f64>,
    pub conflicts: Option<f64>,
    pub nogood_len: Option<f64>,
    pub backjump: Option<f64>,
    pub res_steps: Option<f64>,
}

fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut n = 0usize;
    let mut s = 0.0;
    for v in values {
        n += 1;
        s += v;
    }
    (n > 0).then(|| s / n as f64)
}

fn mean_defined(values: impl IntoIterator<Item = Option<f64>>) -> Option<f64> {
    mean(values.into_iter().flatten())
}

/// Aggregates runs into per-class rows, an overall row and a penalized
/// time row for every heuristic.
///
/// Class rows average over instances whose runs all completed under every
/// heuristic; timeouts are counted over all runs. The overall row is the
/// unweighted mean of the class means. The penalized row averages time over
/// all runs with every timeout charged `time_limit` (or its measured time
/// when there is no limit), again weighting classes equally.
pub fn summarize(runs: &[RunRecord], heuristics: &[Heuristic], time_limit: Option<f64>) -> Vec<SummaryRow> {
    if runs.is_empty() {
        return Vec::new();
    }
    let mut classes: Vec<&str> = Vec::new();
    for r in runs {
        if !classes.contains(&r.class.as_str()) {
            classes.push(&r.class);
        }
    }
    let incomplete: BTreeSet<&str> = runs
        .iter()
        .filter(|r| !r.status.completed())
        .map(|r| r.instance.as_str())
        .collect();

    let mut rows = Vec::new();
    for &h in heuristics {
        let mut class_rows = Vec::new();
        let mut penalized = Vec::new();
        for &c in &classes {
            let of_class: Vec<&RunRecord> = runs.iter().filter(|r| r.class == c && r.heuristic == h).collect();
            let included: Vec<&RunRecord> = of_class
                .iter()
                .copied()
                .filter(|r| !incomplete.contains(r.instance.as_str()))
                .collect();
            let timeouts = of_class.iter().filter(|r| r.status == RunStatus::Unknown).count();
            class_rows.push(SummaryRow {
                kind: RowKind::Class(c.to_string()),
                heuristic: h,
                runs: included.len(),
                timeouts,
                time: mean(included.iter().map(|r| r.time)),
                conflicts: mean(included.iter().map(|r| r.stats.conflicts as f64)),
                nogood_len: mean_defined(included.iter().map(|r| r.stats.avg_nogood_len())),
                backjump: mean_defined(included.iter().map(|r| r.stats.avg_backjump_len())),
                res_steps: mean_defined(included.iter().map(|r| r.stats.avg_resolution_steps())),
            });
            penalized.push(mean(of_class.iter().filter(|r| r.status != RunStatus::Error).map(|r| {
                match (r.status, time_limit) {
                    (RunStatus::Unknown, Some(limit)) => limit,
                    _ => r.time,
                }
            })));
        }
        let overall = SummaryRow {
            kind: RowKind::Overall,
            heuristic: h,
            runs: class_rows.iter().map(|r| r.runs).sum(),
            timeouts: class_rows.iter().map(|r| r.timeouts).sum(),
            time: mean_defined(class_rows.iter().map(|r| r.time)),
            conflicts: mean_defined(class_rows.iter().map(|r| r.conflicts)),
            nogood_len: mean_defined(class_rows.iter().map(|r| r.nogood_len)),
            backjump: mean_defined(class_rows.iter().map(|r| r.backjump)),
            res_steps: mean_defined(class_rows.iter().map(|r| r.res_steps)),
        };
        let pen = SummaryRow {
            kind: RowKind::Penalized,
            heuristic: h,
            runs: runs.iter().filter(|r| r.heuristic == h && r.status != RunStatus::Error).count(),
            timeouts: overall.timeouts,
            time: mean_defined(penalized),
            conflicts: None,
            nogood_len: None,
            backjump: None,
            res_steps: None,
        };
        rows.extend(class_rows);
        rows.push(overall);
        rows.push(pen);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lit::Var;

    fn result(len: usize, k: u32, steps: usize) -> ConflictResult {
        ConflictResult {
            nogood: (0..len as u32).map(|i| Var(i).t()).collect(),
            backjump_level: k,
            resolution_steps: steps,
            uip: Var(0).t(),
            conflict_level: 3,
            violated: crate::nogoods::NogoodId(0),
            resolvents: Vec::new(),
        }
    }

    #[test]
    fn record_conflict_sums() {
        let mut s = ConflictStats::default();
        s.record_conflict(&result(2, 1, 3), 3);
        assert_eq!((s.sum_nogood_len, s.sum_backjump_len, s.sum_resolution_steps), (2, 2, 3));
        let mut s = ConflictStats::default();
        s.record_conflict(&result(1, 0, 4), 3);
        assert_eq!((s.sum_nogood_len, s.sum_backjump_len, s.sum_resolution_steps), (1, 3, 4));
    }

    #[test]
    fn zero_conflicts_render_na() {
        let s = ConflictStats::default();
        assert_eq!(s.avg_nogood_len(), None);
        assert!(s.render().contains("stat avg_nogood_len=NA"));
    }

    fn run(instance: &str, class: &str, status: RunStatus, time: f64, conflicts: u64) -> RunRecord {
        RunRecord {
            instance: instance.into(),
            class: class.into(),
            heuristic: Heuristic::First,
            shuffle: 0,
            status,
            time,
            stats: ConflictStats {
                conflicts,
                ..Default::default()
            },
        }
    }

    #[test]
    fn classes_weighted_equally() {
        let runs = vec![
            run("a1", "A", RunStatus::Sat, 1.0, 10),
            run("b1", "B", RunStatus::Sat, 1.0, 20),
            run("b2", "B", RunStatus::Sat, 1.0, 30),
            run("b3", "B", RunStatus::Unsat, 1.0, 40),
        ];
        let rows = summarize(&runs, &[Heuristic::First], None);
        let overall = rows.iter().find(|r| r.kind == RowKind::Overall).unwrap();
        assert_eq!(overall.conflicts, Some(20.0));
    }

    #[test]
    fn penalized_time() {
        let runs = vec![
            run("a1", "A", RunStatus::Sat, 100.0, 1),
            run("a2", "A", RunStatus::Unknown, 12.0, 1),
        ];
        let rows = summarize(&runs, &[Heuristic::First], Some(600.0));
        let pen = rows.iter().find(|r| r.kind == RowKind::Penalized).unwrap();
        assert_eq!(pen.time, Some(350.0));
        let class = &rows[0];
        assert_eq!(class.timeouts, 1);
        assert_eq!(class.runs, 1);
        assert_eq!(class.time, Some(100.0));
    }

    #[test]
    fn empty_runs() {
        assert!(summarize(&[], &Heuristic::ALL, Some(1.0)).is_empty());
    }
}
