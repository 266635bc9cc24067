//! The conflict-driven nogood learning loop.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use crate::analyze::ConflictResult;
use crate::error::{Error, Result};
use crate::heuristics::Heuristic;
use crate::instance::Instance;
use crate::lit::{Lit, Var};
use crate::nogoods::{NogoodId, NogoodStore, Origin};
use crate::program::{AtomId, Program};
use crate::stats::ConflictStats;
use crate::trail::{Antecedent, Trail};
use crate::ufs::SourceState;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RestartPolicy {
    #[default]
    Off,
    /// Restart after `base` conflicts, then after `base * factor`, ...
    Geometric { base: u64, factor: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeletionPolicy {
    #[default]
    Off,
    /// Halve the recorded nogoods by activity once more than this many are
    /// stored.
    ActivityCapped { max_recorded: usize },
}

#[derive(Debug, Clone, Default)]
pub struct SolverConfig {
    pub heuristic: Heuristic,
    pub seed: u64,
    pub restarts: RestartPolicy,
    pub deletion: DeletionPolicy,
    pub max_conflicts: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Decisions taken before the regular decision heuristic. When empty,
    /// the instance's own script is used.
    pub scripted_decisions: Vec<Lit>,
    /// Re-verify propagation fixpoints and models (slow).
    pub check_invariants: bool,
}

impl SolverConfig {
    pub fn with_heuristic(heuristic: Heuristic) -> Self {
        SolverConfig {
            heuristic,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Conflicts,
    Time,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    /// Visible true variables (for programs: the answer set's atoms).
    Sat(Vec<Var>),
    Unsat,
    Unknown(Limit),
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: Status,
    pub stats: ConflictStats,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self.status, Status::Sat(_))
    }

    /// Names of the answer-set atoms, in first-appearance order.
    pub fn model_names(&self, inst: &Instance) -> Option<Vec<String>> {
        match &self.status {
            Status::Sat(vars) => Some(vars.iter().map(|&v| inst.name(v).to_string()).collect()),
            _ => None,
        }
    }
}

/// Result of propagating to a fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    NoConflict,
    Conflict(NogoodId),
}

/// One antecedent choice made during conflict analysis.
pub struct Selection<'s> {
    pub heuristic: Heuristic,
    pub implied: Lit,
    pub antecedents: &'s [NogoodId],
    pub chosen: NogoodId,
    pub trail: &'s Trail,
    pub store: &'s NogoodStore,
    pub level: u32,
}

/// Snapshot handed to observers when a conflict has been analyzed, before
/// backjumping.
pub struct ConflictEvent<'s> {
    pub result: &'s ConflictResult,
    pub trail: &'s Trail,
    pub store: &'s NogoodStore,
}

/// Hooks into a running solver, used for instrumentation and tracing.
pub trait Observer {
    fn on_selection(&mut self, _s: &Selection<'_>) {}
    /// After analysis, before backjumping.
    fn on_conflict(&mut self, _c: &ConflictEvent<'_>) {}
    /// After backjumping, before the derived nogood is recorded.
    fn on_backjump(&mut self, _c: &ConflictEvent<'_>) {}
    fn on_record(&mut self, _id: NogoodId, _lits: &[Lit], _origin: Origin) {}
    fn on_unfounded_check(&mut self, _found: &[AtomId]) {}
}

pub struct Solver<'a> {
    pub(crate) inst: &'a Instance,
    pub(crate) cfg: SolverConfig,
    pub(crate) store: NogoodStore,
    pub(crate) trail: Trail,
    pub(crate) sources: Option<SourceState>,
    pub(crate) stats: ConflictStats,
    pub(crate) observer: Option<&'a mut dyn Observer>,
    script: VecDeque<Lit>,
    var_activity: Vec<f64>,
    var_inc: f64,
    /// A conflict detected while recording, to be handled by the main loop.
    pending_conflict: Option<NogoodId>,
}

const VAR_DECAY: f64 = 0.95;
const NOGOOD_DECAY: f64 = 0.95;

impl<'a> Solver<'a> {
    pub fn new(inst: &'a Instance, cfg: SolverConfig) -> Self {
        let n = inst.num_vars();
        let mut store = NogoodStore::new(n);
        for ng in inst.nogoods() {
            store.record(ng.clone(), Origin::Static);
        }
        let sources = match inst.program() {
            Some(p) if !p.is_tight() => Some(SourceState::new(p)),
            _ => None,
        };
        let script = if cfg.scripted_decisions.is_empty() {
            inst.script().iter().copied().collect()
        } else {
            cfg.scripted_decisions.iter().copied().collect()
        };
        Solver {
            inst,
            cfg,
            store,
            trail: Trail::new(n),
            sources,
            stats: ConflictStats::default(),
            observer: None,
            script,
            var_activity: vec![0.0; n],
            var_inc: 1.0,
            pending_conflict: None,
        }
    }

    pub fn set_observer(&mut self, observer: &'a mut dyn Observer) {
        self.observer = Some(observer);
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    pub fn trail(&self) -> &Trail {
        &self.trail
    }

    pub fn store(&self) -> &NogoodStore {
        &self.store
    }

    pub fn stats(&self) -> &ConflictStats {
        &self.stats
    }

    pub fn heuristic(&self) -> Heuristic {
        self.cfg.heuristic
    }

    pub fn set_heuristic(&mut self, h: Heuristic) {
        self.cfg.heuristic = h;
    }

    pub fn program(&self) -> Option<&'a Program> {
        self.inst.program()
    }

    /// Opens a new decision level with `l`.
    pub fn assume(&mut self, l: Lit) -> Result<()> {
        if self.trail.is_assigned(l.var()) {
            return Err(Error::ScriptedAssigned(self.inst.lit_name(l)));
        }
        self.trail.assign(l, Antecedent::Decision);
        self.stats.decisions += 1;
        Ok(())
    }

    /// Next decision literal: the scripted one if any remain, otherwise
    /// `F v` for the unassigned variable with the highest activity
    /// (smallest index on ties). `None` when the assignment is total.
    pub fn decide(&mut self) -> Result<Option<Lit>> {
        if let Some(l) = self.script.pop_front() {
            if self.trail.is_assigned(l.var()) {
                return Err(Error::ScriptedAssigned(self.inst.lit_name(l)));
            }
            return Ok(Some(l));
        }
        let mut best: Option<usize> = None;
        for v in 0..self.var_activity.len() {
            if self.trail.is_assigned(Var(v as u32)) {
                continue;
            }
            match best {
                Some(b) if self.var_activity[v] <= self.var_activity[b] => {}
                _ => best = Some(v),
            }
        }
        Ok(best.map(|v| Var(v as u32).f()))
    }

    pub fn var_activity(&self, v: Var) -> f64 {
        self.var_activity[v.index()] / self.var_inc
    }

    fn bump_vars(&mut self, lits: &[Lit]) {
        for l in lits {
            let a = &mut self.var_activity[l.var().index()];
            *a += self.var_inc;
            if *a > 1e100 {
                for x in &mut self.var_activity {
                    *x *= 1e-100;
                }
                self.var_inc *= 1e-100;
            }
        }
    }

    fn decay_vars(&mut self) {
        self.var_inc /= VAR_DECAY;
        if self.var_inc > 1e100 {
            for x in &mut self.var_activity {
                *x *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
    }

    /// Handles a conflict at a level above 0: analysis, backjump, recording
    /// of the derived nogood and activity bookkeeping.
    pub fn resolve_conflict(&mut self, violated: NogoodId) -> ConflictResult {
        let level = self.trail.current_level();
        debug_assert!(level > 0);
        let result = self.analyze(violated);
        self.stats.record_conflict(&result, level);
        if let Some(o) = self.observer.as_deref_mut() {
            o.on_conflict(&ConflictEvent {
                result: &result,
                trail: &self.trail,
                store: &self.store,
            });
        }
        self.trail.backjump(result.backjump_level);
        if let Some(o) = self.observer.as_deref_mut() {
            o.on_backjump(&ConflictEvent {
                result: &result,
                trail: &self.trail,
                store: &self.store,
            });
        }
        self.bump_vars(&result.nogood);
        self.decay_vars();
        let (id, conflict) = self.add_nogood(result.nogood.clone(), Origin::Conflict);
        self.store.bump_activity(id, 1.0);
        self.store.decay_activities(NOGOOD_DECAY);
        if conflict {
            self.pending_conflict = Some(id);
        }
        result
    }

    /// Restarts: drops everything above level 0.
    pub fn restart(&mut self) {
        self.trail.backjump(0);
        self.stats.restarts += 1;
    }

    fn locked(&self, id: NogoodId) -> bool {
        self.store
            .lits(id)
            .iter()
            .any(|l| self.trail.antecedent(l.var()) == Some(Antecedent::Nogood(id)))
    }

    fn reduce(&mut self, max_recorded: usize) {
        let recorded: Vec<NogoodId> = self
            .store
            .iter()
            .filter(|(_, n)| n.origin != Origin::Static && n.len() > 1)
            .map(|(id, _)| id)
            .collect();
        if recorded.len() <= max_recorded {
            return;
        }
        let mut candidates: Vec<NogoodId> = recorded.into_iter().filter(|&id| !self.locked(id)).collect();
        candidates.sort_by(|&a, &b| {
            self.store
                .activity(a)
                .partial_cmp(&self.store.activity(b))
                .unwrap()
                .then(a.cmp(&b))
        });
        let remove = candidates.len().min(max_recorded.div_ceil(2).max(1));
        for &id in &candidates[..remove] {
            self.store.delete(id);
            self.stats.deleted += 1;
        }
    }

    fn next_step(&mut self) -> Propagation {
        match self.pending_conflict.take() {
            Some(id) => Propagation::Conflict(id),
            None => self.propagate(),
        }
    }

    /// Runs the search to completion or until a limit is hit.
    pub fn solve(&mut self) -> Result<SolveOutcome> {
        let start = Instant::now();
        let mut restart_after = match self.cfg.restarts {
            RestartPolicy::Geometric { base, .. } => base.max(1) as f64,
            RestartPolicy::Off => f64::INFINITY,
        };
        let mut since_restart = 0u64;
        let status = loop {
            match self.next_step() {
                Propagation::Conflict(id) => {
                    if self.trail.current_level() == 0 {
                        break Status::Unsat;
                    }
                    self.resolve_conflict(id);
                    since_restart += 1;
                    if since_restart as f64 >= restart_after {
                        if let RestartPolicy::Geometric { factor, .. } = self.cfg.restarts {
                            restart_after *= factor.max(1.0);
                        }
                        since_restart = 0;
                        if self.pending_conflict.is_none() {
                            self.restart();
                        }
                    }
                    if let DeletionPolicy::ActivityCapped { max_recorded } = self.cfg.deletion {
                        self.reduce(max_recorded);
                    }
                    if self.cfg.max_conflicts.is_some_and(|m| self.stats.conflicts >= m) {
                        break Status::Unknown(Limit::Conflicts);
                    }
                    if self.cfg.time_limit.is_some_and(|t| start.elapsed() >= t) {
                        break Status::Unknown(Limit::Time);
                    }
                }
                Propagation::NoConflict => {
                    if self.cfg.check_invariants {
                        assert!(self.at_fixpoint(), "propagation stopped before its fixpoint");
                    }
                    match self.decide()? {
                        Some(l) => {
                            self.trail.assign(l, Antecedent::Decision);
                            self.stats.decisions += 1;
                        }
                        None => {
                            if self.cfg.check_invariants {
                                assert!(check_model(self.inst, &self.trail, &self.store));
                            }
                            let model = self
                                .inst
                                .visible()
                                .iter()
                                .copied()
                                .filter(|&v| self.trail.value(v) == Some(true))
                                .collect();
                            break Status::Sat(model);
                        }
                    }
                }
            }
        };
        self.stats.elapsed = start.elapsed().as_secs_f64();
        Ok(SolveOutcome {
            status,
            stats: self.stats.clone(),
        })
    }
}

/// Whether a total assignment is a solution: no live nogood is violated
/// and, for non-tight programs, no nonempty unfounded set remains.
pub fn check_model(inst: &Instance, t: &Trail, store: &NogoodStore) -> bool {
    if !t.is_total() {
        return false;
    }
    if store.iter().any(|(_, n)| n.lits().iter().all(|&l| t.is_true(l))) {
        return false;
    }
    match inst.program() {
        Some(p) if !p.is_tight() => SourceState::new(p).unfounded_set(p, t).is_empty(),
        _ => true,
    }
}

/// Solves a program with the given configuration.
pub fn solve(p: &Program, cfg: SolverConfig) -> Result<SolveOutcome> {
    let inst = Instance::from_program(p.clone());
    Solver::new(&inst, cfg).solve()
}
