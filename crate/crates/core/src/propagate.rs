//! Unit propagation over watched nogoods, interleaved with unfounded-set
//! checks for non-tight programs.

use crate::lit::Lit;
use crate::nogoods::{loop_nogood, NogoodId, Origin};
use crate::program::AtomId;
use crate::instance::atom_var;
use crate::solve::{Propagation, Solver};
use crate::trail::{Antecedent, Trail};

/// State of a nogood with respect to an assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitStatus {
    /// All literals but this one are in the assignment and neither it nor
    /// its complement is: the complement must be added.
    Unit(Lit),
    /// Every literal is in the assignment.
    Violated,
    Unresolved,
}

pub fn unit_literal(lits: &[Lit], t: &Trail) -> UnitStatus {
    let mut open = None;
    for &l in lits {
        if t.is_true(l) {
            continue;
        }
        if t.is_false(l) || open.is_some() {
            return UnitStatus::Unresolved;
        }
        open = Some(l);
    }
    match open {
        Some(l) => UnitStatus::Unit(l),
        None => UnitStatus::Violated,
    }
}

impl<'a> Solver<'a> {
    fn imply(&mut self, l: Lit, id: NogoodId) {
        self.trail.assign(l, Antecedent::Nogood(id));
        let level = self.trail.current_level();
        self.store.get_mut(id).note_implied_at(level);
        self.stats.propagations += 1;
    }

    /// Unit propagation on all stored nogoods, stopping at the first
    /// violated one.
    fn unit_propagate(&mut self) -> Option<NogoodId> {
        if let Some(id) = self.store.empty_nogood() {
            return Some(id);
        }
        for i in 0..self.store.units().len() {
            let id = self.store.units()[i];
            let l = self.store.lits(id)[0];
            if self.trail.is_true(l) {
                return Some(id);
            }
            if !self.trail.is_false(l) {
                self.imply(!l, id);
            }
        }

        while self.trail.qhead < self.trail.len() {
            let l = self.trail.lits()[self.trail.qhead];
            self.trail.qhead += 1;
            let watchers = self.store.take_watches(l);
            let mut kept = Vec::with_capacity(watchers.len());
            let mut conflict = None;
            let mut rest = watchers.into_iter();
            for id in rest.by_ref() {
                let lits = self.store.lits_mut(id);
                if lits[0] == l {
                    lits.swap(0, 1);
                }
                debug_assert_eq!(lits[1], l);
                let other = lits[0];
                if self.trail.is_false(other) {
                    kept.push(id);
                    continue;
                }
                if let Some(j) = (2..lits.len()).find(|&j| !self.trail.is_true(lits[j])) {
                    lits.swap(1, j);
                    let w = lits[1];
                    self.store.add_watch(w, id);
                    continue;
                }
                kept.push(id);
                if self.trail.is_true(other) {
                    conflict = Some(id);
                    break;
                }
                self.imply(!other, id);
            }
            kept.extend(rest);
            self.store.restore_watches(l, kept);
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// Propagates to a fixpoint. For non-tight programs, unfounded sets are
    /// falsified by recording one loop nogood at a time; the current set is
    /// used up before a new one is computed.
    pub fn propagate(&mut self) -> Propagation {
        let mut unfounded: Vec<AtomId> = Vec::new();
        loop {
            if let Some(id) = self.unit_propagate() {
                return Propagation::Conflict(id);
            }
            let Some(program) = self.inst.program() else {
                return Propagation::NoConflict;
            };
            if program.is_tight() {
                return Propagation::NoConflict;
            }
            let trail = &self.trail;
            unfounded.retain(|&a| !trail.is_true(atom_var(a).f()));
            if unfounded.is_empty() {
                self.stats.ufs_calls += 1;
                let sources = self.sources.as_mut().expect("non-tight program without source state");
                unfounded = sources.unfounded_set(program, &self.trail);
                if let Some(o) = self.observer.as_deref_mut() {
                    o.on_unfounded_check(&unfounded);
                }
            }
            let Some(&target) = unfounded.first() else {
                return Propagation::NoConflict;
            };
            let lits = loop_nogood(&unfounded, program, target);
            self.stats.loop_nogoods += 1;
            let (id, conflict) = self.add_nogood(lits, Origin::Loop);
            if conflict {
                return Propagation::Conflict(id);
            }
        }
    }

    /// Records a nogood during search and acts on it: a unit-resulting
    /// nogood implies the complement of its open literal at the current
    /// level. Returns the new id and whether the nogood is violated.
    pub fn add_nogood(&mut self, mut lits: Vec<Lit>, origin: Origin) -> (NogoodId, bool) {
        lits.sort_unstable();
        lits.dedup();
        if lits.len() >= 2 {
            // Watch the open literals if possible, else the latest true ones.
            let t = &self.trail;
            let rank = |l: &Lit| -> (u8, usize) {
                if t.is_true(*l) {
                    (1, usize::MAX - t.position(l.var()).unwrap())
                } else if t.is_false(*l) {
                    (0, 1)
                } else {
                    (0, 0)
                }
            };
            for slot in 0..2 {
                let best = (slot..lits.len()).min_by_key(|&i| rank(&lits[i])).unwrap();
                lits.swap(slot, best);
            }
        }
        let status = unit_literal(&lits, &self.trail);
        let id = self.store.record(lits, origin);
        let lits = self.store.lits(id).to_vec();
        if let Some(o) = self.observer.as_deref_mut() {
            o.on_record(id, &lits, origin);
        }
        match status {
            UnitStatus::Violated => (id, true),
            UnitStatus::Unit(l) => {
                self.imply(!l, id);
                (id, false)
            }
            UnitStatus::Unresolved => (id, false),
        }
    }

    /// Whether no live nogood is violated or unit-resulting (full scan).
    pub fn at_fixpoint(&self) -> bool {
        self.store
            .iter()
            .all(|(_, n)| unit_literal(n.lits(), &self.trail) == UnitStatus::Unresolved)
    }
}
