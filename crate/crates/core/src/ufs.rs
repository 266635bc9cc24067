//! Unfounded-set detection with source pointers.
//!
//! Every atom of a cyclic SCC of the positive dependency graph keeps a
//! *source*: a body that is not false and whose positive atoms inside the
//! same SCC are themselves sourced, so that sources form an acyclic
//! support chain. When source bodies turn false the affected atoms lose
//! their source (transitively within the SCC) and are re-sourced where
//! possible; atoms that remain unsourced form an unfounded set.
//!
//! Atoms of acyclic SCCs are never reported: their support is fully
//! captured by the completion nogoods.

use crate::instance::{atom_var, body_var};
use crate::program::{AtomId, BodyId, Program};
use crate::trail::Trail;

#[derive(Debug, Clone)]
pub struct SourceState {
    source: Vec<Option<BodyId>>,
    sourced_by: Vec<Vec<AtomId>>,
    /// For an atom `a`, the bodies with `a` in their positive part that
    /// belong to a rule whose head shares `a`'s SCC.
    dependents: Vec<Vec<BodyId>>,
    cyclic_atoms: Vec<AtomId>,
}

impl SourceState {
    pub fn new(p: &Program) -> Self {
        let n = p.num_atoms();
        let mut dependents = vec![Vec::new(); n];
        let mut cyclic_atoms = Vec::new();
        for atom in p.atoms() {
            let scc = p.scc_of(atom.id);
            if !p.is_cyclic_scc(scc) {
                continue;
            }
            cyclic_atoms.push(atom.id);
            for &b in p.bodies_of(atom.id) {
                for &q in &p.body(b).pos {
                    if p.scc_of(q) == scc && !dependents[q.index()].contains(&b) {
                        dependents[q.index()].push(b);
                    }
                }
            }
        }
        SourceState {
            source: vec![None; n],
            sourced_by: vec![Vec::new(); p.num_bodies()],
            dependents,
            cyclic_atoms,
        }
    }

    pub fn source(&self, a: AtomId) -> Option<BodyId> {
        self.source[a.index()]
    }

    fn set_source(&mut self, a: AtomId, b: Option<BodyId>) {
        if let Some(old) = self.source[a.index()] {
            self.sourced_by[old.index()].retain(|&x| x != a);
        }
        if let Some(new) = b {
            self.sourced_by[new.index()].push(a);
        }
        self.source[a.index()] = b;
    }

    /// Drops the source of every atom supported by one of the given bodies,
    /// then transitively of every atom whose source depends positively on
    /// an atom that lost its source within the same SCC. Returns the atoms
    /// that lost their source, in the order they were cleared.
    pub fn invalidate_sources(&mut self, p: &Program, newly_false_bodies: &[BodyId]) -> Vec<AtomId> {
        let mut frontier = Vec::new();
        for &b in newly_false_bodies {
            let atoms = std::mem::take(&mut self.sourced_by[b.index()]);
            for a in atoms {
                self.source[a.index()] = None;
                frontier.push(a);
            }
        }
        let mut i = 0;
        while i < frontier.len() {
            let a = frontier[i];
            i += 1;
            let scc = p.scc_of(a);
            for k in 0..self.dependents[a.index()].len() {
                let b = self.dependents[a.index()][k];
                let lost: Vec<AtomId> = self.sourced_by[b.index()]
                    .iter()
                    .copied()
                    .filter(|h| p.scc_of(*h) == scc)
                    .collect();
                for h in lost {
                    self.set_source(h, None);
                    frontier.push(h);
                }
            }
        }
        frontier
    }

    /// Returns a nonempty unfounded set `U` with `U ∩ F(A) = ∅`, contained
    /// in a single SCC, or an empty vector if there is none. Expects the
    /// assignment to be closed under unit propagation.
    pub fn unfounded_set(&mut self, p: &Program, t: &Trail) -> Vec<AtomId> {
        let false_sources: Vec<BodyId> = p
            .bodies()
            .iter()
            .filter(|b| !self.sourced_by[b.id.index()].is_empty() && t.is_true(body_var(p, b.id).f()))
            .map(|b| b.id)
            .collect();
        self.invalidate_sources(p, &false_sources);

        let mut pending: Vec<AtomId> = self
            .cyclic_atoms
            .iter()
            .copied()
            .filter(|&a| self.source[a.index()].is_none() && !t.is_true(atom_var(a).f()))
            .collect();

        loop {
            let mut changed = false;
            let mut still = Vec::with_capacity(pending.len());
            for &a in &pending {
                match self.find_source(p, t, a) {
                    Some(b) => {
                        self.set_source(a, Some(b));
                        changed = true;
                    }
                    None => still.push(a),
                }
            }
            pending = still;
            if !changed || pending.is_empty() {
                break;
            }
        }

        let Some(&first) = pending.first() else {
            return Vec::new();
        };
        let scc = p.scc_of(first);
        let mut u: Vec<AtomId> = pending.into_iter().filter(|&a| p.scc_of(a) == scc).collect();
        u.sort_unstable();
        u
    }

    fn find_source(&self, p: &Program, t: &Trail, a: AtomId) -> Option<BodyId> {
        let scc = p.scc_of(a);
        p.bodies_of(a).iter().copied().find(|&b| {
            !t.is_true(body_var(p, b).f())
                && p.body(b).pos.iter().all(|&q| {
                    p.scc_of(q) != scc || (self.source[q.index()].is_some() && !t.is_true(atom_var(q).f()))
                })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nogoods::external_bodies;
    use crate::program::parse_program;
    use crate::trail::Antecedent;

    fn atoms(p: &Program, names: &[&str]) -> Vec<AtomId> {
        let mut v: Vec<AtomId> = names.iter().map(|n| p.atom_by_name(n).unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn unsupported_loop() {
        let p = parse_program("a :- b. b :- a.").unwrap();
        let mut s = SourceState::new(&p);
        let t = Trail::new(p.num_atoms() + p.num_bodies());
        assert_eq!(s.unfounded_set(&p, &t), atoms(&p, &["a", "b"]));
    }

    #[test]
    fn external_support_false() {
        let p = parse_program("a :- b. b :- a. a :- not c.").unwrap();
        let mut s = SourceState::new(&p);
        let mut t = Trail::new(p.num_atoms() + p.num_bodies());
        let c = atom_var(p.atom_by_name("c").unwrap());
        let eb = external_bodies(&atoms(&p, &["a", "b"]), &p)[0];
        t.assign(c.t(), Antecedent::TopLevel);
        t.assign(body_var(&p, eb).f(), Antecedent::TopLevel);
        assert_eq!(s.unfounded_set(&p, &t), atoms(&p, &["a", "b"]));
    }

    #[test]
    fn external_support_open() {
        let p = parse_program("a :- b. b :- a. a :- not c.").unwrap();
        let mut s = SourceState::new(&p);
        let t = Trail::new(p.num_atoms() + p.num_bodies());
        assert!(s.unfounded_set(&p, &t).is_empty());
        let a = p.atom_by_name("a").unwrap();
        let b = p.atom_by_name("b").unwrap();
        assert!(s.source(a).is_some());
        assert!(s.source(b).is_some());
    }

    #[test]
    fn nothing_invalidated_without_false_sources() {
        let p = parse_program("a :- b. b :- a. a :- not c.").unwrap();
        let mut s = SourceState::new(&p);
        let t = Trail::new(p.num_atoms() + p.num_bodies());
        s.unfounded_set(&p, &t);
        assert!(s.invalidate_sources(&p, &[]).is_empty());
    }

    #[test]
    fn resourced_through_second_external_body() {
        // a has two external supports; losing one keeps a founded.
        let p = parse_program("a :- b. b :- a. a :- not c. a :- not d.").unwrap();
        let mut s = SourceState::new(&p);
        let mut t = Trail::new(p.num_atoms() + p.num_bodies());
        assert!(s.unfounded_set(&p, &t).is_empty());
        let a = p.atom_by_name("a").unwrap();
        let first = s.source(a).unwrap();
        t.assign(body_var(&p, first).f(), Antecedent::TopLevel);
        let frontier = s.invalidate_sources(&p, &[first]);
        assert!(frontier.contains(&a));
        assert!(s.unfounded_set(&p, &t).is_empty());
        assert_ne!(s.source(a), Some(first));
        assert!(s.source(a).is_some());
    }

    #[test]
    fn whole_scc_loses_support() {
        let p = parse_program("a :- b. b :- c. c :- a. a :- not d.").unwrap();
        let mut s = SourceState::new(&p);
        let mut t = Trail::new(p.num_atoms() + p.num_bodies());
        assert!(s.unfounded_set(&p, &t).is_empty());
        let a = p.atom_by_name("a").unwrap();
        let ext = s.source(a).unwrap();
        t.assign(body_var(&p, ext).f(), Antecedent::TopLevel);
        let mut frontier = s.invalidate_sources(&p, &[ext]);
        frontier.sort();
        assert_eq!(frontier, atoms(&p, &["a", "b", "c"]));
    }

    #[test]
    fn trivial_sccs_are_ignored() {
        let p = parse_program("a :- not b.").unwrap();
        let mut s = SourceState::new(&p);
        let mut t = Trail::new(p.num_atoms() + p.num_bodies());
        t.assign(body_var(&p, BodyId(0)).f(), Antecedent::TopLevel);
        assert!(s.unfounded_set(&p, &t).is_empty());
    }
}
