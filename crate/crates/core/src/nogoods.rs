//! Nogoods, the completion and loop nogoods of a program, and the nogood
//! store with occurrence lists, watches and activity bookkeeping.

use crate::instance::{atom_var, body_var};
use crate::lit::Lit;
use crate::program::{AtomId, BodyId, Program};

/// Registration index of a nogood in its store. Ids are never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NogoodId(pub u32);

impl NogoodId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Static,
    Conflict,
    Loop,
}

#[derive(Debug, Clone)]
pub struct Nogood {
    lits: Vec<Lit>,
    pub origin: Origin,
    activity: f64,
    /// Smallest decision level at which this nogood fired as unit.
    pub min_implied_level: Option<u32>,
    deleted: bool,
}

impl Nogood {
    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_deleted(&self) -> bool {
        self.deleted
    }

    /// Records that the nogood fired at `level`.
    pub fn note_implied_at(&mut self, level: u32) {
        self.min_implied_level = Some(match self.min_implied_level {
            Some(l) => l.min(level),
            None => level,
        });
    }
}

const RESCALE_LIMIT: f64 = 1e100;

#[derive(Debug, Clone)]
pub struct NogoodStore {
    nogoods: Vec<Nogood>,
    occur: Vec<Vec<NogoodId>>,
    watches: Vec<Vec<NogoodId>>,
    units: Vec<NogoodId>,
    empty: Option<NogoodId>,
    bump_inc: f64,
}

impl NogoodStore {
    pub fn new(num_vars: usize) -> Self {
        NogoodStore {
            nogoods: Vec::new(),
            occur: vec![Vec::new(); 2 * num_vars],
            watches: vec![Vec::new(); 2 * num_vars],
            units: Vec::new(),
            empty: None,
            bump_inc: 1.0,
        }
    }

    /// Stores a nogood. Duplicate literals are dropped; the first two
    /// remaining literals become the watched ones, so callers order them.
    /// Unary nogoods get no watches, and the empty nogood is remembered
    /// as the unsatisfiability witness.
    pub fn record(&mut self, lits: Vec<Lit>, origin: Origin) -> NogoodId {
        let mut lits = lits;
        let mut seen = Vec::with_capacity(lits.len());
        lits.retain(|l| {
            if seen.contains(l) {
                false
            } else {
                seen.push(*l);
                true
            }
        });
        let id = NogoodId(self.nogoods.len() as u32);
        for &l in &lits {
            self.occur[l.code()].push(id);
        }
        match lits.len() {
            0 => {
                self.empty.get_or_insert(id);
            }
            1 => self.units.push(id),
            _ => {
                self.watches[lits[0].code()].push(id);
                self.watches[lits[1].code()].push(id);
            }
        }
        self.nogoods.push(Nogood {
            lits,
            origin,
            activity: 0.0,
            min_implied_level: None,
            deleted: false,
        });
        id
    }

    pub fn get(&self, id: NogoodId) -> &Nogood {
        &self.nogoods[id.index()]
    }

    pub fn get_mut(&mut self, id: NogoodId) -> &mut Nogood {
        &mut self.nogoods[id.index()]
    }

    pub fn lits(&self, id: NogoodId) -> &[Lit] {
        &self.nogoods[id.index()].lits
    }

    /// Total number of registrations, including deleted nogoods.
    pub fn len(&self) -> usize {
        self.nogoods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nogoods.is_empty()
    }

    /// Live nogoods in registration order.
    pub fn iter(&self) -> impl Iterator<Item = (NogoodId, &Nogood)> {
        self.nogoods
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.deleted)
            .map(|(i, n)| (NogoodId(i as u32), n))
    }

    /// Ids of live nogoods containing `l`, in registration order.
    pub fn occurrences(&self, l: Lit) -> &[NogoodId] {
        &self.occur[l.code()]
    }

    pub fn units(&self) -> &[NogoodId] {
        &self.units
    }

    pub fn empty_nogood(&self) -> Option<NogoodId> {
        self.empty
    }

    pub(crate) fn take_watches(&mut self, l: Lit) -> Vec<NogoodId> {
        std::mem::take(&mut self.watches[l.code()])
    }

    pub(crate) fn restore_watches(&mut self, l: Lit, list: Vec<NogoodId>) {
        debug_assert!(self.watches[l.code()].is_empty());
        self.watches[l.code()] = list;
    }

    pub(crate) fn add_watch(&mut self, l: Lit, id: NogoodId) {
        self.watches[l.code()].push(id);
    }

    pub(crate) fn lits_mut(&mut self, id: NogoodId) -> &mut Vec<Lit> {
        &mut self.nogoods[id.index()].lits
    }

    pub fn watches(&self, l: Lit) -> &[NogoodId] {
        &self.watches[l.code()]
    }

    /// Removes a recorded nogood from occurrence and watch lists.
    pub fn delete(&mut self, id: NogoodId) {
        let ng = &mut self.nogoods[id.index()];
        assert!(ng.origin != Origin::Static, "static nogoods are never deleted");
        if ng.deleted {
            return;
        }
        ng.deleted = true;
        let lits = ng.lits.clone();
        for l in &lits {
            self.occur[l.code()].retain(|&x| x != id);
        }
        if lits.len() >= 2 {
            for l in &lits[..2] {
                self.watches[l.code()].retain(|&x| x != id);
            }
        }
        self.units.retain(|&x| x != id);
    }

    /// Activity in units of the current bump increment.
    pub fn activity(&self, id: NogoodId) -> f64 {
        self.nogoods[id.index()].activity / self.bump_inc
    }

    pub fn bump_activity(&mut self, id: NogoodId, amount: f64) {
        self.nogoods[id.index()].activity += amount * self.bump_inc;
        if self.nogoods[id.index()].activity > RESCALE_LIMIT {
            self.rescale();
        }
    }

    /// Multiplies every activity by `factor`, implemented by growing the
    /// bump increment.
    pub fn decay_activities(&mut self, factor: f64) {
        debug_assert!(factor > 0.0 && factor <= 1.0);
        self.bump_inc /= factor;
        if self.bump_inc > RESCALE_LIMIT {
            self.rescale();
        }
    }

    fn rescale(&mut self) {
        let s = 1.0 / RESCALE_LIMIT;
        for n in &mut self.nogoods {
            n.activity *= s;
        }
        self.bump_inc *= s;
    }
}

/// The completion nogoods: for every body `b` the nogood
/// `{T p1..T pm, F pm+1..F pn, F b}` followed by its binary nogoods, then
/// for every atom `p` the nogood `{F b1..F bk, T p}` followed by
/// `{T bi, F p}`.
pub fn completion_nogoods(p: &Program) -> Vec<Vec<Lit>> {
    let mut out = Vec::new();
    for body in p.bodies() {
        let bv = body_var(p, body.id);
        let mut main: Vec<Lit> = body.pos.iter().map(|&a| atom_var(a).t()).collect();
        main.extend(body.neg.iter().map(|&a| atom_var(a).f()));
        main.push(bv.f());
        out.push(main);
        for &a in &body.pos {
            out.push(vec![atom_var(a).f(), bv.t()]);
        }
        for &a in &body.neg {
            out.push(vec![atom_var(a).t(), bv.t()]);
        }
    }
    for atom in p.atoms() {
        let av = atom_var(atom.id);
        let bodies = p.bodies_of(atom.id);
        let mut main: Vec<Lit> = bodies.iter().map(|&b| body_var(p, b).f()).collect();
        main.push(av.t());
        out.push(main);
        for &b in bodies {
            out.push(vec![body_var(p, b).t(), av.f()]);
        }
    }
    out
}

/// Bodies of rules with head in `u` whose positive part avoids `u`,
/// sorted by body id.
pub fn external_bodies(u: &[AtomId], p: &Program) -> Vec<BodyId> {
    let mut in_u = vec![false; p.num_atoms()];
    for &a in u {
        in_u[a.index()] = true;
    }
    let mut out: Vec<BodyId> = Vec::new();
    for &a in u {
        for &b in p.bodies_of(a) {
            if !p.body(b).pos.iter().any(|q| in_u[q.index()]) {
                out.push(b);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The loop nogood `{F b1, ..., F bk, T target}` of `u`.
pub fn loop_nogood(u: &[AtomId], p: &Program, target: AtomId) -> Vec<Lit> {
    debug_assert!(u.contains(&target));
    let mut lits: Vec<Lit> = external_bodies(u, p)
        .into_iter()
        .map(|b| body_var(p, b).f())
        .collect();
    lits.push(atom_var(target).t());
    lits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lit::Var;
    use crate::program::parse_program;

    fn sorted(mut v: Vec<Vec<Lit>>) -> Vec<Vec<Lit>> {
        for n in &mut v {
            n.sort();
        }
        v.sort();
        v
    }

    #[test]
    fn body_nogoods() {
        // a :- b, not c.  atoms a=0 b=1 c=2, body B0 = var 3
        let p = parse_program("a :- b, not c.").unwrap();
        let ng = completion_nogoods(&p);
        let (b, c, beta) = (Var(1), Var(2), Var(3));
        assert_eq!(ng[0], vec![b.t(), c.f(), beta.f()]);
        assert_eq!(ng[1], vec![b.f(), beta.t()]);
        assert_eq!(ng[2], vec![c.t(), beta.t()]);
    }

    #[test]
    fn atom_nogoods() {
        let p = parse_program("a :- b, not c.").unwrap();
        let ng = completion_nogoods(&p);
        let (a, b, c, beta) = (Var(0), Var(1), Var(2), Var(3));
        // Delta_a = {F beta, T a}, {T beta, F a}
        assert_eq!(ng[3], vec![beta.f(), a.t()]);
        assert_eq!(ng[4], vec![beta.t(), a.f()]);
        // b and c have no rules
        assert_eq!(ng[5], vec![b.t()]);
        assert_eq!(ng[6], vec![c.t()]);
        assert_eq!(ng.len(), 7);
    }

    #[test]
    fn completion_size_is_linear() {
        let p = parse_program("a :- b, not c.\nb :- a.\nb.\nc :- not a, not b.\n:- a, b.").unwrap();
        let expected: usize = p.bodies().iter().map(|b| 1 + b.len()).sum::<usize>()
            + p.atoms().iter().map(|a| 1 + p.bodies_of(a.id).len()).sum::<usize>();
        assert_eq!(completion_nogoods(&p).len(), expected);
    }

    #[test]
    fn external_bodies_examples() {
        let p = parse_program("a :- b. b :- a.").unwrap();
        assert!(external_bodies(&[AtomId(0), AtomId(1)], &p).is_empty());
        assert!(external_bodies(&[], &p).is_empty());

        let p = parse_program("a :- b. b :- a. a :- not c.").unwrap();
        let eb = external_bodies(&[AtomId(0), AtomId(1)], &p);
        assert_eq!(eb.len(), 1);
        let body = p.body(eb[0]);
        assert!(body.pos.is_empty());
        assert_eq!(body.neg, [p.atom_by_name("c").unwrap()]);
    }

    #[test]
    fn external_bodies_brute_force() {
        let p = parse_program("a :- b. b :- a. a :- not c. b :- c, d. d :- a. c :- not d.").unwrap();
        let n = p.num_atoms();
        for mask in 0u32..(1 << n) {
            let u: Vec<AtomId> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| AtomId(i as u32)).collect();
            let mut expected: Vec<BodyId> = p
                .rules()
                .iter()
                .filter(|r| u.contains(&r.head) && !p.body(r.body).pos.iter().any(|q| u.contains(q)))
                .map(|r| r.body)
                .collect();
            expected.sort();
            expected.dedup();
            assert_eq!(external_bodies(&u, &p), expected);
        }
    }

    #[test]
    fn loop_nogood_examples() {
        let p = parse_program("a :- b. b :- a.").unwrap();
        let u = [AtomId(0), AtomId(1)];
        assert_eq!(loop_nogood(&u, &p, AtomId(0)), vec![Var(0).t()]);

        let p = parse_program("a :- b. b :- a. a :- not c.").unwrap();
        let eb = external_bodies(&u, &p);
        let beta = body_var(&p, eb[0]);
        assert_eq!(loop_nogood(&u, &p, AtomId(1)), vec![beta.f(), Var(1).t()]);
        let all: Vec<_> = u.iter().map(|&t| loop_nogood(&u, &p, t)).collect();
        assert_eq!(sorted(all.clone()).len(), 2);
        assert_ne!(all[0], all[1]);
    }

    #[test]
    fn record_and_occurrences() {
        let mut s = NogoodStore::new(4);
        let id = s.record(vec![Var(1).t()], Origin::Conflict);
        assert!(s.occurrences(Var(1).t()).contains(&id));
        assert_eq!(s.units(), [id]);
        let a = s.record(vec![Var(0).t(), Var(2).f()], Origin::Conflict);
        let b = s.record(vec![Var(0).t(), Var(2).f()], Origin::Conflict);
        assert_ne!(a, b);
        assert_eq!(s.occurrences(Var(2).f()), [a, b]);
        assert_eq!(s.watches(Var(0).t()), [a, b]);
        let e = s.record(vec![], Origin::Conflict);
        assert_eq!(s.empty_nogood(), Some(e));
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn delete_unlinks() {
        let mut s = NogoodStore::new(3);
        let a = s.record(vec![Var(0).t(), Var(1).f(), Var(2).t()], Origin::Conflict);
        s.delete(a);
        assert!(s.occurrences(Var(1).f()).is_empty());
        assert!(s.watches(Var(0).t()).is_empty());
        assert_eq!(s.iter().count(), 0);
    }

    #[test]
    fn activity_bookkeeping() {
        let mut s = NogoodStore::new(2);
        let id = s.record(vec![Var(0).t(), Var(1).t()], Origin::Conflict);
        assert_eq!(s.activity(id), 0.0);
        s.bump_activity(id, 1.0);
        s.bump_activity(id, 1.0);
        assert_eq!(s.activity(id), 2.0);
        s.decay_activities(0.95);
        assert!((s.activity(id) - 1.9).abs() < 1e-12);
    }

    #[test]
    fn activity_rescale_preserves_order() {
        let mut s = NogoodStore::new(2);
        let a = s.record(vec![Var(0).t(), Var(1).t()], Origin::Conflict);
        let b = s.record(vec![Var(0).f(), Var(1).t()], Origin::Conflict);
        s.bump_activity(a, 1.0);
        for _ in 0..6000 {
            s.decay_activities(0.95);
            s.bump_activity(b, 1.0);
        }
        s.bump_activity(a, 3.0);
        assert!(s.activity(a).is_finite() && s.activity(b).is_finite());
        assert!(s.activity(b) > s.activity(a));
    }
}
