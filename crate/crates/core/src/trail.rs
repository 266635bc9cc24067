//! The assignment as an ordered trail with decision levels.

use crate::lit::{Lit, Var};
use crate::nogoods::NogoodId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Antecedent {
    Decision,
    /// The first nogood found unit-resulting for the literal.
    Nogood(NogoodId),
    /// Asserted at level 0 without a nogood.
    TopLevel,
}

const UNSET: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct Trail {
    seq: Vec<Lit>,
    pos: Vec<u32>,
    value: Vec<Option<bool>>,
    level_of: Vec<u32>,
    antecedent_of: Vec<Antecedent>,
    level_starts: Vec<usize>,
    /// Next trail index for unit propagation.
    pub(crate) qhead: usize,
}

impl Trail {
    pub fn new(num_vars: usize) -> Self {
        Trail {
            seq: Vec::with_capacity(num_vars),
            pos: vec![UNSET; num_vars],
            value: vec![None; num_vars],
            level_of: vec![0; num_vars],
            antecedent_of: vec![Antecedent::TopLevel; num_vars],
            level_starts: Vec::new(),
            qhead: 0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.value.len()
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.seq.len() == self.value.len()
    }

    pub fn lits(&self) -> &[Lit] {
        &self.seq
    }

    pub fn current_level(&self) -> u32 {
        self.level_starts.len() as u32
    }

    pub fn level_starts(&self) -> &[usize] {
        &self.level_starts
    }

    #[inline]
    pub fn value(&self, v: Var) -> Option<bool> {
        self.value[v.index()]
    }

    /// `σ ∈ A`.
    #[inline]
    pub fn is_true(&self, l: Lit) -> bool {
        self.value[l.var().index()] == Some(l.sign())
    }

    /// `σ̄ ∈ A`.
    #[inline]
    pub fn is_false(&self, l: Lit) -> bool {
        self.value[l.var().index()] == Some(!l.sign())
    }

    #[inline]
    pub fn is_assigned(&self, v: Var) -> bool {
        self.value[v.index()].is_some()
    }

    /// Decision level of an assigned variable.
    #[inline]
    pub fn level(&self, v: Var) -> u32 {
        debug_assert!(self.is_assigned(v));
        self.level_of[v.index()]
    }

    #[inline]
    pub fn position(&self, v: Var) -> Option<usize> {
        match self.pos[v.index()] {
            UNSET => None,
            p => Some(p as usize),
        }
    }

    pub fn antecedent(&self, v: Var) -> Option<Antecedent> {
        if self.is_assigned(v) {
            Some(self.antecedent_of[v.index()])
        } else {
            None
        }
    }

    /// Appends `l` to the trail. A decision opens a new level.
    pub fn assign(&mut self, l: Lit, antecedent: Antecedent) {
        let v = l.var();
        assert!(!self.is_assigned(v), "variable {} assigned twice", v.0);
        if antecedent == Antecedent::Decision {
            self.level_starts.push(self.seq.len());
        }
        debug_assert!(antecedent != Antecedent::TopLevel || self.level_starts.is_empty());
        self.pos[v.index()] = self.seq.len() as u32;
        self.value[v.index()] = Some(l.sign());
        self.level_of[v.index()] = self.current_level();
        self.antecedent_of[v.index()] = antecedent;
        self.seq.push(l);
    }

    /// Removes every literal above level `k`.
    pub fn backjump(&mut self, k: u32) {
        assert!(k <= self.current_level());
        if k == self.current_level() {
            return;
        }
        let cut = self.level_starts[k as usize];
        for l in self.seq.drain(cut..) {
            let v = l.var().index();
            self.pos[v] = UNSET;
            self.value[v] = None;
        }
        self.level_starts.truncate(k as usize);
        self.qhead = self.qhead.min(cut);
    }

    /// Whether `a` was assigned strictly before `b`. Both must be assigned.
    pub fn precedes(&self, a: Lit, b: Lit) -> bool {
        let pa = self.position(a.var()).expect("precedes: unassigned literal");
        let pb = self.position(b.var()).expect("precedes: unassigned literal");
        pa < pb
    }

    /// The prefix `A[σ]`: everything before `σ`, or all of `A` when `σ`
    /// is not in `A`.
    pub fn prefix(&self, l: Lit) -> &[Lit] {
        if self.is_true(l) {
            &self.seq[..self.position(l.var()).unwrap()]
        } else {
            &self.seq
        }
    }

    /// True literals at level `k`.
    pub fn level_lits(&self, k: u32) -> &[Lit] {
        if k > self.current_level() {
            return &[];
        }
        let start = if k == 0 { 0 } else { self.level_starts[k as usize - 1] };
        let end = self
            .level_starts
            .get(k as usize)
            .copied()
            .unwrap_or(self.seq.len());
        &self.seq[start..end]
    }
}
